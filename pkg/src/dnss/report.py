"""Report rendering: delimited summaries plus matplotlib figures on disk.

Produces, for one input system: the prolongation search trace (per-order
membership result and timing), the descent-stage table when the system is
semiexplicit, and the growth of the closed-form order bound across degrees,
each as a CSV next to a PNG.
"""

from __future__ import annotations

import csv
import math
import os
import time

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bounds import SystemProfile, bound_L_syntactic, bound_M  # noqa: E402
from .descent import (DimensionDropError, build_chain,  # noqa: E402
                      compute_invariants, reconstruct_L)
from .diffcore import prolong  # noqa: E402
from .groebner import contains_one  # noqa: E402
from .parser import InputDocument, NonSemiexplicitError  # noqa: E402
from .ring import poly_to_text  # noqa: E402


def _search_trace(family, l_cap):
    rows = []
    found = None
    for k in range(l_cap + 1):
        fam = prolong(family, k)
        t0 = time.perf_counter()
        witness = contains_one(fam.polys)
        elapsed = time.perf_counter() - t0
        rows.append({"k": k, "generators": len(fam.polys),
                     "one_in_ideal": witness is not None,
                     "seconds": round(elapsed, 6)})
        if witness is not None:
            found = k
            break
    return rows, found


def _write_csv(path, fieldnames, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _fig_search(rows, found, path):
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ks = [r["k"] for r in rows]
    vals = [1 if r["one_in_ideal"] else 0 for r in rows]
    colors = ["#2a9d8f" if v else "#adb5bd" for v in vals]
    ax.bar(ks, [1] * len(ks), color=colors, width=0.8)
    ax.set_xlabel("prolongation order k")
    ax.set_yticks([])
    ax.set_xticks(ks)
    title = "1 enters the prolonged ideal at k = %s" % found \
        if found is not None else "1 not reached within the cap"
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _fig_chain(stages, path):
    fig, ax = plt.subplots(figsize=(6, 3.2))
    xs = list(range(len(stages)))
    dims = [st.dim for st in stages]
    ax.step(xs, dims, where="mid", color="#264653", linewidth=2)
    ax.scatter(xs, dims, color="#e76f51", zorder=3)
    for x, st in zip(xs, stages):
        note = []
        if st.eps is not None:
            note.append(f"eps={st.eps}")
        if st.k is not None:
            note.append(f"k={st.k}")
        if note:
            ax.annotate(", ".join(note), (x, st.dim),
                        textcoords="offset points", xytext=(6, 6), fontsize=8)
    ax.set_xlabel("stage")
    ax.set_ylabel("constraint dimension")
    ax.set_xticks(xs)
    ax.set_title("descent of the constraint dimension")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _fig_bounds(profile, path, rows):
    fig, ax = plt.subplots(figsize=(6, 3.2))
    degrees = [r["degree"] for r in rows]
    ax.plot(degrees, [r["log2_log2_L_syntactic"] for r in rows],
            marker="o", color="#264653", label="order bound")
    ax.plot(degrees, [r["log2_log2_M"] for r in rows],
            marker="s", color="#e76f51", label="power bound")
    ax.set_xlabel("degree bound d")
    ax.set_ylabel("log2 log2 of the bound")
    ax.set_title(f"bound growth at n={profile.n}, order={profile.e}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _bound_rows(profile, cap_bits):
    rows = []
    for d in range(2, 11):
        pd = SystemProfile(n=profile.n, m=profile.m, e=profile.e, d=d,
                           c=profile.c)
        L = bound_L_syntactic(pd, cap_bits)
        M = bound_M(pd, L, cap_bits)
        rows.append({"degree": d,
                     "L_syntactic": _flat(L.render()),
                     "log2_log2_L_syntactic": round(L.lll, 4),
                     "M": _flat(M.render()),
                     "log2_log2_M": round(M.lll, 4)})
    return rows


def _flat(rendered):
    if isinstance(rendered, str):
        return rendered
    lll = rendered["approx"].get(
        "log2_log2", math.log2(max(rendered["approx"].get("log2", 2), 2)))
    return "~2^2^%.4g" % lll


def render_report(doc: InputDocument, out_dir: str, l_cap: int = 16,
                  max_stages: int = 16, eps_cap: int = 64, k_cap: int = 64,
                  c: int = 1, cap_bits: int = 1_000_000) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    family = doc.family()
    if not family:
        raise ValueError("the input system has no equations")
    files = []

    search_rows, found = _search_trace(family, l_cap)
    search_csv = os.path.join(out_dir, "search.csv")
    _write_csv(search_csv, ["k", "generators", "one_in_ideal", "seconds"],
               search_rows)
    files.append(search_csv)
    search_png = os.path.join(out_dir, "prolongation_search.png")
    _fig_search(search_rows, found, search_png)
    files.append(search_png)

    chain_summary = None
    try:
        semi = doc.semiexplicit()
        chain = compute_invariants(build_chain(semi, max_stages=max_stages),
                                   eps_cap=eps_cap, k_cap=k_cap)
        stage_rows = [{"stage": i, "dim": st.dim,
                       "radical_status": st.radical_status,
                       "eps": "" if st.eps is None else st.eps,
                       "k": "" if st.k is None else st.k,
                       "generators": " ; ".join(poly_to_text(g)
                                                for g in st.generators)}
                      for i, st in enumerate(chain.stages)]
        stages_csv = os.path.join(out_dir, "stages.csv")
        _write_csv(stages_csv,
                   ["stage", "dim", "radical_status", "eps", "k", "generators"],
                   stage_rows)
        files.append(stages_csv)
        chain_png = os.path.join(out_dir, "chain_dimensions.png")
        _fig_chain(chain.stages, chain_png)
        files.append(chain_png)
        chain_summary = {"stages": str(len(chain.stages)),
                         "rho": str(chain.rho)}
        try:
            rep = reconstruct_L(chain)
            chain_summary["L_reconstructed"] = str(rep.L)
        except ValueError:
            pass
    except (NonSemiexplicitError, DimensionDropError) as exc:
        chain_summary = {"skipped": str(exc)}

    profile = SystemProfile.from_family(family, c=c)
    bound_rows = _bound_rows(profile, cap_bits)
    bounds_csv = os.path.join(out_dir, "bounds.csv")
    _write_csv(bounds_csv, ["degree", "L_syntactic", "log2_log2_L_syntactic",
                            "M", "log2_log2_M"], bound_rows)
    files.append(bounds_csv)
    bounds_png = os.path.join(out_dir, "bound_growth.png")
    _fig_bounds(profile, bounds_png, bound_rows)
    files.append(bounds_png)

    return {"command": "report", "out_dir": out_dir, "files": files,
            "L_min": None if found is None else str(found),
            "chain": chain_summary}

"""Command-line driver: subcommand dispatch and stable JSON output.

Numbers in JSON output are decimal strings; log2 estimates of values beyond
the exact-representation cap appear under an "approx" key. Exit codes:
0 success, 2 input/parse error, 3 cap exhaustion or a failed precondition of
verify/descend/certify.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Optional

from . import report as report_mod
from .bounds import (DEFAULT_CAP_BITS, SystemProfile, bezout_degree,
                     bound_cert_degree, bound_eps0, bound_eps_i, bound_k0,
                     bound_L_semiexplicit, bound_L_syntactic, bound_M,
                     radical_power_exponent)
from .decide import (Certificate, CertEntry, CertificateFormatError,
                     INCONSISTENT, decide, strong_nss, verify_certificate)
from .descent import (ChainCapError, DimensionDropError, build_chain,
                      compute_invariants, reconstruct_L)
from .parser import (InputDocument, InputError, document_to_text,
                     parse_document, parse_poly, system_to_document)
from .reduce import to_first_order
from .ring import poly_to_text

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3


class CapExhausted(Exception):
    """No result within the configured caps."""


def certificate_to_json(cert: Certificate) -> dict:
    out = {"L": str(cert.L)}
    if cert.M is not None:
        out["M"] = str(cert.M)
    out["target"] = poly_to_text(cert.target)
    out["entries"] = [{"gen": str(e.gen), "j": str(e.j),
                       "cofactor": poly_to_text(e.cofactor)}
                      for e in cert.entries]
    return out


def certificate_from_json(obj) -> Certificate:
    try:
        L = int(obj["L"])
        M = int(obj["M"]) if "M" in obj and obj["M"] is not None else None
        target = parse_poly(obj["target"])
        entries = tuple(CertEntry(int(e["gen"]), int(e["j"]),
                                  parse_poly(e["cofactor"]))
                        for e in obj["entries"])
    except (KeyError, TypeError, ValueError, InputError) as exc:
        raise CertificateFormatError(f"malformed certificate: {exc}") from exc
    return Certificate(target=target, entries=entries, L=L, M=M)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_document(path: str) -> InputDocument:
    return parse_document(_read_input(path))


def _config_json(args) -> dict:
    return {"c": str(args.c), "tower_cap_bits": str(args.tower_cap_bits),
            "threads": str(args.threads)}


def _profile_of_family(family, args) -> SystemProfile:
    return SystemProfile.from_family(family, c=args.c)


def _cmd_decide(args) -> dict:
    doc = _load_document(args.input)
    family = doc.family()
    if not family:
        raise InputError("the input system has no equations", 0, 0)
    verdict = decide(family, L_cap=args.max_order, c=args.c,
                     cap_bits=args.tower_cap_bits)
    out = {"command": "decide", "status": verdict.status,
           "L_cap": str(verdict.L_cap)}
    if verdict.status == INCONSISTENT:
        out["L_min"] = str(verdict.L_min)
        out["certificate"] = certificate_to_json(verdict.certificate)
        if args.oracle_check:
            out["oracle_check"] = _oracle_check(family, verdict, args)
    else:
        out["syntactic_threshold"] = bound_L_syntactic(
            _profile_of_family(family, args), args.tower_cap_bits).render()
        if args.oracle_check:
            out["oracle_check"] = {"skipped": "no membership claim to cross-check"}
    out["config"] = _config_json(args)
    return out


def _oracle_check(family, verdict, args) -> dict:
    from math import comb

    from .diffcore import prolong
    from .groebner import macaulay_membership
    from .ring import DiffPoly
    fam = prolong(family, verdict.L_min)
    max_deg = max(g.degree() for g in family)
    cap = args.oracle_cap if args.oracle_cap else max_deg + verdict.L_min + 4
    verified = verify_certificate(verdict.certificate, family)
    nv = len(set().union(*(g.variables() for g in fam.polys)))
    columns = sum(comb(nv + cap - g.degree(), nv)
                  for g in fam.polys if g.degree() <= cap)
    if columns > 100_000:
        return {"degree_cap": str(cap),
                "skipped": f"oracle linear system too large ({columns} columns);"
                           " lower --oracle-cap to force it",
                "certificate_verifies": verified}
    witness = macaulay_membership(DiffPoly.const(1), fam.polys, cap)
    return {"degree_cap": str(cap), "agrees": witness is not None,
            "certificate_verifies": verified}


def _cmd_certify(args) -> dict:
    doc = _load_document(args.input)
    family = doc.family()
    if not family:
        raise InputError("the input system has no equations", 0, 0)
    if doc.claim is not None:
        found = strong_nss(family, doc.claim, L_cap=args.max_order,
                           M_cap=args.max_power)
        if found is None:
            raise CapExhausted(
                f"no power of the claim found within L<={args.max_order}, "
                f"M<={args.max_power}")
        _, _, cert = found
    else:
        verdict = decide(family, L_cap=args.max_order, c=args.c,
                         cap_bits=args.tower_cap_bits)
        if verdict.status != INCONSISTENT:
            raise CapExhausted(
                f"1 is not in the prolonged ideal up to order {args.max_order}")
        cert = verdict.certificate
    return certificate_to_json(cert)


def _cmd_verify(args) -> dict:
    doc = _load_document(args.input)
    family = doc.family()
    with open(args.cert, "r", encoding="utf-8") as fh:
        cert = certificate_from_json(json.load(fh))
    valid = verify_certificate(cert, family)
    out = {"command": "verify", "valid": valid}
    if cert.entries:
        derivs = {}
        max_deg = 0
        for e in cert.entries:
            chain = derivs.setdefault(e.gen, [family[e.gen]])
            from .diffcore import total_derivative
            while len(chain) <= e.j:
                chain.append(total_derivative(chain[-1]))
            term_deg = e.cofactor.degree() + chain[e.j].degree()
            max_deg = max(max_deg, term_deg)
        out["max_term_degree"] = str(max_deg)
        out["term_degree_bound"] = bound_cert_degree(
            _profile_of_family(family, args),
            cap_bits=args.tower_cap_bits).render()
    out["config"] = _config_json(args)
    return out


def _cmd_bound(args) -> dict:
    D = args.variety_degree if args.variety_degree is not None else args.degree
    profile = SystemProfile(n=args.n, m=args.m, e=args.order, d=args.degree,
                            r=args.dim, D=D, c=args.c)
    cap = args.tower_cap_bits
    L_semi = bound_L_semiexplicit(profile, cap_bits=cap)
    out = {
        "command": "bound",
        "inputs": {"n": str(args.n), "m": str(args.m),
                   "degree": str(args.degree), "order": str(args.order),
                   "dim": "unknown" if args.dim is None else str(args.dim),
                   "variety_degree": str(D), "epsilon": str(profile.eps)},
        "eps0": bound_eps0(profile, cap).render(),
        "L_semiexplicit": L_semi.render(),
        "L_semiexplicit_general": bound_L_semiexplicit(
            profile, sharpen=False, cap_bits=cap).render(),
        "L_syntactic": bound_L_syntactic(profile, cap).render(),
        "M": bound_M(profile, L_semi, cap).render(),
        "certificate_degree": bound_cert_degree(profile, cap_bits=cap).render(),
        "radical_power_exponent": radical_power_exponent(
            args.degree, args.n + args.m, cap).render(),
        "degree_surrogate_bezout": SystemProfile(
            n=args.n, m=args.m, e=args.order, d=args.degree,
            c=args.c).degree_surrogate(cap).render(),
    }
    if args.dim is not None and args.dim >= 0:
        out["bezout_degree"] = bezout_degree(D, args.degree, args.dim,
                                             cap).render()
        if args.dim > 0:
            out["eps_i"] = [bound_eps_i(profile, i, cap).render()
                            for i in range(1, args.dim + 1)]
    out["config"] = _config_json(args)
    return out


def _stage_json(st) -> dict:
    return {"dim": str(st.dim), "radical_status": st.radical_status,
            "generators": [poly_to_text(g) for g in st.generators],
            "eps": None if st.eps is None else str(st.eps),
            "k": None if st.k is None else str(st.k)}


def _cmd_descend(args) -> dict:
    doc = _load_document(args.input)
    sys_ = doc.semiexplicit()
    chain = build_chain(sys_, max_stages=args.max_stages)
    chain = compute_invariants(chain, eps_cap=args.eps_cap, k_cap=args.k_cap)
    out = {"command": "descend",
           "stages": [_stage_json(st) for st in chain.stages],
           "rho": str(chain.rho)}
    try:
        rep = reconstruct_L(chain)
        out["reconstruction"] = {
            "L": str(rep.L),
            "mu": None if rep.mu is None else str(rep.mu),
            "inequalities": [{"i": str(i), "k_prev": str(kp), "eps": str(e),
                              "k": str(k), "holds": holds}
                             for i, kp, e, k, holds in rep.inequalities],
            "k_mu_is_one": rep.k_mu_is_one,
            "membership_verified": rep.membership_verified,
        }
    except ValueError as exc:
        out["reconstruction"] = None
        out["reconstruction_skipped"] = str(exc)
    out["config"] = _config_json(args)
    return out


def _cmd_reduce(args) -> str:
    doc = _load_document(args.input)
    gs = doc.general_system()
    semi, _ = to_first_order(gs)
    return document_to_text(system_to_document(semi))


def _cmd_report(args) -> dict:
    doc = _load_document(args.input)
    return report_mod.render_report(
        doc, args.out_dir, l_cap=args.max_order, max_stages=args.max_stages,
        eps_cap=args.eps_cap, k_cap=args.k_cap, c=args.c,
        cap_bits=args.tower_cap_bits)


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dnss",
        description="Exact consistency analysis for polynomial DAE systems")
    ap.add_argument("--c", type=int, default=1,
                    help="universal-constant knob in the bound formulas "
                         "(not a certified constant; default 1)")
    ap.add_argument("--tower-cap-bits", type=int, default=DEFAULT_CAP_BITS,
                    help="bit budget below which tower values stay exact")
    ap.add_argument("--threads", type=int, default=1,
                    help="reserved; the engine currently runs sequentially")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="three-way consistency verdict")
    p.add_argument("--input", required=True, help="system file or - for stdin")
    p.add_argument("--max-order", type=int, default=16)
    p.add_argument("--oracle-check", action="store_true",
                   help="cross-check the verdict against the linear-system oracle")
    p.add_argument("--oracle-cap", type=int, default=0,
                   help="degree cap for the oracle (default: derived)")

    p = sub.add_parser("certify", help="emit a certificate as JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--max-order", type=int, default=16)
    p.add_argument("--max-power", type=int, default=64)

    p = sub.add_parser("verify", help="check a certificate exactly")
    p.add_argument("--cert", required=True)
    p.add_argument("--input", required=True)

    p = sub.add_parser("bound", help="evaluate the closed-form bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--dim", type=int, default=None,
                   help="constraint-variety dimension, when known")
    p.add_argument("--variety-degree", type=int, default=None,
                   help="degree bound for the constraint variety "
                        "(default: --degree)")

    p = sub.add_parser("descend", help="dimension-descending stage analysis")
    p.add_argument("--input", required=True)
    p.add_argument("--max-stages", type=int, default=16)
    p.add_argument("--eps-cap", type=int, default=64)
    p.add_argument("--k-cap", type=int, default=64)

    p = sub.add_parser("reduce", help="rewrite to first-order semiexplicit form")
    p.add_argument("--input", required=True)

    p = sub.add_parser("report", help="figures and delimited summaries")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--max-order", type=int, default=16)
    p.add_argument("--max-stages", type=int, default=16)
    p.add_argument("--eps-cap", type=int, default=64)
    p.add_argument("--k-cap", type=int, default=64)
    return ap


_HANDLERS = {
    "decide": _cmd_decide,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
    "bound": _cmd_bound,
    "descend": _cmd_descend,
    "reduce": _cmd_reduce,
    "report": _cmd_report,
}


def _emit_error(kind: str, exc: Exception) -> None:
    obj = {"error": kind, "message": str(exc)}
    if isinstance(exc, InputError):
        obj["error"] = exc.kind
        obj["line"] = str(exc.line)
        obj["col"] = str(exc.col)
    print(json.dumps(obj), file=sys.stderr)


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    if args.threads < 1:
        print(json.dumps({"error": "input", "message": "--threads must be >= 1"}),
              file=sys.stderr)
        return EXIT_INPUT
    handler = _HANDLERS[args.command]
    try:
        result = handler(args)
    except InputError as exc:
        _emit_error(exc.kind, exc)
        return EXIT_INPUT
    except CertificateFormatError as exc:
        _emit_error("certificate-format", exc)
        return EXIT_CAP
    except (CapExhausted, ChainCapError, DimensionDropError) as exc:
        _emit_error("cap-exhausted", exc)
        return EXIT_CAP
    except (ValueError, OSError) as exc:
        _emit_error("input", exc)
        return EXIT_INPUT
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        print(json.dumps(result, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

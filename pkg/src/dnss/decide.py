"""Top-level decision procedures: consistency with certificate extraction,
the strong form (a power of a claimed polynomial in the prolonged ideal),
and exact certificate verification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .bounds import DEFAULT_CAP_BITS, SystemProfile, TowerInt, bound_L_syntactic
from .diffcore import ProlongedFamily, prolong, total_derivative
from .groebner import contains_one, is_member, min_power_in_ideal
from .ring import DiffPoly

INCONSISTENT = "inconsistent"
CONSISTENT_UP_TO = "consistent_up_to"
CERTIFIED_CONSISTENT = "certified_consistent"

DEFAULT_L_CAP = 16
DEFAULT_M_CAP = 64


class CertificateFormatError(ValueError):
    """Structurally invalid certificate (bad index or derivative order);
    distinct from a certificate that is well-formed but does not verify."""


@dataclass(frozen=True)
class CertEntry:
    gen: int       # index into the input family
    j: int         # derivative order of that generator
    cofactor: DiffPoly


@dataclass(frozen=True)
class Certificate:
    """target = sum over entries of cofactor * (generator gen)^(j)."""

    target: DiffPoly
    entries: tuple
    L: int
    M: Optional[int] = None


@dataclass(frozen=True)
class Verdict:
    status: str
    L_cap: int
    L_min: Optional[int] = None
    certificate: Optional[Certificate] = None
    threshold: Optional[TowerInt] = None  # syntactic order bound, reported


def _certificate_from_witness(witness, fam: ProlongedFamily, L: int,
                              target: DiffPoly,
                              M: Optional[int] = None) -> Certificate:
    entries = []
    for flat, cof in enumerate(witness.cofactors):
        if cof.is_zero:
            continue
        i, j = fam.position(flat)
        entries.append(CertEntry(i, j, cof))
    return Certificate(target=target, entries=tuple(entries), L=L, M=M)


def decide(F: Sequence[DiffPoly], L_cap: int = DEFAULT_L_CAP, c: int = 1,
           cap_bits: int = DEFAULT_CAP_BITS) -> Verdict:
    """Search k = 0..L_cap for 1 in the order-k prolongation of F. The first
    success yields Inconsistent with L_min = k and a verifying certificate;
    otherwise the verdict is ConsistentUpTo, upgraded to CertifiedConsistent
    only if L_cap reaches the syntactic order bound."""
    F = tuple(F)
    if not F:
        raise ValueError("the family must be nonempty")
    if L_cap < 0:
        raise ValueError("L_cap must be >= 0")
    for k in range(L_cap + 1):
        fam = prolong(F, k)
        witness = contains_one(fam.polys)
        if witness is not None:
            cert = _certificate_from_witness(witness, fam, k, DiffPoly.const(1))
            return Verdict(status=INCONSISTENT, L_cap=L_cap, L_min=k,
                           certificate=cert)
    threshold = bound_L_syntactic(SystemProfile.from_family(F, c=c), cap_bits)
    status = (CERTIFIED_CONSISTENT
              if TowerInt.exact(L_cap) >= threshold else CONSISTENT_UP_TO)
    return Verdict(status=status, L_cap=L_cap, threshold=threshold)


def strong_nss(F: Sequence[DiffPoly], f: DiffPoly,
               L_cap: int = DEFAULT_L_CAP, M_cap: int = DEFAULT_M_CAP
               ) -> Optional[Tuple[int, int, Certificate]]:
    """Smallest L <= L_cap admitting some M <= M_cap with f^M in the order-L
    prolongation of F, with minimal such M and a verifying certificate.
    Absent when nothing is found within the caps."""
    F = tuple(F)
    if f.is_zero:
        raise ValueError("the claimed polynomial must be nonzero")
    for L in range(L_cap + 1):
        fam = prolong(F, L)
        M = min_power_in_ideal(f, fam.polys, M_cap)
        if M is None:
            continue
        target = f ** M
        witness = is_member(target, fam.polys)
        if witness is None:
            raise AssertionError("minimal power found but witness extraction failed")
        cert = _certificate_from_witness(witness, fam, L, target, M=M)
        return L, M, cert
    return None


def verify_certificate(cert: Certificate, F: Sequence[DiffPoly]) -> bool:
    """Recompute the generator derivatives, expand the certificate exactly,
    and compare with its target. Structural defects raise
    CertificateFormatError instead of returning False."""
    F = tuple(F)
    derivs = {i: [F[i]] for i in range(len(F))}
    for entry in cert.entries:
        if not isinstance(entry.gen, int) or not isinstance(entry.j, int):
            raise CertificateFormatError("entry indices must be integers")
        if not 0 <= entry.gen < len(F):
            raise CertificateFormatError(f"generator index {entry.gen} out of range")
        if not 0 <= entry.j <= cert.L:
            raise CertificateFormatError(
                f"derivative order {entry.j} outside 0..L={cert.L}")
    acc = DiffPoly.zero()
    for entry in cert.entries:
        chain = derivs[entry.gen]
        while len(chain) <= entry.j:
            chain.append(total_derivative(chain[-1]))
        acc = acc + entry.cofactor * chain[entry.j]
    return acc == cert.target

"""Certified complex root approximation for squarefree rational polynomials.

Approximations come from an Aberth-Ehrlich simultaneous iteration in
double precision (real roots are seeded from exact Sturm isolating
intervals instead).  Each approximation is then polished by Newton's
method in mpmath at escalating precision until the inclusion radius
    r = deg(p) * |p(z) / p'(z)|
drops below the requested bound; that disk provably contains a root of
p, and pairwise-disjoint disks certify the bijection with the true
roots.  Radii are inflated by a running evaluation-error bound so the
certificate survives floating arithmetic.

Modulus comparisons (distinctness of |root|, separation from 1) are
refined the same way; structural conjugate pairs and exact plus/minus
pairs are recognized symbolically, everything else escalates precision
until separation or the declared-tie radius cap of 1e-30 is hit.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .poly import (
    PolynomialDomainError,
    RatPoly,
    is_squarefree,
    isolate_real_roots,
    poly_gcd,
    refine_isolating_interval,
    sturm_chain,
    count_real_roots_between,
)

TIE_RADIUS_CAP = 1e-30
_DEFAULT_PREC_CAP = 4096


class CertificationError(RuntimeError):
    """A certified numeric claim could not be established within the precision cap."""


class ModulusTieError(CertificationError):
    """Two root moduli could not be separated (non-simple spectrum or coincidence)."""

    def __init__(self, a, b, declared_exact: bool):
        self.pair = (a, b)
        self.declared_exact = declared_exact
        kind = "exact" if declared_exact else "unresolved at radius cap"
        super().__init__(f"modulus tie ({kind}) between {a} and {b}")


def precision_cap_bits() -> int:
    """Refinement precision cap, overridable via NILRIGID_PRECISION_BITS."""
    raw = os.environ.get("NILRIGID_PRECISION_BITS")
    if raw:
        try:
            return max(64, int(raw))
        except ValueError:
            pass
    return _DEFAULT_PREC_CAP


@dataclass(frozen=True)
class CertifiedRoot:
    """A double-precision root enclosure: the true root lies within radius of value."""

    value: complex
    radius: float
    is_real: bool

    @property
    def modulus(self) -> float:
        return abs(self.value)

    def modulus_interval(self) -> tuple[float, float]:
        m = abs(self.value)
        return (max(m - self.radius, 0.0), m + self.radius)

    def real_value(self) -> float:
        if not self.is_real:
            raise ValueError("root is not certified real")
        return self.value.real


class PolishedRoot:
    """High-precision, re-refinable enclosure of one root of a fixed polynomial."""

    __slots__ = ("poly", "value", "radius", "is_real", "prec", "_interval")

    def __init__(self, poly: RatPoly, value, radius, is_real: bool, prec: int, interval=None):
        self.poly = poly
        self.value = value  # mpmath mpf (real) or mpc
        self.radius = radius  # mpmath mpf
        self.is_real = is_real
        self.prec = prec
        self._interval = interval  # exact rational isolating interval for real roots

    def conjugate(self) -> "PolishedRoot":
        return PolishedRoot(self.poly, mpmath.conj(self.value), self.radius, False, self.prec)

    def to_certified(self) -> CertifiedRoot:
        with mp.workprec(max(self.prec, 64)):
            val = complex(self.value)
            # conversion to double may round by up to one ulp in each part
            slack = math.ulp(abs(val)) * 4 if val != 0 else 5e-324
            rad = float(mpmath.mpf(self.radius)) * (1 + 1e-12) + slack
        if self.is_real:
            val = complex(val.real, 0.0)
        return CertifiedRoot(value=val, radius=rad, is_real=self.is_real)

    def modulus_bounds(self):
        m = abs(self.value)
        lo = m - self.radius
        return (lo if lo > 0 else mpmath.mpf(0), m + self.radius)

    def __repr__(self):
        return f"PolishedRoot({complex(self.value)}, r={float(self.radius):.3g}, real={self.is_real})"


# -- evaluation with running error bounds ------------------------------------


def _eval_with_error(coeffs_mp, z):
    """Horner value of sum c_k z^k plus a bound on the floating evaluation error."""
    acc = mpmath.mpf(0)
    mag = mpmath.mpf(0)
    az = abs(z)
    for c in reversed(coeffs_mp):
        acc = acc * z + c
        mag = mag * az + abs(c)
    u = mpmath.mpf(2) ** (1 - mp.prec)
    err = 2 * (len(coeffs_mp) + 1) * u * mag
    return acc, err


def _coeffs_mp(p: RatPoly):
    return [mpmath.mpf(c.numerator) / c.denominator for c in p.coeffs]


def _newton_polish(p: RatPoly, z0, target_radius, prec: int, real: bool, bracket=None):
    """Newton iteration at fixed precision; returns (value, certified_radius) or None."""
    n = p.degree
    dp = p.derivative()
    with mp.workprec(prec):
        cs = _coeffs_mp(p)
        ds = _coeffs_mp(dp)
        z = mpmath.mpf(z0) if real else mpmath.mpc(z0)
        lo = hi = None
        if real and bracket is not None:
            lo = mpmath.mpf(bracket[0].numerator) / bracket[0].denominator
            hi = mpmath.mpf(bracket[1].numerator) / bracket[1].denominator
        best = None
        for _ in range(prec):  # Newton is quadratic; this cap is generous
            pv, pe = _eval_with_error(cs, z)
            dv, de = _eval_with_error(ds, z)
            denom = abs(dv) - de
            if denom <= 0:
                return best
            radius = n * (abs(pv) + pe) / denom
            if best is None or radius < best[1]:
                best = (z, radius)
            if radius <= target_radius:
                return best
            step = pv / dv
            z_next = z - step
            if real and lo is not None and not (lo <= z_next <= hi):
                z_next = (lo + hi) / 2
            if z_next == z:
                return best
            z = z_next
        return best


def _polish_to(p: RatPoly, z0, target_radius, real: bool, bracket=None,
               start_prec: int = 120) -> PolishedRoot:
    cap = precision_cap_bits()
    prec = start_prec
    best = None
    while prec <= cap:
        got = _newton_polish(p, z0 if best is None else best[0], target_radius, prec, real, bracket)
        if got is not None and (best is None or got[1] < best[1]):
            best = got
        if best is not None and best[1] <= target_radius:
            return PolishedRoot(p, best[0], best[1], real, prec, bracket)
        prec *= 2
    if best is None:
        raise CertificationError(f"Newton refinement failed for {p}")
    return PolishedRoot(p, best[0], best[1], real, prec // 2, bracket)


# -- Aberth-Ehrlich in double precision ---------------------------------------


def _aberth_double(p: RatPoly, max_iters: int = 400) -> list[complex]:
    """Simultaneous root iteration with deterministic circular start values."""
    n = p.degree
    cs = [float(c) for c in p.coeffs]
    dcs = [k * c for k, c in enumerate(cs)][1:]

    def ev(coeffs, z):
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * z + c
        return acc

    r0 = 1.0 + max(abs(c) for c in cs[:-1]) / abs(cs[-1]) if n > 0 else 1.0
    zs = [0.5 * r0 * cmath.exp(2j * math.pi * (k + 0.25) / n) for k in range(n)]
    for _ in range(max_iters):
        moved = 0.0
        for k in range(n):
            pv = ev(cs, zs[k])
            dv = ev(dcs, zs[k])
            if dv == 0:
                zs[k] += 1e-6 + 1e-6j
                moved = math.inf
                continue
            newton = pv / dv
            s = sum(1.0 / (zs[k] - zs[j]) for j in range(n) if j != k)
            denom = 1.0 - newton * s
            step = newton / denom if denom != 0 else newton
            zs[k] -= step
            moved = max(moved, abs(step))
        if moved < 1e-14 * max(1.0, max(abs(z) for z in zs)):
            break
    return zs


def _initial_complex_candidates(p: RatPoly, expected_pairs: int) -> list[complex]:
    """Starting points for the non-real roots, one per conjugate pair (Im > 0)."""
    approx = _aberth_double(p)
    ups = sorted((z for z in approx if z.imag > 0), key=lambda z: -z.imag)
    if len(ups) >= expected_pairs:
        return ups[:expected_pairs]
    # double precision was not enough to split a near-real pair; escalate
    with mp.workprec(256):
        rts = mpmath.polyroots(list(reversed(_coeffs_mp(p))), maxsteps=200, extraprec=200)
    ups = sorted((complex(z) for z in rts if complex(z).imag > 0), key=lambda z: -z.imag)
    if len(ups) < expected_pairs:
        raise CertificationError("could not locate all complex root pairs")
    return ups[:expected_pairs]


# -- public construction -------------------------------------------------------


def polished_roots(p: RatPoly, rel_tol: float = 1e-12) -> list[PolishedRoot]:
    """One PolishedRoot per distinct root of squarefree p, conjugate-paired, sorted.

    Radii satisfy r <= rel_tol * max(1, |root|), and the inclusion disks
    are pairwise disjoint, so each disk holds exactly one root.
    """
    if p.is_zero():
        raise PolynomialDomainError("zero polynomial")
    if p.degree < 1:
        return []
    if not is_squarefree(p):
        raise PolynomialDomainError("certified_roots requires a squarefree polynomial")
    if rel_tol <= 0:
        raise PolynomialDomainError("tolerance must be positive")

    n = p.degree
    intervals = isolate_real_roots(p)
    k = len(intervals)
    if (n - k) % 2 != 0:
        raise CertificationError("real root count inconsistent with degree parity")

    roots: list[PolishedRoot] = []
    for (a, b) in intervals:
        if a == b:
            val = mpmath.mpf(a.numerator) / a.denominator
            roots.append(PolishedRoot(p, val, mpmath.mpf(0), True, mp.prec, (a, a)))
            continue
        width = (b - a) / 2**24
        a2, b2 = refine_isolating_interval(p, (a, b), width)
        mid = (a2 + b2) / 2
        target = rel_tol * max(1.0, abs(float(mid)))
        roots.append(_polish_to(p, float(mid), mpmath.mpf(target), True, (a2, b2)))

    for z in _initial_complex_candidates(p, (n - k) // 2):
        target = rel_tol * max(1.0, abs(z))
        up = _polish_to(p, z, mpmath.mpf(target), False)
        roots.append(up)
        roots.append(up.conjugate())

    _ensure_disjoint_disks(roots, rel_tol)
    roots.sort(key=_sort_key)
    return roots


def _sort_key(r: PolishedRoot):
    v = complex(r.value)
    return (abs(v), math.atan2(v.imag, v.real), v.real)


def _ensure_disjoint_disks(roots: list[PolishedRoot], rel_tol: float) -> None:
    for _ in range(24):
        clash = None
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                sep = abs(roots[i].value - roots[j].value)
                if sep <= roots[i].radius + roots[j].radius:
                    clash = (i, j)
                    break
            if clash:
                break
        if clash is None:
            return
        i, j = clash
        for idx in (i, j):
            r = roots[idx]
            roots[idx] = _refine_further(r)
    raise CertificationError("could not certify pairwise-disjoint root disks")


def _refine_further(r: PolishedRoot, factor: float = 1e-8) -> PolishedRoot:
    if r.radius == 0:
        return r
    target = r.radius * factor
    out = _polish_to(r.poly, r.value, target, r.is_real, r._interval, start_prec=max(r.prec, 120))
    return out


def certified_roots(p: RatPoly, tol: float = 1e-12, require_distinct_moduli: bool = False) -> list[CertifiedRoot]:
    """Certified enclosures of all distinct roots of squarefree p.

    Radii satisfy radius <= tol * max(1, |root|).  With
    require_distinct_moduli=True the enclosures are additionally refined
    until all root moduli are certified pairwise distinct; an
    unresolvable pair raises ModulusTieError.
    """
    roots = polished_roots(p, tol)
    if require_distinct_moduli:
        ties = separate_moduli(roots)
        if ties:
            a, b, exact = ties[0]
            raise ModulusTieError(roots[a].to_certified(), roots[b].to_certified(), exact)
    return [r.to_certified() for r in roots]


# -- modulus separation ---------------------------------------------------------


def _is_conjugate_pair(a: PolishedRoot, b: PolishedRoot) -> bool:
    if a.poly is not b.poly and a.poly != b.poly:
        return False
    if a.is_real or b.is_real:
        return False
    return bool(abs(a.value - mpmath.conj(b.value)) <= a.radius + b.radius)


def _exact_real_tie(a: PolishedRoot, b: PolishedRoot) -> bool:
    """Exact decision of |alpha| == |beta| for real roots alpha of a.poly, beta of b.poly."""
    if not (a.is_real and b.is_real):
        return False
    # |alpha| == |beta| iff beta == alpha or beta == -alpha; both are gcd conditions.
    for flip in (False, True):
        q = b.poly.compose_neg() if flip else b.poly
        g = poly_gcd(a.poly, q)
        if g.degree < 1:
            continue
        if _real_root_in_interval(g, a) and _real_root_in_interval(g.compose_neg() if flip else g, b):
            return True
    return False


def _real_root_in_interval(g: RatPoly, r: PolishedRoot) -> bool:
    """Does g have a real root inside r's certified enclosure?"""
    if g.degree < 1:
        return False
    iv = r._interval
    if iv is not None:
        a, b = iv
        if a == b:
            return g.eval(a) == 0
        chain = sturm_chain(g)
        return count_real_roots_between(chain, a, b) > 0
    lo = Fraction(float(mpmath.mpf(r.value - r.radius))).limit_denominator(10**40)
    hi = Fraction(float(mpmath.mpf(r.value + r.radius))).limit_denominator(10**40)
    chain = sturm_chain(g)
    return count_real_roots_between(chain, lo, hi) > 0


def separate_moduli(roots: list[PolishedRoot]) -> list[tuple[int, int, bool]]:
    """Refine until all moduli are pairwise certified distinct; report ties.

    Returns a list of (i, j, declared_exact) for pairs that could not be
    separated: declared_exact=True when the tie is proven symbolically
    (conjugate pairs, plus/minus pairs, shared roots), False when the
    pair merely failed to separate at the radius cap.
    """
    ties: list[tuple[int, int, bool]] = []
    settled: set[tuple[int, int]] = set()
    for _ in range(40):
        overlap = None
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if (i, j) in settled:
                    continue
                lo_i, hi_i = roots[i].modulus_bounds()
                lo_j, hi_j = roots[j].modulus_bounds()
                if hi_i >= lo_j and hi_j >= lo_i:
                    overlap = (i, j)
                    break
            if overlap:
                break
        if overlap is None:
            return ties
        i, j = overlap
        a, b = roots[i], roots[j]
        if _is_conjugate_pair(a, b) or _exact_real_tie(a, b):
            ties.append((i, j, True))
            settled.add((i, j))
            continue
        if max(float(a.radius), float(b.radius)) < TIE_RADIUS_CAP:
            ties.append((i, j, False))
            settled.add((i, j))
            continue
        roots[i] = _refine_further(a)
        roots[j] = _refine_further(b)
        if roots[i].is_real is False:
            _resync_conjugates(roots, i)
        if roots[j].is_real is False:
            _resync_conjugates(roots, j)
    raise CertificationError("modulus separation did not stabilize")


def _resync_conjugates(roots: list[PolishedRoot], idx: int) -> None:
    # keep the mirrored twin of a refined complex root in sync so the
    # structural conjugate-pair detection stays exact
    r = roots[idx]
    for k, other in enumerate(roots):
        if k != idx and not other.is_real and other.poly == r.poly:
            if abs(mpmath.conj(other.value) - r.value) <= other.radius + r.radius:
                roots[k] = r.conjugate()
                return


def separate_modulus_from_one(roots: list[PolishedRoot]) -> list[bool]:
    """Certify |root| != 1 per root; True = modulus > 1, False = modulus < 1.

    Rational unit-modulus roots must be excluded beforehand via the exact
    p(1)/p(-1) guards; anything still straddling 1 at the radius cap
    raises CertificationError ("hyperbolicity undecided").
    """
    out: list[bool] = []
    for idx, r in enumerate(roots):
        while True:
            lo, hi = r.modulus_bounds()
            if lo > 1:
                out.append(True)
                break
            if hi < 1:
                out.append(False)
                break
            if float(r.radius) < TIE_RADIUS_CAP:
                raise CertificationError(
                    f"hyperbolicity undecided: modulus of {r} cannot be separated from 1"
                )
            r = _refine_further(r)
            roots[idx] = r
    return out

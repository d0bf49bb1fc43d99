"""Univariate polynomial algebra over the rationals.

Polynomials are immutable and stored as tuples of ``fractions.Fraction``
in ascending degree order with no trailing zeros; the zero polynomial has
an empty coefficient tuple.  Everything here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class PolynomialDomainError(ValueError):
    """Raised when an operation receives a polynomial outside its domain."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


class RatPoly:
    """A univariate polynomial with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):  # ascending degree
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    # -- basic structure ------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise PolynomialDomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                term = str(c)
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}x" if k == 1 else f"{mag}x^{k}"
                if c < 0:
                    term = "-" + term
            if parts and not term.startswith("-"):
                parts.append("+" + term)
            else:
                parts.append(term)
        return "".join(parts)

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RatPoly([(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)])

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __neg__(self) -> "RatPoly":
        return RatPoly([-c for c in self.coeffs])

    def __mul__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RatPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return RatPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "RatPoly":
        c = _frac(c)
        return RatPoly([c * a for a in self.coeffs])

    def __pow__(self, n: int) -> "RatPoly":
        if n < 0:
            raise PolynomialDomainError("negative power")
        out = RatPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise PolynomialDomainError("division by the zero polynomial")
        q = [Fraction(0)] * max(self.degree - other.degree + 1, 0)
        rem = list(self.coeffs)
        d, lc = other.degree, other.lead
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            f = rem[-1] / lc
            q[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= f * c
            rem.pop()
        return RatPoly(q), RatPoly(rem)

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "RatPoly") -> "RatPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise PolynomialDomainError(f"{other} does not divide {self}")
        return q

    # -- calculus and evaluation ------------------------------------------

    def derivative(self) -> "RatPoly":
        return RatPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Horner evaluation; exact for Fraction/int input."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, m):
        """Evaluate at a square RatMatrix by Horner's rule."""
        acc = m.zero_like()
        for c in reversed(self.coeffs):
            acc = acc @ m + m.identity_like().scale(c)
        return acc

    def compose_neg(self) -> "RatPoly":
        """p(-x)."""
        return RatPoly([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def monic(self) -> "RatPoly":
        if self.is_zero():
            raise PolynomialDomainError("zero polynomial cannot be made monic")
        return self.scale(1 / self.lead)

    def reversed_coeffs(self) -> "RatPoly":
        """x^deg * p(1/x)."""
        return RatPoly(list(reversed(self.coeffs)))


def x_poly() -> RatPoly:
    return RatPoly([0, 1])


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd over Q."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def squarefree_part(p: RatPoly) -> RatPoly:
    """p / gcd(p, p'), monic."""
    if p.is_zero():
        raise PolynomialDomainError("zero polynomial")
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return p.exact_div(g).monic()


def is_squarefree(p: RatPoly) -> bool:
    return poly_gcd(p, p.derivative()).degree <= 0


# -- Sturm machinery -------------------------------------------------------


def sturm_chain(p: RatPoly) -> list[RatPoly]:
    """Sturm sequence p, p', -rem(...), ... over Q."""
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Sequence[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def sturm_variations_at(chain: Sequence[RatPoly], x: Fraction) -> int:
    return _variations([_sign(q.eval(x)) for q in chain])


def sturm_variations_at_inf(chain: Sequence[RatPoly], positive: bool) -> int:
    signs = []
    for q in chain:
        if q.is_zero():
            signs.append(0)
        elif positive:
            signs.append(_sign(q.lead))
        else:
            signs.append(_sign(q.lead) * (-1 if q.degree % 2 else 1))
    return _variations(signs)


def count_real_roots_between(chain: Sequence[RatPoly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] for a squarefree chain head."""
    return sturm_variations_at(chain, a) - sturm_variations_at(chain, b)


def real_root_count(p: RatPoly) -> int:
    """Exact number of distinct real roots, via a Sturm sequence.

    A non-squarefree input is replaced by its squarefree part first.
    """
    if p.is_zero():
        raise PolynomialDomainError("zero polynomial")
    if p.degree == 0:
        return 0
    q = squarefree_part(p)
    chain = sturm_chain(q)
    return sturm_variations_at_inf(chain, positive=False) - sturm_variations_at_inf(chain, positive=True)


def is_cyclotomic(p: RatPoly) -> bool:
    """True iff monic integer p is a product of cyclotomic polynomials.

    Decided exactly: x has finite multiplicative order in Q[x]/(p) iff
    every root is a root of unity, and for deg p = d any such order is
    at most 2 d^2 + 2 (since phi(n) <= d forces n <= 2 d^2 for d >= 1).
    """
    d = p.degree
    if d < 1 or p.lead != 1 or any(c.denominator != 1 for c in p.coeffs):
        return False
    if abs(p.coeffs[0]) != 1:
        return False
    one = RatPoly([1])
    g = x_poly() % p
    for _ in range(2 * d * d + 2):
        if g == one:
            return True
        g = (g * x_poly()) % p
    return False


def cauchy_root_bound(p: RatPoly) -> Fraction:
    """Exact bound M with all complex roots in |z| < M."""
    if p.is_zero() or p.degree == 0:
        return Fraction(1)
    lc = abs(p.lead)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lc


def isolate_real_roots(p: RatPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, one per distinct real root of p.

    Returned intervals are either degenerate [r, r] (an exact rational
    root) or open-closed (a, b] containing exactly one root.  Requires a
    nonzero polynomial; works on the squarefree part.
    """
    if p.is_zero():
        raise PolynomialDomainError("zero polynomial")
    q = squarefree_part(p)
    if q.degree == 0:
        return []
    chain = sturm_chain(q)
    bound = cauchy_root_bound(q)
    out: list[tuple[Fraction, Fraction]] = []

    def recurse(a: Fraction, b: Fraction, count: int) -> None:
        if count == 0:
            return
        if count == 1:
            out.append((a, b))
            return
        mid = (a + b) / 2
        if q.eval(mid) == 0:
            out.append((mid, mid))
            left = count_real_roots_between(chain, a, mid) - 1
        else:
            left = count_real_roots_between(chain, a, mid)
        recurse(a, mid, left)
        recurse(mid, b, count - left - (1 if q.eval(mid) == 0 else 0))

    total = count_real_roots_between(chain, -bound, bound)
    recurse(-bound, bound, total)
    return sorted(out)


def refine_isolating_interval(
    p: RatPoly, interval: tuple[Fraction, Fraction], width: Fraction
) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of squarefree p below ``width`` by bisection."""
    a, b = interval
    if a == b:
        return interval
    chain = sturm_chain(p)
    while b - a > width:
        mid = (a + b) / 2
        if p.eval(mid) == 0:
            return (mid, mid)
        if count_real_roots_between(chain, a, mid) == 1:
            b = mid
        else:
            a = mid
    return (a, b)

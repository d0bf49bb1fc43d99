"""Exact factorization of univariate polynomials over Q.

The pipeline is the classical one: clear denominators to a primitive
integer polynomial, split off the content and the squarefree parts
(Yun), factor each squarefree part modulo a good prime with
Cantor-Zassenhaus, Hensel-lift the modular factorization past the
Landau-Mignotte coefficient bound, and recombine factor subsets by
trial division.  Degrees in this package stay small (<= ~12), so no
effort is spent on asymptotics.

Integer and GF(p) polynomials are plain lists of ints in ascending
degree order (trailing zeros stripped), mirroring the RatPoly layout.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .poly import PolynomialDomainError, RatPoly, poly_gcd

# -- dense Z[x] helpers -----------------------------------------------------


def _strip(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _zz_add(f, g):
    n = max(len(f), len(g))
    return _strip([(f[k] if k < len(f) else 0) + (g[k] if k < len(g) else 0) for k in range(n)])


def _zz_sub(f, g):
    n = max(len(f), len(g))
    return _strip([(f[k] if k < len(f) else 0) - (g[k] if k < len(g) else 0) for k in range(n)])


def _zz_mul(f: list[int], g: list[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _strip(out)


def _zz_primitive(f: list[int]) -> tuple[int, list[int]]:
    """Content (carrying the sign of the leading coefficient) and primitive part."""
    c = 0
    for a in f:
        c = math.gcd(c, a)
    if c == 0:
        return 0, []
    if f[-1] < 0:
        c = -c
    return c, [a // c for a in f]


def _zz_trunc_centered(f: list[int], m: int) -> list[int]:
    out = []
    for a in f:
        r = a % m
        if 2 * r > m:
            r -= m
        out.append(r)
    return _strip(out)


def _zz_l1(f: list[int]) -> int:
    return sum(abs(a) for a in f)


# -- dense GF(p) helpers ----------------------------------------------------


def _gf_trunc(f: list[int], p: int) -> list[int]:
    return _strip([a % p for a in f])


def _gf_add(f, g, p):
    n = max(len(f), len(g))
    return _strip([((f[k] if k < len(f) else 0) + (g[k] if k < len(g) else 0)) % p for k in range(n)])


def _gf_sub(f, g, p):
    n = max(len(f), len(g))
    return _strip([((f[k] if k < len(f) else 0) - (g[k] if k < len(g) else 0)) % p for k in range(n)])


def _gf_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _strip(out)


def _gf_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("GF(p) division by zero polynomial")
    f = [a % p for a in f]
    _strip(f)
    d = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - d, 0)
    while f and len(f) - 1 >= d:
        if f[-1] == 0:
            f.pop()
            continue
        k = len(f) - 1 - d
        c = (f[-1] * inv) % p
        q[k] = c
        for i in range(d + 1):
            f[k + i] = (f[k + i] - c * g[i]) % p
        f.pop()
    return _strip(q), _strip(f)


def _gf_rem(f, g, p):
    return _gf_divmod(f, g, p)[1]


def _gf_monic(f, p):
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [(a * inv) % p for a in f]


def _gf_gcd(f, g, p):
    while g:
        f, g = g, _gf_rem(f, g, p)
    return _gf_monic(f, p)


def _gf_gcdex(f, g, p):
    """Extended gcd: (s, t, h) with s*f + t*g = h and h monic."""
    r0, r1 = _gf_trunc(f, p), _gf_trunc(g, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _gf_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _gf_sub(s0, _gf_mul(q, s1, p), p)
        t0, t1 = t1, _gf_sub(t0, _gf_mul(q, t1, p), p)
    if not r0:
        return s0, t0, r0
    inv = pow(r0[-1], -1, p)
    fix = lambda h: _strip([(a * inv) % p for a in h])
    return fix(s0), fix(t0), fix(r0)


def _gf_pow_mod(f, n, g, p):
    out = [1]
    f = _gf_rem(f, g, p)
    while n:
        if n & 1:
            out = _gf_rem(_gf_mul(out, f, p), g, p)
        f = _gf_rem(_gf_mul(f, f, p), g, p)
        n >>= 1
    return out


def _gf_deriv(f, p):
    return _strip([(k * a) % p for k, a in enumerate(f)][1:])


def _gf_is_squarefree(f, p):
    return len(_gf_gcd(f, _gf_deriv(f, p), p)) == 1


def _gf_factor_squarefree(f: list[int], p: int) -> list[list[int]]:
    """Monic irreducible factors of a monic squarefree f over GF(p).

    Distinct-degree splitting by Frobenius powers, then Cantor-Zassenhaus
    equal-degree splitting.  The splitting randomness is seeded from the
    input so repeated runs factor identically.
    """
    xp = [0, 1]
    h = xp
    d = 0
    rest = list(f)
    ddf: list[tuple[list[int], int]] = []
    while rest and 2 * (d + 1) <= len(rest) - 1:
        d += 1
        h = _gf_pow_mod(h, p, rest, p)
        g = _gf_gcd(rest, _gf_sub(h, xp, p), p)
        if len(g) > 1:
            ddf.append((g, d))
            rest = _gf_divmod(rest, g, p)[0]
            h = _gf_rem(h, rest, p)
    if len(rest) > 1:
        ddf.append((rest, len(rest) - 1))

    seed = p
    for a in f:
        seed = seed * 1000003 + (a % p)
    rng = random.Random(seed)
    factors: list[list[int]] = []
    for g, d in ddf:
        factors.extend(_gf_equal_degree(g, d, p, rng))
    factors.sort(key=lambda h: (len(h), tuple(reversed(h))))
    return factors


def _gf_equal_degree(f: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        r = [rng.randrange(p) for _ in range(n)] + [1]
        if p == 2:
            h = r
            acc = r
            for _ in range(d - 1):
                acc = _gf_pow_mod(acc, 2, f, p)
                h = _gf_add(h, acc, p)
            g = _gf_gcd(f, h, p)
        else:
            h = _gf_pow_mod(r, (p**d - 1) // 2, f, p)
            g = _gf_gcd(f, _gf_sub(h, [1], p), p)
        if 1 < len(g) < len(f):
            q = _gf_divmod(f, g, p)[0]
            return _gf_equal_degree(g, d, p, rng) + _gf_equal_degree(q, d, p, rng)


# -- Hensel lifting ---------------------------------------------------------


def _zz_divmod_mod(f, g, m):
    """Division with remainder of integer polynomials mod m; lc(g) must be a unit mod m."""
    f = [a % m for a in f]
    _strip(f)
    d = len(g) - 1
    inv = pow(g[-1] % m, -1, m)
    q = [0] * max(len(f) - d, 0)
    while f and len(f) - 1 >= d:
        if f[-1] % m == 0:
            f.pop()
            continue
        k = len(f) - 1 - d
        c = (f[-1] * inv) % m
        q[k] = c
        for i in range(d + 1):
            f[k + i] = (f[k + i] - c * g[i]) % m
        f.pop()
    return _zz_trunc_centered(q, m), _zz_trunc_centered(f, m)


def _hensel_step(m, f, g, h, s, t):
    """One quadratic Hensel step.

    Input satisfies f = g*h and s*g + t*h = 1 (mod m) with h monic;
    output (G, H, S, T) satisfies the same congruences mod m**2.
    """
    M = m * m
    e = _zz_trunc_centered(_zz_sub(f, _zz_mul(g, h)), M)
    q, r = _zz_divmod_mod(_zz_mul(s, e), h, M)
    G = _zz_trunc_centered(_zz_add(g, _zz_add(_zz_mul(t, e), _zz_mul(q, g))), M)
    H = _zz_trunc_centered(_zz_add(h, r), M)
    b = _zz_trunc_centered(_zz_sub(_zz_add(_zz_mul(s, G), _zz_mul(t, H)), [1]), M)
    c, d = _zz_divmod_mod(_zz_mul(s, b), H, M)
    S = _zz_trunc_centered(_zz_sub(s, d), M)
    T = _zz_trunc_centered(_zz_sub(t, _zz_add(_zz_mul(t, b), _zz_mul(c, G))), M)
    return G, H, S, T


def _hensel_lift(p: int, f: list[int], modular: list[list[int]], l: int) -> list[list[int]]:
    """Lift the monic pairwise-coprime factors of f mod p to factors mod p**l."""
    r = len(modular)
    lc = f[-1]
    pl = p**l
    if r == 1:
        inv = pow(lc % pl, -1, pl)
        return [_zz_trunc_centered([a * inv for a in f], pl)]
    k = r // 2
    steps = max(math.ceil(math.log2(l)), 1)

    g = [lc % p]
    for fi in modular[:k]:
        g = _gf_mul(g, fi, p)
    h = modular[k]
    for fi in modular[k + 1 :]:
        h = _gf_mul(h, fi, p)
    s, t, one = _gf_gcdex(g, h, p)
    if one != [1]:
        raise PolynomialDomainError("modular cofactors are not coprime")
    g = _zz_trunc_centered(g, p)
    h = _zz_trunc_centered(h, p)
    s = _zz_trunc_centered(s, p)
    t = _zz_trunc_centered(t, p)

    m = p
    for _ in range(steps):
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
    return _hensel_lift(p, g, modular[:k], l) + _hensel_lift(p, h, modular[k:], l)


# -- Zassenhaus over Z ------------------------------------------------------

_PRIME_CANDIDATES = (
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
    149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211,
)


def _mignotte_bound(f: list[int]) -> int:
    # Landau-Mignotte: any factor of f has sup-norm <= 2^n * ||f||_2 * |lc(f)|.
    n = len(f) - 1
    norm2 = math.isqrt(sum(a * a for a in f)) + 1
    return 2**n * norm2 * abs(f[-1])


def _zassenhaus(f: list[int]) -> list[list[int]]:
    """Irreducible factors of a primitive squarefree f in Z[x] with lc(f) > 0."""
    n = len(f) - 1
    if n <= 1:
        return [f]

    candidates = []
    for p in _PRIME_CANDIDATES:
        if f[-1] % p == 0:
            continue
        fp = _gf_monic(_gf_trunc(f, p), p)
        if len(fp) - 1 != n or not _gf_is_squarefree(fp, p):
            continue
        candidates.append((p, fp, _gf_factor_squarefree(fp, p)))
        if len(candidates) >= 5:
            break
    if not candidates:
        raise PolynomialDomainError("no usable prime among the candidates")
    p, _, modular = min(candidates, key=lambda c: (len(c[2]), c[0]))
    if len(modular) == 1:
        return [f]

    B = _mignotte_bound(f)
    l = 1
    while p**l <= 2 * B:
        l += 1
    pl = p**l
    lifted = [_zz_trunc_centered(g, pl) for g in _hensel_lift(p, f, modular, l)]

    remaining = list(range(len(lifted)))
    factors: list[list[int]] = []
    s = 1
    while 2 * s <= len(remaining):
        for subset in itertools.combinations(remaining, s):
            b = f[-1]
            G = [b]
            for i in subset:
                G = _zz_trunc_centered(_zz_mul(G, lifted[i]), pl)
            rest = [i for i in remaining if i not in subset]
            H = [b]
            for i in rest:
                H = _zz_trunc_centered(_zz_mul(H, lifted[i]), pl)
            if _zz_l1(G) * _zz_l1(H) <= B:
                factors.append(_zz_primitive(G)[1])
                f = _zz_primitive(H)[1]
                remaining = rest
                break
        else:
            s += 1
    if len(f) > 1:
        factors.append(f)
    return factors


# -- Yun squarefree decomposition -------------------------------------------


def _yun(f: RatPoly) -> list[tuple[RatPoly, int]]:
    """Squarefree decomposition of monic f: pairwise-coprime (a_i, i) with f = prod a_i^i."""
    out: list[tuple[RatPoly, int]] = []
    fp = f.derivative()
    g = poly_gcd(f, fp)
    if g.degree <= 0:
        return [(f, 1)]
    b = f.exact_div(g)
    d = fp.exact_div(g) - b.derivative()
    i = 1
    while b.degree > 0:
        a = b.monic() if d.is_zero() else poly_gcd(b, d)
        if a.degree > 0:
            out.append((a.monic(), i))
            b = b.exact_div(a)
            d = d.exact_div(a) if not d.is_zero() else d
        d = d - b.derivative()
        i += 1
    return out


# -- public entry point ------------------------------------------------------


def factor_over_Q(p: RatPoly) -> tuple[Fraction, list[tuple[RatPoly, int]]]:
    """Factor p over Q as content * prod(factor ** multiplicity).

    Factors are monic and irreducible over Q, ordered by degree and then
    by ascending coefficient tuple.  The content times the product of
    the returned powers reproduces p exactly.
    """
    if p.is_zero():
        raise PolynomialDomainError("cannot factor the zero polynomial")
    if p.degree == 0:
        return p.coeffs[0], []

    content = p.lead
    work = p.monic()

    factors: dict[RatPoly, int] = {}
    cs = list(work.coeffs)
    k = 0
    while cs and cs[0] == 0:
        cs.pop(0)
        k += 1
    if k:
        factors[RatPoly([0, 1])] = k
        work = RatPoly(cs)

    if work.degree > 0:
        for sqf, mult in _yun(work):
            den_lcm = 1
            for c in sqf.coeffs:
                den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
            zz = _zz_primitive([int(c * den_lcm) for c in sqf.coeffs])[1]
            for g in _zassenhaus(zz):
                fac = RatPoly([Fraction(a, g[-1]) for a in g])
                factors[fac] = factors.get(fac, 0) + mult

    ordered = sorted(factors.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return content, ordered


def is_irreducible_over_Q(p: RatPoly) -> bool:
    """True iff p has a single irreducible factor of multiplicity 1."""
    if p.is_zero() or p.degree == 0:
        return False
    _, factors = factor_over_Q(p)
    return len(factors) == 1 and factors[0][1] == 1

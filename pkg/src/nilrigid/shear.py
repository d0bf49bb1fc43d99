"""Shear perturbations of two-step automorphisms and their conjugacy series.

For a two-step algebra the quotient by the center is a torus, so the
conjugacy analysis happens in Fourier space: trigonometric polynomials
with integer frequency vectors, composed with the induced unimodular
base matrix by exact frequency remapping.  The geometric series for the
conjugacy, its telescoping residual, and the Fourier pairing that
witnesses failure of Lipschitz regularity are all finite computations
here.

Coefficients are either Python complex (numeric mode) or ExactComplex
with Fraction parts: with a rational central eigenvalue the telescoping
identity holds exactly in coefficient space, which the tests exercise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .analysis import Automorphism, rigidity_verdict
from .linalg import RatMatrix, Subspace, quotient_basis, restriction_matrix
from .roots import polished_roots, separate_modulus_from_one
from .linalg import charpoly


class ShearUnsupportedError(ValueError):
    """The shear construction needs a two-step algebra with torus quotient."""


class ShearPreconditionError(ValueError):
    """Spectrum preconditions (simple, hyperbolic) for the shear search fail."""


class ExactComplex:
    """Complex numbers with Fraction parts, for exact coefficient arithmetic."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *_):
        raise AttributeError("ExactComplex is immutable")

    def __add__(self, other):
        other = _as_exact(other)
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_exact(other)
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_exact(other) - self

    def __mul__(self, other):
        other = _as_exact(other)
        return ExactComplex(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, ExactComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"


def _as_exact(x) -> ExactComplex:
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactComplex(x, 0)
    raise TypeError(f"cannot mix {type(x).__name__} into exact complex arithmetic")


def _conj(c):
    return c.conjugate()


def _is_zero_coeff(c) -> bool:
    if isinstance(c, ExactComplex):
        return c.is_zero()
    return c == 0


class TrigPoly:
    """Finite Fourier sum on T^d: frequency vector -> coefficient."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: Mapping[tuple[int, ...], object]):
        table = {}
        for m, c in coeffs.items():
            key = tuple(int(x) for x in m)
            if len(key) != dim:
                raise ValueError("frequency length != torus dimension")
            if not _is_zero_coeff(c):
                table[key] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", table)

    def __setattr__(self, *_):
        raise AttributeError("TrigPoly is immutable")

    @classmethod
    def zero(cls, dim: int) -> "TrigPoly":
        return cls(dim, {})

    @classmethod
    def character(cls, dim: int, m: Sequence[int], coeff=1.0, real: bool = True) -> "TrigPoly":
        """c e_m (+ conj(c) e_{-m} when real=True, giving a real-valued function)."""
        m = tuple(int(x) for x in m)
        if real:
            if all(x == 0 for x in m):
                return cls(dim, {m: coeff + _conj(coeff) if isinstance(coeff, ExactComplex) else 2 * coeff.real if isinstance(coeff, complex) else 2 * coeff})
            return cls(dim, {m: coeff, tuple(-x for x in m): _conj(coeff) if hasattr(coeff, "conjugate") else coeff})
        return cls(dim, {m: coeff})

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TrigPoly):
            if self.dim != other.dim or set(self.coeffs) != set(other.coeffs):
                return False
            return all(self.coeffs[m] == other.coeffs[m] for m in self.coeffs)
        return NotImplemented

    def __repr__(self):
        return f"TrigPoly(dim={self.dim}, {len(self.coeffs)} modes)"

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        if self.dim != other.dim:
            raise ValueError("torus dimension mismatch")
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return TrigPoly(self.dim, out)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + other.scale(-1)

    def scale(self, s) -> "TrigPoly":
        return TrigPoly(self.dim, {m: s * c for m, c in self.coeffs.items()})

    def compose_linear(self, b: RatMatrix) -> "TrigPoly":
        """The pullback f(B x): frequencies remap by the transpose of B (exact)."""
        if b.rows != self.dim or b.cols != self.dim:
            raise ValueError("matrix does not act on this torus")
        if not b.is_integral():
            raise ValueError("composition requires an integer matrix")
        bt = b.transpose()
        out = {}
        for m, c in self.coeffs.items():
            key = tuple(int(x) for x in bt.apply(m))
            out[key] = out[key] + c if key in out else c
        return TrigPoly(self.dim, out)

    def derivative_along(self, u: Sequence[float]) -> "TrigPoly":
        """Directional derivative: multiplies c_m by 2 pi i <m, u> (numeric)."""
        out = {}
        for m, c in self.coeffs.items():
            factor = 2j * math.pi * sum(float(mi) * float(ui) for mi, ui in zip(m, u))
            out[m] = factor * complex(c)
        return TrigPoly(self.dim, out)

    def l1_norm(self) -> float:
        return sum(abs(c) for c in self.coeffs.values())

    def inner(self, other: "TrigPoly") -> complex:
        """L2 pairing sum_m f_m conj(g_m) (characters are orthonormal)."""
        acc = 0j
        for m, c in self.coeffs.items():
            if m in other.coeffs:
                acc += complex(c) * complex(other.coeffs[m]).conjugate()
        return acc

    def is_real(self) -> bool:
        for m, c in self.coeffs.items():
            neg = tuple(-x for x in m)
            other = self.coeffs.get(neg)
            if other is None:
                return False
            if isinstance(c, ExactComplex):
                if not (_as_exact(other) == c.conjugate()):
                    return False
            else:
                if complex(other) != complex(c).conjugate():
                    return False
        return True

    def evaluate(self, x: Sequence) -> float:
        acc = 0j
        for m, c in self.coeffs.items():
            # the inner product is computed exactly for rational points and
            # reduced mod 1 before the float conversion, so chaotic base
            # orbits do not lose phase accuracy
            dot = sum((mi * xi for mi, xi in zip(m, x)), start=Fraction(0) if all(isinstance(xi, (Fraction, int)) for xi in x) else 0.0)
            if isinstance(dot, Fraction):
                dot = float(dot % 1)
            phase = 2 * math.pi * dot
            acc += complex(c) * cmath.exp(1j * phase)
        return acc.real if self.is_real() else acc


# -- shear data -------------------------------------------------------------------


@dataclass(frozen=True)
class ShearData:
    """Data for the central shear family: induced base map plus the slow center line."""

    base_matrix: RatMatrix
    lambda_w: object  # signed central unstable eigenvalue (float, or Fraction in synthetic data)
    lambda_u: object  # signed non-central unstable eigenvalue with larger modulus
    u: tuple[float, ...]
    inverted: bool

    def __post_init__(self):
        lw, lu = abs(float(self.lambda_w)), abs(float(self.lambda_u))
        if not (lu > lw > 1):
            raise ShearPreconditionError(f"need |lambda_u| > |lambda_w| > 1, got {lu} vs {lw}")
        b = self.base_matrix
        if not b.is_integral() or abs(b.det()) != 1:
            raise ShearPreconditionError("base matrix must be integral with determinant +-1")
        if len(self.u) != b.cols:
            raise ShearPreconditionError("eigenvector length mismatch")
        bu = [sum(float(b[i, j]) * self.u[j] for j in range(b.cols)) for i in range(b.rows)]
        resid = math.sqrt(sum((x - float(self.lambda_u) * y) ** 2 for x, y in zip(bu, self.u)))
        if resid > 1e-9 * max(1.0, abs(float(self.lambda_u))):
            raise ShearPreconditionError(f"u is not a lambda_u eigenvector of B (residual {resid:.3g})")


@dataclass(frozen=True)
class SkewPoint:
    """A point of the one-dimensional central skew product over the base torus.

    Base coordinates may be floats or Fractions; rational coordinates
    iterate exactly under the (chaotic) base map, which matters when an
    orbit is compared against the conjugacy prediction.
    """

    base: tuple
    fiber: float

    def __post_init__(self):
        if any(not (0 <= x < 1) for x in self.base):
            raise ValueError("base coordinates must lie in [0, 1)")


def find_shear_data(auto: Automorphism, invert_only: bool = False, tol: float = 1e-12) -> ShearData | None:
    """Search L (and L^-1) for a slow central unstable line sheared by a faster one.

    Returns None when neither the map nor its inverse has a central
    unstable eigenvalue dominated by a non-central unstable one; by the
    rigidity criterion this is exactly the sorted situation on two-step
    algebras, so rigid inputs always yield None.
    """
    alg = auto.algebra
    if alg.step == 1:
        raise ShearUnsupportedError("abelian algebra: no central fibration to shear")
    if alg.step != 2:
        raise ShearUnsupportedError(f"two-step algebra required (step is {alg.step})")
    verdict = rigidity_verdict(auto, tol)
    if verdict.simple_spectrum is False or verdict.hyperbolic is False:
        raise ShearPreconditionError("shear search requires simple hyperbolic spectrum")

    center = alg.center()
    reps, proj = quotient_basis(Subspace.full(alg.dim), center)
    candidates = [(auto.matrix.inverse(), True)] if invert_only else [(auto.matrix, False), (auto.matrix.inverse(), True)]
    for mat, inverted in candidates:
        data = _shear_candidate(alg, mat, center, reps, proj, inverted, tol)
        if data is not None:
            return data
    return None


def _shear_candidate(alg, mat, center, reps, proj, inverted, tol):
    central_poly = charpoly(restriction_matrix(mat, center))
    q = len(reps)
    cols = [proj.apply(mat.apply(r)) for r in reps]
    base = RatMatrix(q, q, [cols[j][i] for i in range(q) for j in range(q)])
    if not base.is_integral():
        raise ShearUnsupportedError("induced base matrix is not integral in the lattice basis")
    base_poly = charpoly(base)

    central_roots = polished_roots(central_poly, tol)
    central_flags = separate_modulus_from_one(central_roots)
    base_roots = polished_roots(base_poly, tol)
    base_flags = separate_modulus_from_one(base_roots)

    central_unstable = [r for r, f in zip(central_roots, central_flags) if f and r.is_real]
    base_unstable = [r for r, f in zip(base_roots, base_flags) if f and r.is_real]
    if not central_unstable or not base_unstable:
        return None
    central_unstable.sort(key=lambda r: abs(complex(r.value)))
    fastest = max(base_unstable, key=lambda r: abs(complex(r.value)))
    for w in central_unstable:
        if abs(complex(fastest.value)) > abs(complex(w.value)):
            lam_u = float(fastest.value.real) if hasattr(fastest.value, "real") else float(fastest.value)
            lam_w = float(w.value.real) if hasattr(w.value, "real") else float(w.value)
            u_vec = _base_eigenvector(base, fastest)
            return ShearData(base, lam_w, lam_u, u_vec, inverted)
    return None


def _base_eigenvector(base: RatMatrix, root) -> tuple[float, ...]:
    from .geometry import real_eigen_system

    target = float(root.value)
    pairs = real_eigen_system(base, 220)
    _, vec = min(pairs, key=lambda lv: abs(float(lv[0]) - target))
    return tuple(float(v) for v in vec)


# -- conjugacy series and residual ---------------------------------------------------


def conjugacy_series(phi: TrigPoly, data: ShearData, trunc: int) -> TrigPoly:
    """Truncated geometric solution of the conjugacy equation.

    psi_N = lambda_w^-1 sum_{k=0}^{N} lambda_w^-k (phi o B^k); the k-th
    term carries the k-fold composition, consistent with the recurrence
    phi + psi o B = lambda_w psi.  Exact when lambda_w is a Fraction and
    phi has exact coefficients.
    """
    if trunc < 0:
        raise ValueError("truncation order must be >= 0")
    lw = data.lambda_w
    inv = (Fraction(1) / lw) if isinstance(lw, Fraction) else 1.0 / float(lw)
    out = TrigPoly.zero(phi.dim)
    composed = phi
    weight = inv
    for k in range(trunc + 1):
        out = out + composed.scale(weight)
        if k < trunc:
            composed = composed.compose_linear(data.base_matrix)
            weight = weight * inv
    return out


def conjugacy_residual_poly(phi: TrigPoly, psi: TrigPoly, data: ShearData) -> TrigPoly:
    """phi + psi o B - lambda_w psi as a TrigPoly."""
    return phi + psi.compose_linear(data.base_matrix) - psi.scale(data.lambda_w)


def cohomology_residual(phi: TrigPoly, psi: TrigPoly, data: ShearData) -> float:
    """l1 coefficient norm of the conjugacy-equation residual (bounds the sup norm)."""
    if phi.dim != psi.dim:
        raise ValueError("torus dimension mismatch")
    return conjugacy_residual_poly(phi, psi, data).l1_norm()


# -- Lipschitz pairing test -----------------------------------------------------------


@dataclass(frozen=True)
class PairingTestResult:
    mode: tuple[int, ...]
    left: complex
    right: complex
    witness: bool


def lipschitz_pairing_test(phi: TrigPoly, data: ShearData, pairing_power: int = 5, tol: float = 1e-9) -> PairingTestResult:
    """Pair both sides of the Lipschitz criterion against the K-th pushed mode.

    For a single-character phi at frequency m with a free B-orbit, the
    forward series contributes the single surviving term
    (lambda_u / lambda_w)^K |2 pi <m, u>|^2 |c_m|^2 (doubled for a real
    two-sided character) while the backward series contributes nothing;
    an imbalance beyond tol certifies that the conjugacy fails to be
    Lipschitz along the fast direction.
    """
    K = pairing_power
    if K < 1:
        raise ValueError("pairing power must be >= 1")
    mode = _single_mode(phi)
    if all(x == 0 for x in mode):
        return PairingTestResult(mode, 0j, 0j, False)

    bt = data.base_matrix.transpose()
    bt_inv = bt.inverse()
    freqs = {}
    f = tuple(mode)
    freqs[0] = f
    fwd = f
    back = f
    for k in range(1, K + 1):
        fwd = tuple(int(x) for x in bt.apply(fwd))
        freqs[k] = fwd
        back = tuple(int(x) for x in bt_inv.apply(back))
        freqs[-k] = back
    seen = set()
    for k, m in freqs.items():
        for signed in (m, tuple(-x for x in m)):
            if signed in seen:
                raise ValueError("periodic frequency orbit, choose another mode")
            seen.add(signed)

    pairing_scale = 2 * math.pi * abs(sum(float(mi) * ui for mi, ui in zip(mode, data.u)))
    if pairing_scale <= 1e-12:
        raise ValueError("mode invisible to the u-derivative (<m, u> = 0)")

    phi_u = phi.derivative_along(data.u)
    lu, lw = float(data.lambda_u), float(data.lambda_w)
    test = phi_u
    for _ in range(K):
        test = test.compose_linear(data.base_matrix)

    left = 0j
    term = phi_u
    for k in range(K + 1):
        left += (lu / lw) ** k * term.inner(test)
        if k < K:
            term = term.compose_linear(data.base_matrix)

    right = 0j
    b_inv = data.base_matrix.inverse()
    term = phi_u
    for k in range(1, K + 1):
        term = term.compose_linear(b_inv)
        right += (lu / lw) ** (-k) * term.inner(test)
    right *= -1.0 / lu

    witness = abs(left - right) > tol
    return PairingTestResult(mode, left, right, witness)


def _single_mode(phi: TrigPoly) -> tuple[int, ...]:
    support = phi.support()
    if not support:
        return tuple([0] * phi.dim)
    nonzero = [m for m in support if any(x != 0 for x in m)]
    if not nonzero:
        return tuple([0] * phi.dim)
    reduced = {max(m, tuple(-x for x in m)) for m in nonzero}
    if len(reduced) != 1:
        raise ValueError("pairing test expects a single-character input")
    return next(iter(reduced))


# -- skew product orbit ----------------------------------------------------------------


def skew_orbit(start: SkewPoint, phi: TrigPoly, data: ShearData, steps: int) -> list[SkewPoint]:
    """Iterate (x, t) -> (B x mod 1, lambda_w t + phi(x)); diagnostic only."""
    b = data.base_matrix
    lw = float(data.lambda_w)
    exact_base = all(isinstance(x, (Fraction, int)) for x in start.base)
    out = [start]
    x, t = list(start.base), start.fiber
    for _ in range(steps):
        val = phi.evaluate(x)
        if isinstance(val, complex):
            raise ValueError("skew orbit needs a real-valued shear function")
        if exact_base:
            x = [sum(b[i, j] * x[j] for j in range(b.cols)) % 1 for i in range(b.rows)]
        else:
            x = [float(sum(float(b[i, j]) * x[j] for j in range(b.cols))) % 1.0 for i in range(b.rows)]
        t = lw * t + val
        out.append(SkewPoint(tuple(x), t))
    return out

"""Group arithmetic in exponential coordinates and coarse-geometry checks.

The group product is the Dynkin form of the Baker-Campbell-Hausdorff
series truncated at the nilpotency step (all deeper terms vanish), so it
is the exact group law: exact over Q when both operands have rational
coordinates, numeric otherwise.  On top of it sit the Guivarc'h length,
escape-speed experiments, and the weak/strong displacement split along
an unstable frame.

Numeric work runs on mpmath so that iterating an automorphism dozens of
times keeps enough relative precision to separate slow directions from
fast ones; callers choose the precision, and helpers pick an adequate
one from the certified eigenvalue moduli when asked.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp

from .algebra import AlgebraError, LieAlgebra
from .analysis import Automorphism, GradingReport
from .linalg import RatMatrix
from .poly import RatPoly
from .roots import PolishedRoot, polished_roots, separate_modulus_from_one

MAX_BCH_STEP = 6


class UnsupportedStepError(NotImplementedError):
    """The algebra's nilpotency step exceeds the supported truncation depth."""


class CosetError(ValueError):
    """Weak/strong distance preconditions (same strong coset) violated."""


# -- BCH product ---------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _dynkin_word_coefficients(step: int) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Net Dynkin coefficient per letter word (0 = x, 1 = y) up to length `step`.

    Sums the classical expansion
        log(e^x e^y) = sum_n (-1)^(n-1)/n sum_{(r_i, s_i)}
            [x^(r_1) y^(s_1) ... x^(r_n) y^(s_n)] / (L * prod r_i! s_i!)
    over all block sequences, grouped by the expanded word, where L is
    the word length and the bracket is right-nested.
    """
    coeffs: dict[tuple[int, ...], Fraction] = {}

    def visit(seq: list[tuple[int, int]], total: int) -> None:
        if seq:
            n = len(seq)
            word = tuple(letter for (r, s) in seq for letter in (0,) * r + (1,) * s)
            denom = n * total
            for r, s in seq:
                denom *= math.factorial(r) * math.factorial(s)
            c = Fraction((-1) ** (n - 1), denom)
            coeffs[word] = coeffs.get(word, Fraction(0)) + c
        for w in range(1, step - total + 1):
            for r in range(w + 1):
                visit(seq + [(r, w - r)], total + w)

    visit([], 0)
    kept = []
    for word, c in coeffs.items():
        if c == 0:
            continue
        if len(word) >= 2 and word[-1] == word[-2]:
            continue  # innermost bracket [a, a] vanishes
        kept.append((word, c))
    kept.sort(key=lambda wc: (len(wc[0]), wc[0]))
    return tuple(kept)


@dataclass(frozen=True)
class GroupElement:
    """A group element through its exponential coordinates log g."""

    algebra: LieAlgebra
    log_coords: tuple

    def __post_init__(self):
        if len(self.log_coords) != self.algebra.dim:
            raise AlgebraError("coordinate length != algebra dimension")

    @property
    def exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for c in self.log_coords)

    def is_identity(self) -> bool:
        return all(c == 0 for c in self.log_coords)

    def power(self, m: int) -> "GroupElement":
        """g^m = exp(m log g); exact for one-parameter subgroup powers."""
        return GroupElement(self.algebra, tuple(m * c for c in self.log_coords))


def group_element(alg: LieAlgebra, coords: Sequence) -> GroupElement:
    return GroupElement(alg, tuple(coords))


def group_identity(alg: LieAlgebra) -> GroupElement:
    return GroupElement(alg, tuple(Fraction(0) for _ in range(alg.dim)))


def inverse(x: GroupElement) -> GroupElement:
    return GroupElement(x.algebra, tuple(-c for c in x.log_coords))


def bch_product(x: GroupElement, y: GroupElement) -> GroupElement:
    """log(exp x . exp y) via the Dynkin expansion truncated at the step."""
    if x.algebra != y.algebra:
        raise AlgebraError("elements live in different algebras")
    alg = x.algebra
    step = alg.step
    if step > MAX_BCH_STEP:
        raise UnsupportedStepError(f"nilpotency step {step} exceeds supported depth {MAX_BCH_STEP}")
    exact = x.exact and y.exact
    zero = Fraction(0) if exact else mpmath.mpf(0) * 0
    out = [zero] * alg.dim
    vecs = (x.log_coords, y.log_coords)
    for word, coeff in _dynkin_word_coefficients(max(step, 1)):
        acc = vecs[word[-1]]
        dead = False
        for letter in reversed(word[:-1]):
            acc = alg.bracket_coords(vecs[letter], acc)
            if all(c == 0 for c in acc):
                dead = True
                break
        if dead:
            continue
        for k, v in enumerate(acc):
            if v != 0:
                out[k] = out[k] + coeff * v
    return GroupElement(alg, tuple(out))


def conjugate_by(x: GroupElement, g: GroupElement) -> GroupElement:
    return bch_product(bch_product(g, x), inverse(g))


# -- numeric helpers ------------------------------------------------------------


def _norm_sq(vec: Sequence):
    s = None
    for v in vec:
        t = v * v
        s = t if s is None else s + t
    return s if s is not None else Fraction(0)


def _log_of_positive(x) -> float:
    """log of a positive Fraction/float/mpf without overflowing floats."""
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    if isinstance(x, (int,)):
        return math.log(x)
    return float(mpmath.log(x))


def norm(vec: Sequence) -> float:
    s = _norm_sq(vec)
    if s == 0:
        return 0.0
    return math.exp(0.5 * _log_of_positive(s))


def apply_matrix(m: RatMatrix, vec: Sequence) -> tuple:
    """m @ vec with generic (Fraction / float / mpf) vector entries."""
    if len(vec) != m.cols:
        raise AlgebraError("vector length mismatch")
    out = []
    for i in range(m.rows):
        row = m.row(i)
        acc = None
        for a, v in zip(row, vec):
            if a == 0:
                continue
            t = a * v
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else vec[0] * 0)
    return tuple(out)


def _solve_dense(rows: list[list], rhs: list) -> list:
    """Gaussian elimination with partial pivoting on generic scalars."""
    n = len(rows)
    m = len(rows[0]) if n else 0
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv, best = None, None
        for i in range(r, n):
            mag = abs(a[i][c])
            if mag != 0 and (best is None or mag > best):
                piv, best = i, mag
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [inv * e for e in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    x = [rhs[0] * 0] * m
    for row_idx, c in enumerate(piv_cols):
        x[c] = a[row_idx][-1]
    return x


def null_vector(rows: list[list]) -> list:
    """A unit-norm kernel vector of a numerically rank-deficient square matrix.

    Partial-pivoted elimination; a column whose best available pivot is
    below a precision-scaled threshold becomes the free variable, which
    is exactly what (A - lambda I) exhibits when lambda carries ~prec
    correct bits.  Deterministic sign (largest component positive).
    """
    n = len(rows)
    a = [list(r) for r in rows]
    scale = max((abs(e) for row in a for e in row), default=mpmath.mpf(1))
    if scale == 0:
        scale = mpmath.mpf(1)
    threshold = scale * mpmath.mpf(2) ** (-(mp.prec // 2))
    piv_cols: list[int] = []
    r = 0
    for c in range(n):
        piv, best = None, None
        for i in range(r, n):
            mag = abs(a[i][c])
            if best is None or mag > best:
                piv, best = i, mag
        if piv is None or best <= threshold:
            continue  # free column
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [inv * e for e in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    free_cols = [c for c in range(n) if c not in piv_cols]
    if not free_cols:
        # numerically full rank; release the last pivot column
        free_cols = [piv_cols[-1]]
        piv_cols = piv_cols[:-1]
    fc = free_cols[0]
    vec = [mpmath.mpf(0)] * n
    vec[fc] = mpmath.mpf(1)
    for row_idx, c in enumerate(piv_cols):
        vec[c] = -a[row_idx][fc]
    nrm = mpmath.sqrt(sum(v * v for v in vec))
    vec = [v / nrm for v in vec]
    lead = max(range(n), key=lambda i: abs(vec[i]))
    if vec[lead] < 0:
        vec = [-v for v in vec]
    return vec


def _matrix_to_mpf(m: RatMatrix) -> list[list]:
    return [[mpmath.mpf(e.numerator) / e.denominator for e in m.row(i)] for i in range(m.rows)]


def real_eigen_system(matrix: RatMatrix, prec: int = 220) -> list[tuple]:
    """(eigenvalue, unit eigenvector) pairs for a matrix with real simple spectrum.

    Eigenvalues come from the certified root machinery refined to roughly
    2^-prec relative radius; eigenvectors from an mpf nullspace at the
    same precision.  Sorted by modulus, deterministic orientation.
    """
    from .linalg import charpoly

    p = charpoly(matrix)
    rel = max(2.0 ** (-prec), 1e-300)
    roots = polished_roots(p, rel)
    if any(not r.is_real for r in roots):
        raise AlgebraError("matrix does not have all-real spectrum")
    out = []
    with mp.workprec(prec + 40):
        a_mp = _matrix_to_mpf(matrix)
        for r in roots:
            lam = mpmath.mpf(r.value)
            rows = [[a_mp[i][j] - (lam if i == j else 0) for j in range(matrix.cols)] for i in range(matrix.rows)]
            vec = null_vector(rows)
            out.append((lam, tuple(vec)))
    out.sort(key=lambda lv: abs(lv[0]))
    return out


# -- Guivarc'h length ------------------------------------------------------------


class GradeDecomposer:
    """Exact splitting of ambient coordinates along the grading's grades."""

    def __init__(self, grading: GradingReport):
        rows = []
        blocks = []
        start = 0
        for g in grading.grades:
            rs = g.basis_rows()
            rows.extend(rs)
            blocks.append((start, start + len(rs)))
            start += len(rs)
        if start != grading.lcs[0].ambient_dim:
            raise AlgebraError("grades do not span the ambient space")
        self.grade_rows = rows
        self.blocks = blocks
        R = RatMatrix.from_rows(rows)
        self.to_coeffs = R.transpose().inverse()

    def components(self, vec: Sequence) -> list[tuple]:
        """Per-grade component vectors of vec (generic scalars)."""
        coeffs = apply_matrix(self.to_coeffs, vec)
        out = []
        for (a, b) in self.blocks:
            comp = [vec[0] * 0] * len(vec)
            for idx in range(a, b):
                c = coeffs[idx]
                if c == 0:
                    continue
                row = self.grade_rows[idx]
                for k, e in enumerate(row):
                    if e != 0:
                        comp[k] = comp[k] + c * e
            out.append(tuple(comp))
        return out


def guivarch_length(coords: Sequence, grading: GradingReport, decomposer: GradeDecomposer | None = None) -> float:
    """max_k ||x_k||^(1/k) for the grade decomposition x = sum x_k."""
    lg = log_guivarch_length(coords, grading, decomposer)
    return 0.0 if lg == -math.inf else math.exp(lg)


def log_guivarch_length(coords: Sequence, grading: GradingReport, decomposer: GradeDecomposer | None = None) -> float:
    dec = decomposer or GradeDecomposer(grading)
    best = -math.inf
    for k, comp in enumerate(dec.components(coords), start=1):
        s = _norm_sq(comp)
        if s == 0:
            continue
        best = max(best, 0.5 * _log_of_positive(s) / k)
    return best


# -- escape-speed experiment -------------------------------------------------------


@dataclass(frozen=True)
class EscapeReport:
    """Observed Guivarc'h growth of iterates and the fitted exponential rate."""

    log_lengths: tuple[float, ...]
    rates: tuple[float, ...]
    final_rate: float


def escape_experiment(
    auto: Automorphism,
    coords: Sequence,
    grading: GradingReport,
    n_max: int,
    prec: int | None = None,
) -> EscapeReport:
    """Iterate the differential and track phi(dL^n log x) and log phi / n.

    Exact rational inputs iterate exactly; numeric inputs iterate at
    `prec` bits (default: current precision).  The final rate estimates
    the escape speed log sigma of the dominant component.
    """
    dec = GradeDecomposer(grading)

    def run() -> EscapeReport:
        vec = tuple(coords)
        if not all(isinstance(c, (Fraction, int)) for c in vec):
            # mpf has an unbounded exponent, so long iterations cannot
            # overflow the squared norms the way plain floats would
            vec = tuple(
                mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else mpmath.mpf(c)
                for c in vec
            )
        logs = []
        rates = []
        for n in range(1, n_max + 1):
            vec = apply_matrix(auto.matrix, vec)
            lg = log_guivarch_length(vec, grading, dec)
            logs.append(lg)
            rates.append(lg / n)
        return EscapeReport(tuple(logs), tuple(rates), rates[-1] if rates else math.nan)

    if prec is not None:
        with mp.workprec(prec):
            return run()
    return run()


def adequate_escape_precision(moduli: Sequence[float], n_max: int) -> int:
    """Bits needed so an n_max-step iteration keeps slow/fast components separated."""
    ms = [m for m in moduli if m > 0]
    if len(ms) < 2:
        return 220
    ratio = max(ms) / min(ms)
    return min(900, int(n_max * math.log2(max(ratio, 2.0))) + 120)


# -- weak/strong frames and distances ------------------------------------------------


@dataclass(frozen=True)
class WeakStrongFrame:
    """Index-i split of the strong unstable algebra: weak line + strong ideal."""

    index: int
    eigenvalue: object  # Fraction for exact frames, mpf otherwise
    weak_vector: tuple
    strong_basis: tuple[tuple, ...]
    exact: bool

    @property
    def weak_norm(self) -> float:
        return norm(self.weak_vector)

    def strong_dim(self) -> int:
        return len(self.strong_basis)

    def member_matrix_rows(self) -> list[list]:
        return [list(self.weak_vector)] + [list(b) for b in self.strong_basis]


def make_frame(
    alg: LieAlgebra,
    index: int,
    eigenvalue,
    weak_vector: Sequence,
    strong_basis: Sequence[Sequence],
    ideal_tol: float = 1e-9,
) -> WeakStrongFrame:
    """Assemble and validate a weak/strong frame.

    Checks that the strong span is a subalgebra and an ideal inside
    span(weak) + strong: brackets of members must fall back into the
    strong span (exactly for rational data, to `ideal_tol` relative
    otherwise).
    """
    exact = all(isinstance(c, (Fraction, int)) for v in [weak_vector, *strong_basis] for c in v)
    frame = WeakStrongFrame(index, eigenvalue, tuple(weak_vector), tuple(tuple(b) for b in strong_basis), exact)
    members = frame.member_matrix_rows()
    for x in members:
        for y in frame.strong_basis:
            br = alg.bracket_coords(tuple(x), tuple(y))
            if all(c == 0 for c in br):
                continue
            resid = _projection_residual(list(frame.strong_basis), list(br))
            scale = norm(br)
            if exact:
                if resid != 0:
                    raise AlgebraError("strong span is not an ideal in the frame")
            elif scale > 0 and float(resid) > ideal_tol * max(1.0, scale):
                raise AlgebraError(f"strong span fails the ideal check: residual {float(resid):.3g}")
    return frame


def _projection_residual(basis: list[Sequence], vec: list):
    """Euclidean norm of vec minus its projection onto span(basis)."""
    if not basis:
        return norm(vec)
    rows = [list(b) for b in basis]
    cols = list(zip(*rows))
    gram = [[sum(br * cr for br, cr in zip(rows[i], rows[j])) for j in range(len(rows))] for i in range(len(rows))]
    rhs = [sum(b * v for b, v in zip(rows[i], vec)) for i in range(len(rows))]
    coef = _solve_dense(gram, rhs)
    resid = list(vec)
    for c, row in zip(coef, rows):
        resid = [u - c * e for u, e in zip(resid, row)]
    return norm(resid)


def unstable_frame(auto: Automorphism, index: int, prec: int = 260) -> WeakStrongFrame:
    """Frame for the i-th weakest unstable direction of a real-spectrum automorphism."""
    pairs = real_eigen_system(auto.matrix, prec)
    roots = polished_roots(_matrix_charpoly(auto), 1e-12)
    expanding = separate_modulus_from_one(roots)
    unstable = [pv for pv, exp_flag in zip(pairs, _match_expansion(pairs, roots, expanding)) if exp_flag]
    if not 1 <= index <= len(unstable):
        raise AlgebraError(f"unstable frame index {index} out of range (k={len(unstable)})")
    lam, v = unstable[index - 1]
    strong = tuple(vec for _, vec in unstable[index:])
    return make_frame(auto.algebra, index, lam, v, strong)


def _matrix_charpoly(auto: Automorphism) -> RatPoly:
    from .linalg import charpoly

    return charpoly(auto.matrix)


def _match_expansion(pairs, roots: list[PolishedRoot], expanding: list[bool]) -> list[bool]:
    flags = []
    for lam, _ in pairs:
        best, best_d = None, None
        for r, e in zip(roots, expanding):
            d = abs(complex(r.value) - complex(lam))
            if best_d is None or d < best_d:
                best, best_d = e, d
        flags.append(bool(best))
    return flags


def weak_displacement(q: GroupElement, r: GroupElement, frame: WeakStrongFrame, tol: float = 1e-9):
    """Coefficient t in the unique factorization r q^-1 = exp(t v) s, s strong.

    Because the strong span is an ideal, t equals the weak-vector
    coefficient of log(r q^-1) in the frame decomposition.  Raises
    CosetError when log(r q^-1) leaves the frame's span.
    """
    m = bch_product(r, inverse(q))
    logs = list(m.log_coords)
    rows = frame.member_matrix_rows()
    cols = list(zip(*rows))  # ambient_dim x (1 + strong_dim)
    if frame.exact and m.exact:
        from .linalg import RatMatrix as RM, solve as exact_solve

        mat = RM.from_rows([[Fraction(x) for x in row] for row in cols])
        sol = exact_solve(mat, [Fraction(x) for x in logs])
        if sol is None:
            raise CosetError("points are not in the same strong-unstable coset")
        return sol[0]
    coef = _solve_dense([list(c) for c in cols], logs)
    resid = list(logs)
    for c, row in zip(coef, rows):
        resid = [u - c * e for u, e in zip(resid, row)]
    scale = norm(logs)
    if scale > 0 and float(norm(resid)) > tol * max(1.0, scale):
        raise CosetError(f"points are not in the same strong-unstable coset (residual {float(norm(resid)):.3g})")
    return coef[0]


def weak_distance(q: GroupElement, r: GroupElement, frame: WeakStrongFrame, tol: float = 1e-9) -> float:
    """|t| * ||v|| for the weak factor exp(t v) of r q^-1."""
    t = weak_displacement(q, r, frame, tol)
    return abs(float(t)) * frame.weak_norm


def strong_factor(q: GroupElement, r: GroupElement, frame: WeakStrongFrame, tol: float = 1e-9) -> GroupElement:
    """The strong component s of the factorization r q^-1 = exp(t v) s."""
    t = weak_displacement(q, r, frame, tol)
    m = bch_product(r, inverse(q))
    w_inv = GroupElement(q.algebra, tuple(-t * c for c in frame.weak_vector))
    return bch_product(w_inv, m)


def strong_distance_upper_bound(q: GroupElement, r: GroupElement, frame: WeakStrongFrame, tol: float = 1e-9) -> float:
    """One-parameter-subgroup length ||log s||: an upper bound, not the leaf metric."""
    s = strong_factor(q, r, frame, tol)
    return norm(s.log_coords)


@dataclass(frozen=True)
class ScalingCheckEntry:
    power: int
    measured: float
    expected: float
    rel_error: float


@dataclass(frozen=True)
class ScalingCheckReport:
    entries: tuple[ScalingCheckEntry, ...]
    passed: bool
    tolerance: float


def weak_distance_scaling_check(
    auto: Automorphism,
    q: GroupElement,
    r: GroupElement,
    frame: WeakStrongFrame,
    m_max: int,
    rel_tol: float = 1e-9,
) -> ScalingCheckReport:
    """Verify d_W(L^m q, L^m r) = |lambda_i|^m d_W(q, r) for m = 1..m_max."""
    base = weak_distance(q, r, frame)
    lam = abs(float(frame.eigenvalue))
    entries = []
    ok = True
    qa, ra = list(q.log_coords), list(r.log_coords)
    for m in range(1, m_max + 1):
        qa = list(apply_matrix(auto.matrix, qa))
        ra = list(apply_matrix(auto.matrix, ra))
        measured = weak_distance(GroupElement(auto.algebra, tuple(qa)), GroupElement(auto.algebra, tuple(ra)), frame)
        expected = (lam**m) * base
        denom = max(abs(expected), 1e-300)
        rel = abs(measured - expected) / denom
        entries.append(ScalingCheckEntry(m, measured, expected, rel))
        ok = ok and rel <= rel_tol
    return ScalingCheckReport(tuple(entries), ok, rel_tol)


# -- invariant check suite (CLI geometry-check) -----------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    status: str  # pass | fail | skip
    detail: str


def _random_rational_coords(rng, dim: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(dim))


def _frame_point(rng, alg: LieAlgebra, frame: WeakStrongFrame) -> GroupElement:
    rows = frame.member_matrix_rows()
    out = [mpmath.mpf(0)] * alg.dim
    for row in rows:
        c = mpmath.mpf(rng.uniform(-1, 1))
        out = [o + c * e for o, e in zip(out, row)]
    return GroupElement(alg, tuple(out))


def geometry_check_suite(auto: Automorphism, seed: int = 0, samples: int = 12) -> list[CheckOutcome]:
    """The coarse-geometry invariant battery for one automorphism.

    Exact checks (BCH group laws) run over seeded random rational
    elements; frame-based checks (weak-distance laws, scaling, escape
    classification) run at adaptive mpmath precision and are skipped
    with a reason when the spectrum does not support a frame.
    """
    import random

    from .analysis import compute_grading, compute_spectrum, GradingError
    from .roots import CertificationError

    rng = random.Random(seed)
    alg = auto.algebra
    out: list[CheckOutcome] = []

    if alg.step > MAX_BCH_STEP:
        return [CheckOutcome("bch-product", "skip", f"nilpotency step {alg.step} > {MAX_BCH_STEP}")]

    worst = 0.0
    ok = True
    for _ in range(samples):
        a = group_element(alg, _random_rational_coords(rng, alg.dim))
        b = group_element(alg, _random_rational_coords(rng, alg.dim))
        c = group_element(alg, _random_rational_coords(rng, alg.dim))
        lhs = bch_product(bch_product(a, b), c).log_coords
        rhs = bch_product(a, bch_product(b, c)).log_coords
        if lhs != rhs:
            ok = False
    out.append(CheckOutcome("bch-associativity", "pass" if ok else "fail", f"{samples} exact rational triples"))

    ok = True
    for _ in range(samples):
        a = group_element(alg, _random_rational_coords(rng, alg.dim))
        if not bch_product(a, inverse(a)).is_identity():
            ok = False
    out.append(CheckOutcome("bch-inverse-law", "pass" if ok else "fail", f"{samples} exact rational elements"))

    try:
        grading = compute_grading(auto)
        spectrum = compute_spectrum(auto, grading)
    except (GradingError, CertificationError) as err:
        out.append(CheckOutcome("unstable-frame", "skip", f"spectrum unavailable: {err}"))
        return out

    unstable = [e for e in spectrum.eigenvalues if not e.stable]
    if not spectrum.simple_spectrum or not spectrum.hyperbolic or len(unstable) < 1 or any(
        not e.root.is_real for e in spectrum.eigenvalues
    ):
        out.append(
            CheckOutcome(
                "unstable-frame",
                "skip",
                "needs simple hyperbolic all-real spectrum with an unstable direction",
            )
        )
        return out

    moduli = [e.modulus for e in spectrum.eigenvalues]
    prec = adequate_escape_precision(moduli, 8)
    with mp.workprec(prec):
        frame = unstable_frame(auto, 1, prec=min(prec, 600))
        lam = abs(float(frame.eigenvalue))

        def rand_strong():
            coords = [mpmath.mpf(0)] * alg.dim
            for b in frame.strong_basis:
                cc = mpmath.mpf(rng.uniform(-1, 1))
                coords = [o + cc * e for o, e in zip(coords, b)]
            return GroupElement(alg, tuple(coords))

        worst = 0.0
        for _ in range(samples):
            t = mpmath.mpf(rng.uniform(-2, 2))
            w = GroupElement(alg, tuple(t * c for c in frame.weak_vector))
            s = rand_strong()
            base = weak_distance(group_identity(alg), w, frame)
            shifted = weak_distance(group_identity(alg), bch_product(w, s), frame)
            denom = max(base, 1e-30)
            worst = max(worst, abs(shifted - base) / denom)
        status = "pass" if worst <= 1e-9 else "fail"
        out.append(CheckOutcome("weak-distance-invariance", status, f"max rel deviation {worst:.3g}"))

        worst = 0.0
        for _ in range(samples):
            q = _frame_point(rng, alg, frame)
            r = bch_product(_frame_point(rng, alg, frame), q)
            n = group_element(alg, _random_rational_coords(rng, alg.dim))
            d1 = weak_distance(q, r, frame)
            d2 = weak_distance(bch_product(q, n), bch_product(r, n), frame)
            worst = max(worst, abs(d1 - d2) / max(d1, 1e-30))
        status = "pass" if worst <= 1e-9 else "fail"
        out.append(CheckOutcome("weak-distance-right-invariance", status, f"max rel deviation {worst:.3g}"))

        worst = 0.0
        for _ in range(samples):
            t = mpmath.mpf(rng.uniform(-2, 2))
            w = GroupElement(alg, tuple(t * c for c in frame.weak_vector))
            s = rand_strong()
            m = rng.randint(1, 6)
            lhs = weak_distance(group_identity(alg), bch_product(w.power(m), s.power(m)), frame)
            rhs = m * weak_distance(group_identity(alg), w, frame)
            worst = max(worst, abs(lhs - rhs) / max(rhs, 1e-30))
        status = "pass" if worst <= 1e-9 else "fail"
        out.append(CheckOutcome("weak-distance-power-linearity", status, f"max rel deviation {worst:.3g}"))

        worst = 0.0
        for _ in range(samples):
            s = rand_strong()
            m = rng.randint(1, 6)
            b1 = strong_distance_upper_bound(group_identity(alg), s, frame)
            bm = strong_distance_upper_bound(group_identity(alg), s.power(m), frame)
            worst = max(worst, abs(bm - m * b1) / max(m * b1, 1e-30))
        status = "pass" if worst <= 1e-9 else "fail"
        out.append(CheckOutcome("strong-bound-power-additivity", status, f"max rel deviation {worst:.3g}"))

        q = _frame_point(rng, alg, frame)
        r = bch_product(_frame_point(rng, alg, frame), q)
        rep = weak_distance_scaling_check(auto, q, r, frame, 5, rel_tol=1e-9)
        worst = max((e.rel_error for e in rep.entries), default=0.0)
        out.append(
            CheckOutcome(
                "weak-distance-scaling",
                "pass" if rep.passed else "fail",
                f"|lambda|^m law for m<=5, max rel error {worst:.3g}",
            )
        )

    if len(unstable) >= 2:
        n_max = 40
        prec2 = adequate_escape_precision(moduli, n_max)
        with mp.workprec(prec2 + 60):
            pairs = real_eigen_system(auto.matrix, prec2 + 40)
            unstable_pairs = [(l, v) for l, v in pairs if abs(float(l)) > 1]
            lam_slow, v_slow = unstable_pairs[0]
            rep = escape_experiment(auto, v_slow, grading, n_max, prec=prec2 + 40)
            err = abs(rep.final_rate - math.log(abs(float(lam_slow))))
            lam_fast, v_fast = unstable_pairs[-1]
            mixed = tuple(a + b for a, b in zip(v_slow, v_fast))
            rep_fast = escape_experiment(auto, mixed, grading, n_max, prec=prec2 + 40)
            strictly_faster = rep_fast.final_rate > rep.final_rate + 1e-2
        status = "pass" if (err <= 1e-2 and strictly_faster) else "fail"
        out.append(
            CheckOutcome(
                "escape-speed-classification",
                status,
                f"slow-rate error {err:.3g}; fast direction rate {rep_fast.final_rate:.4g} "
                f"vs slow {rep.final_rate:.4g}",
            )
        )
    else:
        out.append(CheckOutcome("escape-speed-classification", "skip", "needs at least two unstable directions"))
    return out

"""The rigidity decision pipeline for nilmanifold automorphisms.

Validates a candidate automorphism (bracket compatibility, lattice
preservation), splits the lower central series into exact invariant
grades by polynomial splitting, certifies the spectrum per grade, checks
sortedness of the unstable and stable exponents and Q-irreducibility of
the induced torus actions, and combines everything into the final
rigid / not-rigid / inapplicable / undecided verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import LieAlgebra, validate
from .factor import factor_over_Q
from .linalg import (
    ContainmentError,
    RatMatrix,
    Subspace,
    charpoly,
    intersect,
    image_under,
    kernel,
    quotient_basis,
    restriction_matrix,
    subspace_sum,
)
from .poly import RatPoly, is_cyclotomic, poly_gcd, squarefree_part
from .roots import (
    CertificationError,
    CertifiedRoot,
    PolishedRoot,
    polished_roots,
    separate_moduli,
    separate_modulus_from_one,
)


class AutomorphismError(ValueError):
    """The matrix is not an automorphism of the algebra."""


class LatticeError(ValueError):
    """The automorphism does not preserve the lattice Q-structure."""


class GradingError(RuntimeError):
    """The invariant grading could not be split exactly."""


@dataclass(frozen=True)
class Automorphism:
    """A validated automorphism of a rational nilpotent Lie algebra."""

    algebra: LieAlgebra
    matrix: RatMatrix
    bracket_preserving: bool
    lattice_preserving: bool

    def inverse(self) -> "Automorphism":
        return Automorphism(self.algebra, self.matrix.inverse(), True, True)


def validate_automorphism(alg: LieAlgebra, matrix: RatMatrix) -> Automorphism:
    """Check invertibility, bracket compatibility and lattice preservation.

    Lattice preservation is the sufficient criterion adopted here:
    integer entries and determinant +-1 in the declared basis, whose
    Z-span defines the lattice Q-structure.
    """
    if matrix.rows != matrix.cols or matrix.rows != alg.dim:
        raise AutomorphismError(f"matrix must be {alg.dim}x{alg.dim}")
    report = validate(alg)
    if not report.valid:
        raise AutomorphismError("underlying algebra fails validation: " + "; ".join(report.failures))
    det = matrix.det()
    if det == 0:
        raise AutomorphismError("matrix is singular")
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lhs = matrix.apply(alg.basis_bracket(i, j))
            rhs = alg.bracket_coords(matrix.col(i), matrix.col(j))
            if tuple(lhs) != tuple(rhs):
                ni, nj = alg.basis_names[i], alg.basis_names[j]
                raise AutomorphismError(
                    f"not an automorphism: A[{ni},{nj}] != [A{ni},A{nj}]"
                )
    if not matrix.is_integral() or abs(det) != 1:
        raise LatticeError(
            f"lattice not preserved: integrality={matrix.is_integral()}, |det|={abs(det)}"
        )
    return Automorphism(alg, matrix, bracket_preserving=True, lattice_preserving=True)


# -- grading ------------------------------------------------------------------


@dataclass(frozen=True)
class GradingReport:
    """Lower central series, invariant grades, and their characteristic polynomials."""

    lcs: tuple[Subspace, ...]
    grades: tuple[Subspace, ...]
    grade_polys: tuple[RatPoly, ...]
    carnot_verified: bool

    @property
    def depth(self) -> int:
        return len(self.grades)

    def grade_of_dim(self) -> list[int]:
        return [g.dim for g in self.grades]


def compute_grading(auto: Automorphism) -> GradingReport:
    """Split each n^(i) into grade + n^(i+1) by polynomial splitting.

    The grade at level i is ker(q_i(A)) intersected with n^(i), where
    q_i = p_i / p_{i+1} and p_i is the characteristic polynomial of A
    restricted to n^(i).  Requires gcd(q_i, p_{i+1}) = 1, which holds
    whenever the spectrum is simple.
    """
    alg, A = auto.algebra, auto.matrix
    lcs = alg.lower_central_series()
    c = len(lcs) - 1  # number of nonzero terms
    polys = []
    for i in range(c):
        try:
            polys.append(charpoly(restriction_matrix(A, lcs[i])))
        except ContainmentError:
            raise GradingError(f"n^({i+1}) is not invariant under the automorphism")
    polys.append(RatPoly([1]))

    grades = []
    grade_polys = []
    for i in range(c):
        q_i = polys[i].exact_div(polys[i + 1])
        if poly_gcd(q_i, polys[i + 1]).degree > 0:
            raise GradingError(
                "grading not splittable (repeated spectral factor across filtration)"
            )
        K = kernel(q_i.eval_matrix(A))
        grade = intersect(K, lcs[i])
        if grade.dim != q_i.degree:
            raise GradingError("grade dimension does not match its polynomial degree")
        if subspace_sum(grade, lcs[i + 1]) != lcs[i] or intersect(grade, lcs[i + 1]).dim != 0:
            raise GradingError("grade does not complement the next filtration step")
        if image_under(A, grade) != grade:
            raise GradingError("computed grade is not invariant")
        grades.append(grade)
        grade_polys.append(charpoly(restriction_matrix(A, grade)))
        if grade_polys[-1] != q_i:
            raise GradingError("grade polynomial disagrees with the splitting factor")

    carnot = True
    for i in range(1, c):
        if alg.bracket_span(grades[0], grades[i - 1]) != grades[i]:
            carnot = False
            break
    return GradingReport(tuple(lcs), tuple(grades), tuple(grade_polys), carnot)


# -- spectrum -----------------------------------------------------------------


@dataclass(frozen=True)
class Eigenvalue:
    """One certified eigenvalue with its grade, stability tag, and escape speed."""

    root: CertifiedRoot
    grade: int  # 1-based level in the grading
    stable: bool

    @property
    def modulus(self) -> float:
        return self.root.modulus

    @property
    def escape_speed(self) -> float:
        return self.modulus ** (1.0 / self.grade)


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[Eigenvalue, ...]
    simple_spectrum: bool
    hyperbolic: bool
    tie_witnesses: tuple[str, ...] = field(default_factory=tuple)

    def in_grade(self, k: int) -> list[Eigenvalue]:
        return [e for e in self.eigenvalues if e.grade == k]

    def unstable(self) -> list[Eigenvalue]:
        return [e for e in self.eigenvalues if not e.stable]

    def stable(self) -> list[Eigenvalue]:
        return [e for e in self.eigenvalues if e.stable]


def compute_spectrum(auto: Automorphism, grading: GradingReport, tol: float = 1e-12) -> SpectrumReport:
    """Certified eigenvalues per grade, with simplicity and hyperbolicity flags.

    Modulus ties are reported (simple_spectrum=False), not raised.  An
    undecidable separation from modulus 1 raises CertificationError
    ("hyperbolicity undecided"); eigenvalues that are exactly +-1 are
    detected by the exact guards p(1), p(-1) and make hyperbolic False.
    """
    roots: list[PolishedRoot] = []
    grade_of: list[int] = []
    unit_eigenvalue = False
    repeat_witnesses: list[str] = []
    for level, poly in enumerate(grading.grade_polys, start=1):
        if poly.eval(Fraction(1)) == 0 or poly.eval(Fraction(-1)) == 0:
            unit_eigenvalue = True
        elif any(is_cyclotomic(f) for f, _ in factor_over_Q(poly)[1]):
            # a cyclotomic factor places roots exactly on the unit circle,
            # so non-hyperbolicity is an exact fact, not a failed separation
            unit_eigenvalue = True
        sf = squarefree_part(poly)
        if sf.degree != poly.degree:
            repeat_witnesses.append(
                f"repeated eigenvalue in grade {level}: charpoly {poly} is not squarefree"
            )
        for r in polished_roots(sf, tol):
            roots.append(r)
            grade_of.append(level)

    ties = separate_moduli(roots)
    simple = not ties and not repeat_witnesses
    witnesses = tuple(repeat_witnesses) + tuple(
        f"modulus tie between {_fmt(roots[i].value)} (grade {grade_of[i]}) "
        f"and {_fmt(roots[j].value)} (grade {grade_of[j]})"
        + ("" if exact else " [unresolved at radius cap]")
        for i, j, exact in ties
    )

    if unit_eigenvalue:
        hyperbolic = False
        stable_flags = []
        for r in roots:
            m = abs(complex(r.value))
            stable_flags.append(m < 1)
    else:
        expanding_flags = separate_modulus_from_one(roots)
        stable_flags = [not f for f in expanding_flags]
        hyperbolic = True

    eigs = [
        Eigenvalue(root=r.to_certified(), grade=g, stable=s)
        for r, g, s in zip(roots, grade_of, stable_flags)
    ]
    eigs.sort(key=lambda e: (e.grade, e.modulus, e.root.value.imag, e.root.value.real))
    return SpectrumReport(tuple(eigs), simple, hyperbolic, witnesses)


def _fmt(value) -> str:
    """Compact display of a root value; real parts only when imag is 0."""
    z = complex(value)
    if z.imag == 0:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


# -- sortedness ---------------------------------------------------------------


def check_sorted(spectrum: SpectrumReport) -> tuple[bool, bool, list[str]]:
    """Sortedness of unstable and stable exponents across grades.

    Unstable: for grades j > k, every unstable modulus in grade j must
    exceed every unstable modulus in grade k.  Stable: the same test for
    the inverse map, i.e. every stable modulus in grade j must be
    smaller than every stable modulus in grade k.  Grades contributing
    no eigenvalue of the relevant stability impose no constraint.
    Comparisons use the certified modulus intervals.
    """
    witnesses: list[str] = []
    sorted_unstable = True
    sorted_stable = True
    depth = max((e.grade for e in spectrum.eigenvalues), default=0)
    for k in range(1, depth + 1):
        for j in range(k + 1, depth + 1):
            low_u = [e for e in spectrum.in_grade(k) if not e.stable]
            high_u = [e for e in spectrum.in_grade(j) if not e.stable]
            for v in low_u:
                for w in high_u:
                    if not _certified_greater(w.root, v.root):
                        sorted_unstable = False
                        witnesses.append(
                            f"unstable order violated: |{_fmt(w.root.value)}| (grade {j}) "
                            f"<= |{_fmt(v.root.value)}| (grade {k})"
                        )
            low_s = [e for e in spectrum.in_grade(k) if e.stable]
            high_s = [e for e in spectrum.in_grade(j) if e.stable]
            for v in low_s:
                for w in high_s:
                    if not _certified_greater(v.root, w.root):
                        sorted_stable = False
                        witnesses.append(
                            f"stable order violated: contraction |{_fmt(w.root.value)}| (grade {j}) "
                            f"is weaker than |{_fmt(v.root.value)}| (grade {k})"
                        )
    return sorted_unstable, sorted_stable, witnesses


def _certified_greater(a: CertifiedRoot, b: CertifiedRoot) -> bool:
    """|a| > |b| using the certified enclosures."""
    return a.modulus_interval()[0] > b.modulus_interval()[1]


# -- irreducibility -----------------------------------------------------------


@dataclass(frozen=True)
class IrreducibilityResult:
    level: int
    induced_poly: RatPoly
    factors: tuple[tuple[RatPoly, int], ...]
    irreducible: bool
    integrality_warning: str | None


def check_irreducible(auto: Automorphism, grading: GradingReport) -> list[IrreducibilityResult]:
    """Q-irreducibility of the action induced on N_k/[N_k, N_k] for each k.

    The induced matrix is computed through exact quotient coordinates; a
    failure of integrality in the induced basis is recorded as a warning
    while the criterion itself is still evaluated over Q.
    """
    alg, A = auto.algebra, auto.matrix
    out = []
    for level, sub in enumerate(grading.lcs[:-1], start=1):
        derived = alg.bracket_span(sub, sub)
        reps, proj = quotient_basis(sub, derived)
        q = len(reps)
        cols = []
        for r in reps:
            cols.append(proj.apply(A.apply(r)))
        induced = RatMatrix(q, q, [cols[j][i] for i in range(q) for j in range(q)])
        warning = None
        if not induced.is_integral():
            warning = "induced matrix is not integral in the induced lattice basis"
        poly = charpoly(induced)
        _, factors = factor_over_Q(poly)
        irreducible = len(factors) == 1 and factors[0][1] == 1
        out.append(
            IrreducibilityResult(
                level=level,
                induced_poly=poly,
                factors=tuple(factors),
                irreducible=irreducible,
                integrality_warning=warning,
            )
        )
    return out


# -- verdict ------------------------------------------------------------------


VERDICT_RIGID = "rigid"
VERDICT_NOT_RIGID = "not_rigid"
VERDICT_INAPPLICABLE = "inapplicable"
VERDICT_UNDECIDED = "undecided"


@dataclass(frozen=True)
class RigidityVerdict:
    """Structured outcome of the full local-rigidity criterion."""

    automorphism: Automorphism
    grading: GradingReport | None
    spectrum: SpectrumReport | None
    simple_spectrum: bool | None
    hyperbolic: bool | None
    sorted_unstable: bool | None
    sorted_stable: bool | None
    irreducibility: tuple[IrreducibilityResult, ...] | None
    verdict: str
    witnesses: tuple[str, ...]


def rigidity_verdict(auto: Automorphism, tol: float = 1e-12) -> RigidityVerdict:
    """Run the full pipeline and classify.

    rigid iff the spectrum is simple and hyperbolic, both spectra are
    sorted, and every induced torus action is irreducible over Q;
    inapplicable when simplicity or hyperbolicity fails; undecided when
    a certification step could not be completed.
    """
    witnesses: list[str] = []
    full_poly = charpoly(auto.matrix)
    repeated = squarefree_part(full_poly).degree != full_poly.degree
    try:
        grading = compute_grading(auto)
    except GradingError as err:
        if repeated:
            # the spectrum is exactly non-simple, so the criterion does not
            # apply even though the grading cannot be split
            return RigidityVerdict(
                auto, None, None, False, None, None, None, None,
                VERDICT_INAPPLICABLE,
                ("spectrum is not simple: characteristic polynomial has a repeated root",
                 f"grading not computed: {err}"),
            )
        return RigidityVerdict(
            auto, None, None, None, None, None, None, None,
            VERDICT_UNDECIDED, (f"grading failed: {err}",),
        )
    try:
        spectrum = compute_spectrum(auto, grading, tol)
    except CertificationError as err:
        return RigidityVerdict(
            auto, grading, None, None, None, None, None, None,
            VERDICT_UNDECIDED, (str(err),),
        )

    irr = check_irreducible(auto, grading)
    if not spectrum.simple_spectrum or not spectrum.hyperbolic:
        if not spectrum.simple_spectrum:
            witnesses.append("spectrum is not simple: " + "; ".join(spectrum.tie_witnesses))
        if not spectrum.hyperbolic:
            witnesses.append("not hyperbolic: an eigenvalue has modulus 1")
        return RigidityVerdict(
            auto, grading, spectrum, spectrum.simple_spectrum, spectrum.hyperbolic,
            None, None, tuple(irr), VERDICT_INAPPLICABLE, tuple(witnesses),
        )

    sorted_u, sorted_s, sort_witnesses = check_sorted(spectrum)
    witnesses.extend(sort_witnesses)
    all_irreducible = all(r.irreducible for r in irr)
    for r in irr:
        if not r.irreducible:
            facs = ", ".join(f"({f})^{m}" for f, m in r.factors)
            witnesses.append(f"level {r.level} torus action reducible over Q: {facs}")

    verdict = VERDICT_RIGID if (sorted_u and sorted_s and all_irreducible) else VERDICT_NOT_RIGID
    return RigidityVerdict(
        auto, grading, spectrum, True, True, sorted_u, sorted_s,
        tuple(irr), verdict, tuple(witnesses),
    )

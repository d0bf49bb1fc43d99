"""Rational nilpotent Lie algebras via structure constants, plus builders.

An algebra stores [e_i, e_j] for i < j only; antisymmetry holds by
construction and the Jacobi identity plus nilpotency are checked by
``validate``.  The Z-span of the declared basis is taken as the lattice
Q-structure, so lattice preservation of an automorphism reduces to
integrality plus unit determinant in this basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import RatMatrix, Subspace, _frac, kernel, quotient_basis, span


class AlgebraError(ValueError):
    """Structural problem with a Lie algebra definition or operand."""


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q given by structure constants."""

    __slots__ = ("dim", "basis_names", "structure", "_lcs_cache")

    def __init__(self, dim: int, basis_names: Sequence[str], structure: Mapping[tuple[int, int], Sequence]):
        if len(basis_names) != dim:
            raise AlgebraError("basis name count != dimension")
        if len(set(basis_names)) != dim:
            raise AlgebraError("duplicate basis names")
        table: dict[tuple[int, int], tuple[Fraction, ...]] = {}
        for (i, j), vec in structure.items():
            if not (0 <= i < j < dim):
                raise AlgebraError(f"structure key ({i},{j}) must satisfy 0 <= i < j < dim")
            coeffs = tuple(_frac(c) for c in vec)
            if len(coeffs) != dim:
                raise AlgebraError("structure vector length != dimension")
            if any(c != 0 for c in coeffs):
                table[(i, j)] = coeffs
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "basis_names", tuple(basis_names))
        object.__setattr__(self, "structure", table)
        object.__setattr__(self, "_lcs_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    def __eq__(self, other):
        if isinstance(other, LieAlgebra):
            return (self.dim, self.basis_names, self.structure) == (other.dim, other.basis_names, other.structure)
        return NotImplemented

    def __hash__(self):
        return hash((self.dim, self.basis_names, tuple(sorted(self.structure.items()))))

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, basis={list(self.basis_names)})"

    # -- brackets ----------------------------------------------------------

    def basis_bracket(self, i: int, j: int) -> tuple[Fraction, ...]:
        if i == j:
            return tuple(Fraction(0) for _ in range(self.dim))
        if i < j:
            return self.structure.get((i, j), tuple(Fraction(0) for _ in range(self.dim)))
        vec = self.structure.get((j, i))
        if vec is None:
            return tuple(Fraction(0) for _ in range(self.dim))
        return tuple(-c for c in vec)

    def bracket_coords(self, x: Sequence, y: Sequence) -> tuple:
        """[x, y] by bilinear extension; exact on Fractions, generic otherwise."""
        if len(x) != self.dim or len(y) != self.dim:
            raise AlgebraError("coordinate length != dimension")
        exact = all(isinstance(v, (Fraction, int)) for v in x) and all(isinstance(v, (Fraction, int)) for v in y)
        zero = Fraction(0) if exact else (x[0] - x[0] if self.dim else 0)
        out = [zero] * self.dim
        for (i, j), vec in self.structure.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c == 0:
                continue
            for k, s in enumerate(vec):
                if s != 0:
                    out[k] = out[k] + c * s
        if exact:
            return tuple(Fraction(v) for v in out)
        return tuple(out)

    def ad_matrix(self, i: int) -> RatMatrix:
        """Matrix of ad(e_i): v -> [e_i, v]."""
        cols = [self.basis_bracket(i, j) for j in range(self.dim)]
        return RatMatrix(self.dim, self.dim, [cols[j][r] for r in range(self.dim) for j in range(self.dim)])

    def element(self, coords: Sequence) -> "AlgebraElement":
        return AlgebraElement(self, tuple(_frac(c) for c in coords))

    def basis_element(self, i: int) -> "AlgebraElement":
        return self.element([int(k == i) for k in range(self.dim)])

    def element_by_name(self, name: str) -> "AlgebraElement":
        return self.basis_element(self.basis_names.index(name))

    # -- structure theory -----------------------------------------------------

    def bracket_span(self, a: Subspace, b: Subspace) -> Subspace:
        vecs = []
        for ra in a.basis_rows():
            for rb in b.basis_rows():
                vecs.append(self.bracket_coords(ra, rb))
        return span(self.dim, vecs)

    def lower_central_series(self) -> list[Subspace]:
        """Filtration full = n^(1) > n^(2) > ... > 0; raises if not nilpotent."""
        if self._lcs_cache is not None:
            return list(self._lcs_cache)
        full = Subspace.full(self.dim)
        chain = [full]
        current = full
        for _ in range(self.dim + 1):
            nxt = self.bracket_span(full, current)
            if nxt.dim >= current.dim and current.dim > 0:
                raise AlgebraError("algebra is not nilpotent (lower central series stalls)")
            chain.append(nxt)
            current = nxt
            if current.dim == 0:
                break
        if chain[-1].dim != 0:
            raise AlgebraError("algebra is not nilpotent (series does not reach 0)")
        object.__setattr__(self, "_lcs_cache", tuple(chain))
        return list(chain)

    @property
    def step(self) -> int:
        """Nilpotency step: the largest c with n^(c) != 0 (0 for the zero algebra)."""
        if self.dim == 0:
            return 0
        return len(self.lower_central_series()) - 1

    def center(self) -> Subspace:
        stacked_rows = []
        for i in range(self.dim):
            stacked_rows.extend(self.ad_matrix(i).row_list())
        if not stacked_rows:
            return Subspace.full(self.dim)
        return kernel(RatMatrix.from_rows(stacked_rows))

    def derived_subalgebra(self, s: Subspace) -> Subspace:
        return self.bracket_span(s, s)

    def is_ideal(self, s: Subspace) -> bool:
        return s.contains(self.bracket_span(Subspace.full(self.dim), s))

    def quotient(self, ideal: Subspace) -> tuple["LieAlgebra", RatMatrix]:
        """Quotient algebra by an ideal, with the linear projection matrix."""
        if not self.is_ideal(ideal):
            raise AlgebraError("subspace is not an ideal")
        reps, proj = quotient_basis(Subspace.full(self.dim), ideal)
        q = len(reps)
        names = []
        for idx, r in enumerate(reps):
            ones = [k for k, c in enumerate(r) if c != 0]
            if len(ones) == 1 and r[ones[0]] == 1:
                names.append(self.basis_names[ones[0]])
            else:
                names.append(f"q{idx}")
        structure: dict[tuple[int, int], tuple[Fraction, ...]] = {}
        for i in range(q):
            for j in range(i + 1, q):
                br = self.bracket_coords(reps[i], reps[j])
                structure[(i, j)] = proj.apply(br)
        return LieAlgebra(q, names, structure), proj


@dataclass(frozen=True)
class AlgebraElement:
    """An element of a LieAlgebra in basis coordinates."""

    algebra: LieAlgebra
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise AlgebraError("coordinate length != algebra dimension")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "AlgebraElement":
        c = _frac(c)
        return AlgebraElement(self.algebra, tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _same(self, other: "AlgebraElement") -> None:
        if self.algebra != other.algebra:
            raise AlgebraError("elements live in different algebras")


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Lie bracket [x, y], exact."""
    x._same(y)
    return AlgebraElement(x.algebra, tuple(x.algebra.bracket_coords(x.coords, y.coords)))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of structural validation: Jacobi, nilpotency, step."""

    valid: bool
    antisymmetric: bool
    jacobi_ok: bool
    nilpotent: bool
    step: int | None
    failures: tuple[str, ...] = field(default_factory=tuple)


def validate(alg: LieAlgebra) -> ValidationReport:
    """Check the Jacobi identity on all basis triples and nilpotency.

    Antisymmetry is structural (only i < j brackets are stored), so it is
    reported as satisfied by construction.
    """
    failures = []
    jacobi_ok = True
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            for k in range(j + 1, alg.dim):
                ei, ej, ek = (alg.basis_bracket(j, k), alg.basis_bracket(k, i), alg.basis_bracket(i, j))
                term = [Fraction(0)] * alg.dim
                for comp, pair in ((ei, i), (ej, j), (ek, k)):
                    inner = alg.bracket_coords([int(t == pair) for t in range(alg.dim)], comp)
                    term = [a + b for a, b in zip(term, inner)]
                if any(c != 0 for c in term):
                    jacobi_ok = False
                    names = alg.basis_names
                    failures.append(
                        f"Jacobi fails on ({names[i]},{names[j]},{names[k]}): residual {[str(c) for c in term]}"
                    )
    nilpotent = True
    step = None
    try:
        step = alg.step
    except AlgebraError as err:
        nilpotent = False
        failures.append(str(err))
    return ValidationReport(
        valid=jacobi_ok and nilpotent,
        antisymmetric=True,
        jacobi_ok=jacobi_ok,
        nilpotent=nilpotent,
        step=step,
        failures=tuple(failures),
    )


# -- builders -----------------------------------------------------------------


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, [f"e{i+1}" for i in range(n)], {})


def heisenberg() -> LieAlgebra:
    """[X, Y] = Z."""
    return LieAlgebra(3, ["X", "Y", "Z"], {(0, 1): [0, 0, 1]})


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    names = [f"{n}.1" for n in a.basis_names] + [f"{n}.2" for n in b.basis_names]
    if len(set(names)) != a.dim + b.dim:
        names = [f"a{i}" for i in range(a.dim)] + [f"b{i}" for i in range(b.dim)]
    structure: dict[tuple[int, int], list] = {}
    for (i, j), vec in a.structure.items():
        structure[(i, j)] = list(vec) + [Fraction(0)] * b.dim
    for (i, j), vec in b.structure.items():
        structure[(i + a.dim, j + a.dim)] = [Fraction(0)] * a.dim + list(vec)
    return LieAlgebra(a.dim + b.dim, names, structure)


def free_nilpotent(generators: int, step: int = 2) -> LieAlgebra:
    """Free nilpotent Lie algebra on m generators; only step 2 is implemented."""
    if generators < 2:
        raise AlgebraError("need at least 2 generators")
    if step != 2:
        raise NotImplementedError("free_nilpotent supports step 2 only")
    m = generators
    gen_names = [f"x{i+1}" for i in range(m)]
    pair_index = {}
    pair_names = []
    idx = m
    for i in range(m):
        for j in range(i + 1, m):
            pair_index[(i, j)] = idx
            pair_names.append(f"[x{i+1},x{j+1}]")
            idx += 1
    dim = m + m * (m - 1) // 2
    structure = {}
    for (i, j), k in pair_index.items():
        vec = [Fraction(0)] * dim
        vec[k] = Fraction(1)
        structure[(i, j)] = vec
    return LieAlgebra(dim, gen_names + pair_names, structure)


def smale_algebra() -> LieAlgebra:
    """Sum of two Heisenberg algebras in the rational lattice basis (a..f).

    The basis diagonalizes over Q(sqrt 3) into the two Heisenberg factors;
    in these coordinates the brackets are [a,c]=e, [a,d]=f, [b,c]=f,
    [b,d]=3e, and the companion automorphism below is an integer matrix.
    """
    e = lambda k: [Fraction(int(i == k)) for i in range(6)]
    return LieAlgebra(
        6,
        ["a", "b", "c", "d", "e", "f"],
        {
            (0, 2): e(4),         # [a,c] = e
            (0, 3): e(5),         # [a,d] = f
            (1, 2): e(5),         # [b,c] = f
            (1, 3): [Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(3), Fraction(0)],  # [b,d] = 3e
        },
    )


def free32_algebra() -> LieAlgebra:
    """Two-step free nilpotent algebra on generators x, y, z with bracket basis."""
    dim = 6
    e = lambda k: [Fraction(int(i == k)) for i in range(dim)]
    return LieAlgebra(
        dim,
        ["x", "y", "z", "[x,y]", "[x,z]", "[y,z]"],
        {(0, 1): e(3), (0, 2): e(4), (1, 2): e(5)},
    )


def smale_automorphism_matrix() -> RatMatrix:
    """Block matrix: the 4x4 base action plus the fiber block it forces.

    The fiber block is determined by bracket compatibility ([Aa, Ac] must
    equal A[a, c]) and has determinant 1, trace 524174.
    """
    base = [
        [26, 45, 71, 123],
        [15, 26, 41, 71],
        [8733, 15126, 28901, 50058],
        [5042, 8733, 16686, 28901],
    ]
    fiber = [[262087, 453948], [151316, 262087]]
    rows = []
    for i in range(4):
        rows.append(base[i] + [0, 0])
    for i in range(2):
        rows.append([0, 0, 0, 0] + fiber[i])
    return RatMatrix.from_rows(rows)


def free32_automorphism_matrix() -> RatMatrix:
    return RatMatrix.from_rows(
        [
            [0, 0, -1, 0, 0, 0],
            [1, 0, 8, 0, 0, 0],
            [0, 1, -1, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 1, -1, -8],
        ]
    )


def heisenberg_example_matrix() -> RatMatrix:
    """Cat-map base block extended to the Heisenberg fiber; not hyperbolic."""
    return RatMatrix.from_rows([[2, 1, 0], [1, 1, 0], [0, 0, 1]])


def cat_map_matrix() -> RatMatrix:
    return RatMatrix.from_rows([[2, 1], [1, 1]])

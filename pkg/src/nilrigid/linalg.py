"""Exact rational linear algebra: matrices, canonical subspaces, charpoly.

Matrices hold ``fractions.Fraction`` entries in row-major order and are
immutable.  Subspaces are always stored with a reduced-row-echelon basis,
which makes subspace equality a plain data comparison.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .poly import RatPoly


class DimensionError(ValueError):
    """Shape mismatch between matrix/vector operands."""


class ContainmentError(ValueError):
    """A subspace operation received arguments violating containment."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


class RatMatrix:
    """Immutable matrix over Q, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        es = tuple(_frac(e) for e in entries)
        if len(es) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(es)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", es)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise DimensionError("ragged rows")
        return cls(r, c, [e for row in rows for e in row])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    def identity_like(self) -> "RatMatrix":
        if self.rows != self.cols:
            raise DimensionError("identity_like needs a square matrix")
        return RatMatrix.identity(self.rows)

    def zero_like(self) -> "RatMatrix":
        return RatMatrix.zero(self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if isinstance(other, RatMatrix):
            return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)
        return NotImplemented

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: {body})"

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch in addition")
        return RatMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch in subtraction")
        return RatMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "RatMatrix":
        c = _frac(c)
        return RatMatrix(self.rows, self.cols, [c * e for e in self.entries])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionError("shape mismatch in product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum((ri[k] * other.entries[k * other.cols + j] for k in range(self.cols)), Fraction(0)))
        return RatMatrix(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        v = [_frac(x) for x in v]
        return tuple(sum((self.row(i)[k] * v[k] for k in range(self.cols)), Fraction(0)) for i in range(self.rows))

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def power(self, n: int) -> "RatMatrix":
        if self.rows != self.cols:
            raise DimensionError("power needs a square matrix")
        if n < 0:
            return self.inverse().power(-n)
        out = RatMatrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionError("determinant needs a square matrix")
        p = charpoly(self)
        n = self.rows
        return (-1) ** n * p.eval(Fraction(0)) if n else Fraction(1)

    def inverse(self) -> "RatMatrix":
        if self.rows != self.cols:
            raise DimensionError("inverse needs a square matrix")
        n = self.rows
        aug = [list(self.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        aug, rank, _ = _rref(aug)
        if rank != n:
            raise DimensionError("matrix is singular")
        return RatMatrix(n, n, [aug[i][n + j] for i in range(n) for j in range(n)])


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], int, list[int]]:
    """In-place reduced row echelon form; returns (rows, rank, pivot columns)."""
    if not rows:
        return rows, 0, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [inv * e for e in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, r, pivots


def charpoly(m: RatMatrix) -> RatPoly:
    """Characteristic polynomial det(xI - m), monic, by the Berkowitz method.

    Berkowitz is division-free, so no pivoting or fraction growth from
    elimination enters the computation.
    """
    if m.rows != m.cols:
        raise DimensionError("characteristic polynomial needs a square matrix")
    n = m.rows
    if n == 0:
        return RatPoly([1])
    a = m.row_list()
    # coefficient vectors are kept in descending order ([1] = x^0 poly "1")
    c = [Fraction(1), -a[0][0]]
    for i in range(1, n):
        corner = a[i][i]
        row = a[i][:i]
        col = [a[k][i] for k in range(i)]
        sub = [a[k][:i] for k in range(i)]
        # Toeplitz column: [1, -corner, -row.col, -row.sub.col, -row.sub^2.col, ...]
        t = [Fraction(1), -corner]
        vec = col
        for _ in range(i - 1):
            t.append(-sum((row[k] * vec[k] for k in range(i)), Fraction(0)))
            vec = [sum((sub[r][k] * vec[k] for k in range(i)), Fraction(0)) for r in range(i)]
        t.append(-sum((row[k] * vec[k] for k in range(i)), Fraction(0)))
        new = [Fraction(0)] * (i + 2)
        for k in range(i + 2):
            acc = Fraction(0)
            for j in range(min(k, i) + 1):
                acc += t[k - j] * c[j]
            new[k] = acc
        c = new
    return RatPoly(list(reversed(c)))


class Subspace:
    """A linear subspace of Q^n with a canonical reduced-echelon basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: RatMatrix):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Sequence[Sequence]) -> "Subspace":
        rows = [[_frac(x) for x in v] for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise DimensionError("vector length != ambient dimension")
        rows, rank, _ = _rref(rows)
        basis = RatMatrix.from_rows(rows[:rank]) if rank else RatMatrix.zero(0, ambient_dim)
        return cls(ambient_dim, basis)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, RatMatrix.identity(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, RatMatrix.zero(0, n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def basis_rows(self) -> list[tuple[Fraction, ...]]:
        return [self.basis.row(i) for i in range(self.basis.rows)]

    def __eq__(self, other) -> bool:
        if isinstance(other, Subspace):
            return self.ambient_dim == other.ambient_dim and self.basis == other.basis
        return NotImplemented

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"

    def contains_vector(self, v: Sequence) -> bool:
        coords = self.coordinates_of(v)
        return coords is not None

    def coordinates_of(self, v: Sequence):
        """Coefficients of v in the echelon basis, or None if v is outside."""
        v = [_frac(x) for x in v]
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length != ambient dimension")
        coords = []
        residue = list(v)
        _, _, pivots = _rref([list(r) for r in self.basis_rows()])
        for i, pc in enumerate(pivots):
            c = residue[pc]
            coords.append(c)
            if c != 0:
                row = self.basis.row(i)
                residue = [a - c * b for a, b in zip(residue, row)]
        if any(x != 0 for x in residue):
            return None
        return coords

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.basis_rows())


def span(ambient_dim: int, vectors: Sequence[Sequence]) -> Subspace:
    return Subspace.span(ambient_dim, vectors)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("ambient dimension mismatch")
    return Subspace.span(a.ambient_dim, list(a.basis_rows()) + list(b.basis_rows()))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the left kernel of the stacked basis matrix."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("ambient dimension mismatch")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    stacked = RatMatrix.from_rows(list(a.basis_rows()) + [tuple(-x for x in r) for r in b.basis_rows()])
    left_null = kernel(stacked.transpose())
    vectors = []
    for w in left_null.basis_rows():
        x = w[: a.dim]
        vec = [Fraction(0)] * a.ambient_dim
        for coef, row in zip(x, a.basis_rows()):
            for j in range(a.ambient_dim):
                vec[j] += coef * row[j]
        vectors.append(vec)
    return Subspace.span(a.ambient_dim, vectors)


def kernel(m: RatMatrix) -> Subspace:
    """Right null space {v : m v = 0} as a subspace of Q^cols."""
    rows, rank, pivots = _rref(m.row_list())
    free_cols = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for fc in free_cols:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        vectors.append(v)
    return Subspace.span(m.cols, vectors)


def image_under(m: RatMatrix, s: Subspace) -> Subspace:
    """Image {m v : v in s}."""
    if m.cols != s.ambient_dim:
        raise DimensionError("matrix does not act on the ambient space")
    return Subspace.span(m.rows, [m.apply(r) for r in s.basis_rows()])


def quotient_basis(ambient: Subspace, sub: Subspace) -> tuple[list[tuple[Fraction, ...]], RatMatrix]:
    """Representatives for ambient/sub plus the projection onto their coordinates.

    Returns (reps, proj) where reps are rows of ambient completing a basis
    of sub, and proj is a (q x n) matrix with proj @ v = coordinates of
    [v] in the reps basis for every v in ambient; in particular
    proj composed with inclusion-of-representatives is the identity.
    """
    if ambient.ambient_dim != sub.ambient_dim:
        raise DimensionError("ambient dimension mismatch")
    if not ambient.contains(sub):
        raise ContainmentError("sub is not contained in ambient")
    n = ambient.ambient_dim
    reps: list[tuple[Fraction, ...]] = []
    current = list(sub.basis_rows())
    rank = sub.dim
    for cand in ambient.basis_rows():
        _, new_rank, _ = _rref([list(r) for r in current] + [list(cand)])
        if new_rank > rank:
            reps.append(cand)
            current.append(cand)
            rank = new_rank
    q = len(reps)
    # Solve coordinates through the Gram matrix of the combined basis: for
    # v in ambient, coords = (T T^t)^-1 T v, and we keep the reps block.
    t_rows = list(sub.basis_rows()) + reps
    T = RatMatrix.from_rows(t_rows) if t_rows else RatMatrix.zero(0, n)
    if T.rows == 0:
        return reps, RatMatrix.zero(0, n)
    gram = T @ T.transpose()
    proj_full = gram.inverse() @ T
    proj = RatMatrix.from_rows([proj_full.row(sub.dim + i) for i in range(q)]) if q else RatMatrix.zero(0, n)
    return reps, proj


def restriction_matrix(m: RatMatrix, s: Subspace) -> RatMatrix:
    """Matrix of m restricted to the invariant subspace s, in its echelon basis.

    Raises ContainmentError if s is not m-invariant.
    """
    k = s.dim
    cols = []
    for r in s.basis_rows():
        image = m.apply(r)
        coords = s.coordinates_of(image)
        if coords is None:
            raise ContainmentError("subspace is not invariant under the matrix")
        cols.append(coords)
    # cols[j] holds the coordinates of m(b_j); assemble column-wise.
    return RatMatrix(k, k, [cols[j][i] for i in range(k) for j in range(k)])


def solve(m: RatMatrix, rhs: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of m x = rhs, or None if inconsistent."""
    rhs = [_frac(x) for x in rhs]
    if len(rhs) != m.rows:
        raise DimensionError("right-hand side length mismatch")
    aug = [list(m.row(i)) + [rhs[i]] for i in range(m.rows)]
    rows, rank, pivots = _rref(aug)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][m.cols]
    return tuple(x)

"""Exact dense linear algebra over :class:`~homnambu.scalars.Scalar`.

Matrices act on column vectors: column ``j`` holds the coordinates of the image
of basis vector ``j``.  Row reduction clears denominators row by row and runs a
fraction-free (Bareiss) forward pass over the polynomial numerators, choosing
at each step the candidate pivot whose polynomial has the fewest terms.  Every
non-constant pivot is recorded: the result is valid wherever those pivots do
not vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DimensionMismatch
from .scalars import ONE, ONE_POLY, ZERO, Poly, Scalar, as_scalar

Vector = tuple  # tuple[Scalar, ...]


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------

def vector(values: Iterable) -> Vector:
    return tuple(as_scalar(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def basis_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Vector) -> Vector:
    if not c:
        return zero_vector(len(v))
    return tuple(c * a for a in v)


def vec_is_zero(v: Vector) -> bool:
    return all(a.is_zero() for a in v)


def vec_equal(u: Vector, v: Vector) -> bool:
    return len(u) == len(v) and all(a == b for a, b in zip(u, v))


def first_nonzero(v: Vector):
    for a in v:
        if not a.is_zero():
            return a
    return None


# ---------------------------------------------------------------------------
# matrices and covectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch("matrix entries do not match its shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [tuple(as_scalar(x) for x in r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        cols = [tuple(as_scalar(x) for x in c) for c in columns]
        nrows = len(cols[0]) if cols else 0
        return cls(nrows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(basis_vector(n, i) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, tuple(zero_vector(cols) for _ in range(rows)))

    @classmethod
    def from_vector(cls, n: int, vec: Sequence) -> "Matrix":
        """Inverse of :meth:`vectorize` for an ``n x n`` matrix."""
        if len(vec) != n * n:
            raise DimensionMismatch("vector length is not n*n")
        return cls(n, n, tuple(tuple(vec[r * n:(r + 1) * n]) for r in range(n)))

    def __getitem__(self, rc) -> Scalar:
        r, c = rc
        return self.entries[r][c]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def vectorize(self) -> Vector:
        """Row-major flattening."""
        return tuple(x for row in self.entries for x in row)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self.columns()))

    def apply(self, v: Sequence) -> Vector:
        return mat_apply(self, v)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        out = []
        other_cols = other.columns()
        for row in self.entries:
            out.append(tuple(_dot(row, col) for col in other_cols))
        return Matrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(vec_add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(vec_sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return self.scale(-ONE)

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix(self.rows, self.cols, tuple(vec_scale(c, r) for r in self.entries))

    def map_entries(self, fn) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(tuple(fn(x) for x in r) for r in self.entries))

    def is_zero(self) -> bool:
        return all(vec_is_zero(r) for r in self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            vec_equal(a, b) for a, b in zip(self.entries, other.entries)
        )

    __hash__ = None

    def _same_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix shapes differ")

    def __repr__(self) -> str:
        body = "; ".join(", ".join(x.to_text() for x in r) for r in self.entries)
        return f"Matrix([{body}])"


def _dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    total = ZERO
    for a, b in zip(u, v):
        if a.num.terms and b.num.terms:
            total = total + a * b
    return total


def mat_apply(m: Matrix, v: Sequence) -> Vector:
    if len(v) != m.cols:
        raise DimensionMismatch(f"vector of length {len(v)} for a {m.rows}x{m.cols} matrix")
    return tuple(_dot(row, v) for row in m.entries)


@dataclass(frozen=True, eq=False)
class Covector:
    dim: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.dim:
            raise DimensionMismatch("covector length mismatch")

    @classmethod
    def of(cls, values: Iterable) -> "Covector":
        vals = vector(values)
        return cls(len(vals), vals)

    @classmethod
    def zero(cls, n: int) -> "Covector":
        return cls(n, zero_vector(n))

    def __call__(self, v: Sequence) -> Scalar:
        if len(v) != self.dim:
            raise DimensionMismatch("covector applied to a vector of the wrong length")
        return _dot(self.entries, v)

    def compose(self, m: Matrix) -> "Covector":
        """The covector x -> self(m x)."""
        if m.rows != self.dim:
            raise DimensionMismatch("covector/matrix dimension mismatch")
        return Covector(m.cols, tuple(_dot(self.entries, m.column(j)) for j in range(m.cols)))

    def scale(self, c) -> "Covector":
        return Covector(self.dim, vec_scale(as_scalar(c), self.entries))

    def is_zero(self) -> bool:
        return vec_is_zero(self.entries)

    def as_matrix(self) -> Matrix:
        return Matrix(1, self.dim, (self.entries,))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Covector):
            return NotImplemented
        return vec_equal(self.entries, other.entries)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Covector([{', '.join(x.to_text() for x in self.entries)}])"


# ---------------------------------------------------------------------------
# row reduction
# ---------------------------------------------------------------------------

@dataclass
class Echelon:
    rows: list  # reduced rows, one per pivot, as tuples of Scalars
    pivots: list  # pivot column of each row
    assumptions: list  # non-constant pivots assumed nonzero

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _clear_row(row: Sequence[Scalar]) -> list[Poly]:
    dens: list[Poly] = []
    for x in row:
        if x.num.terms and not x.den.is_one() and x.den not in dens:
            dens.append(x.den)
    if not dens:
        return [x.num for x in row]
    out = []
    for x in row:
        if not x.num.terms:
            out.append(x.num)
            continue
        factor = ONE_POLY
        for d in dens:
            if d != x.den:
                factor = factor * d
        out.append(x.num * factor)
    return out


def genericity_factors(polys: Iterable[Poly]) -> list[Poly]:
    """Split nonzero-ness assumptions into simpler, deduplicated factors.

    Monomial parts become their variables; the remaining cofactor is made
    primitive and stripped of factors already recorded.
    """
    out: list[Poly] = []

    def add(f: Poly) -> None:
        if f.is_constant():
            return
        c = f.content()
        f = f.scale(1 / c) if c != 1 else f
        if f.leading()[1] < 0:
            f = -f
        if f not in out:
            out.append(f)

    for p in polys:
        if p.is_zero():
            continue
        mono = p.monomial_gcd()
        for name, _ in mono:
            add(Poly.var(name))
        rest = p.div_monomial(mono)
        changed = True
        while changed and not rest.is_constant():
            changed = False
            for f in out:
                q = rest.divide_exact(f)
                if q is not None:
                    rest, changed = q, True
                    break
        add(rest)
    return out


def row_reduce(rows: Sequence[Sequence], ncols: int) -> Echelon:
    """Reduced row echelon form of ``rows`` (exact, generic in the parameters)."""
    m = [_clear_row(tuple(as_scalar(x) for x in r)) for r in rows]
    for r in m:
        if len(r) != ncols:
            raise DimensionMismatch("rows of unequal width")
    nrows = len(m)
    pivots: list[int] = []
    prev = ONE_POLY
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        best = None
        for i in range(r, nrows):
            if m[i][c].terms and (best is None or len(m[i][c]) < len(m[best][c])):
                best = i
                if len(m[i][c]) == 1 and m[i][c].is_constant():
                    break
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            lead = row[c]
            new = list(row)
            for j in range(c + 1, ncols):
                val = piv * row[j]
                if lead.terms and prow[j].terms:
                    val = val - lead * prow[j]
                if not prev.is_one() and val.terms:
                    q = val.divide_exact(prev)
                    if q is None:
                        raise ArithmeticError("fraction-free elimination lost exactness")
                    val = q
                new[j] = val
            new[c] = Poly()
            m[i] = new
        prev = piv
        pivots.append(c)
        r += 1

    assumptions = [Scalar.poly(f) for f in genericity_factors(m[k][c] for k, c in enumerate(pivots))]
    srows = []
    for k, c in enumerate(pivots):
        piv = m[k][c]
        inv = Scalar(ONE_POLY, piv)
        srows.append([Scalar.poly(x) * inv if x.terms else ZERO for x in m[k]])
    # back substitution to reduced form
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        for i in range(k):
            f = srows[i][c]
            if f.is_zero():
                continue
            srows[i] = [a - f * b if b.num.terms else a for a, b in zip(srows[i], srows[k])]
    return Echelon([tuple(r) for r in srows], pivots, assumptions)


def rank(m: Matrix) -> int:
    return row_reduce(m.entries, m.cols).rank


# ---------------------------------------------------------------------------
# subspaces and solving
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Subspace:
    ambient_dim: int
    basis: tuple  # reduced echelon rows
    pivots: tuple = ()
    pivot_assumptions: tuple = ()
    notes: dict = field(default_factory=dict)

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int, assumptions: Sequence[Scalar] = ()) -> "Subspace":
        vecs = [tuple(as_scalar(x) for x in v) for v in vectors]
        ech = row_reduce(vecs, ambient_dim)
        facts = genericity_factors(a.num for a in tuple(assumptions) + tuple(ech.assumptions))
        return cls(ambient_dim, tuple(ech.rows), tuple(ech.pivots), tuple(Scalar.poly(f) for f in facts))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(basis_vector(n, i) for i in range(n)), tuple(range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return subspace_contains(self, v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and all(vec_equal(a, b) for a, b in zip(self.basis, other.basis))
        )

    __hash__ = None

    def __repr__(self) -> str:
        vs = ", ".join("(" + ", ".join(x.to_text() for x in v) + ")" for v in self.basis)
        return f"Subspace(dim={self.dim}, basis=[{vs}])"


def subspace_contains(s: Subspace, v: Sequence) -> bool:
    if len(v) != s.ambient_dim:
        raise DimensionMismatch("vector and subspace live in different spaces")
    rest = [as_scalar(x) for x in v]
    for row, c in zip(s.basis, s.pivots):
        f = rest[c]
        if f.is_zero():
            continue
        rest = [a - f * b for a, b in zip(rest, row)]
    return all(a.is_zero() for a in rest)


def _kernel_from_echelon(ech: Echelon, ncols: int) -> list[Vector]:
    free = [c for c in range(ncols) if c not in ech.pivots]
    vecs = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, c in zip(ech.rows, ech.pivots):
            v[c] = -row[f]
        vecs.append(tuple(v))
    return vecs


def nullspace(f) -> Subspace:
    """Kernel of a Covector or Matrix."""
    m = f.as_matrix() if isinstance(f, Covector) else f
    ech = row_reduce(m.entries, m.cols)
    return Subspace.span(_kernel_from_echelon(ech, m.cols), m.cols, ech.assumptions)


@dataclass(eq=False)
class AffineSolution:
    particular: Vector
    homogeneous: Subspace

    @property
    def pivot_assumptions(self) -> tuple:
        return self.homogeneous.pivot_assumptions


@dataclass(eq=False)
class Inconsistent:
    pivot_assumptions: tuple = ()


def solve_linear(constraints: Sequence[tuple[Sequence, object]], dim: int | None = None):
    """Solve ``row . x = rhs`` for every ``(row, rhs)`` pair.

    Homogeneous systems return a :class:`Subspace`; otherwise an
    :class:`AffineSolution` or :class:`Inconsistent`.
    """
    widths = {len(row) for row, _ in constraints}
    if dim is not None:
        widths.add(dim)
    if len(widths) > 1:
        raise DimensionMismatch("constraint rows have different widths")
    if not widths:
        raise DimensionMismatch("dimension unknown for an empty constraint set")
    n = widths.pop()
    rhs = [as_scalar(b) for _, b in constraints]
    if all(b.is_zero() for b in rhs):
        ech = row_reduce([row for row, _ in constraints], n)
        return Subspace.span(_kernel_from_echelon(ech, n), n, ech.assumptions)
    aug = [tuple(as_scalar(x) for x in row) + (b,) for (row, _), b in zip(constraints, rhs)]
    ech = row_reduce(aug, n + 1)
    if n in ech.pivots:
        return Inconsistent(tuple(ech.assumptions))
    part = [ZERO] * n
    for row, c in zip(ech.rows, ech.pivots):
        part[c] = row[n]
    coeff = Echelon([r[:n] for r in ech.rows], ech.pivots, ech.assumptions)
    hom = Subspace.span(_kernel_from_echelon(coeff, n), n, ech.assumptions)
    return AffineSolution(tuple(part), hom)

"""Binary (Hom-)algebras given by structure constants, and their checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch
from .linalg import (
    Covector,
    Matrix,
    Subspace,
    Vector,
    basis_vector,
    mat_apply,
    solve_linear,
    subspace_contains,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
    vector,
    zero_vector,
)
from .scalars import Scalar


@dataclass
class CheckReport:
    """Outcome of one exhaustive check.

    A failing report carries the lexicographically first failing basis tuple
    (0-based indices) and its nonzero residual.  Composite checks keep their
    sub-reports in ``parts``.
    """

    check: str
    holds: bool
    witness: tuple | None = None
    residual: tuple | None = None
    pivot_assumptions: tuple = ()
    parts: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.holds:
            if self.witness is None or self.residual is None:
                raise ValueError("a failing report needs a witness and a residual")
            if all(Scalar._coerce(r).is_zero() for r in self.residual):
                raise ValueError("a failing report needs a nonzero residual")

    @property
    def verdict(self) -> str:
        return "Holds" if self.holds else "Fails"

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def combine(cls, check: str, parts: Mapping[str, "CheckReport"], **kw) -> "CheckReport":
        first = next((p for p in parts.values() if not p.holds), None)
        assumptions = _merge_assumptions(*(p.pivot_assumptions for p in parts.values()))
        if first is None:
            return cls(check, True, pivot_assumptions=assumptions, parts=dict(parts), **kw)
        return cls(
            check,
            False,
            witness=first.witness,
            residual=first.residual,
            pivot_assumptions=assumptions,
            parts=dict(parts),
            **kw,
        )


def _merge_assumptions(*groups: Iterable[Scalar]) -> tuple:
    out: list[Scalar] = []
    for g in groups:
        for s in g:
            if not any(s == t for t in out):
                out.append(s)
    return tuple(out)


def denominators(*groups: Iterable[Scalar]) -> tuple:
    """Distinct non-constant denominators: the generic side conditions of the data."""
    out: list[Scalar] = []
    for g in groups:
        for s in g:
            if not s.den.is_one():
                d = Scalar.poly(s.den)
                if not any(d == t for t in out):
                    out.append(d)
    return tuple(out)


def matrix_scalars(m: Matrix) -> Iterable[Scalar]:
    return (x for row in m.entries for x in row)


def _fails(check: str, witness: tuple, residual: Sequence, assumptions: tuple) -> CheckReport:
    return CheckReport(check, False, witness=tuple(witness), residual=tuple(residual), pivot_assumptions=assumptions)


@dataclass(frozen=True, eq=False)
class BinaryAlgebra:
    """``[x_i, x_j] = sum_k c[(i, j)][k] x_k``, stored for ``i < j`` only."""

    dim: int
    basis_names: tuple
    c: Mapping  # {(i, j): Vector} with i < j; absent pairs bracket to zero

    def __post_init__(self):
        if len(self.basis_names) != self.dim:
            raise DimensionMismatch("basis_names length differs from dim")
        for (i, j), v in self.c.items():
            if not (0 <= i < j < self.dim):
                raise ValueError(f"bracket index pair {(i, j)} is not increasing and in range")
            if len(v) != self.dim:
                raise DimensionMismatch(f"bracket {(i, j)} has the wrong length")

    @classmethod
    def from_brackets(cls, basis_names: Sequence[str], brackets: Mapping) -> "BinaryAlgebra":
        """``brackets`` maps ``(i, j)`` (any order, i != j) to coordinate vectors."""
        n = len(basis_names)
        c = {}
        for (i, j), v in brackets.items():
            v = vector(v)
            if i == j:
                raise ValueError("[x, x] is zero by skew-symmetry and cannot be set")
            if i > j:
                i, j, v = j, i, vec_scale(Scalar(-1), v)
            if not vec_is_zero(v):
                c[(i, j)] = v
        return cls(n, tuple(basis_names), c)

    def basis_bracket(self, i: int, j: int) -> Vector:
        if i == j:
            return zero_vector(self.dim)
        if i < j:
            return self.c.get((i, j)) or zero_vector(self.dim)
        v = self.c.get((j, i))
        return tuple(-x for x in v) if v else zero_vector(self.dim)

    def scalars(self) -> Iterable[Scalar]:
        return (x for v in self.c.values() for x in v)

    def map_scalars(self, fn) -> "BinaryAlgebra":
        c = {}
        for key, v in self.c.items():
            w = tuple(fn(x) for x in v)
            if not vec_is_zero(w):
                c[key] = w
        return BinaryAlgebra(self.dim, self.basis_names, c)

    def substitute(self, bindings: Mapping) -> "BinaryAlgebra":
        return self.map_scalars(lambda x: x.substitute(bindings))


def bracket2(A: BinaryAlgebra, u: Sequence, v: Sequence) -> Vector:
    if len(u) != A.dim or len(v) != A.dim:
        raise DimensionMismatch("bracket arguments have the wrong length")
    out = zero_vector(A.dim)
    for (i, j), cij in A.c.items():
        coef = u[i] * v[j] - u[j] * v[i]
        if coef:
            out = vec_add(out, vec_scale(coef, cij))
    return out


def _square(m: Matrix, n: int, what: str) -> None:
    if (m.rows, m.cols) != (n, n):
        raise DimensionMismatch(f"{what} must be {n}x{n}")


def check_hom_jacobi(A: BinaryAlgebra, alpha: Matrix) -> CheckReport:
    """Cyclic sum of [alpha(x), [y, z]] over basis triples i <= j <= k."""
    n = A.dim
    _square(alpha, n, "alpha")
    assumptions = denominators(A.scalars(), matrix_scalars(alpha))
    acol = alpha.columns()
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                r = bracket2(A, acol[i], A.basis_bracket(j, k))
                r = vec_add(r, bracket2(A, acol[j], A.basis_bracket(k, i)))
                r = vec_add(r, bracket2(A, acol[k], A.basis_bracket(i, j)))
                if not vec_is_zero(r):
                    return _fails("hom-jacobi", (i, j, k), r, assumptions)
    return CheckReport("hom-jacobi", True, pivot_assumptions=assumptions)


def check_trace_function(A: BinaryAlgebra, tau: Covector) -> CheckReport:
    n = A.dim
    if tau.dim != n:
        raise DimensionMismatch("tau has the wrong length")
    assumptions = denominators(A.scalars(), tau.entries)
    for i in range(n):
        for j in range(i + 1, n):
            val = tau(A.basis_bracket(i, j))
            if not val.is_zero():
                return _fails("trace", (i, j), (val,), assumptions)
    return CheckReport("trace", True, pivot_assumptions=assumptions)


def check_binary_endomorphism(A: BinaryAlgebra, rho: Matrix) -> CheckReport:
    n = A.dim
    _square(rho, n, "rho")
    assumptions = denominators(A.scalars(), matrix_scalars(rho))
    cols = rho.columns()
    for i in range(n):
        for j in range(i + 1, n):
            r = vec_sub(mat_apply(rho, A.basis_bracket(i, j)), bracket2(A, cols[i], cols[j]))
            if not vec_is_zero(r):
                return _fails("endo", (i, j), r, assumptions)
    return CheckReport("endo", True, pivot_assumptions=assumptions)


def is_ideal(A: BinaryAlgebra, s: Subspace) -> bool:
    if s.ambient_dim != A.dim:
        raise DimensionMismatch("subspace and algebra dimensions differ")
    for b in s.basis:
        for j in range(A.dim):
            if not subspace_contains(s, bracket2(A, b, basis_vector(A.dim, j))):
                return False
    return True


def trace_function_space(A: BinaryAlgebra) -> Subspace:
    """All covectors vanishing on every bracket, as a subspace of coordinate rows."""
    rows = [(A.basis_bracket(i, j), 0) for i in range(A.dim) for j in range(i + 1, A.dim)]
    return solve_linear(rows, A.dim)

"""Ternary Hom-Nambu(-Lie) algebras: the trace-induced bracket, the ternary
Hom-Nambu identity, twisting a Nambu algebra by an endomorphism, morphisms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebras import (
    BinaryAlgebra,
    CheckReport,
    _fails,
    _square,
    denominators,
    matrix_scalars,
)
from .errors import AlreadyTwisted, DimensionMismatch, NotAnEndomorphism
from .linalg import (
    Covector,
    Matrix,
    Vector,
    mat_apply,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
    vector,
    zero_vector,
)
from .scalars import ONE_POLY, Poly, Scalar

PERMUTATIONS_3 = tuple(
    (p, 1 if sum(p[a] > p[b] for a in range(3) for b in range(a + 1, 3)) % 2 == 0 else -1)
    for p in itertools.permutations(range(3))
)


def _sort3(i: int, j: int, k: int):
    """Sorted triple and the sign of the sorting permutation (0 on repeats)."""
    if i == j or j == k or i == k:
        return None, 0
    sign = 1
    a = [i, j, k]
    for x in range(2):
        for y in range(2 - x):
            if a[y] > a[y + 1]:
                a[y], a[y + 1] = a[y + 1], a[y]
                sign = -sign
    return tuple(a), sign


@dataclass(frozen=True, eq=False)
class TernaryAlgebra:
    """``[x_i, x_j, x_k] = sum_l d[(i, j, k)][l] x_l`` stored for ``i < j < k``."""

    dim: int
    basis_names: tuple
    d: Mapping  # {(i, j, k): Vector}, i < j < k; absent triples bracket to zero
    twist: tuple  # (alpha1, alpha2)

    def __post_init__(self):
        if len(self.basis_names) != self.dim:
            raise DimensionMismatch("basis_names length differs from dim")
        for key, v in self.d.items():
            i, j, k = key
            if not (0 <= i < j < k < self.dim):
                raise ValueError(f"bracket index triple {key} is not increasing and in range")
            if len(v) != self.dim:
                raise DimensionMismatch(f"bracket {key} has the wrong length")
        if len(self.twist) != 2:
            raise ValueError("twist must be a pair of maps")
        for m in self.twist:
            _square(m, self.dim, "twist map")

    @classmethod
    def from_brackets(
        cls,
        basis_names: Sequence[str],
        brackets: Mapping,
        twist: tuple | None = None,
    ) -> "TernaryAlgebra":
        n = len(basis_names)
        d = {}
        for key, v in brackets.items():
            s, sign = _sort3(*key)
            if s is None:
                raise ValueError("brackets with a repeated argument vanish and cannot be set")
            v = vector(v)
            if sign < 0:
                v = tuple(-x for x in v)
            if not vec_is_zero(v):
                d[s] = v
        if twist is None:
            twist = (Matrix.identity(n), Matrix.identity(n))
        return cls(n, tuple(basis_names), d, tuple(twist))

    def basis_bracket(self, i: int, j: int, k: int) -> Vector:
        s, sign = _sort3(i, j, k)
        if s is None or s not in self.d:
            return zero_vector(self.dim)
        v = self.d[s]
        return v if sign > 0 else tuple(-x for x in v)

    def is_untwisted(self) -> bool:
        return all(m.is_identity() for m in self.twist)

    def scalars(self) -> Iterable:
        return (x for v in self.d.values() for x in v)

    def with_twist(self, alpha1: Matrix, alpha2: Matrix) -> "TernaryAlgebra":
        return TernaryAlgebra(self.dim, self.basis_names, self.d, (alpha1, alpha2))

    def substitute(self, bindings: Mapping) -> "TernaryAlgebra":
        d = {}
        for key, v in self.d.items():
            w = tuple(x.substitute(bindings) for x in v)
            if not vec_is_zero(w):
                d[key] = w
        twist = tuple(m.map_entries(lambda x: x.substitute(bindings)) for m in self.twist)
        return TernaryAlgebra(self.dim, self.basis_names, d, twist)


def _minor3(u, v, w, i, j, k):
    return (
        u[i] * (v[j] * w[k] - v[k] * w[j])
        - u[j] * (v[i] * w[k] - v[k] * w[i])
        + u[k] * (v[i] * w[j] - v[j] * w[i])
    )


def bracket3(T: TernaryAlgebra, u: Sequence, v: Sequence, w: Sequence) -> Vector:
    n = T.dim
    if len(u) != n or len(v) != n or len(w) != n:
        raise DimensionMismatch("bracket arguments have the wrong length")
    out = zero_vector(n)
    for (i, j, k), dijk in T.d.items():
        coef = _minor3(u, v, w, i, j, k)
        if coef:
            out = vec_add(out, vec_scale(coef, dijk))
    return out


# ---------------------------------------------------------------------------
# induced bracket
# ---------------------------------------------------------------------------

def induced_value(A, tau: Covector, i: int, j: int, k: int) -> Vector:
    """tau(x_i)[x_j, x_k] + tau(x_j)[x_k, x_i] + tau(x_k)[x_i, x_j], expanded as written.

    ``A`` only needs ``dim`` and ``basis_bracket``.
    """
    t = tau.entries
    out = zero_vector(A.dim)
    for coef, (p, q) in ((t[i], (j, k)), (t[j], (k, i)), (t[k], (i, j))):
        if coef:
            out = vec_add(out, vec_scale(coef, A.basis_bracket(p, q)))
    return out


def induce_ternary(A: BinaryAlgebra, tau: Covector, alpha: Matrix, beta: Matrix) -> TernaryAlgebra:
    n = A.dim
    if tau.dim != n:
        raise DimensionMismatch("tau has the wrong length")
    _square(alpha, n, "alpha")
    _square(beta, n, "beta")
    d = {}
    for i, j, k in itertools.combinations(range(n), 3):
        v = induced_value(A, tau, i, j, k)
        for perm, sign in PERMUTATIONS_3[1:]:
            idx = (i, j, k)
            w = induced_value(A, tau, *(idx[p] for p in perm))
            if not vec_is_zero(vec_sub(w, v if sign > 0 else tuple(-x for x in v))):
                raise AssertionError(f"induced bracket is not skew on {idx}")
        if not vec_is_zero(v):
            d[(i, j, k)] = v
    return TernaryAlgebra(n, A.basis_names, d, (alpha, beta))


def check_ternary_skew_equivalence(A, tau: Covector) -> CheckReport:
    """Every permutation of every basis triple expands to the signed sorted value.

    ``A`` only needs ``dim`` and ``basis_bracket``, so tables that bypass the
    structural skew-symmetry of :class:`BinaryAlgebra` can be checked too.
    """
    n = A.dim
    if tau.dim != n:
        raise DimensionMismatch("tau has the wrong length")
    assumptions = denominators(tau.entries)
    for idx in itertools.combinations_with_replacement(range(n), 3):
        base = induced_value(A, tau, *idx)
        for perm, sign in PERMUTATIONS_3:
            p = tuple(idx[x] for x in perm)
            r = vec_sub(induced_value(A, tau, *p), base if sign > 0 else tuple(-x for x in base))
            if not vec_is_zero(r):
                return _fails("skew", p, r, assumptions)
    return CheckReport("skew", True, pivot_assumptions=assumptions)


# ---------------------------------------------------------------------------
# Hom-Nambu identity
# ---------------------------------------------------------------------------

def _working(values: list[Scalar]):
    """Scale a group of scalars by one nonzero common factor.

    Returns the scaled values (ints when every value is rational, polynomials
    otherwise) and the factor as a Scalar.  The checks using this are
    homogeneous in each group, so zero tests survive the scaling.
    """
    if all(v.is_constant() for v in values):
        fr = [v.constant_value() for v in values]
        lcm = 1
        for f in fr:
            lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
        return [int(f * lcm) for f in fr], Scalar(lcm)
    dens: list[Poly] = []
    for v in values:
        if not v.den.is_one() and v.den not in dens:
            dens.append(v.den)
    total = ONE_POLY
    for d in dens:
        total = total * d
    out = []
    for v in values:
        if not v.num.terms:
            out.append(0)
            continue
        f = ONE_POLY
        for d in dens:
            if d != v.den:
                f = f * d
        out.append(v.num * f)
    return out, Scalar.poly(total)


def _to_scalar(w) -> Scalar:
    if isinstance(w, Poly):
        return Scalar.poly(w)
    return Scalar(Fraction(w))


def _sparse_columns(vals, n):
    cols = []
    for j in range(n):
        cols.append({r: vals[r * n + j] for r in range(n) if vals[r * n + j]})
    return cols


def check_hom_nambu(T: TernaryAlgebra, reduced: bool = False) -> CheckReport:
    """Residual of the ternary Hom-Nambu identity on basis 5-tuples.

    [a1(x1), a2(x2), [x3, x4, x5]] - [[x1, x2, x3], a1(x4), a2(x5)]
        - [a1(x3), [x1, x2, x4], a2(x5)] - [a1(x3), a2(x4), [x1, x2, x5]]

    All ``dim**5`` tuples by default; ``reduced`` restricts to x3 < x4 < x5.
    """
    n = T.dim
    alpha1, alpha2 = T.twist
    assumptions = denominators(T.scalars(), matrix_scalars(alpha1), matrix_scalars(alpha2))

    keys = sorted(T.d)
    dvals, dscale = _working([x for key in keys for x in T.d[key]])
    a1vals, a1scale = _working(list(matrix_scalars(alpha1)))
    a2vals, a2scale = _working(list(matrix_scalars(alpha2)))

    # full skew tensor, sparse: D[(i, j, k)] = {l: value}
    D: dict = {}
    for pos, key in enumerate(keys):
        vec = {l: dvals[pos * n + l] for l in range(n) if dvals[pos * n + l]}
        if not vec:
            continue
        for perm, sign in PERMUTATIONS_3:
            p = tuple(key[x] for x in perm)
            D[p] = vec if sign > 0 else {l: -c for l, c in vec.items()}
    a1 = _sparse_columns(a1vals, n)
    a2 = _sparse_columns(a2vals, n)

    # P[a][b][r] = [a1(x_a), a2(x_b), x_r] as {l: value}
    P = [[[{} for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for p, cp in a1[a].items():
                for q, cq in a2[b].items():
                    if p == q:
                        continue
                    coef = cp * cq
                    for r in range(n):
                        vec = D.get((p, q, r))
                        if not vec:
                            continue
                        acc = P[a][b][r]
                        for l, c in vec.items():
                            acc[l] = acc.get(l, 0) + coef * c

    empty: dict = {}

    def accumulate(acc, dvec, pvecs, sign):
        for r, c in dvec.items():
            pv = pvecs[r]
            for l, v in pv.items():
                acc[l] = acc.get(l, 0) + sign * c * v

    rng = range(n)
    for a, b, c in itertools.product(rng, rng, rng):
        dabc = D.get((a, b, c), empty)
        Pab = P[a][b]
        for d_ in rng:
            dabd = D.get((a, b, d_), empty)
            if reduced and d_ <= c:
                continue
            for e in rng:
                if reduced and e <= d_:
                    continue
                acc: dict = {}
                dcde = D.get((c, d_, e))
                if dcde:
                    accumulate(acc, dcde, Pab, 1)
                if dabc:
                    accumulate(acc, dabc, P[d_][e], -1)
                if dabd:
                    accumulate(acc, dabd, P[c][e], 1)
                dabe = D.get((a, b, e))
                if dabe:
                    accumulate(acc, dabe, P[c][d_], -1)
                if any(v for v in acc.values()):
                    scale = dscale * dscale * a1scale * a2scale
                    residual = tuple(_to_scalar(acc.get(l, 0)) / scale for l in range(n))
                    return _fails("hom-nambu", (a, b, c, d_, e), residual, assumptions)
    return CheckReport("hom-nambu", True, pivot_assumptions=assumptions, notes={"reduced": reduced})


def hom_nambu_residual(T: TernaryAlgebra, tup: Sequence[int]) -> Vector:
    """Residual on one basis 5-tuple, expanded term by term with :func:`bracket3`."""
    n = T.dim
    alpha1, alpha2 = T.twist
    e = [tuple(Scalar(1) if k == i else Scalar(0) for k in range(n)) for i in range(n)]
    x1, x2, x3, x4, x5 = (e[i] for i in tup)
    A1 = lambda v: mat_apply(alpha1, v)  # noqa: E731
    A2 = lambda v: mat_apply(alpha2, v)  # noqa: E731
    lhs = bracket3(T, A1(x1), A2(x2), bracket3(T, x3, x4, x5))
    t1 = bracket3(T, bracket3(T, x1, x2, x3), A1(x4), A2(x5))
    t2 = bracket3(T, A1(x3), bracket3(T, x1, x2, x4), A2(x5))
    t3 = bracket3(T, A1(x3), A2(x4), bracket3(T, x1, x2, x5))
    return vec_sub(vec_sub(vec_sub(lhs, t1), t2), t3)


# ---------------------------------------------------------------------------
# endomorphisms and morphisms
# ---------------------------------------------------------------------------

def _intertwines(check: str, f: Matrix, src: Matrix, dst: Matrix, assumptions) -> CheckReport:
    """f . src == dst . f, reporting the first differing column."""
    diff = (f @ src) - (dst @ f)
    for j in range(diff.cols):
        col = diff.column(j)
        if not vec_is_zero(col):
            return _fails(check, (j,), col, assumptions)
    return CheckReport(check, True, pivot_assumptions=assumptions)


def _bracket_morphism(check: str, T: TernaryAlgebra, T2: TernaryAlgebra, f: Matrix, assumptions) -> CheckReport:
    cols = f.columns()
    for i, j, k in itertools.combinations(range(T.dim), 3):
        r = vec_sub(mat_apply(f, T.basis_bracket(i, j, k)), bracket3(T2, cols[i], cols[j], cols[k]))
        if not vec_is_zero(r):
            return _fails(check, (i, j, k), r, assumptions)
    return CheckReport(check, True, pivot_assumptions=assumptions)


def check_ternary_morphism(T: TernaryAlgebra, T2: TernaryAlgebra, f: Matrix) -> CheckReport:
    if (f.rows, f.cols) != (T2.dim, T.dim):
        raise DimensionMismatch(f"f must be {T2.dim}x{T.dim}")
    assumptions = denominators(T.scalars(), T2.scalars(), matrix_scalars(f))
    parts = {
        "brackets": _bracket_morphism("morphism-brackets", T, T2, f, assumptions),
        "twist1": _intertwines("morphism-twist1", f, T.twist[0], T2.twist[0], assumptions),
        "twist2": _intertwines("morphism-twist2", f, T.twist[1], T2.twist[1], assumptions),
    }
    return CheckReport.combine("morphism", parts)


def check_ternary_endomorphism(T: TernaryAlgebra, rho: Matrix) -> CheckReport:
    _square(rho, T.dim, "rho")
    report = check_ternary_morphism(T, T, rho)
    report.check = "endo"
    return report


def twist_by_endomorphism(T: TernaryAlgebra, rho: Matrix) -> TernaryAlgebra:
    """Bracket rho . [., ., .] with twist (rho, rho), for an untwisted ``T``."""
    if not T.is_untwisted():
        raise AlreadyTwisted("twisting needs an untwisted Nambu algebra (identity twist pair)")
    report = check_ternary_endomorphism(T, rho)
    if not report:
        raise NotAnEndomorphism(f"rho is not an endomorphism: fails on {report.witness}")
    d = {}
    for key, v in T.d.items():
        w = mat_apply(rho, v)
        if not vec_is_zero(w):
            d[key] = w
    return TernaryAlgebra(T.dim, T.basis_names, d, (rho, rho))

"""Single-constant corruptions of fixtures, with witnesses re-verified by sympy."""

from __future__ import annotations

import itertools

import sympy as sp
from sympy.combinatorics import Permutation

from homnambu.algebras import BinaryAlgebra, check_hom_jacobi, check_trace_function
from homnambu.documents import load_fixture
from homnambu.linalg import Matrix
from homnambu.ternary import TernaryAlgebra, check_hom_nambu, induce_ternary

from oracles import to_sympy

# fixtures whose structure constants are plain rationals
NUMERIC_FIXTURES = ("gl2", "sl2", "ex1_gl2", "n4")


def rat(s):
    return to_sympy(s)


def sym_binary(A: BinaryAlgebra):
    n = A.dim
    table = {(i, i): sp.zeros(n, 1) for i in range(n)}
    for i, j in itertools.combinations(range(n), 2):
        table[(i, j)] = sp.Matrix([rat(s) for s in A.basis_bracket(i, j)])
        table[(j, i)] = -table[(i, j)]
    return table


def _b2(table, u, v):
    out = sp.zeros(len(u), 1)
    for (i, j), val in table.items():
        if u[i] and v[j]:
            out += u[i] * v[j] * val
    return out


def jacobi_residual(A: BinaryAlgebra, alpha: Matrix, wit):
    table = sym_binary(A)
    al = sp.Matrix([[rat(s) for s in row] for row in alpha.entries])
    e = sp.eye(A.dim)
    x, y, z = (e[:, i] for i in wit)
    term = lambda a, b, c: _b2(table, al * a, _b2(table, b, c))  # noqa: E731
    return term(x, y, z) + term(y, z, x) + term(z, x, y)


def trace_residual(A: BinaryAlgebra, tau, wit):
    t = sp.Matrix([[rat(s) for s in tau.entries]])
    return (t * sym_binary(A)[tuple(wit)])[0]


def sym_ternary(T: TernaryAlgebra):
    full = {}
    for key in itertools.permutations(range(T.dim), 3):
        srt = tuple(sorted(key))
        sign = Permutation([srt.index(k) for k in key]).signature()
        full[key] = sign * sp.Matrix([rat(s) for s in T.basis_bracket(*srt)])
    return full


def nambu_residual(T: TernaryAlgebra, wit):
    """Twisted identity at a basis 5-tuple, from a fully expanded sympy table."""
    n = T.dim
    full = sym_ternary(T)
    a1, a2 = (sp.Matrix([[rat(s) for s in row] for row in m.entries]) for m in T.twist)

    def b(u, v, w):
        out = sp.zeros(n, 1)
        for (i, j, k), val in full.items():
            c = u[i] * v[j] * w[k]
            if c:
                out += c * val
        return out

    e = sp.eye(n)
    x1, x2, x3, x4, x5 = (e[:, i] for i in wit)
    return (
        b(a1 * x1, a2 * x2, b(x3, x4, x5))
        - b(b(x1, x2, x3), a1 * x4, a2 * x5)
        - b(a1 * x3, b(x1, x2, x4), a2 * x5)
        - b(a1 * x3, a2 * x4, b(x1, x2, x5))
    )


def corrupted_binary(A: BinaryAlgebra, i, j, k) -> BinaryAlgebra:
    table = {(a, b): list(A.basis_bracket(a, b)) for a, b in itertools.combinations(range(A.dim), 2)}
    table[(i, j)][k] = table[(i, j)][k] + 1
    return BinaryAlgebra.from_brackets(A.basis_names, table)


def corrupted_ternary(T: TernaryAlgebra, key, k) -> TernaryAlgebra:
    table = {c: list(T.basis_bracket(*c)) for c in itertools.combinations(range(T.dim), 3)}
    table[key][k] = table[key][k] + 1
    return TernaryAlgebra.from_brackets(T.basis_names, table, twist=T.twist)


def _verified(report, n, arity, recompute) -> bool:
    """True when the report Fails; its witness must then be in range with a nonzero residual."""
    if report:
        return False
    assert len(report.witness) == arity and all(0 <= w < n for w in report.witness)
    res = recompute(report.witness)
    assert sp.simplify(res) != 0 if arity == 2 else not sp.simplify(res).is_zero_matrix
    return True


def binary_checkers(doc):
    n = doc.dim
    alpha = doc.map("alpha") if "alpha" in doc.maps else Matrix.identity(n)
    tau = doc.functional("tau" if "tau" in doc.functionals else "tr")
    beta = doc.map("beta") if "beta" in doc.maps else None
    return alpha, tau, beta


def corruption_survivors(name: str) -> list:
    """Positions whose +1 corruption leaves every applicable checker Holding."""
    doc = load_fixture(name).apply_constraints()
    out = []
    if doc.kind == "ternary":
        T = doc.ternary_algebra()
        assert check_hom_nambu(T)
        for key in itertools.combinations(range(T.dim), 3):
            for k in range(T.dim):
                C = corrupted_ternary(T, key, k)
                rep = check_hom_nambu(C)
                if not _verified(rep, T.dim, 5, lambda w: nambu_residual(C, w)):
                    out.append((key, k))
                else:
                    got = sp.Matrix([rat(s) for s in rep.residual])
                    assert sp.simplify(got - nambu_residual(C, rep.witness)).is_zero_matrix
        return out
    A = doc.binary_algebra()
    alpha, tau, beta = binary_checkers(doc)
    assert check_hom_jacobi(A, alpha) and check_trace_function(A, tau)
    for i, j in itertools.combinations(range(A.dim), 2):
        for k in range(A.dim):
            B = corrupted_binary(A, i, j, k)
            caught = _verified(check_hom_jacobi(B, alpha), A.dim, 3, lambda w: jacobi_residual(B, alpha, w))
            caught |= _verified(check_trace_function(B, tau), A.dim, 2, lambda w: trace_residual(B, tau, w))
            if beta is not None:
                T = induce_ternary(B, tau, alpha, beta)
                caught |= _verified(check_hom_nambu(T), A.dim, 5, lambda w: nambu_residual(T, w))
            if not caught:
                out.append((i, j, k))
    return out

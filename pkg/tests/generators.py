"""Random instances satisfying the induction hypotheses by construction.

Every generator returns a dict with keys A, alpha, beta, tau, family and case.
All data is rational; a random change of basis is applied half of the time.
"""

from __future__ import annotations

import random
from fractions import Fraction

from homnambu.algebras import BinaryAlgebra, bracket2
from homnambu.linalg import Covector, Matrix, mat_apply
from homnambu.scalars import Scalar


def _ints(rng: random.Random, k: int, lo: int = -3, hi: int = 3) -> list[int]:
    return [rng.randint(lo, hi) for _ in range(k)]


def _nonzero(rng: random.Random, lo: int = -3, hi: int = 3) -> int:
    while True:
        v = rng.randint(lo, hi)
        if v:
            return v


def _mat(rows) -> Matrix:
    return Matrix.from_rows([[Scalar(Fraction(x)) for x in r] for r in rows])


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _inverse(m):
    """Gauss-Jordan over Fractions."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def random_invertible(rng: random.Random, n: int):
    while True:
        lower = [[1 if i == j else (rng.randint(-2, 2) if i > j else 0) for j in range(n)] for i in range(n)]
        upper = [[_nonzero(rng, -2, 2) if i == j else (rng.randint(-2, 2) if i < j else 0) for j in range(n)] for i in range(n)]
        perm = list(range(n))
        rng.shuffle(perm)
        pm = [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]
        return _matmul(pm, _matmul(lower, upper))


def change_basis(inst: dict, p) -> dict:
    """Express everything in the basis f_i = sum_k p[k][i] e_k."""
    A = inst["A"]
    n = A.dim
    P = _mat(p)
    Pinv = _mat(_inverse(p))
    cols = P.columns()
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            brackets[(i, j)] = mat_apply(Pinv, bracket2(A, cols[i], cols[j]))
    out = dict(inst)
    out["A"] = BinaryAlgebra.from_brackets(A.basis_names, brackets)
    out["alpha"] = Pinv @ inst["alpha"] @ P
    out["beta"] = Pinv @ inst["beta"] @ P
    out["tau"] = inst["tau"].compose(P)
    out["family"] = inst["family"] + "+basis"
    return out


def _names(n: int) -> tuple:
    return tuple(f"x{i + 1}" for i in range(n))


def ex2_family(rng: random.Random) -> dict:
    """Four-dimensional family [x_i, x_j] = a_ij x3 + b_ij x4 with alpha onto x3."""
    a = {(i, j): rng.randint(-3, 3) for i in range(4) for j in range(i + 1, 4)}
    b = {k: rng.randint(-3, 3) for k in ((0, 1), (1, 2), (2, 3))}
    b[(0, 2)] = b[(0, 1)] + b[(1, 2)]
    b[(0, 3)] = b[(0, 1)] + b[(1, 2)] + b[(2, 3)]
    b[(1, 3)] = b[(1, 2)] + b[(2, 3)]
    brackets = {k: [0, 0, a[k], b[k]] for k in a}
    g1, g2 = _ints(rng, 2)
    if g1 == 0 and g2 == 0:
        g1 = 1
    c = _nonzero(rng)
    alpha = [[c if r == 2 else 0 for _ in range(4)] for r in range(4)]
    # beta: random columns in ker tau = span{x3, x4, g2 x1 - g1 x2}
    kernel = [(0, 0, 1, 0), (0, 0, 0, 1), (g2, -g1, 0, 0)]
    cols = []
    for _ in range(4):
        w = _ints(rng, 3)
        cols.append([sum(w[k] * kernel[k][r] for k in range(3)) for r in range(4)])
    beta = [[cols[c_][r] for c_ in range(4)] for r in range(4)]
    return {
        "A": BinaryAlgebra.from_brackets(_names(4), {k: [Scalar(x) for x in v] for k, v in brackets.items()}),
        "alpha": _mat(alpha),
        "beta": _mat(beta),
        "tau": Covector.of([g1, g2, 0, 0]),
        "family": "ex2",
        "case": "C2",
    }


def lie_family(rng: random.Random, n: int, mode: str) -> dict:
    """Yau twist (g, alpha . [., .], alpha) of a Lie algebra g by an endomorphism alpha.

    n = 3: g = K e0 + aff(1) with [p, q] = q and tau = (t, s, 0).
    n = 4: g = K e0 semidirect Heisenberg(p, q, z), [p, q] = z, [e0, .] = D with
           D a block derivation, and tau = (t, 0, 0, 0).
    mode: "C1" (beta = lam alpha), "C3" (beta = 0), "classical" (alpha = beta = id).
    In every case tau . alpha = mu tau, so the triple conditions hold.
    """
    t = _nonzero(rng)
    if n == 3:
        s = rng.randint(-2, 2)
        lie = {(1, 2): [0, 0, 1]}
        if mode == "classical":
            alpha = [[int(r == c) for c in range(3)] for r in range(3)]
        else:
            lam0 = _nonzero(rng, -2, 2)
            v, c = rng.randint(-2, 2), rng.randint(-2, 2) or 1
            w = Fraction((lam0 - 1) * s, t)
            # columns: alpha(e0) = lam0 e0, alpha(p) = w e0 + p + v q, alpha(q) = c q
            alpha = [[lam0, w, 0], [0, 1, 0], [0, v, c]]
        tau = [t, s, 0]
    else:
        a1, b1, c1, d1 = (rng.randint(-2, 2) for _ in range(4))
        Mb = [[a1, c1], [b1, d1]]  # D on span(p, q), columns are images
        lie = {
            (1, 2): [0, 0, 0, 1],
            (0, 1): [0, a1, b1, 0],
            (0, 2): [0, c1, d1, 0],
            (0, 3): [0, 0, 0, a1 + d1],
        }
        if mode == "classical":
            alpha = [[int(r == c) for c in range(4)] for r in range(4)]
        else:
            k0, k1 = rng.randint(-2, 2), _nonzero(rng, -2, 2)
            phi = [[k0 * (r == c) + k1 * Mb[r][c] for c in range(2)] for r in range(2)]
            det = phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0]
            kz = rng.randint(-2, 2)
            alpha = [
                [1, 0, 0, 0],
                [0, phi[0][0], phi[0][1], 0],
                [0, phi[1][0], phi[1][1], 0],
                [kz, 0, 0, det],
            ]
        tau = [t, 0, 0, 0]
    # Yau twist: bracket alpha . [., .]
    brackets = {}
    for key, v in lie.items():
        brackets[key] = [Scalar(sum(Fraction(alpha[r][k]) * v[k] for k in range(n))) for r in range(n)]
    if mode == "classical":
        beta, case = alpha, "C1"
    elif mode == "C1":
        lam = Fraction(_nonzero(rng), rng.randint(1, 3))
        beta, case = [[lam * x for x in row] for row in alpha], "C1"
    else:
        beta, case = [[0] * n for _ in range(n)], "C3"
    return {
        "A": BinaryAlgebra.from_brackets(_names(n), brackets),
        "alpha": _mat(alpha),
        "beta": _mat(beta),
        "tau": Covector.of(tau),
        "family": f"lie{n}-{mode}",
        "case": case,
    }


def ex4_family(rng: random.Random) -> dict:
    """Three-dimensional family with alpha = diag(0, q, q), beta valued in ker tau = span(x2, x3)."""
    a = _ints(rng, 5)
    q, t = _nonzero(rng), _nonzero(rng)
    brackets = {(0, 1): [0, -a[0], a[1]], (0, 2): [0, a[2], a[0]], (1, 2): [0, a[3], a[4]]}
    r = _ints(rng, 4)
    beta = [[0, 0, 0], [0, r[0], r[1]], [0, r[2], r[3]]]
    return {
        "A": BinaryAlgebra.from_brackets(_names(3), {k: [Scalar(x) for x in v] for k, v in brackets.items()}),
        "alpha": _mat([[0, 0, 0], [0, q, 0], [0, 0, q]]),
        "beta": _mat(beta),
        "tau": Covector.of([t, 0, 0]),
        "family": "ex4",
        "case": "C2",
    }


def zero_alpha_family(rng: random.Random, n: int) -> dict:
    """alpha = 0 (case C4): any skew bracket valued in ker tau, tau.beta proportional to tau."""
    tau = _ints(rng, n)
    if all(x == 0 for x in tau):
        tau[rng.randrange(n)] = 1
    p = next(i for i, x in enumerate(tau) if x)

    def into_kernel(v):
        s = Fraction(sum(a * b for a, b in zip(tau, v)), tau[p])
        return [Fraction(x) - (s if i == p else 0) for i, x in enumerate(v)]

    brackets = {
        (i, j): [Scalar(x) for x in into_kernel(_ints(rng, n))]
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < 0.8
    }
    mu = _nonzero(rng)
    cols = [into_kernel(_ints(rng, n)) for _ in range(n)]
    beta = [[mu * (r == c) + cols[c][r] for c in range(n)] for r in range(n)]
    return {
        "A": BinaryAlgebra.from_brackets(_names(n), brackets),
        "alpha": Matrix.zeros(n),
        "beta": _mat(beta),
        "tau": Covector.of(tau),
        "family": "zero-alpha",
        "case": "C4",
    }


def instances(seed: int, count: int):
    rng = random.Random(seed)
    makers = [
        lambda: ex2_family(rng),
        lambda: ex4_family(rng),
        lambda: lie_family(rng, 3, "C1"),
        lambda: lie_family(rng, 4, "C1"),
        lambda: lie_family(rng, rng.choice((3, 4)), "classical"),
        lambda: lie_family(rng, 3, "C1"),
        lambda: lie_family(rng, 4, "C1"),
        lambda: lie_family(rng, rng.choice((3, 4)), "C3"),
        lambda: zero_alpha_family(rng, rng.choice((3, 4))),
    ]
    for k in range(count):
        inst = makers[k % len(makers)]()
        if rng.random() < 0.5:
            inst = change_basis(inst, random_invertible(rng, inst["A"].dim))
        yield inst


def random_skew_table(rng: random.Random, n: int, density: float = 0.7) -> BinaryAlgebra:
    brackets = {
        (i, j): [Scalar(Fraction(rng.randint(-5, 5), rng.randint(1, 3))) for _ in range(n)]
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    }
    return BinaryAlgebra.from_brackets(_names(n), brackets)

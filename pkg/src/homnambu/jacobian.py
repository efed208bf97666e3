"""The functional-Jacobian Nambu-Lie bracket on polynomials in x1, x2, x3.

The algebra is never materialised: identities are checked exactly on explicit
tuples of polynomials.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebras import CheckReport
from .errors import NotUnimodular, ParseError
from .scalars import ONE_POLY, Poly, Scalar, parse_scalar

VARIABLES = ("x1", "x2", "x3")

TriPoly = Poly  # a Poly whose variables lie in VARIABLES
Bracket = Callable[[Poly, Poly, Poly], Poly]


def tripoly(text: str) -> Poly:
    s = parse_scalar(text, VARIABLES)
    if not s.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial", 0)
    return s.num


def coordinate(i: int) -> Poly:
    return Poly.var(VARIABLES[i])


@dataclass(frozen=True)
class PolyMap:
    """gamma = (g1, g2, g3): K^3 -> K^3."""

    components: tuple

    def __post_init__(self):
        if len(self.components) != 3:
            raise ValueError("a PolyMap has exactly three components")

    @classmethod
    def parse(cls, text: str) -> "PolyMap":
        parts = [p for p in text.split(",")]
        if len(parts) != 3:
            raise ParseError("expected three comma-separated polynomials", 0)
        return cls(tuple(tripoly(p) for p in parts))

    @classmethod
    def identity(cls) -> "PolyMap":
        return cls(tuple(coordinate(i) for i in range(3)))

    def to_text(self) -> str:
        return ", ".join(p.to_text() for p in self.components)


def jacobian_matrix(fs: Sequence[Poly]) -> list[list[Poly]]:
    return [[f.derivative(v) for v in VARIABLES] for f in fs]


def det3(m: Sequence[Sequence[Poly]]) -> Poly:
    """Cofactor expansion along the first row."""
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def jacobian_bracket(f1: Poly, f2: Poly, f3: Poly) -> Poly:
    return det3(jacobian_matrix((f1, f2, f3)))


def det_jacobian(g: PolyMap) -> Poly:
    return jacobian_bracket(*g.components)


def compose(f: Poly, g: PolyMap) -> Poly:
    """f . gamma."""
    return f.compose(dict(zip(VARIABLES, g.components)))


def _residual_report(check: str, residual: Poly) -> CheckReport:
    if residual.is_zero():
        return CheckReport(check, True)
    return CheckReport(check, False, witness=(0, 1, 2, 3, 4), residual=(Scalar.poly(residual),))


def nambu_residual(sample: Sequence[Poly], bracket: Bracket, twist: Callable[[Poly], Poly] | None = None) -> Poly:
    f1, f2, f3, f4, f5 = sample
    a = twist or (lambda f: f)
    lhs = bracket(a(f1), a(f2), bracket(f3, f4, f5))
    rhs = (
        bracket(bracket(f1, f2, f3), a(f4), a(f5))
        + bracket(a(f3), bracket(f1, f2, f4), a(f5))
        + bracket(a(f3), a(f4), bracket(f1, f2, f5))
    )
    return lhs - rhs


def check_fundamental_identity(sample: Sequence[Poly], bracket: Bracket = jacobian_bracket) -> CheckReport:
    if len(sample) != 5:
        raise ValueError("the identity needs five polynomials")
    return _residual_report("fundamental-identity", nambu_residual(sample, bracket))


def check_twisted_hom_nambu(g: PolyMap, sample: Sequence[Poly]) -> CheckReport:
    """Hom-Nambu identity for the bracket rho.[.,.,.] with twist (rho, rho), rho f = f.gamma."""
    if len(sample) != 5:
        raise ValueError("the identity needs five polynomials")
    det = det_jacobian(g)
    if det != ONE_POLY:
        raise NotUnimodular(f"det J(gamma) = {det.to_text()}")
    rho = lambda f: compose(f, g)  # noqa: E731

    def twisted(f1, f2, f3):
        return rho(jacobian_bracket(f1, f2, f3))

    return _residual_report("twisted-hom-nambu", nambu_residual(sample, twisted, rho))


def random_tripoly(rng: random.Random, degree: int = 3, coeff_bound: int = 3, terms: int = 3) -> Poly:
    """Random polynomial with at most ``terms`` monomials of total degree <= ``degree``."""
    monos = [
        (a, b, c)
        for a in range(degree + 1)
        for b in range(degree + 1 - a)
        for c in range(degree + 1 - a - b)
    ]
    p = Poly()
    for a, b, c in rng.sample(monos, min(terms, len(monos))):
        coef = rng.randint(-coeff_bound, coeff_bound)
        m = ONE_POLY
        for v, e in zip(VARIABLES, (a, b, c)):
            m = m * Poly.var(v, e)
        p = p + m * coef
    return p

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homnambu.compat import CompatTriple, check_compatibility
from homnambu.documents import load_fixture
from homnambu.errors import AlreadyTwisted, DimensionMismatch, NotAnEndomorphism
from homnambu.linalg import Covector, Matrix, vec_scale, vector, zero_vector
from homnambu.scalars import Scalar
from homnambu.ternary import (
    TernaryAlgebra,
    bracket3,
    check_hom_nambu,
    check_ternary_endomorphism,
    check_ternary_morphism,
    check_ternary_skew_equivalence,
    hom_nambu_residual,
    induce_ternary,
    twist_by_endomorphism,
)
from generators import instances, random_skew_table, lie_family
from oracles import levi_civita_4


@pytest.fixture
def n4():
    return load_fixture("n4").ternary_algebra()


def e(n, i):
    return vector([int(k == i) for k in range(n)])


def diag(*xs):
    return Matrix.from_rows([[xs[r] if r == c else 0 for c in range(len(xs))] for r in range(len(xs))])


def random_ternary(rng, n, twist=None):
    d = {
        key: [Scalar(rng.randint(-2, 2)) for _ in range(n)]
        for key in itertools.combinations(range(n), 3)
        if rng.random() < 0.7
    }
    names = tuple(f"x{i + 1}" for i in range(n))
    return TernaryAlgebra.from_brackets(names, d, twist)


def test_n4_fixture_is_levi_civita(n4):
    for key, coords in levi_civita_4().items():
        assert n4.basis_bracket(*key) == vector(int(c) for c in coords)


def test_bracket3_examples(n4):
    assert bracket3(n4, e(4, 0), e(4, 1), e(4, 2)) == e(4, 3)
    assert bracket3(n4, e(4, 1), e(4, 0), e(4, 2)) == vec_scale(Scalar(-1), e(4, 3))
    u = vector([1, 2, "1/2", -1])
    assert bracket3(n4, u, u, e(4, 3)) == zero_vector(4)
    with pytest.raises(DimensionMismatch):
        bracket3(n4, e(3, 0), e(4, 1), e(4, 2))


def test_induced_gl2_and_ex3():
    gl2 = load_fixture("gl2")
    T = induce_ternary(gl2.binary_algebra(), gl2.functional("tr"), Matrix.identity(4), Matrix.identity(4))
    assert T.basis_bracket(0, 1, 2) == vector([1, 0, 0, -1])
    ex3 = load_fixture("ex3_3dim")
    T3 = induce_ternary(ex3.binary_algebra(), ex3.functional("tau"), ex3.map("alpha"), ex3.map("beta"))
    assert T3.basis_bracket(0, 1, 2) == vector(["0", "t*a3", "t*a4"])
    assert T3.twist == (ex3.map("alpha"), ex3.map("beta"))


def test_zero_tau_gives_zero_bracket():
    rng = random.Random(5)
    A = random_skew_table(rng, 4)
    assert induce_ternary(A, Covector.zero(4), Matrix.identity(4), Matrix.identity(4)).d == {}


def test_n4_satisfies_filippov_against_naive_expansion(n4):
    assert check_hom_nambu(n4)
    for tup in itertools.product(range(4), repeat=5):
        assert all(x.is_zero() for x in hom_nambu_residual(n4, tup))


def test_ex2_induced_algebra_is_hom_nambu():
    doc = load_fixture("ex2_4dim").apply_constraints()
    T = induce_ternary(doc.binary_algebra(), doc.functional("tau"), doc.map("alpha"), doc.map("beta"))
    assert check_hom_nambu(T)


def test_uniform_scaling_of_one_twist_map_keeps_the_identity(n4):
    # every term carries exactly one alpha_1 and one alpha_2 factor
    assert check_hom_nambu(n4.with_twist(Matrix.identity(4), Matrix.identity(4).scale(2)))
    assert check_hom_nambu(n4.with_twist(Matrix.identity(4).scale(3), Matrix.identity(4)))


def test_nonuniform_twist_fails_with_checked_witness(n4):
    T = n4.with_twist(Matrix.identity(4), diag(2, 1, 1, 1))
    report = check_hom_nambu(T)
    assert not report
    assert report.witness == (0, 1, 1, 0, 2)
    assert report.residual == hom_nambu_residual(T, report.witness) == vector([0, 0, -1, 0])


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_fast_checker_agrees_with_naive_expansion(seed):
    rng = random.Random(seed)
    n = 3 if seed % 2 else 4
    twist = (
        Matrix.from_rows([[rng.randint(-1, 1) for _ in range(n)] for _ in range(n)]),
        Matrix.from_rows([[Fraction(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(n)] for _ in range(n)]),
    )
    T = random_ternary(rng, n, twist)
    report = check_hom_nambu(T)
    tuples = itertools.product(range(n), repeat=5)
    first = next((t for t in tuples if any(not x.is_zero() for x in hom_nambu_residual(T, t))), None)
    assert (None if report else report.witness) == first
    if first is not None:
        assert report.residual == hom_nambu_residual(T, first)


def test_fast_checker_on_parametric_data():
    doc = load_fixture("ex2_4dim")  # constraints not applied: the induced algebra need not be Hom-Nambu
    T = induce_ternary(doc.binary_algebra(), doc.functional("tau"), doc.map("alpha"), doc.map("beta"))
    report = check_hom_nambu(T)
    if not report:
        assert report.residual == hom_nambu_residual(T, report.witness)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_reduced_mode_is_equivalent(seed):
    rng = random.Random(seed)
    n = 4
    T = random_ternary(rng, n, (Matrix.identity(n), diag(*[rng.randint(1, 2) for _ in range(n)])))
    assert bool(check_hom_nambu(T)) == bool(check_hom_nambu(T, reduced=True))


def test_skew_equivalence_examples():
    gl2 = load_fixture("gl2")
    assert check_ternary_skew_equivalence(gl2.binary_algebra(), gl2.functional("tr"))
    ex4 = load_fixture("ex4_3dim")
    assert check_ternary_skew_equivalence(ex4.binary_algebra(), ex4.functional("tau"))


class FullTable:
    """A bracket table with every ordered pair stored, bypassing skew storage."""

    def __init__(self, dim, table):
        self.dim = dim
        self.table = table

    def basis_bracket(self, i, j):
        return self.table.get((i, j), zero_vector(self.dim))


def test_skew_equivalence_detects_non_skew_tables():
    table = FullTable(3, {(0, 1): vector([0, 0, 1]), (1, 0): vector([0, 0, 1])})
    report = check_ternary_skew_equivalence(table, Covector.of([0, 0, 1]))
    assert not report
    assert any(not x.is_zero() for x in report.residual)


def test_twist_by_endomorphism(n4):
    same = twist_by_endomorphism(n4, Matrix.identity(4))
    assert same.d == n4.d and same.is_untwisted()
    neg = twist_by_endomorphism(n4, Matrix.identity(4).scale(-1))
    for key, v in n4.d.items():
        assert neg.d[key] == vec_scale(Scalar(-1), v)
    assert neg.twist == (Matrix.identity(4).scale(-1),) * 2
    assert check_hom_nambu(neg)
    with pytest.raises(NotAnEndomorphism):
        twist_by_endomorphism(n4, Matrix.identity(4).scale(2))
    with pytest.raises(AlreadyTwisted):
        twist_by_endomorphism(neg, Matrix.identity(4).scale(-1))


def test_endomorphisms_and_morphisms(n4):
    assert check_ternary_endomorphism(n4, Matrix.identity(4))
    assert check_ternary_endomorphism(n4, Matrix.identity(4).scale(-1))
    assert not check_ternary_endomorphism(n4, Matrix.identity(4).scale(2))
    assert check_ternary_morphism(n4, n4, Matrix.identity(4))
    other = load_fixture("gl2")
    T2 = induce_ternary(other.binary_algebra(), other.functional("tr"), Matrix.identity(4), Matrix.identity(4))
    assert check_ternary_morphism(n4, T2, Matrix.zeros(4))
    swap = Matrix.from_columns([e(4, 1), e(4, 0), e(4, 2), e(4, 3)])
    assert not check_ternary_morphism(n4, n4, swap)
    resigned = TernaryAlgebra(4, n4.basis_names, {k: vec_scale(Scalar(-1), v) for k, v in n4.d.items()}, n4.twist)
    assert check_ternary_morphism(n4, resigned, swap)
    with pytest.raises(DimensionMismatch):
        check_ternary_morphism(n4, n4, Matrix.identity(3))


def test_classical_lie_input_gives_nambu_lie_output():
    rng = random.Random(8)
    for k in range(10):
        inst = lie_family(rng, 3 + k % 2, "classical")
        n = inst["A"].dim
        T = induce_ternary(inst["A"], inst["tau"], Matrix.identity(n), Matrix.identity(n))
        assert T.is_untwisted() and check_hom_nambu(T)


def test_beta_equal_alpha_makes_first_two_conditions_coincide():
    for inst in instances(77, 40):
        t = CompatTriple(inst["alpha"], inst["alpha"], inst["tau"])
        parts = check_compatibility(t).parts
        assert parts["tau-alpha"].holds == parts["tau-beta"].holds


def test_induced_bracket_theorem_sample():
    for inst in instances(5, 25):
        T = induce_ternary(inst["A"], inst["tau"], inst["alpha"], inst["beta"])
        assert check_hom_nambu(T), inst["family"]


def test_unrelated_maps_generally_break_the_identity():
    """Sanity: the checker is not vacuous on induced algebras."""
    doc = load_fixture("gl2")
    A, tau = doc.binary_algebra(), doc.functional("tr")
    rng = random.Random(1)
    failures = 0
    for _ in range(10):
        alpha = Matrix.from_rows([[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)])
        beta = Matrix.from_rows([[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)])
        failures += not check_hom_nambu(induce_ternary(A, tau, alpha, beta))
    assert failures >= 8

from __future__ import annotations

import itertools
import random

import pytest
import sympy as sp

from homnambu.documents import load_fixture
from homnambu.linalg import Matrix

from negative import corrupted_binary, corrupted_ternary, corruption_survivors, jacobi_residual, nambu_residual


@pytest.mark.parametrize("name", ["gl2", "ex1_gl2"])
def test_every_corruption_is_caught(name):
    assert corruption_survivors(name) == []


def test_sl2_diagonal_corruptions_are_still_lie():
    # [e,f] = 2h, [e,h] = -e, [f,h] = 3f: each is a rescaled sl(2), so nothing can flag it
    assert corruption_survivors("sl2") == [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
    A = load_fixture("sl2").binary_algebra()
    ident = Matrix.identity(3)
    for pos in [(0, 1, 2), (0, 2, 1), (1, 2, 0)]:
        B = corrupted_binary(A, *pos)
        for wit in itertools.combinations(range(3), 3):
            assert jacobi_residual(B, ident, wit).is_zero_matrix


def test_n4_diagonal_corruptions_are_still_filippov():
    # [e_i, e_j, e_k] = +-c_l e_l with any c stays a 3-Lie algebra
    expected = [((0, 1, 2), 3), ((0, 1, 3), 2), ((0, 2, 3), 1), ((1, 2, 3), 0)]
    assert corruption_survivors("n4") == expected
    T = load_fixture("n4").ternary_algebra()
    rng = random.Random(0)
    for key, k in expected:
        C = corrupted_ternary(T, key, k)
        for _ in range(60):
            wit = [rng.randrange(4) for _ in range(5)]
            assert nambu_residual(C, wit) == sp.zeros(4, 1)


@pytest.mark.parametrize("name", ["ex2_4dim", "ex4_3dim"])
def test_parametric_corruptions_can_be_parameter_shifts(name):
    # +1 on an entry that is a free parameter just relabels the family
    assert corruption_survivors(name)

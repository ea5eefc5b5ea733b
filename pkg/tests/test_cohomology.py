import json

import pytest

import oracles
from conftest import CIRCLES, KRONECKER, KRONECKER_X_S1, SHIPPED, q
from leafspace.cohomology import (
    BettiTable,
    basic_betti,
    betti,
    build_mode_complex,
    de_rham_betti,
    mode_dims,
    quotient_betti,
)
from leafspace.diffeology import standard_quotient_diffeology
from leafspace.scalars import iter_modes

# frozen from tests/oracles.py (sympy elimination over QQ(sqrt 2), written from the Koszul formulas)
DERHAM = {1: (1, 1), 2: (1, 2, 1), 3: (1, 3, 3, 1), 4: (1, 4, 6, 4, 1)}
BASIC = {"kronecker": (1, 1, 0), "circles": (1, 1, 0), "plane": (1, 2, 1, 0)}
ORACLE_TANGENTS = {"kronecker": oracles.KRONECKER, "circles": oracles.CIRCLES, "plane": oracles.KRONECKER_X_S1}


def test_mode_zero_on_t2():
    c = build_mode_complex(2, (0, 0))
    assert c.dims == (1, 2, 1)
    assert all(not any(any(row) for row in m) for m in c.differentials)
    assert betti(c) == (1, 2, 1)


def test_mode_one_zero_is_acyclic():
    c = build_mode_complex(2, (1, 0))
    assert c.dims == (2, 4, 2)
    assert betti(c) == (0, 0, 0)
    assert mode_dims(2, (1, 0)) == (2, 4, 2)


def test_basic_mode_complex_vanishes_off_annihilator():
    c = build_mode_complex(2, (1, 1), KRONECKER)
    assert c.dims == (0, 0, 0)
    assert betti(c) == (0, 0, 0)


def test_zero_complex():
    assert betti(build_mode_complex(2, (1, 2), KRONECKER)) == (0, 0, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_d_squared_in_every_mode(n):
    for k in iter_modes(n, 2):
        assert build_mode_complex(n, k).d_squared_vanishes()
        assert build_mode_complex(n, k, KRONECKER_X_S1 if n == 3 else CIRCLES if n == 2 else None).d_squared_vanishes()


@pytest.mark.parametrize("n", [2, 3])
def test_nonzero_modes_acyclic(n):
    for k in iter_modes(n, 2):
        if any(k):
            assert not any(betti(build_mode_complex(n, k))), k


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_de_rham(n):
    table = de_rham_betti(n)
    assert table.betti == DERHAM[n]
    assert table.modes_used[0] == (0,) * n


@pytest.mark.parametrize("name", sorted(BASIC))
def test_basic(name):
    assert basic_betti(SHIPPED[name]).betti == BASIC[name]


@pytest.mark.parametrize("name", sorted(BASIC))
def test_quotient_equals_basic(name):
    f = SHIPPED[name]
    assert quotient_betti(f, standard_quotient_diffeology(f)).betti == BASIC[name]


def test_circle_modes_used():
    table = basic_betti(CIRCLES, K=2)
    assert set(table.modes_used) == {(0, 0), (0, 1), (0, 2)}
    assert basic_betti(KRONECKER).modes_used == ((0, 0),)


def test_truncation_independence():
    for K in (0, 1, 3):
        assert basic_betti(CIRCLES, K).betti == (1, 1, 0)
        assert de_rham_betti(2, K).betti == (1, 2, 1)


def test_rebasis_invariance():
    scaled = KRONECKER_X_S1.rebased([[q(-2, 1)]])
    assert basic_betti(scaled).betti == BASIC["plane"]


def test_rational_plane_on_t3():
    # leaves are 2-tori: basic cohomology is that of the circle transversal, mode by mode
    f = type(KRONECKER)(((q(1), q(0), q(0)), (q(0), q(1), q(0))))
    assert basic_betti(f).betti == (1, 1, 0, 0)


def test_negative_K():
    with pytest.raises(ValueError):
        de_rham_betti(2, -1)


def test_table_serialization():
    table = basic_betti(KRONECKER)
    data = json.loads(table.to_json())
    assert data == {"complex": "basic", "K": 2, "betti": [1, 1, 0], "modes_used": [[0, 0]]}
    assert "degree" in table.render()
    assert isinstance(table, BettiTable)


def test_quotient_rejects_foreign_presentation():
    with pytest.raises(ValueError):
        quotient_betti(CIRCLES, standard_quotient_diffeology(KRONECKER))


# --- the oracle itself, recomputed -------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_oracle_de_rham(n):
    assert oracles.total_betti(n, 2) == DERHAM[n]


@pytest.mark.parametrize("name", sorted(BASIC))
def test_oracle_basic(name):
    n = SHIPPED[name].n
    assert oracles.total_betti(n, 2, tangents=ORACLE_TANGENTS[name]) == BASIC[name]


@pytest.mark.parametrize("n", [2, 3])
def test_mode_betti_agrees_with_oracle(n):
    for k in iter_modes(n, 1):
        ints = tuple(int(x.a) for x in k)
        assert betti(build_mode_complex(n, k)) == oracles.mode_betti(n, ints)

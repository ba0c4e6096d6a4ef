"""Nested-commutator coefficient tests with hand-computed oracles."""

import itertools
import math

import numpy as np
import pytest

from semitrotter.commutator_lab import (
    compute_alpha_comm,
    compute_alpha_tilde,
    compute_beta_comm,
    nested_comm,
)
from semitrotter.discretize import Grid, SchemeKind
from semitrotter.expr import parse_expr
from semitrotter.linalg import commutator, spectral_norm
from semitrotter.model import ModelParams, PolyObservableSpec, build_A, build_B, build_observable


def _setup(h=1.0 / 64, n=64):
    grid = Grid(-math.pi, math.pi, n)
    params = ModelParams(
        h=h, potential=parse_expr("cos(x)"), grid=grid, scheme=SchemeKind.FINITE_DIFFERENCE
    )
    spec = PolyObservableSpec(terms=((0, parse_expr("cos(x)")), (1, parse_expr("sin(x)"))), h=h)
    return build_A(params), build_B(params), build_observable(spec, grid)


def test_nested_comm_empty_word():
    a, b, obs = _setup(n=16)
    assert np.array_equal(nested_comm((), a, b, obs), obs)


def test_nested_comm_single_letters():
    a, b, _ = _setup(n=16)
    obs = np.diag(np.cos(Grid(-math.pi, math.pi, 16).nodes)).astype(complex)
    assert spectral_norm(nested_comm(("A",), a, b, obs)) > 1e-3  # [A, O] nonzero
    assert np.all(nested_comm(("B",), a, b, obs) == 0)  # diagonals commute exactly


def test_nested_comm_matches_manual_fold():
    a, b, obs = _setup(n=16)
    manual = commutator(a, commutator(b, obs))
    assert np.array_equal(nested_comm(("B", "A"), a, b, obs), manual)


def test_beta_all_diagonal_is_zero():
    d1 = np.diag([1.0, 2.0, 3.0]).astype(complex)
    d2 = np.diag([0.5, -1.0, 2.0]).astype(complex)
    d3 = np.diag([4.0, 0.0, 1.0]).astype(complex)
    assert compute_beta_comm(1, d1, d2, d3) == 0.0


def test_beta_p1_brute_force_oracle():
    a, b, obs = _setup()
    words = [("A", "A"), ("A", "B"), ("B", "A"), ("B", "B")]
    oracle = max(spectral_norm(nested_comm(w, a, b, obs)) for w in words)
    assert compute_beta_comm(1, a, b, obs) == pytest.approx(oracle, rel=1e-12)


def test_beta_p2_enumerates_eight_words():
    a, b, obs = _setup(n=32)
    oracle = max(
        spectral_norm(nested_comm(w, a, b, obs)) for w in itertools.product("AB", repeat=3)
    )
    assert compute_beta_comm(2, a, b, obs) == pytest.approx(oracle, rel=1e-12)


def test_beta_rejects_p_zero():
    a, b, obs = _setup(n=16)
    with pytest.raises(ValueError):
        compute_beta_comm(0, a, b, obs)


def test_alpha_commuting_is_zero():
    d1 = np.diag([1.0, 2.0]).astype(complex)
    d2 = np.diag([3.0, 4.0]).astype(complex)
    d3 = np.diag([5.0, 6.0]).astype(complex)
    assert compute_alpha_comm(1, 2, d1, d2, d3) == 0.0
    assert compute_alpha_tilde(1, d1, d3) == 0.0


def test_alpha_p1_hand_computed_sum():
    # plan (A, B), p = 1: compositions of 2 over two stages are
    # (2,0), (1,1), (0,2) with multinomial weights 1, 2, 1
    a, b, obs = _setup()
    expected = (
        spectral_norm(nested_comm(("A", "A"), a, b, obs))
        + 2.0 * spectral_norm(nested_comm(("A", "B"), a, b, obs))
        + spectral_norm(nested_comm(("B", "B"), a, b, obs))
    )
    assert compute_alpha_comm(1, 2, a, b, obs) == pytest.approx(expected, rel=1e-12)


def test_alpha_dominates_any_single_term():
    a, b, obs = _setup(n=32)
    alpha = compute_alpha_comm(2, 3, a, b, obs)
    single = spectral_norm(nested_comm(("A", "B", "A"), a, b, obs))
    assert alpha >= single


def test_alpha_tilde_2x2_hand_case():
    # H = diag(1, 2), O = [[0,1],[1,0]]: ad_H(O) = [[0,-1],[1,0]],
    # ad_H^2(O) = [[0,1],[1,0]], norm 1
    h = np.diag([1.0, 2.0]).astype(complex)
    obs = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    step1 = commutator(h, obs)
    assert np.array_equal(step1, np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert compute_alpha_tilde(1, h, obs) == pytest.approx(1.0, rel=1e-10)


def test_alpha_tilde_bounded_by_beta():
    a, b, obs = _setup(n=32)
    for p in (1, 2):
        alpha_tilde = compute_alpha_tilde(p, a + b, obs)
        beta = compute_beta_comm(p, a, b, obs)
        assert alpha_tilde <= 2 ** (p + 1) * beta * (1 + 1e-10)


def test_jacobi_identity_random():
    rng = np.random.default_rng(21)
    for _ in range(10):
        n = int(rng.integers(2, 33))
        x, y, z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(3))
        total = (
            commutator(x, commutator(y, z))
            + commutator(y, commutator(z, x))
            + commutator(z, commutator(x, y))
        )
        scale = spectral_norm(x) * spectral_norm(y) * spectral_norm(z)
        assert spectral_norm(total) <= 1e-9 * scale


def test_word_set_uniform_in_h_on_resolved_grid():
    # ht <= wd words stay O(1) while [A,B] grows like 1/h when N = 1/h
    words = (("A",), ("B", "A"), ("A", "B", "A"), ("A", "A", "B", "A"))
    hs = [2.0**-k for k in range(5, 9)]
    word_norms = {w: [] for w in words}
    ab_norms = []
    for h in hs:
        a, b, obs = _setup(h=h, n=round(1 / h))
        for w in words:
            word_norms[w].append(spectral_norm(nested_comm(w, a, b, obs)))
        ab_norms.append(spectral_norm(commutator(a, b)))
    log_h = np.log(hs)
    for w, norms in word_norms.items():
        slope = np.polyfit(log_h, np.log(norms), 1)[0]
        assert abs(slope) <= 0.15, f"word {w}: slope {slope}"
    ab_slope = np.polyfit(log_h, np.log(ab_norms), 1)[0]
    assert abs(ab_slope + 1.0) <= 0.1

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metarep.deform import (
    CERTIFY_GAP,
    certify_nonmetabelian,
    cochain_matrices,
    cochain_vector,
    cocycle_map,
    cocycle_spaces,
    jacobian_fd,
    min_metabelian_distance,
    newton_correct,
    newton_deform,
    probe_characters,
    probe_words,
    relator_residual,
    series_residuals,
    solve_formal,
    torus_cocycle_spaces,
)
from metarep.errors import InfiniteFamily, NewtonDiverged, ObstructionNonzero
from metarep.metab import metabelian_reps
from metarep.representation import float_rep

from conftest import knot


def first(name, n):
    p = knot(name)
    return p, metabelian_reps(p, n)[0][1]


def h1_direction(p, rep, k=0):
    sp = cocycle_spaces(p, rep)
    return sp, sp.H1[:, k]


# cocycle spaces ------------------------------------------------------------------------

@pytest.mark.parametrize("name,n,h1", [("4_1", 2, 1), ("4_1", 3, 2), ("3_1", 2, 1), ("3_1", 3, 2), ("5_2", 3, 2)])
def test_cocycle_dimensions(name, n, h1):
    p, rep = first(name, n)
    sp = cocycle_spaces(p, rep)
    assert sp.dims == {"Z1": n * n - 1 + h1, "B1": n * n - 1, "H1": h1}
    L = cocycle_map(p, rep.to_float())
    assert np.linalg.norm(L @ sp.Z1) < 1e-9
    assert np.linalg.norm(L @ sp.B1) < 1e-9
    assert np.linalg.norm(sp.B1.conj().T @ sp.H1) < 1e-9


def test_trivial_coefficients():
    p = knot("4_1")
    triv = float_rep([np.eye(1)] * p.num_generators)
    sp = cocycle_spaces(p, triv, adjoint=False)
    assert sp.dims == {"Z1": 1, "B1": 0, "H1": 1}


@pytest.mark.parametrize("name,n", [("4_1", 2), ("4_1", 3), ("5_2", 3)])
def test_torus_cocycles(name, n):
    p, rep = first(name, n)
    F = rep.to_float()
    sp = torus_cocycle_spaces(F(p.meridian), F(p.longitude))
    assert sp.dims["Z1"] == n * n + n - 2
    assert sp.dims["H1"] == 2 * (n - 1)


@settings(max_examples=25)
@given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_cochain_roundtrip(n, g, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=g * (n * n - 1)) + 1j * rng.normal(size=g * (n * n - 1))
    mats = cochain_matrices(v, n, g)
    assert all(abs(np.trace(M)) < 1e-12 for M in mats)
    assert np.allclose(cochain_vector(mats, n), v)


def test_jacobian_matches_finite_difference():
    p, rep = first("4_1", 3)
    L = cocycle_map(p, rep.to_float())
    J = jacobian_fd(p, rep)
    assert np.linalg.norm(J - L) <= 1e-6 * np.linalg.norm(L)


# formal series -----------------------------------------------------------------------------

@pytest.mark.parametrize("name,n,K", [("4_1", 2, 4), ("4_1", 3, 4), ("3_1", 2, 4), ("3_1", 3, 3), ("5_2", 3, 3)])
def test_formal_series(name, n, K):
    p, rep = first(name, n)
    _, a1 = h1_direction(p, rep)
    s = solve_formal(p, rep, a1, K)
    assert s.order == K and len(s.cochains) == K
    assert max(s.residuals) < 1e-9
    assert max(series_residuals(p, rep, s)) < 1e-9
    for layer in s.cochains:
        assert all(abs(np.trace(M)) < 1e-9 for M in layer)


def test_formal_rejects_non_cocycle():
    p, rep = first("4_1", 2)
    sp = cocycle_spaces(p, rep)
    L = cocycle_map(p, rep.to_float())
    _, _, vh = np.linalg.svd(L)
    bad = vh[0].conj()  # top right-singular vector, far from Z^1
    with pytest.raises(ObstructionNonzero) as e:
        solve_formal(p, rep, bad, 3)
    assert e.value.order == 1
    with pytest.raises(ValueError):
        solve_formal(p, rep, sp.H1[:, 0], 0)


def test_coboundary_direction_is_trivial_deformation():
    p, rep = first("4_1", 2)
    sp = cocycle_spaces(p, rep)
    s = solve_formal(p, rep, sp.B1[:, 0], 3)
    assert max(s.residuals) < 1e-9


# Newton ----------------------------------------------------------------------------------------

@pytest.mark.parametrize("name,n", [("4_1", 2), ("4_1", 3), ("3_1", 2), ("5_2", 3)])
def test_newton_deformation_certified(name, n):
    p, rep = first(name, n)
    _, a1 = h1_direction(p, rep)
    steps = newton_deform(p, rep, a1, steps=[0.02, 0.05])
    for st_ in steps:
        assert st_.residual <= 1e-10
        assert st_.iterations <= 50
        assert st_.rep.relator_residual(p) <= 1e-10
        assert all(abs(np.linalg.det(A) - 1) < 1e-10 for A in st_.rep.images)
        assert certify_nonmetabelian(st_.rep, p, n)


def test_t_zero_returns_the_representation():
    p, rep = first("4_1", 2)
    _, a1 = h1_direction(p, rep)
    (s0,) = newton_deform(p, rep, a1, steps=[0.0])
    assert s0.residual < 1e-12 and s0.iterations == 0
    F = rep.to_float()
    assert all(np.allclose(A, B) for A, B in zip(s0.rep.images, F.images))


def test_path_is_first_order_in_t():
    p, rep = first("4_1", 2)
    _, a1 = h1_direction(p, rep)
    words = probe_words(p.num_generators)
    base = probe_characters(rep, words)
    a, b = newton_deform(p, rep, a1, steps=[0.01, 0.02])
    da = np.linalg.norm(a.probe - base)
    db = np.linalg.norm(b.probe - base)
    # characters move at first or second order, never faster
    assert 1.5 < db / da < 4.5


def test_metabelian_reps_not_certified():
    p, rep = first("4_1", 3)
    assert not certify_nonmetabelian(rep, p, 3)
    C = np.array([[2, 1, 0], [0, 1, 0], [1, 0, 1]], dtype=complex)
    assert not certify_nonmetabelian(rep.conjugated(C), p, 3)
    words = probe_words(p.num_generators)
    assert min_metabelian_distance(probe_characters(rep, words), p, 3, words) < CERTIFY_GAP


def test_certify_infinite_family():
    p, rep = first("3_1", 2)
    with pytest.raises(InfiniteFamily):
        certify_nonmetabelian(rep, p, 6)


def test_newton_diverged():
    p, rep = first("4_1", 2)
    _, a1 = h1_direction(p, rep)
    F = rep.to_float()
    far = [np.array([[1, 3], [0, 1]], dtype=complex) @ A for A in F.images]
    assert relator_residual(p, far) > 1
    with pytest.raises(NewtonDiverged):
        newton_correct(p, far, a1, max_iter=0, t=0.5)


def test_all_h1_directions_continue():
    p, rep = first("4_1", 3)
    sp = cocycle_spaces(p, rep)
    for k in range(sp.H1.shape[1]):
        (step,) = newton_deform(p, rep, sp.H1[:, k], steps=[0.03])
        assert step.residual <= 1e-10


@pytest.mark.slow
def test_torus_2_9_rank_3_continues():
    p, rep = first("torus:2,9", 3)
    sp = cocycle_spaces(p, rep)
    assert sp.dims["H1"] == 2
    for step in newton_deform(p, rep, sp.H1[:, 0], steps=[0.02, 0.06]):
        assert step.residual <= 1e-10
        assert certify_nonmetabelian(step.rep, p, 3)

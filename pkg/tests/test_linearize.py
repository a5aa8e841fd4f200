import numpy as np
import pytest

from conftest import random_spectrum, random_weights
from oracles import linearized_complex_step
from soliton_forge.errors import UnequalMu, ZeroParameter
from soliton_forge.hirota import build
from soliton_forge.linearize import (analytic_kernel, block_operator, kernel_dimension,
                                     linearized_motion_constant, linearized_residual,
                                     rotation_kernel, sample, scalar_spectrum, tangent_vectors,
                                     translation_vector, vector_from)
from soliton_forge.numeric import GridSpec

X = np.linspace(-25, 25, 501)


def test_kernel_vectors_solve_linearized_system(rng):
    for n in (2, 3, 4):
        rep = build(random_spectrum(rng, n), random_weights(rng, n))
        for phi in analytic_kernel(rep):
            assert np.abs(linearized_residual(rep, phi, X)).max() < 1e-10


def test_tangent_vectors_fd():
    mu, a = (-3.0, -1.2, -0.5), np.array([1.0, -2.0, 0.8])
    rep = build(mu, a)
    h = 1e-6
    for j, phi in enumerate(tangent_vectors(rep)):
        ap, am = a.copy(), a.copy()
        ap[j] += h
        am[j] -= h
        fd = (build(mu, ap).profiles(X)[0] - build(mu, am).profiles(X)[0]) / (2 * h)
        assert np.allclose(phi.profiles(X)[0], fd, atol=1e-7)


def test_translation_is_derivative():
    rep = build((-2.0, -0.5), (1.0, 3.0))
    assert np.allclose(translation_vector(rep).profiles(X)[0], rep.profiles(X)[1], atol=1e-14)


def test_linearized_constants_against_complex_step(rng):
    for n in (2, 3, 4):
        mu = np.array(random_spectrum(rng, n))
        rep = build(tuple(mu), random_weights(rng, n))
        x = np.linspace(-4, 4, 9)
        u, du, _ = rep.profiles(x)
        # arbitrary direction, not a kernel vector: algebraic check
        phi = vector_from(rep, {0: (1, 0.3), n - 1: (0, -1.1)})
        p, dp, _ = phi.profiles(x)
        for k in range(1, n + 1):
            got = linearized_motion_constant(rep, phi, k, x)
            for m in range(len(x)):
                ref = linearized_complex_step(u[:, m], du[:, m], p[:, m], dp[:, m], mu, k)
                assert got[m] == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_linearized_constants_vanish_on_kernel(rng):
    rep = build(random_spectrum(rng, 3), random_weights(rng, 3))
    for phi in analytic_kernel(rep):
        for k in (1, 2, 3):
            assert np.abs(linearized_motion_constant(rep, phi, k, X)).max() < 1e-10


def test_case4_candidates():
    mu = (-1.0, -1.0, -1.0)
    # the rotation (-u3, 0, u1) is always in the kernel
    for a in ((1.0, 2.0, -1.5), (1.0, 4.0, 2.0), (2.0, 2.0, 2.0)):
        rep = build(mu, a)
        rot = rotation_kernel(rep, 0, 2)
        assert np.abs(linearized_residual(rep, rot, X)).max() < 1e-12
    # (-u2, 0, u3) only when a3^2 = a1 a2
    rep = build(mu, (1.0, 2.0, -1.5))
    cand = vector_from(rep, {0: (1, -1.0), 2: (2, 1.0)})
    assert np.abs(linearized_residual(rep, cand, X)).max() > 1e-2
    rep = build(mu, (1.0, 4.0, 2.0))
    cand = vector_from(rep, {0: (1, -1.0), 2: (2, 1.0)})
    assert np.abs(linearized_residual(rep, cand, X)).max() < 1e-12


def test_errors():
    with pytest.raises(ZeroParameter):
        tangent_vectors(build((-1.0, -0.5), (0.0, 1.0)))
    with pytest.raises(UnequalMu):
        rotation_kernel(build((-1.0, -0.5), (1.0, 1.0)), 0, 1)


def test_block_operator_symmetric_and_kills_kernel():
    rep = build((-2.0, -1.0), (1.0, -1.0))
    grid = GridSpec(25.0, 801)
    H = block_operator(rep, grid)
    assert abs(H - H.T).max() == 0
    v = sample(translation_vector(rep), grid)
    assert np.linalg.norm(H @ v) / np.linalg.norm(v) < 1e-3


@pytest.mark.parametrize("mu", [
    (-4.0, -2.0, -1.0), (-2.0, -2.0, -0.5), (-3.0, -0.7, -0.7), (-1.0, -1.0, -1.0),
    (-2.0, -0.6), (-1.0, -1.0),
])
def test_kernel_dimension(mu):
    n = len(mu)
    rep = build(mu, tuple(1.0 + 0.5 * k for k in range(n)))
    rep_ = kernel_dimension(rep, GridSpec(25.0 / rep.spectrum.eta_min, 1201))
    assert rep_.discrete_kernel_dim == n == rep_.analytic_rank
    assert rep_.max_subspace_angle < 1e-3 and rep_.gap_ratio > 1e2


def test_scalar_spectrum_recovers_potentials():
    rep = build((-4.0, -2.25, -1.0), (1.0, -1.0, 1.0))
    w = scalar_spectrum(rep, 4)
    assert np.allclose(w[:3], (-4.0, -2.25, -1.0), atol=1e-4)
    assert w[3] > -1e-3

import numpy as np
import pytest

from conftest import random_spectrum, random_weights
from oracles import motion_direct, motion_n3_table
from soliton_forge.classify import DegenerateCase, degenerate_build
from soliton_forge.errors import IndexOutOfRange, OrderOutOfRange
from soliton_forge.hirota import SolitonParams, Spectrum, build
from soliton_forge.invariants import (antiderivative_defect, energy, esym, lieb_thirring_gap,
                                      mass, motion_constant, motion_report, motion_terms)


def test_esym():
    v = [2.0, 3.0, 5.0]
    assert [esym(v, m) for m in range(-1, 5)] == [0.0, 1.0, 10.0, 31.0, 30.0, 0.0]


def test_motion_terms_match_direct_enumeration(rng):
    # arbitrary (u, u') data, not on a solution: pure algebra check
    for n in (2, 3, 4, 5):
        mu = np.array(random_spectrum(rng, n))
        u, du = rng.normal(size=(2, n))
        for k in range(1, n + 1):
            ref = motion_direct(u, du, mu, k)

            class Fake:
                spectrum = Spectrum(tuple(mu))

                def profiles(self, x):
                    return np.stack([u[:, None], du[:, None], np.zeros((n, 1))])

            Fake.n = n
            got = motion_terms(Fake(), k, [0.0]).sum()
            assert got == pytest.approx(ref, rel=1e-12, abs=1e-12)


def test_three_component_table(rng):
    for _ in range(5):
        mu = np.array(random_spectrum(rng, 3))
        u, du = rng.normal(size=(2, 3))
        table = motion_n3_table(u, du, mu)
        direct = [motion_direct(u, du, mu, k) for k in (1, 2, 3)]
        assert np.allclose(table, direct, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_motion_constants_vanish(rng, n):
    rep = build(random_spectrum(rng, n), random_weights(rng, n))
    for k in range(1, n + 1):
        assert motion_report(rep, k).relative < 1e-10


def test_motion_order_range():
    rep = build((-1.0, -0.5), (1.0, 1.0))
    with pytest.raises(OrderOutOfRange):
        motion_constant(rep, 3, [0.0])
    with pytest.raises(OrderOutOfRange):
        motion_constant(rep, 0, [0.0])


def test_masses_known_instance():
    rep = build((-4.0, -2.25, -1.0), (1.0, 1.0, 1.0))
    for i, m in enumerate((4.0, 3.0, 2.0)):
        assert mass(rep, i) == pytest.approx(m, abs=1e-12)
        assert mass(rep, i, method="quadrature") == pytest.approx(m, abs=1e-8)
    assert abs(lieb_thirring_gap(rep)) < 1e-8


def test_mass_errors_and_zero_weight():
    rep = build((-4.0, -1.0), (0.0, 1.0))
    assert mass(rep, 0) == 0.0 and mass(rep, 1) == pytest.approx(2.0)
    with pytest.raises(IndexOutOfRange):
        mass(rep, 2)
    with pytest.raises(ValueError):
        mass(rep, 1, method="simpson")


def test_antiderivative_identity_exact(rng):
    for n in (2, 3, 4):
        rep = build(random_spectrum(rng, n), random_weights(rng, n))
        x = np.linspace(-20, 20, 201)
        for i in range(n):
            assert np.abs(antiderivative_defect(rep, i)(x)).max() < 1e-12


def test_degenerate_grouped_masses():
    sp = Spectrum((-2.0, -2.0, -0.5))
    rep = degenerate_build(DegenerateCase.EQ12, sp, SolitonParams((1.0, -2.0, 0.7)))
    e = sp.eta
    assert mass(rep, 0) + mass(rep, 1) == pytest.approx(2 * e[0], abs=1e-10)
    assert mass(rep, 2) == pytest.approx(2 * e[2], abs=1e-10)
    for i in range(3):
        assert mass(rep, i) == pytest.approx(mass(rep, i, method="quadrature"), abs=1e-8)
        x = np.linspace(-30, 30, 121)
        assert np.abs(antiderivative_defect(rep, i)(x)).max() < 1e-12


def test_energy_weighted_identity(rng):
    # kinetic = -(1/3) sum mu_j m_j and quartic = twice that, for any decaying solution
    for _ in range(3):
        mu = random_spectrum(rng, 3)
        rep = build(mu, random_weights(rng, 3))
        w = -sum(m * mass(rep, j) for j, m in enumerate(mu)) / 3
        en = energy(rep)
        assert en.kinetic == pytest.approx(w, abs=1e-7)
        assert en.quartic == pytest.approx(2 * w, abs=1e-7)
        assert en.total == pytest.approx(-w, abs=1e-7)


def test_energy_frozen_value():
    # masses (4, 3, 2): kinetic = (16 + 6.75 + 2) / 3 = 8.25
    en = energy(build((-4.0, -2.25, -1.0), (1.0, 1.0, 1.0)))
    assert en.kinetic == pytest.approx(8.25, abs=1e-8)
    assert en.quartic == pytest.approx(16.5, abs=1e-8)

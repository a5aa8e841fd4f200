import numpy as np
import pytest

from conftest import random_spectrum, random_weights
from oracles import golden_max
from soliton_forge.classify import (BRANCH_SIGNS, FAMILY_MU, UNIQUE_MU, DegenerateCase, Family,
                                    Unique, count_preimages, curve_points, degenerate_build,
                                    f_max_closed, f_of_angle, f_of_p, initial_data, curve_residual,
                                    ratio_residual, sign_orbit, normalized_solutions, p_bounds,
                                    p_max_arg, pole_of, q_of, slopes_at_zero, trace_branch,
                                    u1_sq_at_zero, u1p_sq_at_zero)
from soliton_forge.errors import CaseMismatch, InvalidSpectrum, PoleAtP, ZeroRatio
from soliton_forge.hirota import SolitonParams, Spectrum, build, build_solution
from soliton_forge.invariants import mass

SP = Spectrum((-4.0, -2.0, -1.0))


def _random_q(rng):
    return float(rng.choice([-1, 1]) * np.exp(rng.uniform(-1.5, 1.5)))


# -- degenerate closed forms ---------------------------------------------------------

@pytest.mark.parametrize("case, mu", [
    (DegenerateCase.EQ12, (-2.0, -2.0, -0.5)),
    (DegenerateCase.EQ23, (-3.0, -0.7, -0.7)),
    (DegenerateCase.EQ123, (-1.3, -1.3, -1.3)),
])
def test_degenerate_matches_general(case, mu, rng):
    sp = Spectrum(mu)
    x = np.linspace(-30, 30, 601)
    for _ in range(5):
        p = SolitonParams(random_weights(rng, 3))
        a = degenerate_build(case, sp, p).profiles(x)
        b = build_solution(sp, p).profiles(x)
        assert np.abs(a - b).max() < 1e-12


def test_degenerate_case_mismatch():
    with pytest.raises(CaseMismatch):
        degenerate_build("eq12", SP, SolitonParams((1.0, 1.0, 1.0)))


# -- normalized solutions ------------------------------------------------------------

def test_unique_normalized():
    res = normalized_solutions(Spectrum(UNIQUE_MU))
    assert isinstance(res, Unique)
    rep = build_solution(Spectrum(UNIQUE_MU), res.params)
    assert np.allclose(rep.profiles([0.0])[0, :, 0], np.sqrt(3) / 2, atol=1e-14)
    assert [mass(rep, i) for i in range(3)] == pytest.approx([1, 1, 1], abs=1e-12)


def test_family_normalized(rng):
    sp = Spectrum(FAMILY_MU)
    fam = normalized_solutions(sp)
    assert isinstance(fam, Family)
    for _ in range(5):
        A, B = rng.uniform(0.1, 5, 2) * rng.choice([-1, 1], 2)
        rep = build_solution(sp, fam.params(A, B, sign=rng.choice([-1, 1])))
        assert [mass(rep, i, "quadrature") for i in range(3)] == pytest.approx([1, 1, 1], abs=1e-8)
    with pytest.raises(ValueError):
        fam.params(0.0, 1.0)


def test_normalized_none(rng):
    for _ in range(200):
        assert normalized_solutions(Spectrum(random_spectrum(rng, 3, gap=0))) is None
    assert normalized_solutions(Spectrum((-2.25, -2.25, -2.2))) is None
    with pytest.raises(CaseMismatch):
        normalized_solutions(Spectrum((-1.0, -0.5)))


# -- f(p) ----------------------------------------------------------------------------

def test_p_bounds_frozen():
    # exact roots -9/11 +- 4 sqrt(14)/11 (sympy)
    b = p_bounds(SP, 1.0)
    assert b.p_low == pytest.approx(-2.1787845042814332311, abs=1e-12)
    assert b.p_high == pytest.approx(0.54242086791779686748, abs=1e-12)
    assert b.f_max == pytest.approx(1.6, abs=1e-14) and not b.wraps


def test_p_bounds_wrapping():
    # mpmath: roots 0.12045305718567113043 and 0.74631296367871038969, f(inf) > 0
    sp = Spectrum((-3.0, -2.0, -1.0))
    b = p_bounds(sp, 0.2)
    assert b.wraps
    assert b.p_low == pytest.approx(0.12045305718567113043, abs=1e-12)
    assert b.p_high == pytest.approx(0.74631296367871038969, abs=1e-12)
    assert f_of_angle(sp, 0.2, np.pi / 2) == pytest.approx(0.99407, abs=1e-5)
    assert b.contains(10.0) and b.contains(-10.0) and not b.contains(0.4)
    assert not b.contains(pole_of(sp, 0.2)) and b.p_low < pole_of(sp, 0.2) < b.p_high


def test_p_bounds_non_wrapping_negative_q():
    b = p_bounds(SP, -3.0)
    assert not b.wraps
    assert b.p_low == pytest.approx(-1.7781618040460484468, abs=1e-12)
    assert b.p_high == pytest.approx(3.3390838677123492152, abs=1e-12)
    assert not b.p_low < pole_of(SP, -3.0) < b.p_high


def test_f_max_against_golden_section(rng):
    for _ in range(10):
        sp = Spectrum(random_spectrum(rng, 3))
        q = _random_q(rng)
        b = p_bounds(sp, q)
        pstar = p_max_arg(sp, q)
        _, fm = golden_max(lambda t: f_of_angle(sp, q, t), np.arctan(pstar) - 1.0, np.arctan(pstar) + 1.0)
        assert fm == pytest.approx(f_max_closed(sp, q), rel=1e-10)
        assert b.f_max == pytest.approx(f_max_closed(sp, q), rel=1e-12)
        assert f_of_p(sp, q, b.p_low) == pytest.approx(0, abs=1e-9 * b.f_max)
        assert np.all(f_of_angle(sp, q, np.arctan(b.interior(np.linspace(0.01, 0.99, 50)))) > 0)


def test_f_errors():
    with pytest.raises(ZeroRatio):
        f_of_p(SP, 0.0, 1.0)
    with pytest.raises(PoleAtP):
        f_of_p(SP, 1.0, pole_of(SP, 1.0))
    with pytest.raises(InvalidSpectrum):
        f_of_p(Spectrum((-2.0, -2.0, -1.0)), 1.0, 0.0)


# -- curve S and preimages -----------------------------------------------------------

def test_curve_points_frozen():
    pts = curve_points(SP, 1.0)
    assert pts["inner"] == pytest.approx((1.527732644956330265900678, 4.345963110091509551828175), rel=1e-12)
    assert pts["outer"] == pytest.approx((45.78099821841113121611674, -31.26631486548614442376659), rel=1e-11)


def test_q_independent_of_z(rng):
    for _ in range(5):
        sp = Spectrum(random_spectrum(rng, 3))
        q = _random_q(rng)
        for X, Y in curve_points(sp, q).values():
            assert abs(curve_residual(sp, X, Y)) < 1e-12
            for Z in (1e-3, 0.5, 7.0, 300.0):
                assert abs(ratio_residual(sp, X, Y, Z, q)) < 1e-10 * max(1, abs(q))


def test_branch_points_are_solutions(rng):
    sp = Spectrum(random_spectrum(rng, 3))
    q = _random_q(rng)
    b = p_bounds(sp, q)
    for branch in trace_branch(sp, q, n_points=15):
        for pt in branch[3:-3]:
            rep = build_solution(sp, SolitonParams(tuple(np.asarray(sp.eta) * (pt.X, pt.Y, pt.Z))))
            u, du = rep.profiles([0.0])[:2, :, 0]
            assert abs(u[2]) < 1e-12 and u[1] / u[0] == pytest.approx(q, rel=1e-10)
            assert du[1] / du[0] == pytest.approx(pt.p, rel=1e-10)
            # the closed forms for u1(0)^2, u1'(0)^2 and f against the built solution
            assert u[0] ** 2 == pytest.approx(u1_sq_at_zero(sp, q), rel=1e-9)
            assert du[0] ** 2 == pytest.approx(u1p_sq_at_zero(sp, q, pt.p), rel=1e-7, abs=1e-12)
            assert du[2] ** 2 / u[0] ** 2 == pytest.approx(f_of_p(sp, q, pt.p), rel=1e-7, abs=1e-10)
            assert b.contains(pt.p)


def test_trace_branch_shape():
    br = trace_branch(SP, 1.0, n_points=11)
    assert len(br) == len(BRANCH_SIGNS) == 4
    assert all(len(b) == 11 for b in br)
    X, Y = curve_points(SP, 1.0)["inner"]
    assert (br[2][0].X, br[2][0].Y) == (-X, -Y) and br[1][0].Z < 0
    with pytest.raises(ValueError):
        trace_branch(SP, 1.0, family="middle")


def test_mirror_orbit_is_reflection():
    pre = count_preimages(SP, 1.0, -1.0)
    assert pre.count == 4 and len(pre.mirror_triples) == 4
    x = np.linspace(-6, 6, 61)
    for a, b in zip(pre.triples, pre.mirror_triples):
        u = build(SP.mu, a).profiles(x)[0]
        v = build(SP.mu, b).profiles(-x)[0]
        assert np.abs(u - v).max() < 1e-9


def test_preimages_orbit_and_outside():
    pre = count_preimages(SP, 1.0, 0.0)
    data = [initial_data(build(SP.mu, a)) for a in pre.triples]
    orbit = sign_orbit(data[0])
    for d in data:
        assert min(np.abs(d - o).max() for o in orbit) < 1e-9
    assert count_preimages(SP, 1.0, 2.0).count == 0


def test_q_of_matches_built_solution():
    X, Y, Z = 0.7, -1.3, 2.1
    rep = build_solution(SP, SolitonParams(tuple(np.asarray(SP.eta) * (X, Y, Z))))
    u = rep.profiles([0.0])[0, :, 0]
    assert q_of(SP, X, Y, Z) == pytest.approx(u[1] / u[0], rel=1e-13)
    assert np.allclose(slopes_at_zero(SP, X, Y, Z), rep.profiles([0.0])[1, :, 0])

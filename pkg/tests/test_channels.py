import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unruh_coherence import channels
from unruh_coherence.channels import (InvalidChannelError, bloch_state, bloch_vector, cohering_power_z,
                                      decohering_power_closed, decohering_power_z, f_measure, unruh_channel)
from unruh_coherence.reductions import density_defects
from unruh_coherence.smallmat import random_density_matrices
from unruh_coherence.states import R_MAX

PI4 = math.pi / 4
COMBOS = [(f, s) for f in ("plus", "minus") for s in ("particle", "antiparticle")]
HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def grid(n):
    return np.meshgrid(np.linspace(0, R_MAX, n), np.linspace(0, 1, n), indexing="ij")


def brute_force_D(ch, n=20000):
    """1 - min F over a dense equatorial scan, no refinement."""
    phi = np.linspace(0, 2 * math.pi, n, endpoint=False)
    m = np.stack([np.cos(phi), np.sin(phi), np.zeros(n)], axis=-1)
    return 1 - np.min(f_measure(ch, m))


def test_reference_outputs_plus_particle():
    for r in np.linspace(0, R_MAX, 5):
        for q in (0.0, 0.3, 1.0):
            ch = unruh_channel(r, q, "particle")
            q_L2 = 1 - q * q
            c2, s2 = math.cos(r) ** 2, math.sin(r) ** 2
            assert np.abs(ch.apply(np.diag([1.0, 0.0])) - np.diag([c2, s2])).max() <= 1e-14
            assert np.abs(ch.apply(np.diag([0.0, 1.0])) - np.diag([q_L2 * c2, q_L2 * s2 + q * q])).max() <= 1e-14
            for phi in (0.0, 0.7, 2.5):
                ket = np.array([1, np.exp(1j * phi)]) / math.sqrt(2)
                m = bloch_vector(ch.apply(np.outer(ket, ket.conj())))
                expected = [q * math.cos(phi) * math.cos(r), q * math.sin(phi) * math.cos(r), q_L2 * c2 - s2]
                assert np.abs(m - expected).max() <= 1e-14


@pytest.mark.parametrize("fam,sector", COMBOS)
@pytest.mark.parametrize("conv", ["printed", "swapped"])
def test_channel_validity_on_grid(fam, sector, conv):
    r, q = grid(32)
    ch = unruh_channel(r, q, sector, fam, conv)
    assert np.abs(np.conj(np.swapaxes(ch.isometry, -1, -2)) @ ch.isometry - np.eye(2)).max() <= 1e-12
    rho = random_density_matrices(np.random.default_rng(7), 256, 2)
    out = ch.apply(rho[:, None, None])
    assert density_defects(out) == []
    model = ch.affine(bloch_vector(rho)[:, None, None])
    assert np.abs(bloch_vector(out) - model).max() <= 1e-11


def test_bloch_round_trip():
    rho = random_density_matrices(np.random.default_rng(8), 20, 2)
    assert np.abs(bloch_state(bloch_vector(rho)) - rho).max() <= 1e-15


def test_isometry_validation():
    with pytest.raises(InvalidChannelError):
        channels.QubitChannel(np.ones((4, 2)), 0)
    with pytest.raises(InvalidChannelError):
        channels.QubitChannel(np.eye(4)[:, :2], 3)


def test_f_measure_examples():
    ident = channels.identity_channel()
    assert f_measure(ident, [1.0, 0.0, 0.0]) == pytest.approx(1.0, abs=1e-15)
    assert f_measure(ident, [0.0, 0.0, 1.0]) == pytest.approx(0.0, abs=1e-15)
    dep = channels.depolarizing_channel()
    for m in ([1.0, 0, 0], [0, 0, 1.0], [0, 0.6, 0.8]):
        assert f_measure(dep, m) == 0.0


def test_f_measure_rejects_non_unit_input():
    with pytest.raises(ValueError):
        f_measure(channels.identity_channel(), [0.5, 0, 0])


@given(st.floats(0, R_MAX), st.floats(0, 1), st.floats(0, 2 * math.pi), st.floats(-1, 1),
       st.sampled_from(COMBOS))
def test_f_in_unit_interval(r, q, phi, z, combo):
    ch = unruh_channel(r, q, combo[1], combo[0])
    rho_xy = math.sqrt(1 - z * z)
    f = f_measure(ch, [rho_xy * math.cos(phi), rho_xy * math.sin(phi), z])
    assert 0.0 <= f <= 1.0


@pytest.mark.parametrize("fam,sector", COMBOS)
def test_f_flat_on_equator(fam, sector):
    r, q = grid(16)
    ch = unruh_channel(r, q, sector, fam)
    phi = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    m = np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)], axis=-1)[:, None, None]
    f = f_measure(ch, m)
    assert np.max(f.max(axis=0) - f.min(axis=0)) <= 1e-11


def test_cohering_power_examples():
    assert cohering_power_z(channels.identity_channel()) == 0.0
    had = channels.unitary_channel(HADAMARD, "hadamard")
    assert cohering_power_z(had) == pytest.approx(1.0, abs=1e-12)
    assert channels.cohering_power_definition(had) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("fam,sector", COMBOS)
def test_unruh_cohering_power_vanishes(fam, sector):
    r, q = grid(32)
    ch = unruh_channel(r, q, sector, fam)
    assert np.abs(cohering_power_z(ch)).max() <= 1e-12
    assert np.abs(channels.cohering_power_definition(ch)).max() <= 1e-12


def test_decohering_power_examples():
    assert decohering_power_z(channels.identity_channel()) == pytest.approx(0.0, abs=1e-12)
    assert decohering_power_z(channels.depolarizing_channel()) == pytest.approx(1.0, abs=1e-12)
    assert decohering_power_z(unruh_channel(0.0, 0.37, "antiparticle")) == pytest.approx(1.0, abs=1e-12)
    assert decohering_power_z(unruh_channel(PI4, 1.0, "particle")) == pytest.approx(2 / 3, abs=1e-12)
    assert decohering_power_z(unruh_channel(0.0, 1.0, "particle")) == pytest.approx(0.0, abs=1e-12)


def test_closed_form_examples():
    assert decohering_power_closed(0.0, 1.0, "plus", "particle") == pytest.approx(0.0, abs=1e-15)
    assert decohering_power_closed(PI4, 1.0, "plus", "particle") == pytest.approx(2 / 3, abs=1e-15)
    for q in (0.0, 0.4, 1.0):
        assert decohering_power_closed(0.0, q, "plus", "antiparticle") == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("fam,sector", COMBOS)
def test_definition_matches_closed_form(fam, sector):
    r, q = grid(32)
    d = decohering_power_z(unruh_channel(r, q, sector, fam))
    assert np.abs(d - decohering_power_closed(r, q, fam, sector)).max() <= 1e-9


@pytest.mark.parametrize("fam,sector", COMBOS)
def test_definition_matches_brute_force_scan(fam, sector):
    for r, q in [(0.1, 0.2), (0.5, 0.9), (R_MAX, 0.5)]:
        ch = unruh_channel(r, q, sector, fam)
        assert decohering_power_z(ch) == pytest.approx(brute_force_D(ch), abs=1e-12)


def test_generic_channel_needs_the_minimisation():
    # a tilted unitary makes F depend on phi, so the scan + refinement has work to do
    t = 0.4
    U = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]]) @ np.diag([1, np.exp(0.3j)])
    ch = channels.unitary_channel(U)
    d = decohering_power_z(ch)
    assert d == pytest.approx(brute_force_D(ch, 200000), abs=1e-9)
    # minimum F is cos^2(2t) from the input tilted furthest towards the pole
    assert d == pytest.approx(1 - math.cos(2 * t) ** 2, abs=1e-12)


def test_golden_section_vectorised():
    a = np.array([0.0, -1.0])
    x, fx = channels.golden_section_min(lambda p: (p - np.array([0.3, -0.2])) ** 2, a, a + 2)
    assert np.allclose(x, [0.3, -0.2], atol=1e-9) and np.all(fx <= 1e-17)


def test_printed_minus_diverges_from_reference_closed_form():
    r, q = grid(8)
    d = decohering_power_z(unruh_channel(r, q, "particle", "minus", "printed"))
    assert np.abs(d - decohering_power_closed(r, q, "minus", "particle")).max() > 1e-3


def test_decohering_trends_as_computed():
    # directions measured from both the definition and the closed forms on a 64x64 grid
    r, q = grid(64)
    expect = {("plus", "particle"): (+1, -1), ("plus", "antiparticle"): (-1, +1),
              ("minus", "particle"): (-1, -1), ("minus", "antiparticle"): (+1, +1)}
    for (fam, sector), (sign_r, sign_q) in expect.items():
        d = decohering_power_closed(r, q, fam, sector)
        assert np.all(sign_r * np.diff(d, axis=0) >= -1e-12), (fam, sector, "r")
        assert np.all(sign_q * np.diff(d, axis=1) >= -1e-12), (fam, sector, "q_R")


def test_identity_limit_is_minimal():
    # D >= 0 with D = 0 at the identity point forces D to fall towards q_R = 1 at r = 0
    q = np.linspace(0, 1, 11)
    d = decohering_power_z(unruh_channel(np.zeros_like(q), q, "particle"))
    assert d[-1] == pytest.approx(0.0, abs=1e-12) and d[0] == pytest.approx(1.0, abs=1e-12)

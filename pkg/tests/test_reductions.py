import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import loop_partial_trace, printed_region_I, printed_region_II, printed_sector
from unruh_coherence import reductions, states
from unruh_coherence.reductions import DensityMatrix, InvalidDensityMatrix, Sector, reduce
from unruh_coherence.states import R_MAX, THETA_MAX, UnruhParams, initial_state


def test_sector_parsing():
    assert Sector.parse("region1") is Sector.region_I
    assert Sector.parse("antiparticle_I") is Sector.antiparticle_I
    assert Sector.parse(Sector.particle_I) is Sector.particle_I
    with pytest.raises(ValueError):
        Sector.parse("region3")
    assert [s.dim for s in Sector] == [2, 2, 4, 4]


def test_particle_sector_matches_reference_matrix():
    p = UnruhParams(0.3, 0.7, math.pi / 4)
    rho = reduce(initial_state(p), "particle").data
    assert np.abs(rho - printed_sector(0.3, 0.7, math.pi / 4, "particle")).max() <= 1e-12


@given(st.floats(0, R_MAX), st.floats(0, 1), st.floats(0, THETA_MAX), st.sampled_from(["particle", "antiparticle"]))
def test_sector_closed_form_any_theta(r, q, t, sector):
    p = UnruhParams(r, q, t)
    pipe = reduce(initial_state(p), sector).data
    assert np.abs(pipe - printed_sector(r, q, t, sector)).max() <= 1e-12
    assert np.abs(pipe - reductions.closed_form_sector(p, sector).data).max() <= 1e-12


def test_region_I_maximal_coherent_pure_state():
    rho = reduce(initial_state(UnruhParams(0.0, 1.0)), "region1").data
    v = np.array([1, 0, 1, 0]) / math.sqrt(2)
    assert np.abs(rho - np.outer(v, v)).max() <= 1e-15


@pytest.mark.parametrize("r,q", [(0.4, 0.3), (0.1, 0.9), (R_MAX, 0.5), (0.0, 0.0)])
def test_region_matrices_match_reference(r, q):
    psi = initial_state(UnruhParams(r, q))
    assert np.abs(reduce(psi, "region1").data - printed_region_I(r, q)).max() <= 1e-12
    assert np.abs(reduce(psi, "region2").data - printed_region_II(r, q)).max() <= 1e-12


@pytest.mark.parametrize("sector", list(Sector))
def test_direct_contraction_vs_loop_oracle(sector):
    psi = initial_state(UnruhParams(0.37, 0.55, 0.6, "minus", "printed"))
    expected = loop_partial_trace(psi.density(), reductions.KEEP[sector], 4)
    assert np.abs(reductions.reduce_amplitudes(psi.amplitudes, sector) - expected).max() <= 1e-15


def test_antiparticle_sector_at_single_mode():
    for r in np.linspace(0, R_MAX, 5):
        for t in (0.0, 0.4, THETA_MAX):
            rho = reduce(initial_state(UnruhParams(r, 1.0, t)), "antiparticle").data
            assert np.abs(rho - np.diag([math.cos(r) ** 2, math.sin(r) ** 2])).max() <= 1e-15


@given(st.floats(0, R_MAX), st.floats(0, 1), st.floats(0, THETA_MAX),
       st.sampled_from(states.FAMILIES), st.sampled_from(states.CONVENTIONS), st.sampled_from(list(Sector)))
def test_reduced_states_are_valid(r, q, t, fam, conv, sector):
    rho = reduce(initial_state(UnruhParams(r, q, t, fam, conv)), sector)
    assert abs(np.trace(rho.data) - 1) <= 1e-12
    assert 1 / rho.dim - 1e-12 <= rho.purity() <= 1 + 1e-12


def test_closed_form_refuses_minus():
    with pytest.raises(NotImplementedError, match="pipeline|reduce"):
        reductions.closed_form_sector(UnruhParams(0.2, 0.3, family="minus"), "particle")


@pytest.mark.parametrize("bad", [
    np.diag([0.5, 0.6]),                    # trace
    np.array([[0.5, 0.1], [0.2, 0.5]]),     # Hermiticity
    np.diag([1.2, -0.2]),                   # positivity
    np.eye(3) / 3,                          # dimension
])
def test_density_matrix_validation(bad):
    with pytest.raises(InvalidDensityMatrix):
        DensityMatrix(bad)


def test_density_matrix_is_read_only():
    rho = DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.data[0, 0] = 1.0

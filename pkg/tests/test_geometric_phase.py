import math

import numpy as np
import pytest

from bath import BathParams
from davies import QubitParams, build_generator, gibbs_state
from evolution import IntegratorConfig, Trajectory, evolve, initial_state
from geometric_phase import (
    PhaseWindow,
    free_phase,
    geometric_phase,
    phase_representative,
    spectral_track,
)
from qubit_algebra import (
    BlochVector,
    BranchAmbiguityError,
    DegeneratePhaseError,
    VanishingVisibilityError,
    bloch_to_density,
)

BATH_T0 = BathParams(alpha=1e-2, omega_c=1e2, temperature=0.0)


def circular_gap(a: float, b: float) -> float:
    return abs(phase_representative(a - b, PhaseWindow.MINUS_PI_TO_PI))


def bloch_path(*vectors) -> Trajectory:
    states = np.stack([bloch_to_density(BlochVector(*v)).matrix for v in vectors])
    return Trajectory(times=np.arange(len(vectors), dtype=float), states=states)


def phase_of(theta: float, q: QubitParams, bath: BathParams = BATH_T0, steps: int = 2000, **kwargs):
    g = build_generator(q, bath)
    traj = evolve(initial_state(theta), g, IntegratorConfig(steps_per_period=steps))
    return geometric_phase(spectral_track(traj), **kwargs)


def test_free_phase_examples():
    assert free_phase(math.pi / 2) == pytest.approx(math.pi)
    assert free_phase(math.pi) == pytest.approx(0.0)
    assert free_phase(0.0) == 0.0


def test_phase_representative_windows():
    assert phase_representative(1.5 * math.pi, PhaseWindow.MINUS_PI_TO_PI) == pytest.approx(-0.5 * math.pi)
    assert phase_representative(-0.1, PhaseWindow.ZERO_TO_2PI) == pytest.approx(2.0 * math.pi - 0.1)
    assert phase_representative(math.pi, PhaseWindow.ZERO_TO_2PI) == pytest.approx(math.pi)
    assert phase_representative(math.pi, PhaseWindow.MINUS_PI_TO_PI) == pytest.approx(math.pi)
    assert phase_representative(-math.pi, PhaseWindow.MINUS_PI_TO_PI) == pytest.approx(math.pi)
    assert phase_representative(2.0 * math.pi, "zero2pi") == 0.0
    assert 0.0 <= phase_representative(-1e-18, PhaseWindow.ZERO_TO_2PI) < 2.0 * math.pi


def test_phase_window_parse():
    assert PhaseWindow.parse("pmpi") is PhaseWindow.MINUS_PI_TO_PI
    assert PhaseWindow.parse("zero_to_2pi") is PhaseWindow.ZERO_TO_2PI
    with pytest.raises(ValueError):
        PhaseWindow.parse("degrees")


@pytest.mark.parametrize("theta, expected", [(math.pi / 2, math.pi), (math.pi / 3, 1.5 * math.pi)])
def test_free_qubit_phase_matches_closed_form(theta, expected):
    result = phase_of(theta, QubitParams())
    assert circular_gap(result.phi, expected) < 1e-6
    assert result.magnitude == pytest.approx(1.0, abs=1e-9)
    assert result.branch_count == 1


def test_unitary_limit_over_theta_grid():
    for theta in np.linspace(0.0, math.pi, 50):
        result = phase_of(float(theta), QubitParams())
        assert circular_gap(result.phi, free_phase(float(theta))) < 1e-6


def test_result_respects_window():
    result = phase_of(math.pi / 3, QubitParams(), window=PhaseWindow.MINUS_PI_TO_PI)
    assert result.window is PhaseWindow.MINUS_PI_TO_PI
    assert result.phi == pytest.approx(-0.5 * math.pi, abs=1e-6)


def test_excited_state_under_dephasing_has_no_phase():
    warm = BathParams(alpha=1e-2, omega_c=1e2, temperature=0.5)
    result = phase_of(0.0, QubitParams(mu_z=0.5), warm)
    assert circular_gap(result.phi, 0.0) < 1e-12


def test_phase_is_gauge_invariant():
    g = build_generator(QubitParams(mu_x=0.3), BATH_T0)
    st = spectral_track(evolve(initial_state(math.pi / 2), g, IntegratorConfig()))
    reference = geometric_phase(st).phi
    rng = np.random.default_rng(3)
    t = st.times[:, np.newaxis] / st.times[-1]
    for _ in range(20):
        amplitude, frequency, offset, drift = rng.uniform(-3.0, 3.0, size=(4, 2))
        phases = amplitude * np.sin(2.0 * math.pi * frequency * t + offset) + drift * t
        assert circular_gap(geometric_phase(st.rephased(phases)).phi, reference) < 1e-10


def test_empty_branch_does_not_change_phase():
    g = build_generator(QubitParams(mu_x=0.3), BATH_T0)
    st = spectral_track(evolve(initial_state(1.0), g, IntegratorConfig()))
    assert st.p[0, 1] < 1e-12
    dropped = geometric_phase(st, drop_empty_branches=True)
    kept = geometric_phase(st, drop_empty_branches=False)
    assert dropped.phi == kept.phi
    assert dropped.branch_count == 1
    assert kept.branch_count == 2


def test_phase_converges_with_sampling():
    coarse = phase_of(math.pi / 2, QubitParams(mu_x=0.3), steps=2000).phi
    fine = phase_of(math.pi / 2, QubitParams(mu_x=0.3), steps=4000).phi
    assert circular_gap(coarse, fine) < 1e-7


def test_dephasing_antisymmetry():
    warm = BathParams(alpha=1e-2, omega_c=1e2, temperature=0.5)
    q = QubitParams(mu_z=0.5)
    for theta in (0.3, 1.2):
        total = phase_of(math.pi / 2 + theta, q, warm).phi + phase_of(math.pi / 2 - theta, q, warm).phi
        assert circular_gap(total, 2.0 * math.pi) < 1e-4


def test_free_pure_state_keeps_its_eigenvalues():
    g = build_generator(QubitParams(), BATH_T0)
    st = spectral_track(evolve(initial_state(math.pi / 2), g, IntegratorConfig()))
    assert np.allclose(st.p, [[1.0, 0.0]], atol=1e-10)
    assert np.all(np.abs(st.step_overlaps()[:, 0]) >= 0.99)
    # branch 0 circles the equator: its z-component stays zero
    assert np.allclose(np.abs(st.w[:, 0, 0]), math.sqrt(0.5), atol=1e-9)


def test_eigenvalue_track_follows_bloch_norm():
    g = build_generator(QubitParams(mu_x=0.3), BATH_T0)
    traj = evolve(initial_state(math.pi / 2), g, IntegratorConfig())
    st = spectral_track(traj)
    norms = np.linalg.norm(traj.bloch_vectors(), axis=1)
    assert np.allclose(st.p[:, 0], 0.5 * (1.0 + norms), atol=1e-10)
    assert not st.degenerate.any()


def test_constant_trajectory_has_constant_spectrum():
    q = QubitParams(mu_x=0.3)
    bath = BathParams(alpha=1e-2, omega_c=1e2, temperature=1.0)
    rho = gibbs_state(q, bath).matrix
    traj = Trajectory(times=np.linspace(0.0, 1.0, 5), states=np.stack([rho] * 5))
    st = spectral_track(traj)
    assert np.allclose(st.p, st.p[0])
    assert np.allclose(st.w, st.w[0])


def test_tied_overlaps_raise_branch_ambiguity():
    with pytest.raises(BranchAmbiguityError):
        spectral_track(bloch_path((0.0, 0.0, 0.5), (0.5, 0.0, 0.0)))


def test_branches_keep_their_eigenvectors_through_crossings():
    st = spectral_track(
        bloch_path(
            (0.0, 0.0, 0.5),
            (0.0, 0.0, 0.2),
            (0.0, 0.0, -0.2),
            (0.0, 0.0, 0.0),
            (0.0, 0.0, -0.5),
            (0.0, 0.0, 0.3),
        )
    )
    assert list(st.degenerate) == [False, False, False, True, False, False]
    assert st.p[:, 0] == pytest.approx([0.75, 0.6, 0.4, 0.5, 0.25, 0.65])
    assert np.allclose(np.abs(st.w[:, 0, 0]), 1.0)
    assert np.allclose(np.abs(st.w[:, 1, 1]), 1.0)


def test_leading_degenerate_points_use_the_identity_basis():
    st = spectral_track(bloch_path((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (0.0, 0.0, -0.4)))
    assert list(st.degenerate) == [True, True, False]
    assert np.allclose(st.w[0], np.eye(2))
    assert np.allclose(st.w[1], np.eye(2))
    # branch 0 stays on |1>, now the smaller eigenvalue
    assert st.p[2] == pytest.approx([0.3, 0.7])


def test_retained_branch_through_degeneracy_raises():
    st = spectral_track(bloch_path((0.0, 0.0, 0.5), (0.0, 0.0, 0.0), (0.0, 0.0, 0.5)))
    assert list(st.degenerate) == [False, True, False]
    with pytest.raises(DegeneratePhaseError):
        geometric_phase(st)


def test_orthogonal_endpoint_has_vanishing_visibility():
    s60, c60 = math.sin(math.pi / 3), math.cos(math.pi / 3)
    st = spectral_track(bloch_path((0.0, 0.0, 1.0), (s60, 0.0, c60), (s60, 0.0, -c60), (0.0, 0.0, -1.0)))
    with pytest.raises(VanishingVisibilityError):
        geometric_phase(st)

"""Time stepping: hand-checked single steps, scheme dispatch, shape and
validation contracts, and the two-step collision construction that
separates the robust update from its four rivals."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lagwave.engine import (
    Corrected1,
    Corrected2,
    JWZ,
    NonstandardLWR,
    PhillipsRelax,
    Platoon,
    Scenario,
    Scheme,
    acceleration,
    init_lead_vehicle_problem,
    simulate,
    spacing_estimate,
    step_corrected_1,
    step_corrected_2,
    step_explicit_explicit,
    step_nonstandard,
    step_second_order,
)
from lagwave.fundamental import GreenshieldsFD, TriangularFD

G = GreenshieldsFD()
T = TriangularFD()


def make_platoon(fd, k1, lead_speed, m, dn, initial_speed=None):
    sc = Scenario(fd=fd, k1=k1, lead_speed=lead_speed, m=m, dn=dn, dt=1.0,
                  duration=1.0, initial_speed=initial_speed)
    return init_lead_vehicle_problem(sc)


def test_init_positions_and_speeds():
    p = make_platoon(G, k1=1.0 / 14.0, lead_speed=3.0, m=2, dn=0.5)
    # spacing per slot = dn / k1 = 7, slots at 0, -7, -14
    assert np.allclose(p.positions, [0.0, -7.0, -14.0])
    assert p.speeds[0] == 3.0
    # followers start on equilibrium: eta(1/14) = 10
    assert np.allclose(p.speeds[1:], 10.0)
    assert p.dn == 0.5


def test_init_initial_speed_override():
    p = make_platoon(T, k1=T.K / 100.0, lead_speed=0.0, m=3, dn=1.0,
                     initial_speed=0.0)
    assert np.all(p.speeds == 0.0)


def test_platoon_spacings_normalized():
    p = Platoon(positions=np.array([0.0, -7.0, -21.0]), speeds=np.zeros(3), dn=0.5)
    assert np.allclose(p.spacings(), [14.0, 28.0])
    assert p.followers == 2


def test_step_nonstandard_hand_values():
    # triangular, uniform spacing 2S = 14, red light ahead
    p = make_platoon(T, k1=1.0 / 14.0, lead_speed=0.0, m=2, dn=1.0)
    q = step_nonstandard(p, T, dt=1.0, lead_speed=0.0)
    # theta(14) = 5(14/7 - 1) = 5 for both followers, then positions move
    assert np.allclose(q.speeds, [0.0, 5.0, 5.0])
    assert np.allclose(q.positions, [0.0, -9.0, -23.0])


def test_step_nonstandard_clamps_tight_gap():
    p = Platoon(positions=np.array([0.0, -3.0]), speeds=np.array([0.0, 5.0]), dn=1.0)
    q = step_nonstandard(p, T, dt=1.0, lead_speed=0.0)
    # gap 3 is below jam spacing; speed clamps to theta(S) = 0
    assert q.speeds[1] == 0.0
    assert q.positions[1] == -3.0


def test_spacing_estimate_variants():
    p = Platoon(positions=np.array([0.0, -7.0, -21.0]), speeds=np.zeros(3), dn=1.0)
    assert spacing_estimate(p, 1, Scheme.ANISOTROPIC_SYMPLECTIC) == 7.0
    assert spacing_estimate(p, 1, Scheme.FORWARD_SPACING) == 14.0
    assert spacing_estimate(p, 1, Scheme.ARITHMETIC_CENTRAL) == 10.5
    assert spacing_estimate(p, 1, Scheme.HARMONIC_CENTRAL) == pytest.approx(28.0 / 3.0)
    # last vehicle has nothing behind, falls back to the backward gap
    assert spacing_estimate(p, 2, Scheme.FORWARD_SPACING) == 14.0
    with pytest.raises(IndexError):
        spacing_estimate(p, 3, Scheme.FORWARD_SPACING)


def test_step_explicit_explicit_hand_values():
    p = make_platoon(T, k1=1.0 / 14.0, lead_speed=0.0, m=1, dn=1.0)
    # explicit-explicit moves with the OLD speed (eta(1/14) = 5)
    q = step_explicit_explicit(p, T, dt=1.0, lead_speed=0.0)
    assert np.allclose(q.positions, [0.0, -9.0])
    assert np.allclose(q.speeds, [0.0, 5.0])
    r = step_explicit_explicit(q, T, dt=1.0, lead_speed=0.0)
    # gap is now 9, theta(9) = 10/7, but it moves with speed 5 first
    assert np.allclose(r.positions, [0.0, -4.0])
    assert r.speeds[1] == pytest.approx(10.0 / 7.0)


def test_corrected1_floor_and_ceiling():
    # inner relaxation with a huge speed excess gets clipped to theta
    p = Platoon(positions=np.array([0.0, -7.0]), speeds=np.array([0.0, 12.0]), dn=1.0)
    q = step_corrected_1(p, PhillipsRelax(T=2.0), T, dt=1.0, lead_speed=0.0)
    # theta(7) = 0, so the corrected speed is exactly 0
    assert q.speeds[1] == 0.0


def test_corrected2_collision_ceiling():
    # gap 8, jam spacing 7: ceiling allows at most (8 - 7)/1 = 1 m/s
    p = Platoon(positions=np.array([0.0, -8.0]), speeds=np.array([0.0, 12.0]), dn=1.0)
    q = step_corrected_2(p, PhillipsRelax(T=2.0), T, dt=1.0, lead_speed=0.0)
    assert q.speeds[1] == pytest.approx(1.0)
    # and the new gap is exactly the jam spacing
    assert q.positions[0] - q.positions[1] == pytest.approx(7.0)


def test_corrected_models_reject_nesting():
    with pytest.raises(ValueError):
        Corrected1(Corrected1(NonstandardLWR()))
    with pytest.raises(ValueError):
        Corrected2(Corrected1(PhillipsRelax()))


def test_jwz_anticipation_decelerates():
    p = make_platoon(T, k1=1.0 / 14.0, lead_speed=0.0, m=1, dn=1.0)
    q = step_second_order(p, JWZ(T=5.0, c0=2.0), T, dt=1.0, lead_speed=0.0)
    # equilibrium holds (theta(14) = 5) but the closing speed term bites
    assert q.speeds[1] == pytest.approx(5.0 - 10.0 / 14.0)


def test_model_parameter_validation():
    with pytest.raises(ValueError):
        PhillipsRelax(T=0.0)
    with pytest.raises(ValueError):
        JWZ(T=-1.0)


def test_acceleration_shape_and_values():
    speeds = np.array([[0.0, 1.0], [0.0, 3.0], [0.0, 2.0]])
    a = acceleration(speeds, dt=0.5)
    assert a.shape == (2, 2)
    assert np.allclose(a[:, 1], [4.0, -2.0])
    with pytest.raises(ValueError):
        acceleration(speeds, dt=0.0)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(fd=G, k1=G.K * 1.01, lead_speed=0.0, m=3, dn=1.0, dt=0.1, duration=1.0)
    with pytest.raises(ValueError):
        Scenario(fd=G, k1=0.05, lead_speed=0.0, m=-1, dn=1.0, dt=0.1, duration=1.0)
    with pytest.raises(ValueError):
        Scenario(fd=G, k1=0.05, lead_speed=0.0, m=3, dn=-1.0, dt=0.1, duration=1.0)
    with pytest.raises(ValueError):
        Scenario(fd=G, k1=0.05, lead_speed=-2.0, m=3, dn=1.0, dt=0.1, duration=1.0)


def test_scenario_steps_rounding():
    sc = Scenario(fd=G, k1=0.05, lead_speed=0.0, m=3, dn=1.0, dt=0.1, duration=1.0)
    assert sc.steps == 10
    sc = Scenario(fd=G, k1=0.05, lead_speed=0.0, m=3, dn=1.0, dt=0.3, duration=1.0)
    assert sc.steps == 4


def test_simulate_shapes():
    sc = Scenario(fd=G, k1=G.K / 4.0, lead_speed=7.5, m=4, dn=0.5, dt=0.175,
                  duration=3.5)
    traj = simulate(sc)
    j = sc.steps
    assert traj.times.shape == (j + 1,)
    assert traj.positions.shape == (j + 1, 5)
    assert traj.speeds.shape == (j + 1, 5)
    assert traj.accelerations.shape == (j, 5)
    assert traj.spacings().shape == (j + 1, 4)
    assert np.allclose(traj.vehicle_numbers(), [0.0, 0.5, 1.0, 1.5, 2.0])
    # leader holds its prescribed speed the whole run
    assert np.all(traj.speeds[:, 0] == 7.5)


def test_simulate_lead_speeds_array():
    sc = Scenario(fd=G, k1=G.K / 4.0, lead_speed=7.5, m=2, dn=1.0, dt=0.35,
                  duration=3.5)
    lead = np.linspace(7.5, 0.0, sc.steps)
    traj = simulate(sc, lead_speeds=lead)
    assert np.allclose(traj.speeds[1:, 0], lead)
    with pytest.raises(ValueError):
        simulate(sc, lead_speeds=lead[:-1])


def test_simulate_scheme_model_conflict():
    sc = Scenario(fd=G, k1=G.K / 4.0, lead_speed=7.5, m=2, dn=1.0, dt=0.35,
                  duration=3.5)
    with pytest.raises(ValueError):
        simulate(sc, model=PhillipsRelax(), scheme=Scheme.FORWARD_SPACING)


def test_simulate_phillips_t_equal_dt_matches_equilibrium():
    sc = Scenario(fd=G, k1=G.K / 4.0, lead_speed=7.5, m=5, dn=0.5, dt=0.175,
                  duration=7.0)
    a = simulate(sc, model=NonstandardLWR())
    b = simulate(sc, model=PhillipsRelax(T=sc.dt))
    assert np.array_equal(a.positions, b.positions)
    assert np.array_equal(a.speeds, b.speeds)


FAILING_SCHEMES = (
    Scheme.FORWARD_SPACING,
    Scheme.ARITHMETIC_CENTRAL,
    Scheme.HARMONIC_CENTRAL,
    Scheme.EXPLICIT_EXPLICIT,
)


def first_collision_step(traj, fd):
    gaps = traj.spacings()
    bad = np.nonzero(np.any(gaps < fd.S - 1e-9, axis=1))[0]
    return int(bad[0]) if bad.size else None


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1e-3, max_value=4.0))
def test_rival_schemes_collide_fast(x):
    # uniform spacing S(1+x) with a stopped leader: every rival scheme
    # overshoots the jam spacing within two steps
    k1 = 1.0 / (T.S * (1.0 + x))
    sc = Scenario(fd=T, k1=k1, lead_speed=0.0, m=3, dn=1.0, dt=1.0, duration=2.0)
    for scheme in FAILING_SCHEMES:
        traj = simulate(sc, scheme=scheme)
        step = first_collision_step(traj, T)
        assert step is not None and step <= 2, scheme


def test_anisotropic_survives_same_setup():
    sc = Scenario(fd=T, k1=1.0 / (T.S * 2.0), lead_speed=0.0, m=3, dn=1.0, dt=1.0,
                  duration=50.0)
    traj = simulate(sc)
    assert first_collision_step(traj, T) is None
    assert traj.spacings().min() >= T.S - 1e-9

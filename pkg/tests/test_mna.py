import math

import pytest

from circuitquest.core import (
    DEFAULT_SOURCE_RESISTANCE,
    Circuit,
    Element,
    ElementKind,
    InvalidReferenceError,
    SingularSystemError,
    frequency_sweep,
    kcl_residuals,
    max_relative_kcl_residual,
    parse_netlist,
    solve,
    solve_ac,
    solve_dc,
    terminal_currents,
)

from oracles import make_ladder, random_circuit

RS = DEFAULT_SOURCE_RESISTANCE


def test_single_loop_ohms_law():
    c = parse_netlist("V1 1 0 DC 12\nR1 1 0 4")
    s = solve_dc(c)
    # the implicit source resistance shaves 12/(4+1e-6) off the ideal 3 A
    assert s.current("R1").real == pytest.approx(12.0 / (4.0 + RS), rel=1e-12)
    assert s.voltage("1").real == pytest.approx(12.0, rel=1e-6)
    assert s.voltage("0") == 0.0


def test_series_rl_at_50hz():
    ell = 10.0 / (2.0 * math.pi * 50.0)
    c = parse_netlist(f"V1 1 0 AC 230 0\nR1 1 2 10\nL1 2 0 {ell!r}\n.AC 50")
    s = solve_ac(c)
    i = s.current("R1")
    assert abs(i) == pytest.approx(230.0 / math.sqrt(200.0), rel=1e-6)
    assert math.degrees(math.atan2(i.imag, i.real)) == pytest.approx(-45.0, abs=1e-4)


def test_resistive_ac_equals_dc():
    c = parse_netlist("V1 1 0 DC 48\nR1 1 2 3\nR2 2 0 5\nR3 2 0 20")
    dc = solve_dc(c)
    ac = solve(c, 60.0)
    for node in c.nodes:
        assert abs(ac.voltage(node)) == pytest.approx(abs(dc.voltage(node)), rel=1e-12)
        assert ac.voltage(node).imag == pytest.approx(0.0, abs=1e-15)


def test_opposing_ideal_sources_are_singular():
    c = parse_netlist("V1 1 0 DC 6 RS=0\nV2 1 0 DC -6 RS=0\nR1 1 0 4")
    with pytest.raises(SingularSystemError) as err:
        solve_dc(c)
    assert err.value.constraint is not None


def test_parallel_sources_with_internal_resistance_solve():
    # same pair of sources, but the implicit 1e-6 ohm slack makes it solvable
    c = parse_netlist("V1 1 0 DC 6\nV2 1 0 DC -6\nR1 1 0 4")
    s = solve_dc(c)
    assert abs(s.current("V1")) == pytest.approx(6.0 / RS, rel=1e-3)


def test_series_lc_resonance_singular_without_resistance():
    # wL = 1/(wC) at 50 Hz
    ell = 1.0 / (2.0 * math.pi * 50.0)
    cap = 1.0 / (2.0 * math.pi * 50.0)
    c = parse_netlist(f"V1 1 0 AC 10 0 RS=0\nL1 1 2 {ell!r}\nC1 2 0 {cap!r}\n.AC 50")
    with pytest.raises(SingularSystemError):
        solve_ac(c)
    # with the default source resistance the loop current is E/rs
    c2 = parse_netlist(f"V1 1 0 AC 10 0\nL1 1 2 {ell!r}\nC1 2 0 {cap!r}\n.AC 50")
    s = solve_ac(c2)
    assert abs(s.current("L1")) == pytest.approx(10.0 / RS, rel=1e-6)


def test_capacitor_open_at_dc():
    c = parse_netlist("V1 1 0 DC 10\nR1 1 2 100\nC1 2 0 1u")
    s = solve_dc(c)
    assert s.current("C1") == 0.0
    assert s.voltage("2").real == pytest.approx(10.0, rel=1e-6)


def test_inductor_short_at_dc():
    c = parse_netlist("V1 1 0 DC 10\nR1 1 2 100\nL1 2 0 0.5")
    s = solve_dc(c)
    assert s.voltage("2") == 0.0
    assert s.current("L1").real == pytest.approx(0.1, rel=1e-4)


def test_sensed_capacitor_still_open_at_dc():
    # CCVS sensing the capacitor promotes it to a branch unknown
    c = parse_netlist("V1 1 0 DC 10\nR1 1 2 100\nC1 2 0 1u\nH1 3 0 C1 50\nR3 3 0 10")
    s = solve_dc(c)
    assert s.current("C1") == 0.0
    assert s.voltage("3") == 0.0


def test_transformer_reflects_voltage_and_current():
    c = parse_netlist("V1 1 0 DC 12\nT1 1 0 2 0 2\nR1 2 0 4")
    s = solve_dc(c)
    assert s.voltage("2").real == pytest.approx(6.0, rel=1e-6)
    assert s.current("R1").real == pytest.approx(1.5, rel=1e-6)
    assert s.current("T1").real == pytest.approx(0.75, rel=1e-6)
    pins = terminal_currents(c.element("T1"), s)
    assert len(pins) == 4
    # ideal transformer passes power through: primary in equals secondary out
    assert pins[0][1].real == pytest.approx(0.75, rel=1e-6)
    assert pins[2][1].real == pytest.approx(-1.5, rel=1e-6)


def test_coupled_inductors_transfer_power():
    c = parse_netlist(
        "V1 1 0 AC 100 0\nR1 1 2 10\nL1 2 0 0.1\nL2 3 0 0.4\nR2 3 0 20\nK1 L1 L2 0.5\n.AC 50"
    )
    s = solve_ac(c)
    assert abs(s.current("R2")) > 0.5  # secondary actually driven
    assert max_relative_kcl_residual(c, s) < 1e-12


def test_switches_conduct_and_isolate():
    c = parse_netlist("V1 1 0 DC 10\nSW1 1 2 CLOSED\nR1 2 0 5\nSW2 2 0 OPEN")
    s = solve_dc(c)
    assert s.current("SW1").real == pytest.approx(2.0, rel=1e-4)
    assert s.current("SW2") == 0.0
    assert s.voltage_between("1", "2") == 0.0


def test_solution_lookups_validate_references():
    s = solve_dc(parse_netlist("V1 1 0 DC 1\nR1 1 0 1"))
    with pytest.raises(InvalidReferenceError):
        s.voltage("nope")
    with pytest.raises(InvalidReferenceError):
        s.current("R9")


def test_solve_ac_requires_frequency():
    c = parse_netlist("V1 1 0 AC 10 0\nR1 1 0 1")
    with pytest.raises(Exception):
        solve_ac(c)  # no .AC directive, no argument
    assert abs(solve_ac(c, 50.0).current("R1")) == pytest.approx(10.0, rel=1e-5)


def test_three_mesh_ladder_matches_hand_solution():
    case = make_ladder(42)
    sol = solve(case.circuit, case.frequency)
    assert case.worst_error(sol) < 1e-9


@pytest.mark.parametrize("seed", range(30))
def test_ladders_match_mesh_oracle(seed):
    case = make_ladder(seed)
    sol = solve(case.circuit, case.frequency)
    assert case.worst_error(sol) < 1e-9


@pytest.mark.parametrize("seed", range(20))
def test_kcl_residuals_stay_small(seed):
    gen = random_circuit(seed, max_nodes=25)
    sol = solve(gen.circuit, gen.frequency)
    assert max_relative_kcl_residual(gen.circuit, sol) < 1e-9
    per_node = kcl_residuals(gen.circuit, sol)
    assert set(per_node) == set(gen.circuit.nodes) - {"0"}


def test_frequency_sweep_rc_corner():
    c = parse_netlist("V1 1 0 AC 1 0\nR1 1 2 1k\nC1 2 0 1u")
    corner = 1.0 / (2.0 * math.pi * 1000.0 * 1e-6)
    pts = frequency_sweep(c, [corner / 100.0, corner], probe=("2", "0"))
    dc_gain = pts[0].value.magnitude
    assert pts[1].value.magnitude / dc_gain == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-9)


def test_frequency_sweep_flat_for_divider():
    c = parse_netlist("V1 1 0 AC 1 0\nR1 1 2 1k\nR2 2 0 1k")
    pts = frequency_sweep(c, [10.0, 100.0, 1000.0], probe=("2", "0"))
    mags = [p.value.magnitude for p in pts]
    assert max(mags) - min(mags) < 1e-12


def test_frequency_sweep_empty():
    c = parse_netlist("V1 1 0 AC 1 0\nR1 1 0 1")
    assert frequency_sweep(c, [], probe=("1", "0")) == []


def test_frequency_sweep_marks_singular_points():
    ell = 1.0 / (2.0 * math.pi * 50.0)
    cap = 1.0 / (2.0 * math.pi * 50.0)
    c = parse_netlist(f"V1 1 0 AC 10 0 RS=0\nL1 1 2 {ell!r}\nC1 2 0 {cap!r}")
    pts = frequency_sweep(c, [25.0, 50.0, 100.0], probe=("2", "0"))
    assert pts[0].error is None and pts[2].error is None
    assert pts[1].value is None and pts[1].error


def test_vsource_with_zero_internal_resistance():
    c = parse_netlist("V1 1 0 DC 12 RS=0\nR1 1 0 4")
    s = solve_dc(c)
    assert s.current("R1").real == pytest.approx(3.0, rel=1e-12)
    assert s.voltage("1").real == pytest.approx(12.0, rel=1e-12)


def test_element_current_direction_convention():
    # positive element current flows into the first listed terminal
    c = parse_netlist("V1 1 0 DC 12\nR1 1 0 4")
    s = solve_dc(c)
    assert s.current("R1").real > 0  # 1 -> 0 through the resistor
    assert s.current("V1").real < 0  # source delivers, so current exits node 1


def test_current_phasor_lookup():
    c = parse_netlist("V1 1 0 AC 10 30\nR1 1 0 5")
    s = solve_ac(c, 50.0)
    ph = s.current_phasor("R1")
    assert ph.magnitude == pytest.approx(2.0, rel=1e-5)
    assert ph.degrees == pytest.approx(30.0, abs=1e-3)

import cmath
import math

import numpy as np
import pytest

from plaque.dynamics import (GOLDEN, CycleLabel, Polynomial, Tolerances, classify_cycle,
                             critical_points, evaluate_orbit, orbit_closure_sample, parse_map,
                             periodic_cycles, quadratic, recurrence_probe, rotation_convergents,
                             siegel_golden)

PHI = (1 + math.sqrt(5)) / 2


def test_parse_map_forms():
    assert parse_map("quad:c=-1").coeffs.tolist() == [-1, 0, 1]
    assert parse_map("quad:c=0.25+0.5i")(0) == 0.25 + 0.5j
    assert parse_map("0,-3,0,1").degree == 3
    assert parse_map("siegel:golden").spec() == "siegel:golden"
    with pytest.raises(ValueError):
        parse_map("cubic:a=1")
    with pytest.raises(ValueError):
        Polynomial([1, 2])


def test_polynomial_evaluation_and_iterates():
    f = quadratic(-1)
    assert f(2) == 3
    assert f.derivative(3) == 6
    assert f.iterate(0, 3) == -1
    z, d = f.iterate_with_derivative(0.5, 2)
    assert z == pytest.approx(f(f(0.5)))
    assert d == pytest.approx(f.derivative(f(0.5)) * f.derivative(0.5))
    comp = f.composed_coeffs(2)
    zs = np.array([0.3, -1.2 + 0.4j])
    np.testing.assert_allclose(np.polynomial.polynomial.polyval(zs, comp), f(f(zs)))


def test_orbit_escape():
    orb = evaluate_orbit(quadratic(1), 0, 50)
    assert orb.escaped and len(orb.points) < 51
    orb = evaluate_orbit(quadratic(-1), 0, 10)
    assert not orb.escaped and orb.points[:4] == (0, -1, 0, -1)


def test_critical_points():
    assert critical_points(quadratic(-1)) == [0]
    cp = critical_points(parse_map("0,-3,0,1"))
    np.testing.assert_allclose(cp, [-1, 1], atol=1e-14)
    lam = cmath.exp(2j * math.pi * GOLDEN)
    assert abs(critical_points(siegel_golden())[0] + lam / 2) < 1e-15


def _only(cycles):
    return {str(c.label): c for c in cycles}


def test_z2_cycles_closed_forms():
    f = quadratic(0)
    fixed = _only(periodic_cycles(f, 1))
    assert abs(fixed["SuperAttracting"].points[0]) < 1e-12
    assert abs(fixed["Repelling"].points[0] - 1) < 1e-12
    assert abs(fixed["Repelling"].multiplier - 2) < 1e-9
    (two,) = periodic_cycles(f, 2)
    w = cmath.exp(2j * math.pi / 3)
    assert sorted(two.points, key=lambda z: z.imag) == pytest.approx([w.conjugate(), w], abs=1e-12)
    assert abs(two.multiplier - 4) < 1e-9 and str(two.label) == "Repelling"


def test_z2_cycle_counts_by_exact_period():
    f = quadratic(0)
    # number of exact-period-n cycles of z^2 (necklace counts)
    assert [len(periodic_cycles(f, n)) for n in range(1, 7)] == [2, 1, 2, 3, 6, 9]


def test_z2_minus_1_cycles():
    f = quadratic(-1)
    fixed = sorted(periodic_cycles(f, 1), key=lambda c: c.points[0].real)
    assert fixed[0].points[0] == pytest.approx(1 - PHI, abs=1e-12)
    assert fixed[1].points[0] == pytest.approx(PHI, abs=1e-12)
    assert fixed[0].multiplier == pytest.approx(2 * (1 - PHI), abs=1e-9)
    assert fixed[1].multiplier == pytest.approx(2 * PHI, abs=1e-9)
    assert all(str(c.label) == "Repelling" for c in fixed)
    (two,) = periodic_cycles(f, 2)
    assert set(np.round(two.points, 12)) == {-1, 0}
    assert abs(two.multiplier) < 1e-12 and str(two.label) == "SuperAttracting"


def test_cycle_storage_is_backward():
    (two,) = periodic_cycles(quadratic(-1), 2)
    f = quadratic(-1)
    for i in range(two.period):
        assert abs(f(two.points[(i + 1) % two.period]) - two.points[i]) < 1e-12
    assert two.index_of(-0.99) == two.points.index(min(two.points, key=lambda z: abs(z + 1))) + 1


def test_parabolic_fixed_point():
    (cyc,) = periodic_cycles(quadratic(0.25), 1)
    assert abs(cyc.points[0] - 0.5) < 1e-12
    assert abs(cyc.multiplier - 1) < 1e-9
    assert cyc.label == CycleLabel("Parabolic", 0, 1)
    assert cyc.multiplicity == 2 and cyc.flagged


def test_siegel_fixed_point():
    cycles = periodic_cycles(siegel_golden(), 1)
    zero = min(cycles, key=lambda c: abs(c.points[0]))
    assert abs(zero.points[0]) < 1e-12
    assert str(zero.label) == "NeutralIrrational"


@pytest.mark.parametrize("lam, expected", [
    (0.0, "SuperAttracting"),
    (0.5, "AttractingNonSuper"),
    (1.5j, "Repelling"),
    (-1.0, "Parabolic(1,2)"),
    (cmath.exp(2j * math.pi / 3), "Parabolic(1,3)"),
    (cmath.exp(2j * math.pi * GOLDEN), "NeutralIrrational"),
])
def test_classify_cycle(lam, expected):
    pts = (0.0,) if lam == 0 else (3.0,)
    assert str(classify_cycle(lam, pts, [0.0])) == expected


def test_classify_respects_band():
    lam = 1 + 1e-6
    assert str(classify_cycle(lam, (1.0,), [0.0])) == "Repelling"
    tol = Tolerances(band=1e-5, root=1e-5)
    assert str(classify_cycle(lam, (1.0,), [0.0], tol)) == "Parabolic(0,1)"


def test_rotation_convergents_fibonacci():
    conv = rotation_convergents(GOLDEN, 64)
    assert [c.denominator for c in conv][-4:] == [13, 21, 34, 55]


def test_orbit_closure_and_recurrence():
    samp = orbit_closure_sample(quadratic(-1), 0, 20)
    assert sorted(z.real for z in samp.points) == [-1, 0]
    assert orbit_closure_sample(quadratic(-1), 0, 20, include_c=True).points[0] == 0
    rec = recurrence_probe(quadratic(-1), 0, 10)
    assert rec.distance == 0 and rec.step == 2
    g = siegel_golden()
    rec = recurrence_probe(g, critical_points(g)[0], 2000)
    assert rec.distance < 1e-2 and rec.step == 1597
    assert recurrence_probe(quadratic(1), 0, 100).escaped


def test_tolerances_echo():
    d = Tolerances().as_dict()
    assert d["band"] == 1e-9 and d["p_max"] == 64

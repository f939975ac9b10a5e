"""Acceptance criteria, each at its stated tolerance and time limit.

Every test reports one PASS/FAIL line through the ``acceptance`` fixture
(collected in the terminal summary) and then asserts the same verdict.
"""
import cmath
import math
import subprocess
import sys
import time

import numpy as np

from plaque.dynamics import GOLDEN, critical_points, periodic_cycles, quadratic, siegel_golden
from plaque.pullback import (SearchExhaustedError, backward_orbit_from_cycle,
                             construct_irregular_orbit, forward_residual, index_bits,
                             pullback_chain)
from plaque.seqlattice import (ONE, ZERO, Signature, boolean_op, canonicalize, diagonal_witness,
                               leq, meet_chain_reduce, shift_class, sig_op, sig_shift, sq_class)
from plaque.signature import EngineConfig, branching_count, estimate_signature, verify_cycle_theorem

from fixtures import FIXTURES
from oracles import oracle_leq, oracle_op, oracle_shift, random_sequence

PHI = (1 + math.sqrt(5)) / 2


# -- 1: lattice laws ---------------------------------------------------------------------


def _lattice_failures(a, b, c, m, n, sa, sb):
    bad = []
    checks = {
        "commutative": a | b == b | a and a & b == b & a,
        "associative": (a | b) | c == a | (b | c) and (a & b) & c == a & (b & c),
        "absorption": a | (a & b) == a and a & (a | b) == a,
        "distributive": a & (b | c) == (a & b) | (a & c) and a | (b & c) == (a | b) & (a | c),
        "de_morgan": ~(a | b) == ~a & ~b and ~(a & b) == ~a | ~b,
        "double_negation": ~~a == a,
        "complement": a | ~a == ONE and a & ~a == ZERO,
        "shift_group": shift_class(shift_class(a, m), n) == shift_class(a, m + n)
        and shift_class(a, 0) == a,
        "oracle_join": boolean_op("join", a, b) == oracle_op("join", sa, sb),
        "oracle_meet": boolean_op("meet", a, b) == oracle_op("meet", sa, sb),
        "oracle_neg": boolean_op("neg", a) == oracle_op("neg", sa),
        "oracle_leq": leq(b, a) == oracle_leq(sb, sa),
        "oracle_shift": shift_class(a, m) == oracle_shift(sa, m),
    }
    for name, ok in checks.items():
        if not ok:
            bad.append(name)
    return bad


def test_criterion_1_lattice_laws(acceptance):
    rng = np.random.default_rng(20240601)
    triples = 10_000
    t0 = time.perf_counter()
    failures = {}
    for _ in range(triples):
        sa, sb, sc = (random_sequence(rng) for _ in range(3))
        m, n = (int(x) for x in rng.integers(-32, 33, 2))
        a, b, c = canonicalize(sa), canonicalize(sb), canonicalize(sc)
        for name in _lattice_failures(a, b, c, m, n, sa, sb):
            failures[name] = failures.get(name, 0) + 1
    dt = time.perf_counter() - t0
    ok = not failures and dt < 10
    acceptance(1, ok, f"{triples} triples, law/oracle failures {failures or 0}, {dt:.2f}s (limit 10s)")
    assert ok


# -- 2: countable-intersection machinery -----------------------------------------------------


def _witness_valid(ts, pos):
    meets = []
    for t in ts:
        meets.append(t if not meets else meets[-1] & t)
    return all(meets[min(n, len(meets)) - 1].bit(k) for n in range(1, len(pos) + 1)
               for k in pos[n - 1:])


def test_criterion_2_chain_machinery(acceptance):
    t0 = time.perf_counter()
    a, b = shift_class(sq_class(3), 1), sq_class(2) | sq_class(5)
    stabilizing = [
        [sq_class(2), sq_class(6), sq_class(6), sq_class(6)],
        [ONE, a, a & b, a & b, a & b],
        [sq_class(4)] * 3,
    ]
    stab = all(meet_chain_reduce(ts, len(ts)).stabilized for ts in stabilizing)
    stab_n = [meet_chain_reduce(ts, len(ts)).n for ts in stabilizing]
    powers = [sq_class(2 ** k) for k in range(1, 9)]
    red = meet_chain_reduce(powers, len(powers))
    not_stab = not red.stabilized and red.meet == sq_class(256)
    ts = [sq_class(2), sq_class(4), sq_class(8), sq_class(16)]
    wit = diagonal_witness(ts, 4)
    prefixes = all(_witness_valid(ts, wit[:j]) for j in range(1, 5))
    dt = time.perf_counter() - t0
    ok = stab and stab_n == [2, 3, 1] and not_stab and wit == [2, 8, 24, 64] and prefixes and dt < 1
    acceptance(2, ok, f"stabilizing n={stab_n}, powers-of-two stabilized={red.stabilized}, "
                      f"witness={wit}, prefixes valid={prefixes}, {dt:.3f}s (limit 1s)")
    assert ok


# -- 3: dynamics fixtures -------------------------------------------------------------------


def _match(cycles, pts, lam, label, tol=1e-9):
    """Find a cycle with these points (any rotation) and check multiplier and label."""
    for cyc in cycles:
        if len(cyc.points) != len(pts):
            continue
        if all(min(abs(p - q) for q in cyc.points) <= tol for p in pts):
            return abs(cyc.multiplier - lam) <= tol and str(cyc.label) == label
    return False


def dynamics_table():
    w = cmath.exp(2j * math.pi / 3)
    lam = cmath.exp(2j * math.pi * GOLDEN)
    return [
        ("quad:c=0", quadratic(0), 1, [0], 0, "SuperAttracting"),
        ("quad:c=0", quadratic(0), 1, [1], 2, "Repelling"),
        ("quad:c=0", quadratic(0), 2, [w, w.conjugate()], 4, "Repelling"),
        ("quad:c=-1", quadratic(-1), 1, [1 - PHI], 2 * (1 - PHI), "Repelling"),
        ("quad:c=-1", quadratic(-1), 1, [PHI], 2 * PHI, "Repelling"),
        ("quad:c=-1", quadratic(-1), 2, [0, -1], 0, "SuperAttracting"),
        ("quad:c=0.25", quadratic(0.25), 1, [0.5], 1, "Parabolic(0,1)"),
        ("siegel:golden", siegel_golden(), 1, [0], lam, "NeutralIrrational"),
    ]


def test_criterion_3_dynamics_fixtures(acceptance):
    t0 = time.perf_counter()
    results = []
    counts = {}
    for spec, f, n, pts, lam, label in dynamics_table():
        cycles = periodic_cycles(f, n)
        counts[(spec, n)] = len(cycles)
        results.append((spec, n, label, _match(cycles, pts, lam, label)))
    # no spurious cycles: z^2 and z^2-1 have exactly these cycles of period <= 2
    expected_counts = {("quad:c=0", 1): 2, ("quad:c=0", 2): 1, ("quad:c=-1", 1): 2,
                       ("quad:c=-1", 2): 1, ("quad:c=0.25", 1): 1, ("siegel:golden", 1): 2}
    dt = time.perf_counter() - t0
    failed = [r[:3] for r in results if not r[3]]
    ok = not failed and counts == expected_counts and dt < 5
    acceptance(3, ok, f"{len(results) - len(failed)}/{len(results)} closed-form cycles within 1e-9, "
                      f"cycle counts {'ok' if counts == expected_counts else counts}, "
                      f"{dt:.2f}s (limit 5s)" + (f", failed {failed}" if failed else ""))
    assert ok


# -- 4: pullback soundness ---------------------------------------------------------------


def _bitwise_leq(small: str, large: str) -> bool:
    return all(s <= l for s, l in zip(small, large))


def test_criterion_4_pullback_soundness(acceptance):
    t0 = time.perf_counter()
    worst, chains, incomplete, nonmono = 0.0, 0, [], []
    for name, fx in FIXTURES.items():
        f = fx.map
        crit = critical_points(f)
        for n in range(1, fx.period_max + 1):
            for cyc in periodic_cycles(f, n, crit=crit):
                orbit = backward_orbit_from_cycle(cyc, 1)
                words = []
                for r in fx.radii():
                    chain = pullback_chain(f, orbit, r, 32)
                    chains += 1
                    if not chain.complete:
                        incomplete.append((name, cyc.points[0], r, chain.failure))
                        continue
                    worst = max(worst, forward_residual(f, chain))
                    words.append([index_bits(chain, k) for k in range(len(crit))])
                for big, small in zip(words, words[1:]):
                    if not all(_bitwise_leq(s, b) for s, b in zip(small, big)):
                        nonmono.append((name, cyc.points[0]))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and not incomplete and not nonmono and dt < 30
    acceptance(4, ok, f"{chains} chains at depth 32, max forward residual {worst:.2e} (limit 1e-9), "
                      f"incomplete {len(incomplete)}, non-monotone {len(nonmono)}, {dt:.2f}s (limit 30s)")
    assert ok


# -- 5: cycle prediction table ----------------------------------------------------------------


def _row_ok(row):
    est = row.estimate
    if not (est.stable and row.match):
        return False
    kind = row.label.split("(")[0]
    if kind in ("Repelling", "NeutralIrrational"):
        return est.value.is_bottom and row.verdict == "Regular"
    if kind in ("SuperAttracting", "Parabolic"):
        base = Signature.alpha(sq_class(row.period))
        shifted = any(est.value == sig_shift(base, k) for k in range(row.period))
        return row.prediction.kind == "shift_sq" and shifted and row.verdict == "Irregular"
    return False


def test_criterion_5_prediction_table(acceptance):
    t0 = time.perf_counter()
    table, bad = [], []
    for name, fx in FIXTURES.items():
        rep = verify_cycle_theorem(fx.map, fx.period_max, EngineConfig(depth=fx.depth, r0=fx.r0))
        for row in rep.rows:
            sig = None if row.estimate.value is None else str(row.estimate.value)
            table.append((name, row.period, row.label, sig, row.verdict, row.k))
            if not _row_ok(row):
                bad.append(table[-1])
    dt = time.perf_counter() - t0
    for line in table:
        print("   ", line)
    ok = not bad and dt < 60
    acceptance(5, ok, f"{len(table) - len(bad)}/{len(table)} rows Stable and matching the prediction, "
                      f"{dt:.2f}s (limit 60s)" + (f", failing rows {bad}" if bad else ""))
    assert ok


# -- 6: lemma suite ---------------------------------------------------------------------------


def test_criterion_6_lemma_suite(acceptance):
    t0 = time.perf_counter()
    notes = []
    # schedule independence
    compared, disagree, unresolved = 0, [], []
    for name, fx in FIXTURES.items():
        f = fx.map
        crit = critical_points(f)
        for n in range(1, fx.period_max + 1):
            for cyc in periodic_cycles(f, n, crit=crit):
                orbit = backward_orbit_from_cycle(cyc, 1)
                a = estimate_signature(f, orbit, 0, fx.radii(), fx.depth)
                b = estimate_signature(f, orbit, 0, fx.radii(n=5, scale=0.75), fx.depth)
                if not (a.stable and b.stable):
                    unresolved.append((name, cyc.points[0]))
                    continue
                compared += 1
                if a.value != b.value:
                    disagree.append((name, cyc.points[0], str(a.value), str(b.value)))
    schedule_ok = compared > 0 and not disagree and not unresolved
    notes.append(f"schedules agree on {compared} lifts")

    # disjointness and shift equivariance on the two-cycle of z^2 - 1
    fx = FIXTURES["z2-1"]
    f, radii = fx.map, fx.radii()
    (two,) = periodic_cycles(f, 2)
    lift = backward_orbit_from_cycle(two, 1)
    est = {m: estimate_signature(f, lift.reindexed(m), 0, radii, fx.depth) for m in (0, 1, 2)}
    s0, s1, s2 = (est[m].value for m in (0, 1, 2))
    fixed_sigs = [estimate_signature(f, backward_orbit_from_cycle(c, 1), 0, radii, fx.depth).value
                  for c in periodic_cycles(f, 1)]
    stable = all(e.stable for e in est.values())
    disjoint_ok = stable and sig_op("intersect", s0, s1).is_bottom and all(
        sig_op("intersect", s0, s).is_bottom for s in fixed_sigs)
    equivariant_ok = stable and s1 == sig_shift(s0, -1) and s2 == sig_shift(s0, -2) and s2 == s0
    notes.append(f"two-cycle bases {s0} / {s1}")

    # non-periodic irregular orbit: S & shift(S, k) must be bottom
    g = siegel_golden()
    c = critical_points(g)[0]
    try:
        io = construct_irregular_orbit(g, c, c, 40)
    except SearchExhaustedError as exc:
        shift_ok = True
        notes.append(f"irregular orbit skipped: SearchExhaustedError: {exc}")
    else:
        e = estimate_signature(g, io.orbit, 0, FIXTURES["siegel"].radii(), 40)
        if e.stable:
            shift_ok = all(sig_op("intersect", e.value, sig_shift(e.value, k)).is_bottom
                           for k in range(1, 9))
            notes.append(f"irregular orbit (engulfing at {io.engulf_depths}) estimate {e.value}"
                         f" at depth 40: shift-disjoint k=1..8 {shift_ok}")
        else:
            shift_ok = True
            notes.append(f"irregular orbit estimate {e.verdict} at depth 40: property vacuous")
    dt = time.perf_counter() - t0
    ok = schedule_ok and disjoint_ok and equivariant_ok and shift_ok and dt < 60
    acceptance(6, ok, f"schedule-independence {schedule_ok}, disjointness {disjoint_ok}, "
                      f"shift-equivariance {equivariant_ok}, shift-disjointness {shift_ok}; "
                      + "; ".join(notes) + f"; {dt:.2f}s (limit 60s)"
                      + (f"; disagreements {disagree}" if disagree else "")
                      + (f"; unresolved {unresolved}" if unresolved else ""))
    assert ok


# -- 7: branching lower bound ------------------------------------------------------------------


def test_criterion_7_branching_count(acceptance):
    t0 = time.perf_counter()
    f = quadratic(0)
    cycles = periodic_cycles(f, 1)
    sup = min(cycles, key=lambda c: abs(c.points[0]))
    rep = min(cycles, key=lambda c: abs(c.points[0] - 1))
    b_sup = branching_count(pullback_chain(f, backward_orbit_from_cycle(sup), 0.25, 16))
    b_rep = branching_count(pullback_chain(f, backward_orbit_from_cycle(rep), 0.1, 16))
    dt = time.perf_counter() - t0
    ok = b_sup == (16, 2 ** 16) and b_rep == (0, 1) and dt < 5
    acceptance(7, ok, f"super-attracting B={b_sup[0]} (bound {b_sup[1]}), repelling B={b_rep[0]}, "
                      f"{dt:.2f}s (limit 5s)")
    assert ok


# -- 8: determinism ----------------------------------------------------------------------------


def _cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "plaque.cli", *argv], capture_output=True,
                          check=False)
    return proc.returncode, proc.stdout


def test_criterion_8_determinism(acceptance):
    t0 = time.perf_counter()
    runs = []
    for name, fx in FIXTURES.items():
        runs.append(("cycles", "--map", fx.spec, "--period-max", str(fx.period_max), "--seed", "0"))
        runs.append(("verify", "--map", fx.spec, "--period-max", str(fx.period_max),
                     "--depth", str(fx.depth), "--r0", str(fx.r0), "--seed", "0"))
    mismatched, errors = [], []
    for argv in runs:
        (c1, out1), (c2, out2) = _cli(*argv), _cli(*argv)
        if c1 or c2 or not out1:
            errors.append(argv[:3])
        elif out1 != out2:
            mismatched.append(argv[:3])
    dt = time.perf_counter() - t0
    ok = not mismatched and not errors
    acceptance(8, ok, f"{len(runs)} CLI documents rerun, byte-identical {len(runs) - len(mismatched)}"
                      f"/{len(runs)}, errors {errors or 0}, {dt:.2f}s")
    assert ok

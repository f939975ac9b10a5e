"""``plaque`` command-line front end.

Every subcommand prints one JSON document on stdout (``--format csv`` dumps
pulled-back curve samples for ``pullback`` only).  Documents carry a
``schema`` tag and echo the effective configuration so a run can be
reproduced from its own output; command results sit at the top level.
Complex numbers are written as ``[re, im]``; keys are sorted so identical
runs are byte-identical.

Exit status: 0 on success, 1 on engine error, 2 on usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .dynamics import (Cycle, Polynomial, Tolerances, _parse_complex, classify_cycle,
                       critical_points, orbit_closure_sample, parse_map, periodic_cycles,
                       recurrence_probe)
from .pullback import (PullbackChain, TraceConfig, backward_orbit_from_cycle,
                       construct_irregular_orbit, construct_regular_plaque, forward_residual,
                       index_bits, pullback_chain)
from .seqlattice import TailClass, evaluate
from .signature import (EngineConfig, _index_from_chain, branching_count, estimate_signature,
                        inverse_critical_probe, predict_signature, regularity_verdict,
                        verify_cycle_theorem)

SCHEMA = "plaque-report/1"

log = logging.getLogger("plaque")


class UsageError(ValueError):
    """Flag values that parse but make no sense together."""


# -- serialization -------------------------------------------------------------


def jsonable(obj):
    """Recursively convert engine values into JSON-ready Python objects."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps(doc: dict) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, indent=2)


# -- flag parsing ----------------------------------------------------------------


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


def _nonneg_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return n


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _radii(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(_positive_float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not vals:
        raise argparse.ArgumentTypeError("empty radius list")
    return vals


def _complex(text: str) -> complex:
    try:
        return _parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("map and numerics")
    g.add_argument("--map", default="quad:c=0",
                   help='map spec: "quad:c=<z>", "siegel:golden" or ascending coefficients "a0,a1,..."')
    g.add_argument("--seed", type=int, default=0, help="root-finder initialization seed")
    g.add_argument("--tol-root", type=_positive_float, default=Tolerances.root)
    g.add_argument("--tol-band", type=_positive_float, default=Tolerances.band)
    g.add_argument("--p-max", type=_positive_int, default=Tolerances.p_max)
    g.add_argument("--format", choices=("json", "csv"), default="json")
    o = common.add_argument_group("orbits and neighborhoods")
    o.add_argument("--cycle", action="append", default=[], metavar="SPEC",
                   help="fixed:<z> | period:<n>:<index> | base:<i>; may be repeated")
    o.add_argument("--critical", default="0",
                   help="critical point: integer index into the sorted critical points, or a complex value")
    o.add_argument("--depth", type=_nonneg_int, default=None)
    o.add_argument("--radius", type=_positive_float, default=None)
    o.add_argument("--radii", type=_radii, default=None, help="comma-separated decreasing radii")
    o.add_argument("--r0", type=_positive_float, default=EngineConfig.r0,
                   help="largest radius of the default schedule r0 * 2**-j")
    o.add_argument("--n-radii", type=_positive_int, default=EngineConfig.n_radii)
    o.add_argument("--period-max", type=_positive_int, default=2)
    o.add_argument("--budget", type=_positive_int, default=EngineConfig.budget)
    o.add_argument("--eps", type=_positive_float, default=EngineConfig.eps)
    o.add_argument("--steps", type=_positive_int, default=EngineConfig.n_sample,
                   help="forward steps for orbit-closure samples")
    o.add_argument("--x0", type=_complex, default=None, help="start point of an irregular orbit")
    o.add_argument("--points", type=_positive_int, default=5, help="sample points tested by probe")
    o.add_argument("--samples", type=_positive_int, default=TraceConfig.samples,
                   help="boundary samples of the initial disk")

    parser = argparse.ArgumentParser(prog="plaque", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    lat = sub.add_parser("lattice", parents=[common], help="evaluate a tail-class expression")
    lat.add_argument("expr", help='e.g. "sq(2) & sq(3)", "shift(1, sq(4)) <= sq(2)"')
    helps = {
        "critpts": "critical points of the map",
        "cycles": "periodic cycles up to --period-max with multipliers and labels",
        "classify": "classify the selected cycle (or all cycles up to --period-max)",
        "pullback": "pull a disk back along a cycle lift and report the chain",
        "index": "index bits of a critical point along a cycle lift",
        "signature": "signature estimate over a radius schedule",
        "verify": "compare estimated and predicted signatures for all cycles",
        "regular": "regularity verdict of a cycle lift, or a constructed regular plaque",
        "irregular": "construct a backward orbit engulfing a recurrent critical point",
        "probe": "recurrence and inverse-critical probes for a critical point",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


# -- resolution helpers ------------------------------------------------------------


def _tolerances(args) -> Tolerances:
    return replace(Tolerances(), root=args.tol_root, band=args.tol_band, p_max=args.p_max)


def _engine(args, depth_default: int = 32) -> EngineConfig:
    trace = replace(TraceConfig(), samples=args.samples, seed=args.seed)
    radii = args.radii
    if radii is not None and any(b >= a for a, b in zip(radii, radii[1:])):
        raise UsageError("--radii must be strictly decreasing")
    depth = depth_default if args.depth is None else args.depth
    return EngineConfig(depth=depth, r0=args.r0, n_radii=args.n_radii, radii=radii,
                        eps=args.eps, budget=args.budget, n_sample=args.steps,
                        trace=trace, tol=_tolerances(args), seed=args.seed)


def _critical(args, f: Polynomial) -> tuple[int, complex]:
    crit = critical_points(f, seed=args.seed)
    text = args.critical.strip()
    try:
        k = int(text)
    except ValueError:
        try:
            z = _parse_complex(text)
        except ValueError:
            raise UsageError(f"--critical: not an index or complex value: {text!r}") from None
        k = int(np.argmin([abs(z - c) for c in crit]))
        if abs(crit[k] - z) > 1e-6 * (1 + abs(z)):
            raise UsageError(f"--critical {text} is not a critical point of {f.spec()}")
        return k, crit[k]
    if not 0 <= k < len(crit):
        raise UsageError(f"--critical index {k} out of range 0..{len(crit) - 1}")
    return k, crit[k]


def _cycle(args, f: Polynomial, tol: Tolerances) -> tuple[Cycle, int, dict]:
    selector, base = None, 1
    for spec in args.cycle:
        kind, _, rest = spec.partition(":")
        if kind == "base":
            try:
                base = int(rest)
            except ValueError:
                raise UsageError(f"--cycle {spec}: base must be an integer") from None
        elif kind in ("fixed", "period"):
            if selector is not None:
                raise UsageError("only one fixed:/period: cycle selector may be given")
            selector = (kind, rest)
        else:
            raise UsageError(f"--cycle {spec}: expected fixed:<z>, period:<n>:<index> or base:<i>")
    if selector is None:
        raise UsageError("a cycle is required: --cycle fixed:<z> or --cycle period:<n>:<index>")
    kind, rest = selector
    crit = critical_points(f, seed=args.seed)
    if kind == "fixed":
        try:
            z = _parse_complex(rest)
        except ValueError:
            raise UsageError(f"--cycle fixed:{rest}: not a complex number") from None
        cycles = periodic_cycles(f, 1, tol=tol, seed=args.seed, crit=crit)
        cyc = min(cycles, key=lambda cy: abs(cy.points[0] - z))
        if abs(cyc.points[0] - z) > 1e-3 * (1 + abs(z)):
            raise UsageError(f"no fixed point near {rest}; fixed points are "
                             + ", ".join(str(cy.points[0]) for cy in cycles))
        selected = {"kind": "fixed", "near": z}
    else:
        try:
            n_text, idx_text = rest.split(":")
            n, idx = int(n_text), int(idx_text)
        except ValueError:
            raise UsageError(f"--cycle period:{rest}: expected period:<n>:<index>") from None
        if n < 1:
            raise UsageError("cycle period must be positive")
        cycles = periodic_cycles(f, n, tol=tol, seed=args.seed, crit=crit)
        if not 1 <= idx <= len(cycles):
            raise UsageError(f"period-{n} cycle index must be in 1..{len(cycles)}")
        cyc = cycles[idx - 1]
        selected = {"kind": "period", "period": n, "index": idx}
    if not 1 <= base <= cyc.period:
        raise UsageError(f"base must be in 1..{cyc.period}")
    selected["base"] = base
    return cyc, base, selected


def _cycle_doc(cyc: Cycle) -> dict:
    return {"period": cyc.period, "points": list(cyc.points), "multiplier": cyc.multiplier,
            "abs_multiplier": abs(cyc.multiplier), "label": str(cyc.label),
            "multiplicity": cyc.multiplicity, "flagged": cyc.flagged, "notes": list(cyc.notes)}


def _class_str(t: TailClass | None) -> str | None:
    return None if t is None else str(t)


def _chain_doc(f: Polynomial, chain: PullbackChain) -> dict:
    return {
        "radius": chain.radius,
        "depth": chain.depth,
        "complete": chain.complete,
        "failure": chain.failure,
        "failed_level": chain.failed_level,
        "critical_points": list(chain.critical),
        "bits": {str(k): index_bits(chain, k) for k in range(len(chain.critical))},
        "forward_residual": forward_residual(f, chain),
        "branching": branching_count(chain)[0],
        "levels": [{"level": i + 1, "center": lv.center, "samples": len(lv.loop),
                    "traversals": lv.loop.traversals, "flags": list(lv.flags),
                    "windings": list(lv.windings)}
                   for i, lv in enumerate(chain.levels)],
    }


# -- commands ------------------------------------------------------------------------


def cmd_lattice(args, f, cfg):
    val = evaluate(args.expr)
    return {"expr": args.expr, "result": val if isinstance(val, bool) else str(val)}


def cmd_critpts(args, f, cfg):
    crit = critical_points(f, seed=args.seed)
    return {"critical_points": crit, "critical_values": [f(c) for c in crit]}


def cmd_cycles(args, f, cfg):
    crit = critical_points(f, seed=args.seed)
    out = []
    for n in range(1, args.period_max + 1):
        out += [_cycle_doc(cy) for cy in periodic_cycles(f, n, tol=cfg.tol, seed=args.seed, crit=crit)]
    return {"cycles": out}


def cmd_classify(args, f, cfg):
    if not args.cycle:
        return cmd_cycles(args, f, cfg)
    cyc, base, sel = _cycle(args, f, cfg.tol)
    crit = critical_points(f, seed=args.seed)
    label = classify_cycle(cyc.multiplier, cyc.points, crit, cfg.tol)
    return {"cycle": _cycle_doc(cyc), "selected": sel, "label": str(label)}


def _lift(args, f, cfg):
    cyc, base, sel = _cycle(args, f, cfg.tol)
    return cyc, backward_orbit_from_cycle(cyc, base), sel


def _radius(args) -> float:
    if args.radius is None:
        raise UsageError("--radius is required")
    return args.radius


def cmd_pullback(args, f, cfg):
    cyc, orbit, sel = _lift(args, f, cfg)
    chain = pullback_chain(f, orbit, _radius(args), cfg.depth, cfg.trace)
    if args.format == "csv":
        return chain
    return {"cycle": _cycle_doc(cyc), "selected": sel, "orbit": orbit.generator,
            "chain": _chain_doc(f, chain)}


def cmd_index(args, f, cfg):
    cyc, orbit, sel = _lift(args, f, cfg)
    k, c = _critical(args, f)
    chain = pullback_chain(f, orbit, _radius(args), cfg.depth, cfg.trace)
    res = _index_from_chain(chain, k)
    doc = {"cycle": _cycle_doc(cyc), "selected": sel, "critical": c, "critical_index": k,
           "bits": res.bits, "complete": chain.complete, "failure": chain.failure,
           "caveat": f"at depth {cfg.depth}, radius {chain.radius}"}
    if cfg.depth >= 16:
        doc.update(tail=_class_str(res.tail), preperiod=res.preperiod, period=res.period)
    return doc


def _per_radius(est):
    return [{"radius": p.radius, "bits": p.bits, "class": _class_str(p.tail),
             "preperiod": p.preperiod, "period": p.period, "failure": p.failure}
            for p in est.per_radius]


def cmd_signature(args, f, cfg):
    cyc, orbit, sel = _lift(args, f, cfg)
    k, c = _critical(args, f)
    radii = cfg.schedule()
    chains: dict = {}
    est = estimate_signature(f, orbit, k, radii, cfg.depth, cfg, chains)
    verdict = regularity_verdict(f, orbit, cfg.depth, radii, cfg, chains)
    pred = predict_signature(cyc, c, f)
    match = pred.match(est.value) if est.stable else None
    return {"cycle": _cycle_doc(cyc), "selected": sel, "orbit": orbit.generator,
            "critical": c, "critical_index": k, "per_radius": _per_radius(est),
            "signature": None if est.value is None else str(est.value),
            "estimate": est.verdict, "stabilization_depth": est.stabilization_depth,
            "monotone": est.monotone, "notes": est.notes,
            "regularity": verdict.kind, "caveat": verdict.caveat(),
            "prediction": str(pred), "prediction_note": pred.note,
            "k": match, "match": match is not None}


def cmd_verify(args, f, cfg):
    rep = verify_cycle_theorem(f, args.period_max, cfg)
    rows = []
    for r in rep.rows:
        rows.append({"period": r.period, "points": list(r.points), "multiplier": r.multiplier,
                     "label": r.label, "critical": r.critical, "prediction": str(r.prediction),
                     "estimate": r.estimate.verdict,
                     "signature": None if r.estimate.value is None else str(r.estimate.value),
                     "per_radius": _per_radius(r.estimate), "regularity": r.verdict,
                     "k": r.k, "match": r.match})
    return {"rows": rows, "passed": rep.passed,
            "caveat": f"at depth {cfg.depth}, radii {list(cfg.schedule())}"}


def cmd_regular(args, f, cfg):
    if args.cycle:
        cyc, orbit, sel = _lift(args, f, cfg)
        v = regularity_verdict(f, orbit, cfg.depth, cfg.schedule(), cfg)
        return {"cycle": _cycle_doc(cyc), "selected": sel, "orbit": orbit.generator,
                "verdict": v.kind, "caveat": v.caveat(),
                "classes": [{"radius": r, "classes": [_class_str(t) for t in ts]}
                            for r, ts in v.classes.items()]}
    depth = 12 if args.depth is None else cfg.depth
    orbit, chain = construct_regular_plaque(f, depth, cfg=cfg.trace)
    doc = _chain_doc(f, chain)
    regular = all(set(b) <= {"0"} for b in doc["bits"].values())
    return {"orbit": orbit.generator, "points": list(orbit.points), "chain": doc,
            "verdict": "Regular" if regular else "Inconclusive",
            "caveat": f"at depth {depth}, radius {chain.radius}"}


def cmd_irregular(args, f, cfg):
    k, c = _critical(args, f)
    x0 = c if args.x0 is None else args.x0
    depth = 16 if args.depth is None else cfg.depth
    radius = 0.4 if args.radius is None else args.radius
    io = construct_irregular_orbit(f, c, x0, depth, radius=radius, eps=cfg.eps,
                                   n_sample=cfg.n_sample, budget=cfg.budget, cfg=cfg.trace)
    return {"critical": c, "critical_index": k, "x0": x0, "orbit": io.orbit.generator,
            "points": list(io.orbit.points), "engulf_depths": io.engulf_depths,
            "radii": io.radii, "nodes": io.nodes, "sample_size": io.sample_size,
            "recurrence": io.recurrence, "residual": io.orbit.max_residual(f),
            "notes": io.notes}


def cmd_probe(args, f, cfg):
    k, c = _critical(args, f)
    rec = recurrence_probe(f, c, cfg.n_sample)
    samp = orbit_closure_sample(f, c, cfg.n_sample, dedup=cfg.tol.dedup)
    doc = {"critical": c, "critical_index": k,
           "recurrence": {"distance": rec.distance, "step": rec.step, "steps": rec.steps,
                          "escaped": rec.escaped},
           # whether c lies in the closure of its orbit, for both readings of "orbit of c"
           "in_orbit_closure": {"from_f(c)": rec.distance <= cfg.eps, "including_c": True},
           "sample_size": len(samp.points), "escaped": samp.escaped}
    if samp.escaped or not samp.points:
        doc["inverse_critical"] = None
        return doc
    radii = (args.radius,) if args.radius is not None else (args.radii or (cfg.eps,))
    depth = 6 if args.depth is None else cfg.depth
    rep = inverse_critical_probe(f, c, samp.points, radii, depth, cfg,
                                 points=samp.points[:args.points])
    doc["inverse_critical"] = {
        "fraction": rep.fraction, "depth": depth, "radii": list(radii),
        "entries": [{"point": e.point, "radius": e.radius, "status": e.status,
                     "chain": e.chain, "nodes": e.nodes} for e in rep.entries]}
    return doc


COMMANDS = {
    "lattice": cmd_lattice,
    "critpts": cmd_critpts,
    "cycles": cmd_cycles,
    "classify": cmd_classify,
    "pullback": cmd_pullback,
    "index": cmd_index,
    "signature": cmd_signature,
    "verify": cmd_verify,
    "regular": cmd_regular,
    "irregular": cmd_irregular,
    "probe": cmd_probe,
}


def _write_csv(chain: PullbackChain, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["level", "index", "re", "im", "traversals"])
    for i, lv in enumerate(chain.levels, start=1):
        for j, z in enumerate(lv.loop.open_samples):
            w.writerow([i, j, repr(float(z.real)), repr(float(z.imag)), lv.loop.traversals])


def _configure_logging() -> None:
    level = os.environ.get("PLAQUE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def dispatch(argv=None, out=None) -> int:
    """Run one command; returns the exit status."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format == "csv" and args.command != "pullback":
        print(f"plaque {args.command}: csv output is only available for pullback", file=sys.stderr)
        return 2
    try:
        try:
            f = parse_map(args.map)
        except ValueError as exc:
            raise UsageError(f"--map: {exc}") from None
        cfg = _engine(args)
        result = COMMANDS[args.command](args, f, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"plaque {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        log.debug("engine error", exc_info=True)
        print(f"plaque {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, PullbackChain):
        _write_csv(result, out)
        return 0
    config = {k: v for k, v in vars(args).items() if k not in ("command",)}
    config["map"] = f.spec()
    config["engine"] = cfg.as_dict()
    doc = {"schema": SCHEMA, "command": args.command, "config": config, **result}
    out.write(dumps(doc) + "\n")
    return 0


def main(argv=None) -> None:
    _configure_logging()
    try:
        code = dispatch(argv)
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed the pipe (e.g. ``| head``); not an engine error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()

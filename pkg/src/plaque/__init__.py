"""Signature calculus for plaque inverse limits of polynomial maps.

``seqlattice``
    Exact Boolean algebra of binary sequences modulo finite differences,
    and signatures (downsets) built from it.
``dynamics``
    Polynomial maps, critical points, periodic cycles and their multipliers.
``pullback``
    Pulled-back Jordan curves along backward orbits and index bits.
``signature``
    Signature estimates, regularity verdicts and cycle predictions.
"""
from .dynamics import (Cycle, CycleLabel, Polynomial, Tolerances, critical_points,
                       evaluate_orbit, parse_map, periodic_cycles, quadratic, siegel_golden)
from .pullback import (BackwardOrbit, PullbackChain, TraceConfig, backward_orbit_from_cycle,
                       construct_irregular_orbit, construct_regular_plaque, forward_residual,
                       index_bits, pullback_chain)
from .seqlattice import (ONE, ZERO, EventuallyPeriodicSequence, Signature, TailClass,
                         canonicalize, diagonal_witness, evaluate, meet_chain_reduce, shift_class,
                         sig_shift, sq_class)
from .signature import (EngineConfig, branching_count, estimate_signature, predict_signature,
                        regularity_verdict, verify_cycle_theorem)

__version__ = "0.1.0"

__all__ = [
    "BackwardOrbit", "Cycle", "CycleLabel", "EngineConfig", "EventuallyPeriodicSequence",
    "ONE", "Polynomial", "PullbackChain", "Signature", "TailClass", "Tolerances",
    "TraceConfig", "ZERO", "backward_orbit_from_cycle", "branching_count", "canonicalize",
    "construct_irregular_orbit", "construct_regular_plaque", "critical_points",
    "diagonal_witness", "estimate_signature", "evaluate", "evaluate_orbit", "forward_residual",
    "index_bits", "meet_chain_reduce", "parse_map", "periodic_cycles", "predict_signature",
    "pullback_chain", "quadratic", "regularity_verdict", "shift_class", "siegel_golden",
    "sig_shift", "sq_class", "verify_cycle_theorem",
]

"""Instrumented hybrid quantum/classical simulator.

Counts the classical steps needed to define data on a quantum register,
interpret its final state, and pass run-time parameters to it.
"""

from .algorithms import (
    HoppingHamiltonian,
    ScenarioResult,
    run_grover,
    run_linear_sim,
    run_nonlinear_counterexample,
    run_period_finding,
)
from .ledger import CostLedger, GrowthClass, charge, fit_growth
from .statevector import MeasurementOutcome, StateVector

__all__ = [
    "CostLedger",
    "GrowthClass",
    "HoppingHamiltonian",
    "MeasurementOutcome",
    "ScenarioResult",
    "StateVector",
    "charge",
    "fit_growth",
    "run_grover",
    "run_linear_sim",
    "run_nonlinear_counterexample",
    "run_period_finding",
]

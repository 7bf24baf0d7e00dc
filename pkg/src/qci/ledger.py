"""Classical step accounting and empirical growth classification.

A "classical step" is one association-list row read or write, one label
comparison, or one arithmetic operation on referent labels.  Code that
performs such work charges the ledger explicitly; nothing is inferred from
wall-clock time.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Iterable

import numpy as np

from .errors import ArgumentError, InsufficientDataError, PreconditionError

COUNTERS = (
    "definition_steps",
    "parameter_steps",
    "interpretation_steps",
    "baseline_steps",
    "quantum_oracle_queries",
    "quantum_gate_count",
)

# Steps charged to cross the classical/quantum interface.
INTERFACE_COUNTERS = ("definition_steps", "parameter_steps", "interpretation_steps")


@dataclass
class CostLedger:
    definition_steps: int = 0
    parameter_steps: int = 0
    interpretation_steps: int = 0
    baseline_steps: int = 0
    quantum_oracle_queries: int = 0
    quantum_gate_count: int = 0

    def charge(self, counter: str, amount: int = 1) -> "CostLedger":
        if counter not in COUNTERS:
            raise ArgumentError(f"unknown counter {counter!r}")
        if amount < 0:
            raise ArgumentError(f"charge amount must be non-negative, got {amount}")
        setattr(self, counter, getattr(self, counter) + int(amount))
        return self

    @property
    def interface_steps(self) -> int:
        return sum(getattr(self, c) for c in INTERFACE_COUNTERS)

    def merge(self, other: "CostLedger") -> "CostLedger":
        return CostLedger(**{f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)})

    __add__ = merge

    def snapshot(self) -> "CostLedger":
        return CostLedger(**asdict(self))

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


def charge(ledger: CostLedger, counter: str, amount: int = 1) -> CostLedger:
    return ledger.charge(counter, amount)


class StepCounter:
    """Counter handed to instrumented referent-level functions."""

    def __init__(self) -> None:
        self.steps = 0

    def tick(self, amount: int = 1) -> None:
        self.steps += amount


GROWTH_MODELS = {
    "constant": lambda N: np.ones_like(N),
    "log_N": np.log2,
    "linear_N": lambda N: N,
}


@dataclass(frozen=True)
class GrowthClass:
    label: str
    residual: float
    scale: float
    residuals: dict

    def __str__(self) -> str:
        return f"{self.label} (residual {self.residual:.3g})"


def fit_growth(points: Iterable[tuple[int, float]]) -> GrowthClass:
    """Classify step counts as constant, log_N or linear_N in ``N``.

    Each model ``a * f(N)`` is fitted with a single scale ``a`` by
    minimizing the sum of squared relative errors; the model with the
    smallest residual wins, ties going to the slower-growing model.
    """
    pts = sorted((int(N), float(y)) for N, y in points)
    if len({N for N, _ in pts}) < 4:
        raise InsufficientDataError(f"need at least 4 distinct N values, got {len(pts)} points")
    Ns = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    if np.any(np.diff(Ns) <= 0):
        raise PreconditionError("N values must be strictly increasing")
    if any(N < 1 or N & (N - 1) for N, _ in pts):
        raise PreconditionError("every N must be a power of two")

    if not np.any(ys):
        return GrowthClass("constant", 0.0, 0.0, {name: 0.0 for name in GROWTH_MODELS})

    weights = np.where(ys != 0, np.abs(ys), 1.0)
    residuals, scales = {}, {}
    for name, model in GROWTH_MODELS.items():
        f = model(Ns) / weights
        target = ys / weights
        a = float(f @ target / (f @ f))
        residuals[name] = float(np.sum((a * f - target) ** 2))
        scales[name] = a
    best = min(GROWTH_MODELS, key=lambda name: residuals[name])
    best_residual = residuals[best]
    if best_residual < 1e-24:
        best_residual = 0.0
    return GrowthClass(best, best_residual, scales[best], residuals)

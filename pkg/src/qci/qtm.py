"""Cost of telling a quantum machine what to run.

A program register of ``m`` qubits has ``M = 2**m`` global states whose
values must each be stipulated, so specifying a program that way costs
``M`` steps.  A named-algorithm API only needs the name plus the
algorithm's run-time parameters: ``arity + 1`` steps.

Simulator boundary conditions are run-time parameters too.  They are only
usable if they are linear in the register's basis vectors and if their
count stays within a constant multiple of ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NotFoundError, ValidationError
from .ledger import CostLedger

LINEARITY_TOL = 1e-9
DEFAULT_TRIALS = 64
# boundary specs may cost at most this many parameter steps per qubit
WORTHINESS_FACTOR = 2

# name -> arity, or mode -> arity for algorithms with several framings
REGISTERED_ALGORITHMS: dict[str, object] = {
    # query: the phone number; iontrap: the two pulse parameters
    "grover": {"query": 1, "iontrap": 2},
    "period-finding": 2,
    "linear-sim": 2,
    "nonlinear": 2,
}
ALIASES = {"shor-order-finding": "period-finding"}


@dataclass(frozen=True)
class ProgramSpec:
    m: int
    values: tuple = ()

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValidationError(f"program register size must be >= 0, got {self.m}")
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != 1 << self.m:
            raise ValidationError(
                f"an {self.m}-qubit program register has {1 << self.m} states, "
                f"got {len(self.values)} values"
            )


@dataclass(frozen=True)
class ApiCall:
    algorithm: str
    params: tuple = ()
    mode: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(self.params))


def registered_arity(algorithm: str, mode: Optional[str] = None) -> int:
    name = ALIASES.get(algorithm, algorithm)
    if name not in REGISTERED_ALGORITHMS:
        raise NotFoundError(f"no registered algorithm named {algorithm!r}")
    entry = REGISTERED_ALGORITHMS[name]
    if isinstance(entry, dict):
        mode = mode or next(iter(entry))
        if mode not in entry:
            raise NotFoundError(f"{algorithm!r} has no mode {mode!r}")
        return entry[mode]
    if mode is not None:
        raise NotFoundError(f"{algorithm!r} has no modes")
    return entry


def registered_calls() -> list[tuple[str, Optional[str], int]]:
    """Every ``(name, mode, arity)`` the API accepts."""
    out = []
    for name, entry in REGISTERED_ALGORITHMS.items():
        if isinstance(entry, dict):
            out.extend((name, mode, arity) for mode, arity in entry.items())
        else:
            out.append((name, None, entry))
    return out


def specify_qtm_program(spec: ProgramSpec, ledger: Optional[CostLedger] = None) -> int:
    if len(spec.values) != 1 << spec.m:
        raise ValidationError("program values do not cover the register")
    cost = 1 << spec.m
    if ledger is not None:
        ledger.charge("parameter_steps", cost)
    return cost


def specify_api_call(call: ApiCall, ledger: Optional[CostLedger] = None) -> int:
    arity = registered_arity(call.algorithm, call.mode)
    if len(call.params) != arity:
        raise ValidationError(
            f"{call.algorithm} takes {arity} parameters, got {len(call.params)}"
        )
    cost = arity + 1
    if ledger is not None:
        ledger.charge("parameter_steps", cost)
    return cost


@dataclass(frozen=True)
class BoundarySpec:
    """User boundary condition on an ``n``-mode linear simulation.

    ``values`` gives one complex number per basis vector.  ``rule`` extends
    the specification to arbitrary superpositions (a length-``n`` coefficient
    vector); by default it is the literal linear combination of ``values``.
    """

    values: tuple
    rule: Optional[Callable[[np.ndarray], complex]] = field(default=None, compare=False)
    parameter_count: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
        if not self.values:
            raise ValidationError("boundary spec must cover at least one basis vector")
        if self.rule is None:
            weights = np.array(self.values)
            object.__setattr__(self, "rule", lambda c: complex(weights @ np.asarray(c)))
        if self.parameter_count is None:
            object.__setattr__(self, "parameter_count", len(self.values))

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, coefficients) -> complex:
        return self.rule(np.asarray(coefficients, dtype=np.complex128))

    @classmethod
    def linear(cls, values: Sequence[complex]) -> "BoundarySpec":
        return cls(tuple(values))

    @classmethod
    def zero(cls, n: int) -> "BoundarySpec":
        return cls((0.0,) * n)

    @classmethod
    def squaring(cls, values: Sequence[complex]) -> "BoundarySpec":
        weights = np.array(values, dtype=np.complex128)
        return cls(tuple(values), rule=lambda c: complex(weights @ (c**2)))

    @classmethod
    def over_global_states(cls, global_values: Sequence[complex]) -> "BoundarySpec":
        """Boundary stipulated on all ``2**n`` global states.

        The rule is still linear on the basis vectors, but every global
        value is a parameter the user has to supply.
        """
        N = len(global_values)
        n = N.bit_length() - 1
        if N != 1 << n:
            raise ValidationError("global boundary needs 2**n values")
        per_basis = [global_values[1 << i] for i in range(n)]
        return cls(tuple(per_basis), parameter_count=N)


def check_boundary_linearity(
    spec: BoundarySpec, trials: int = DEFAULT_TRIALS, seed: int = 0
) -> bool:
    """Randomized additivity/homogeneity check of the extension rule."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    rng = np.random.default_rng(seed)

    def draw(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    for _ in range(trials):
        u, v = draw(spec.n), draw(spec.n)
        alpha, beta = draw(2)
        lhs = spec(alpha * u + beta * v)
        rhs = alpha * spec(u) + beta * spec(v)
        if abs(lhs - rhs) > LINEARITY_TOL:
            return False
    return True

"""Data-definition mappings onto the register and their interpretations.

Three regimes are supported:

* Case 1: integers encoded directly in binary, register order.  Only the
  convention itself has to be communicated, so definition and
  interpretation each cost one step.
* Case 2: arbitrary labels assigned to individual qubits (plus a label for
  the all-zeros state).  The table has ``n`` entries, so writing it and
  reading it back each cost ``n`` steps.
* Case 3: arbitrary records assigned to the ``N = 2**n`` global basis
  states.  The table is an association list; writing it costs ``N`` and
  every lookup is a linear scan.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Hashable, Optional, Sequence

import numpy as np

from .errors import (
    CorruptionError,
    DomainError,
    KindError,
    NotFoundError,
    ShapeError,
    SizeError,
    ValidationError,
)
from .ledger import CostLedger, StepCounter
from .statevector import MAX_QUBITS, MeasurementOutcome, StateVector, measure_qubit_marginals

PHONE_LENGTH = 12


@dataclass(frozen=True)
class InterpretedValue:
    kind: str
    payload: Any

    def __post_init__(self) -> None:
        checks = {
            "integer": lambda p: isinstance(p, (int, np.integer)),
            "coefficient-list": lambda p: isinstance(p, list),
            "record": lambda p: isinstance(p, tuple) and len(p) == 2,
            "referent-label": lambda p: True,
        }
        if self.kind not in checks:
            raise KindError(f"unknown interpreted kind {self.kind!r}")
        if not checks[self.kind](self.payload):
            raise ValidationError(f"payload {self.payload!r} does not match kind {self.kind}")


def _require_digital(outcome: MeasurementOutcome, why: str) -> int:
    if outcome.kind != "digital":
        raise KindError(why)
    return int(outcome.basis_index)


# -- Case 1 ---------------------------------------------------------------


@dataclass(frozen=True)
class Case1Codec:
    """Binary, register-order encoding of the integers ``0..2**n - 1``."""

    n: int
    binary_register_order: bool = True

    @classmethod
    def define(cls, n: int, ledger: Optional[CostLedger] = None) -> "Case1Codec":
        """Build the codec, charging the single convention bit."""
        if not 1 <= n <= MAX_QUBITS:
            raise SizeError(f"qubit count must be in 1..{MAX_QUBITS}, got {n}")
        if ledger is not None:
            ledger.charge("definition_steps", 1)
        return cls(n)


def c1_encode(codec: Case1Codec, x: int) -> int:
    if not 0 <= x < (1 << codec.n):
        raise DomainError(f"{x} is not representable on {codec.n} qubits")
    return int(x)


def c1_interpret(
    codec: Case1Codec, outcome: MeasurementOutcome, ledger: Optional[CostLedger] = None
) -> InterpretedValue:
    index = _require_digital(outcome, "Case 1 reads integers; continuous values have no meaning")
    if index >= (1 << codec.n):
        raise DomainError(f"basis index {index} exceeds the {codec.n}-qubit codec")
    if ledger is not None:
        ledger.charge("interpretation_steps", 1)
    return InterpretedValue("integer", index)


# -- Case 2 ---------------------------------------------------------------


@dataclass(frozen=True)
class Case2Codec:
    """Association table from qubit index to referent label."""

    entries: tuple[tuple[int, Hashable], ...]
    null_referent: Hashable = None

    def __post_init__(self) -> None:
        qubits = [q for q, _ in self.entries]
        labels = [lab for _, lab in self.entries]
        if sorted(qubits) != list(range(len(qubits))):
            raise ValidationError("qubit indices must be exactly 0..n-1")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate referent labels in {labels}")
        if self.null_referent in set(labels):
            raise ValidationError("NULL referent must differ from every qubit label")

    @property
    def n(self) -> int:
        return len(self.entries)


def c2_define(
    referents: Sequence[Hashable], null_label: Hashable, ledger: Optional[CostLedger] = None
) -> Case2Codec:
    if not 1 <= len(referents) <= MAX_QUBITS:
        raise SizeError(f"need 1..{MAX_QUBITS} referents, got {len(referents)}")
    codec = Case2Codec(tuple(enumerate(referents)), null_label)
    if ledger is not None:
        ledger.charge("definition_steps", codec.n)
    return codec


def _c2_lookup(codec: Case2Codec, qubit: int) -> Hashable:
    # the table is stored in qubit order, but is read as an association list
    for q, label in codec.entries:
        if q == qubit:
            return label
    raise CorruptionError(f"qubit {qubit} missing from Case 2 table")


def c2_interpret(
    codec: Case2Codec, outcome: MeasurementOutcome, ledger: Optional[CostLedger] = None
) -> InterpretedValue:
    """Pair each qubit's measured probability with its referent label."""
    if outcome.kind != "analog":
        raise KindError("Case 2 interpretation needs per-qubit marginals")
    marginals = outcome.qubit_marginals
    if len(marginals) != codec.n:
        raise ShapeError(f"expected {codec.n} marginals, got {len(marginals)}")
    pairs = [(_c2_lookup(codec, i), float(p)) for i, p in enumerate(marginals)]
    if ledger is not None:
        ledger.charge("interpretation_steps", codec.n)
    return InterpretedValue("coefficient-list", pairs)


InstrumentedMap = Callable[[Hashable, StepCounter], Hashable]


def run_standalone(algorithm: InstrumentedMap, x: Hashable) -> tuple[Hashable, int]:
    counter = StepCounter()
    y = algorithm(x, counter)
    return y, counter.steps


def nonlinear_mf(
    codec: Case2Codec,
    state: StateVector,
    algorithm: InstrumentedMap,
    ledger: Optional[CostLedger] = None,
) -> InterpretedValue:
    """Interpret ``state`` through a nonlinear referent-level map.

    The input referent is decoded from the register (``n`` table reads),
    after which the map has to be executed classically on it.  All of the
    map's counted steps are charged as interpretation cost.
    """
    if state.n != codec.n:
        raise ShapeError(f"state has {state.n} qubits, codec has {codec.n}")
    decoded = c2_interpret(codec, measure_qubit_marginals(state), ledger)
    label, weight = max(decoded.payload, key=lambda pair: pair[1])
    referent = label if weight > 0.5 else codec.null_referent
    counter = StepCounter()
    result = algorithm(referent, counter)
    if ledger is not None:
        ledger.charge("interpretation_steps", counter.steps)
    return InterpretedValue("referent-label", result)


# -- Case 3 ---------------------------------------------------------------


@dataclass(frozen=True)
class GlobalAssignmentTable:
    """Association list of ``(state_index, phone_number, uid)`` rows.

    Rows are scanned linearly.  When built with ``indexed=True`` a direct
    index is also kept; building it is charged ``N`` further definition
    steps so the total remains linear in ``N``.
    """

    rows: tuple[tuple[int, str, int], ...]
    index: Optional[dict] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        N = len(self.rows)
        if N < 2 or N & (N - 1):
            raise ValidationError(f"table needs 2**n rows, got {N}")
        states = [r[0] for r in self.rows]
        if sorted(states) != list(range(N)):
            raise ValidationError("state indices must be a permutation of 0..N-1")
        if len({r[1] for r in self.rows}) != N:
            raise ValidationError("phone numbers must be distinct")
        if len({r[2] for r in self.rows}) != N:
            raise ValidationError("uids must be distinct")

    @property
    def N(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1


def c3_define(
    records: Sequence[tuple[str, int]],
    ledger: Optional[CostLedger] = None,
    *,
    state_indices: Optional[Sequence[int]] = None,
    indexed: bool = False,
) -> GlobalAssignmentTable:
    """Assign each ``(phone_number, uid)`` record to a global basis state.

    Records are assigned to states ``0..N-1`` in the given order unless
    ``state_indices`` supplies an explicit permutation.
    """
    records = list(records)
    N = len(records)
    if N < 2 or N & (N - 1):
        raise ValidationError(f"need 2**n records, got {N}")
    if state_indices is None:
        state_indices = range(N)
    state_indices = list(state_indices)
    if len(state_indices) != N:
        raise ValidationError("state_indices length must match records")
    rows = tuple((int(s), str(p), int(u)) for s, (p, u) in zip(state_indices, records))
    index = None
    if indexed:
        index = {"state": {r[0]: r for r in rows}, "phone": {r[1]: r for r in rows}}
    table = GlobalAssignmentTable(rows, index)
    if ledger is not None:
        ledger.charge("definition_steps", N * (2 if indexed else 1))
    return table


def c3_interpret(
    table: GlobalAssignmentTable, outcome: MeasurementOutcome, ledger: Optional[CostLedger] = None
) -> InterpretedValue:
    """Look up the record assigned to the measured basis state."""
    index = _require_digital(
        outcome, "Case 3 referents are global states; analog readout has no meaning"
    )
    if table.index is not None:
        if ledger is not None:
            ledger.charge("interpretation_steps", 1)
        row = table.index["state"].get(index)
        if row is None:
            raise CorruptionError(f"state {index} missing from assignment table")
        return InterpretedValue("record", (row[1], row[2]))

    for pos, (state, phone, uid) in enumerate(table.rows):
        if state == index:
            if ledger is not None:
                ledger.charge("interpretation_steps", pos + 1)
            return InterpretedValue("record", (phone, uid))
    if ledger is not None:
        ledger.charge("interpretation_steps", table.N)
    raise CorruptionError(f"state {index} missing from assignment table")


def c3_find_marked(
    table: GlobalAssignmentTable, query: str, ledger: Optional[CostLedger] = None
) -> int:
    """Return the basis state assigned to ``query`` (the index to mark)."""
    if table.index is not None:
        if ledger is not None:
            ledger.charge("parameter_steps", 1)
        row = table.index["phone"].get(query)
        if row is None:
            raise NotFoundError(f"{query!r} not in directory")
        return row[0]

    for pos, (state, phone, _uid) in enumerate(table.rows):
        if phone == query:
            if ledger is not None:
                ledger.charge("parameter_steps", pos + 1)
            return state
    if ledger is not None:
        ledger.charge("parameter_steps", table.N)
    raise NotFoundError(f"{query!r} not in directory")


# -- directories ----------------------------------------------------------


def format_phone(number: int, area: int = 415) -> str:
    digits = f"{number:07d}"
    return f"{area}-{digits[:3]}-{digits[3:]}"


def synthetic_directory(n: int, seed: int) -> list[tuple[str, int]]:
    """Deterministic directory of ``2**n`` distinct numbers with uids ``1..N``."""
    N = 1 << n
    rng = np.random.default_rng([seed, n])
    numbers = rng.choice(10_000_000, size=N, replace=False)
    return [(format_phone(int(x)), uid) for uid, x in enumerate(numbers, start=1)]


def read_table_file(path) -> list[tuple[int, str, int]]:
    """Parse ``state_index,phone_number,uid`` lines."""
    rows = []
    with open(path, newline="") as fh:
        for line in csv.reader(fh):
            if not line or not "".join(line).strip():
                continue
            state, phone, uid = (s.strip() for s in line)
            if len(phone) != PHONE_LENGTH:
                raise ValidationError(f"phone number {phone!r} is not {PHONE_LENGTH} characters")
            rows.append((int(state), phone, int(uid)))
    return rows


def table_from_file(path, ledger: Optional[CostLedger] = None) -> GlobalAssignmentTable:
    rows = read_table_file(path)
    return c3_define(
        [(p, u) for _, p, u in rows], ledger, state_indices=[s for s, _, _ in rows]
    )


def fig1_fixture_path() -> Path:
    return Path(str(resources.files("qci") / "data" / "fig1_directory.csv"))


def fig1_records() -> list[tuple[str, int]]:
    """The four-row directory used throughout the examples and tests."""
    rows = sorted(read_table_file(fig1_fixture_path()))
    return [(p, u) for _, p, u in rows]

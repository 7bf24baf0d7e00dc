"""End-to-end scenarios, each wired through a codec and a cost ledger.

=========================  ======  ==================================
scenario                   regime  what it exercises
=========================  ======  ==================================
``run_period_finding``     Case 1  order finding by phase estimation
``run_linear_sim``         Case 2  one-hot linear (hopping) dynamics
``run_nonlinear_counter…`` Case 2  nonlinear map read off the register
``run_grover``             Case 3  reverse phone-directory search
=========================  ======  ==================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Optional, Sequence

import numpy as np
import scipy.linalg

from .codecs import (
    Case1Codec,
    GlobalAssignmentTable,
    InstrumentedMap,
    c1_interpret,
    c2_define,
    c2_interpret,
    c3_define,
    c3_find_marked,
    c3_interpret,
    nonlinear_mf,
    run_standalone,
)
from .errors import (
    ArgumentError,
    NonlinearBoundaryError,
    NotFoundError,
    SizeError,
    ValidationError,
    WorthinessError,
)
from .ledger import CostLedger, StepCounter
from .qtm import WORTHINESS_FACTOR, ApiCall, BoundarySpec, check_boundary_linearity, specify_api_call
from .statevector import (
    MAX_QUBITS,
    H,
    MeasurementOutcome,
    StateVector,
    SWAP,
    apply_controlled_permutation,
    apply_unitary,
    controlled_phase,
    grover_iteration,
    grover_iteration_count,
    init_basis,
    init_uniform,
    measure_digital,
    measure_qubit_marginals,
)

COMMUTE_TOL = 1e-6
MAX_PERIOD_ATTEMPTS = 10
MAX_MODULUS = 21


@dataclass
class ScenarioResult:
    scenario: str
    n: int
    N: int
    ledger: CostLedger
    correct: bool
    payload: dict = field(default_factory=dict)
    seed: Optional[int] = None
    error: Optional[str] = None


# -- Case 3: Grover -------------------------------------------------------


def grover_pipeline(
    table: GlobalAssignmentTable,
    query: str,
    ledger: Optional[CostLedger] = None,
    *,
    measurement: str = "argmax",
    seed: Optional[int] = None,
) -> tuple[tuple[str, int], dict]:
    """Mark ``query`` via the table, search, and read the record back."""
    marked = c3_find_marked(table, query, ledger)
    state = init_uniform(table.n)
    iterations = grover_iteration_count(table.N)
    for _ in range(iterations):
        state = grover_iteration(state, marked, ledger)
    outcome = measure_digital(state, measurement, seed)
    record = c3_interpret(table, outcome, ledger).payload
    return record, {
        "marked": marked,
        "measured": outcome.basis_index,
        "marked_probability": float(state.probabilities()[marked]),
        "iterations": iterations,
    }


def run_grover(
    n: int,
    records: Sequence[tuple[str, int]],
    query: str,
    seed: Optional[int] = None,
    *,
    indexed: bool = False,
    measurement: str = "argmax",
) -> ScenarioResult:
    """Reverse directory lookup: find the record whose number is ``query``.

    The directory is stipulated onto the global basis states, the query is
    translated to a marked index by scanning that table, Grover search
    amplifies the marked state, and the measured index is translated back
    by scanning again.  A plain classical scan of the directory is charged
    to ``baseline_steps`` for comparison.
    """
    if not 2 <= n <= 12:
        raise SizeError(f"grover scenario supports 2 <= n <= 12, got {n}")
    N = 1 << n
    if len(records) != N:
        raise ValidationError(f"directory must have {N} records, got {len(records)}")
    ledger = CostLedger()
    table = c3_define(records, ledger, indexed=indexed)
    (phone, uid), trace = grover_pipeline(table, query, ledger, measurement=measurement, seed=seed)

    baseline = None
    for pos, (number, row_uid) in enumerate(records):
        if number == query:
            ledger.charge("baseline_steps", pos + 1)
            baseline = (number, row_uid)
            break

    return ScenarioResult(
        "grover",
        n,
        N,
        ledger,
        correct=phone == query,
        payload={
            "record": (phone, uid),
            "baseline_record": baseline,
            **trace,
        },
        seed=seed,
    )


# -- Case 1: period finding -----------------------------------------------


def multiplicative_order(a: int, M: int) -> int:
    """Smallest ``r > 0`` with ``a**r % M == 1``, by brute force."""
    if math.gcd(a, M) != 1:
        raise ArgumentError(f"gcd({a}, {M}) != 1")
    if M == 1:
        return 1
    value, r = a % M, 1
    while value != 1:
        value = value * a % M
        r += 1
    return r


def qft(state: StateVector, qubits: Sequence[int], ledger=None, inverse: bool = False) -> StateVector:
    """Quantum Fourier transform on ``qubits`` (``qubits[0]`` least significant).

    Maps ``|x>`` to ``sum_y exp(2*pi*i*x*y/2**t)|y> / sqrt(2**t)``.
    """
    qubits = list(qubits)
    t = len(qubits)
    sign = -1.0 if inverse else 1.0
    ops = []
    for j in range(t - 1, -1, -1):
        ops.append((H, [qubits[j]]))
        for k in range(j - 1, -1, -1):
            ops.append((controlled_phase(sign * math.pi / (1 << (j - k))), [qubits[k], qubits[j]]))
    for i in range(t // 2):
        ops.append((SWAP, [qubits[i], qubits[t - 1 - i]]))
    if inverse:
        ops.reverse()
    for u, targets in ops:
        state = apply_unitary(state, u, targets, ledger)
    return state


def period_register_sizes(M: int) -> tuple[int, int]:
    """Return ``(control, work)`` qubit counts for modulus ``M``.

    The control register is ``2 * work`` qubits where that fits in the
    simulator; otherwise it shrinks as long as ``2**control >= M**2`` still
    holds, which keeps continued fractions unambiguous.
    """
    work = max(1, (M - 1).bit_length())
    control = min(2 * work, MAX_QUBITS - work)
    if (1 << control) < M * M:
        raise SizeError(f"modulus {M} needs more than {MAX_QUBITS} qubits")
    return control, work


def order_finding_state(a: int, M: int, ledger=None) -> tuple[StateVector, int, int]:
    control, work = period_register_sizes(M)
    n = control + work
    work_qubits = list(range(control, n))
    state = init_basis(n, 1 << control)  # work register holds 1
    for q in range(control):
        state = apply_unitary(state, H, [q], ledger)
    for j in range(control):
        mult = pow(a, 1 << j, M)
        perm = [mult * y % M if y < M else y for y in range(1 << work)]
        state = apply_controlled_permutation(state, j, work_qubits, perm, ledger)
        if ledger is not None:
            ledger.charge("quantum_oracle_queries", 1)
    state = qft(state, range(control), ledger, inverse=True)
    return state, control, work


def _reduce_order(a: int, M: int, r: int) -> int:
    for p in range(2, r + 1):
        while r % p == 0 and pow(a, r // p, M) == 1:
            r //= p
    return r


def run_period_finding(
    a: int, M: int, seed: int = 0, max_attempts: int = MAX_PERIOD_ATTEMPTS
) -> ScenarioResult:
    """Recover the multiplicative order of ``a`` modulo ``M``.

    The measured control register is read as a plain binary integer ``y``
    and ``y / 2**control`` is expanded as a continued fraction; the
    denominator (or its lcm with earlier candidates) is accepted once
    ``a**r = 1 (mod M)``.
    """
    if not 2 <= M <= MAX_MODULUS:
        raise ArgumentError(f"modulus must be in 2..{MAX_MODULUS}, got {M}")
    if math.gcd(a, M) != 1:
        raise ArgumentError(f"gcd({a}, {M}) = {math.gcd(a, M)}; no order exists")
    a %= M
    expected = multiplicative_order(a, M)
    ledger = CostLedger()

    circuit_ledger = CostLedger()
    state, control, work = order_finding_state(a, M, circuit_ledger)
    n = control + work
    codec = Case1Codec.define(control, ledger)
    specify_api_call(ApiCall("period-finding", (a, M)), ledger)

    mask = (1 << control) - 1
    found, running, readings = None, 1, []
    attempts = 0
    for attempt in range(max_attempts):
        attempts += 1
        # every attempt re-runs the circuit on the device
        ledger.charge("quantum_gate_count", circuit_ledger.quantum_gate_count)
        ledger.charge("quantum_oracle_queries", circuit_ledger.quantum_oracle_queries)
        outcome = measure_digital(state, "sample", seed=[seed, attempt])
        reading = MeasurementOutcome("digital", basis_index=outcome.basis_index & mask)
        y = c1_interpret(codec, reading, ledger).payload
        readings.append(y)
        r = Fraction(y, 1 << control).limit_denominator(M).denominator
        running = math.lcm(running, r)
        for candidate in (r, running):
            if pow(a, candidate, M) == 1:
                found = _reduce_order(a, M, candidate)
                break
        if found is not None:
            break
        if running >= M:
            running = 1

    return ScenarioResult(
        "period",
        n,
        1 << n,
        ledger,
        correct=found == expected,
        payload={
            "a": a,
            "M": M,
            "period": found,
            "expected": expected,
            "attempts": attempts,
            "readings": readings,
            "control_qubits": control,
            "work_qubits": work,
        },
        seed=seed,
    )


# -- Case 2: linear simulation --------------------------------------------


@dataclass(frozen=True)
class HoppingHamiltonian:
    """Real symmetric ``n x n`` hopping matrix (angular frequency, hbar = 1)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        h = np.asarray(self.matrix, dtype=float)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValidationError(f"Hamiltonian must be square, got shape {h.shape}")
        if not np.allclose(h, h.T, rtol=0, atol=1e-12):
            raise ValidationError("Hamiltonian must be symmetric")
        object.__setattr__(self, "matrix", h)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def chain(cls, n: int, hop: float = 1.0) -> "HoppingHamiltonian":
        h = np.zeros((n, n))
        for i in range(n - 1):
            h[i, i + 1] = h[i + 1, i] = hop
        return cls(h)

    @classmethod
    def ring(cls, n: int, hop: float = 1.0) -> "HoppingHamiltonian":
        h = cls.chain(n, hop).matrix.copy()
        if n > 2:
            h[0, n - 1] = h[n - 1, 0] = hop
        return cls(h)


def single_excitation_state(coefficients: Sequence[complex]) -> StateVector:
    """Place ``coefficients[i]`` on the one-hot basis state with qubit ``i`` set."""
    c = np.asarray(coefficients, dtype=np.complex128)
    n = len(c)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[1 << np.arange(n)] = c
    return StateVector(n, amps)


def evolve_single_excitation(
    state: StateVector, hamiltonian: HoppingHamiltonian, t: float, ledger=None
) -> StateVector:
    """Apply ``exp(-i H t)`` with ``H`` embedded in the one-hot subspace.

    The embedded Hamiltonian vanishes outside that subspace, so every other
    amplitude is left untouched.
    """
    if hamiltonian.n != state.n:
        raise ValidationError("Hamiltonian and register sizes differ")
    propagator = scipy.linalg.expm(-1j * t * hamiltonian.matrix)
    one_hot = 1 << np.arange(state.n)
    amps = state.amplitudes.copy()
    amps[one_hot] = propagator @ amps[one_hot]
    if ledger is not None:
        ledger.charge("quantum_gate_count", 1)
    return StateVector(state.n, amps)


def classical_probabilities(
    hamiltonian: HoppingHamiltonian, coefficients: Sequence[complex], t: float
) -> np.ndarray:
    """Solve the Schrodinger equation classically by eigendecomposition."""
    energies, vecs = np.linalg.eigh(hamiltonian.matrix)
    c0 = np.asarray(coefficients, dtype=np.complex128)
    ct = vecs @ (np.exp(-1j * energies * t) * (vecs.T @ c0))
    return np.abs(ct) ** 2


def admit_boundary(spec: BoundarySpec, n: int, ledger=None, seed: int = 0) -> None:
    """Price a boundary spec and reject it if unusable for a linear simulation."""
    if spec.n != n:
        raise ValidationError(f"boundary covers {spec.n} basis vectors, system has {n}")
    if spec.parameter_count > WORTHINESS_FACTOR * n:
        raise WorthinessError(
            f"boundary needs {spec.parameter_count} parameters, more than {WORTHINESS_FACTOR}*n"
        )
    if not check_boundary_linearity(spec, seed=seed):
        raise NonlinearBoundaryError("boundary rule is not linear in the basis vectors")
    if ledger is not None:
        ledger.charge("parameter_steps", spec.parameter_count)


def run_linear_sim(
    hamiltonian: HoppingHamiltonian,
    coefficients: Sequence[complex],
    t: float,
    labels: Optional[Sequence[Hashable]] = None,
    *,
    boundary: Optional[BoundarySpec] = None,
    null_label: Hashable = "zero",
    seed: Optional[int] = None,
    scenario: str = "linsim",
) -> ScenarioResult:
    n = hamiltonian.n
    if not 1 <= n <= 10:
        raise SizeError(f"linear simulation supports 1 <= n <= 10, got {n}")
    c = np.asarray(coefficients, dtype=np.complex128)
    if c.shape != (n,):
        raise ValidationError(f"expected {n} coefficients, got {c.shape}")
    if abs(float(np.vdot(c, c).real) - 1.0) > 1e-10:
        raise ValidationError("initial coefficients are not normalized")
    if labels is None:
        labels = [f"x{i + 1}" for i in range(n)]

    ledger = CostLedger()
    if boundary is not None:
        admit_boundary(boundary, n, ledger, seed=seed or 0)

    codec = c2_define(list(labels), null_label, ledger)
    state = single_excitation_state(c)
    state = evolve_single_excitation(state, hamiltonian, t, ledger)
    pairs = c2_interpret(codec, measure_qubit_marginals(state), ledger).payload

    quantum = np.array([p for _, p in pairs])
    classical = classical_probabilities(hamiltonian, c, t)
    discrepancy = float(np.max(np.abs(quantum - classical)))
    payload: dict[str, Any] = {
        "probabilities": pairs,
        "classical": classical.tolist(),
        "discrepancy": discrepancy,
        "t": t,
    }
    if boundary is not None:
        one_hot = state.amplitudes[1 << np.arange(n)]
        payload["boundary_value"] = boundary(one_hot)
    return ScenarioResult(
        scenario, n, 1 << n, ledger, correct=discrepancy <= COMMUTE_TOL, payload=payload, seed=seed
    )


# -- Case 2: nonlinear maps -----------------------------------------------


def identity_map() -> InstrumentedMap:
    def identity(x, counter: StepCounter):
        counter.tick()
        return x

    return identity


def lookup_chain(domain: Sequence[Hashable], hops: int = 3) -> InstrumentedMap:
    """Follow ``hops`` successive table lookups, one step each."""
    size = len(domain)
    tables = [
        {domain[i]: domain[(i + k + 1) % size] for i in range(size)} for k in range(hops)
    ]

    def chain(x, counter: StepCounter):
        for table in tables:
            counter.tick()
            x = table.get(x, x)
        return x

    return chain


def logistic_digitizer(
    domain: Sequence[Hashable], iterations: int = 20, rate: float = 3.9
) -> InstrumentedMap:
    """Iterate the logistic map from a label-dependent seed, then bin the result.

    Each iteration counts one step; binning is folded into the last one.
    """
    size = len(domain)
    start = {label: (i + 1) / (size + 1) for i, label in enumerate(domain)}

    def digitize(x, counter: StepCounter):
        value = start.get(x, 0.5 / (size + 1))
        for _ in range(iterations):
            counter.tick()
            value = rate * value * (1.0 - value)
        return domain[min(int(value * size), size - 1)]

    return digitize


def shipped_maps(domain: Sequence[Hashable]) -> dict[str, InstrumentedMap]:
    return {
        "identity": identity_map(),
        "lookup3": lookup_chain(domain, 3),
        "logistic20": logistic_digitizer(domain, 20),
    }


def run_nonlinear_counterexample(
    domain: Sequence[Hashable],
    algorithm: InstrumentedMap,
    input_label: Hashable,
    *,
    name: str = "nonlinear",
    null_label: Hashable = "zero",
    seed: Optional[int] = None,
) -> ScenarioResult:
    """Show that reading a nonlinear map off the register costs the map itself."""
    domain = list(domain)
    if input_label not in domain:
        raise NotFoundError(f"{input_label!r} not in domain")
    ledger = CostLedger()
    codec = c2_define(domain, null_label, ledger)
    state = init_basis(codec.n, 1 << domain.index(input_label))
    before = ledger.interpretation_steps
    value = nonlinear_mf(codec, state, algorithm, ledger).payload
    charged = ledger.interpretation_steps - before

    expected, standalone_steps = run_standalone(algorithm, input_label)
    map_steps = charged - codec.n
    n = codec.n
    return ScenarioResult(
        name,
        n,
        1 << n,
        ledger,
        correct=map_steps == standalone_steps and value == expected,
        payload={
            "value": value,
            "standalone_value": expected,
            "interpretation_steps": charged,
            "decode_steps": codec.n,
            "standalone_steps": standalone_steps,
        },
        seed=seed,
    )

"""Exact statevector simulation of a small qubit register.

Qubit ``i`` is bit ``i`` of the computational-basis index, so for ``n = 2``
the state ``|10>`` (qubit 1 set) has index 2.  States are immutable: every
operation returns a new :class:`StateVector`.  Operations that touch the
register accept an optional ledger and charge ``quantum_gate_count`` (and
``quantum_oracle_queries`` for the phase oracle) when one is given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ArgumentError, KindError, SizeError, ValidationError

MAX_QUBITS = 14
NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
MAX_TARGETS = 3


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes of an ``n``-qubit register."""

    n: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        _check_n(self.n)
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n,):
            raise SizeError(f"expected {1 << self.n} amplitudes, got shape {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state not normalized: sum |a|^2 = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_error(self) -> float:
        return abs(float(np.sum(self.probabilities())) - 1.0)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        n = int(round(math.log2(len(amps)))) if len(amps) else 0
        if len(amps) != 1 << n:
            raise SizeError(f"amplitude count {len(amps)} is not a power of two")
        return cls(n, amps)


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of reading the register.

    A digital outcome carries ``basis_index``; an analog outcome carries
    the per-qubit probabilities in ``qubit_marginals``.
    """

    kind: str
    basis_index: Optional[int] = None
    qubit_marginals: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if self.kind == "digital":
            if self.basis_index is None or self.basis_index < 0:
                raise ValidationError("digital outcome needs a non-negative basis_index")
        elif self.kind == "analog":
            if self.qubit_marginals is None:
                raise ValidationError("analog outcome needs qubit_marginals")
            if any(not (-1e-12 <= p <= 1 + 1e-12) for p in self.qubit_marginals):
                raise ValidationError("marginals must lie in [0, 1]")
        else:
            raise KindError(f"unknown outcome kind {self.kind!r}")


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise SizeError(f"qubit count must be in 1..{MAX_QUBITS}, got {n!r}")


def _charge(ledger, name: str, amount: int = 1) -> None:
    if ledger is not None:
        ledger.charge(name, amount)


def init_basis(n: int, j: int) -> StateVector:
    _check_n(n)
    if not 0 <= j < (1 << n):
        raise SizeError(f"basis index {j} out of range for n={n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[j] = 1.0
    return StateVector(n, amps)


def init_uniform(n: int) -> StateVector:
    _check_n(n)
    dim = 1 << n
    return StateVector(n, np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


# Named gates. Multi-qubit matrices use targets[0] as the least significant
# bit of the row/column index.
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


def controlled_phase(phi: float) -> np.ndarray:
    """Two-qubit gate multiplying ``|11>`` by ``exp(i*phi)``."""
    return np.diag([1, 1, 1, np.exp(1j * phi)]).astype(np.complex128)


def is_unitary(u: np.ndarray, atol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.allclose(u.conj().T @ u, np.eye(u.shape[0]), rtol=0, atol=atol))


def _check_targets(n: int, targets: Sequence[int]) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ArgumentError(f"duplicate targets {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise ArgumentError(f"target qubit {t} out of range for n={n}")
    return targets


def apply_unitary(
    state: StateVector, u: np.ndarray, targets: Sequence[int], ledger=None
) -> StateVector:
    """Apply ``u`` to ``targets`` with identity on the remaining qubits."""
    targets = _check_targets(state.n, targets)
    k = len(targets)
    if not 1 <= k <= MAX_TARGETS:
        raise ArgumentError(f"between 1 and {MAX_TARGETS} targets supported, got {k}")
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (1 << k, 1 << k):
        raise ArgumentError(f"matrix shape {u.shape} does not match {k} targets")
    if not is_unitary(u):
        raise ValidationError("matrix is not unitary within 1e-10")

    n = state.n
    # C-order reshape puts qubit n-1 on axis 0.
    psi = state.amplitudes.reshape((2,) * n)
    gate = u.reshape((2,) * (2 * k))
    # gate input axis k+i carries bit k-1-i of the local index -> targets[k-1-i]
    state_axes = [n - 1 - targets[k - 1 - i] for i in range(k)]
    out = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), state_axes))
    # tensordot leaves gate output axes first, in the same order as state_axes
    out = np.moveaxis(out, list(range(k)), state_axes)
    _charge(ledger, "quantum_gate_count")
    return StateVector(n, out.reshape(-1))


def apply_controlled_permutation(
    state: StateVector,
    control: int,
    targets: Sequence[int],
    perm: Sequence[int],
    ledger=None,
) -> StateVector:
    """Permute the basis states of ``targets`` wherever ``control`` is set.

    ``perm[x]`` is the image of local index ``x`` (``targets[0]`` is its
    least significant bit).  Used for controlled modular multiplication,
    which is a permutation of the work register.
    """
    targets = _check_targets(state.n, list(targets) + [control])[:-1]
    perm = np.asarray(perm, dtype=np.int64)
    size = 1 << len(targets)
    if perm.shape != (size,) or sorted(perm.tolist()) != list(range(size)):
        raise ValidationError("perm must be a bijection on the target register")

    idx = np.arange(state.dim, dtype=np.int64)
    local = np.zeros_like(idx)
    cleared = idx.copy()
    for bit, t in enumerate(targets):
        local |= ((idx >> t) & 1) << bit
        cleared &= ~(1 << t)
    image = cleared.copy()
    mapped = perm[local]
    for bit, t in enumerate(targets):
        image |= ((mapped >> bit) & 1) << t
    active = ((idx >> control) & 1).astype(bool)
    dest = np.where(active, image, idx)

    out = np.empty_like(state.amplitudes)
    out[dest] = state.amplitudes
    _charge(ledger, "quantum_gate_count")
    return StateVector(state.n, out)


def apply_phase_oracle(state: StateVector, marked: int, ledger=None) -> StateVector:
    if not 0 <= marked < state.dim:
        raise ArgumentError(f"marked index {marked} out of range for N={state.dim}")
    out = state.amplitudes.copy()
    out[marked] = -out[marked]
    _charge(ledger, "quantum_oracle_queries")
    _charge(ledger, "quantum_gate_count")
    return StateVector(state.n, out)


def apply_diffusion(state: StateVector, ledger=None) -> StateVector:
    """Inversion about the mean, ``2|s><s| - I`` with ``|s>`` uniform."""
    amps = state.amplitudes
    out = 2.0 * amps.mean() - amps
    _charge(ledger, "quantum_gate_count")
    return StateVector(state.n, out)


def grover_iteration(state: StateVector, marked: int, ledger=None) -> StateVector:
    return apply_diffusion(apply_phase_oracle(state, marked, ledger), ledger)


def grover_iteration_count(dim: int) -> int:
    return int(math.floor(math.pi / 4 * math.sqrt(dim)))


def measure_digital(
    state: StateVector, mode: str = "argmax", seed: Optional[int] = None
) -> MeasurementOutcome:
    """Threshold the register to a single basis index.

    ``argmax`` picks the most probable index, breaking ties toward the
    lowest index.  ``sample`` draws from ``|a|^2`` with a seeded generator.
    """
    probs = state.probabilities()
    if mode == "argmax":
        top = probs.max()
        index = int(np.flatnonzero(probs >= top - 1e-12)[0])
    elif mode == "sample":
        if seed is None:
            raise ArgumentError("sample mode needs an explicit seed")
        rng = np.random.default_rng(seed)
        p = probs / probs.sum()
        index = int(rng.choice(state.dim, p=p))
    else:
        raise ArgumentError(f"unknown measurement mode {mode!r}")
    return MeasurementOutcome("digital", basis_index=index)


def qubit_marginals(state: StateVector) -> np.ndarray:
    probs = state.probabilities()
    idx = np.arange(state.dim)
    return np.array([probs[(idx >> i) & 1 == 1].sum() for i in range(state.n)])


def measure_qubit_marginals(state: StateVector) -> MeasurementOutcome:
    marg = np.clip(qubit_marginals(state), 0.0, 1.0)
    return MeasurementOutcome("analog", qubit_marginals=tuple(float(p) for p in marg))

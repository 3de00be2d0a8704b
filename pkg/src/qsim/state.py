"""State-vector register, gate kernels and projective measurement.

Qubit ordering is little-endian: qubit ``k`` is bit ``k`` of the basis
index, so a register occupying qubits ``start .. start+count-1`` holds the
integer ``(index >> start) & (2**count - 1)``.

Gate and measurement functions mutate the state in place and return it, so
calls can be chained.  A ``StateVector`` has a single writer at a time; call
``copy()`` before handing a state to another consumer.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ContractViolation, DegenerateStateError, DomainError
from .gates import Gate2x2, is_unitary

DEFAULT_MAX_QUBITS = 30
NORM_ATOL = 1e-10
ZERO_PROB = 1e-15


def max_qubits() -> int:
    """Memory guard; ``QSIM_MAX_QUBITS`` overrides the default of 30."""
    raw = os.environ.get("QSIM_MAX_QUBITS")
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        value = int(raw)
    except ValueError:
        raise CapacityError(f"QSIM_MAX_QUBITS must be an integer, got {raw!r}") from None
    if value < 1:
        raise CapacityError("QSIM_MAX_QUBITS must be >= 1")
    return value


def check_capacity(num_qubits: int) -> None:
    limit = max_qubits()
    if num_qubits > limit:
        raise CapacityError(
            f"{num_qubits} qubits exceeds the guard of {limit} (set QSIM_MAX_QUBITS to raise it)"
        )


class StateVector:
    """The 2**L complex amplitudes of an L-qubit register."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, amplitudes, *, normalize: bool = False):
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        n = amps.size
        if n < 2 or n & (n - 1):
            raise DomainError(f"amplitude count must be a power of two >= 2, got {n}")
        num_qubits = n.bit_length() - 1
        check_capacity(num_qubits)
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if normalize:
            if norm < ZERO_PROB:
                raise DegenerateStateError("cannot normalize a zero vector")
            amps /= norm
        elif abs(norm - 1.0) > NORM_ATOL:
            raise ContractViolation(f"state norm {norm!r} differs from 1")
        self.num_qubits = num_qubits
        self.amplitudes = amps

    @classmethod
    def _wrap(cls, amps: np.ndarray) -> "StateVector":
        obj = cls.__new__(cls)
        obj.num_qubits = amps.size.bit_length() - 1
        obj.amplitudes = amps
        return obj

    def copy(self) -> "StateVector":
        return StateVector._wrap(self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.inner(other)) ** 2

    def __len__(self):
        return self.amplitudes.size

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits})"


@dataclass(frozen=True)
class QubitRange:
    start: int
    count: int

    def __post_init__(self):
        if self.start < 0 or self.count < 1:
            raise DomainError(f"invalid qubit range start={self.start} count={self.count}")

    @property
    def stop(self) -> int:
        return self.start + self.count

    @property
    def size(self) -> int:
        return 1 << self.count

    def qubits(self) -> range:
        return range(self.start, self.stop)

    def check(self, state: StateVector) -> None:
        if self.stop > state.num_qubits:
            raise DomainError(
                f"range {self.start}..{self.stop - 1} does not fit a {state.num_qubits}-qubit state"
            )

    def overlaps(self, other: "QubitRange") -> bool:
        return self.start < other.stop and other.start < self.stop

    def values(self, indices: np.ndarray) -> np.ndarray:
        """Register value held by each basis index."""
        return (indices >> self.start) & (self.size - 1)


@dataclass
class MeasurementOutcome:
    bits: int
    collapsed: StateVector


def new_basis_state(num_qubits: int, index: int = 0) -> StateVector:
    if num_qubits < 1:
        raise DomainError("need at least one qubit")
    check_capacity(num_qubits)
    if not 0 <= index < (1 << num_qubits):
        raise DomainError(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector._wrap(amps)


def _check_qubit(state: StateVector, q: int, name: str = "qubit") -> None:
    if not 0 <= q < state.num_qubits:
        raise DomainError(f"{name} {q} out of range for {state.num_qubits} qubits")


def _pair_view(state: StateVector, target: int) -> np.ndarray:
    # axis 1 of the view is the target bit
    return state.amplitudes.reshape(-1, 2, 1 << target)


def _apply_pair(lo: np.ndarray, hi: np.ndarray, g: np.ndarray) -> None:
    g00, g01, g10, g11 = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    if g01 == 0 and g10 == 0:
        if g00 != 1:
            lo *= g00
        if g11 != 1:
            hi *= g11
        return
    a0 = lo.copy()
    lo *= g00
    lo += g01 * hi
    hi *= g11
    hi += g10 * a0


def apply_1q(state: StateVector, gate: Gate2x2, target: int) -> StateVector:
    """Apply a 2x2 unitary to ``target``."""
    _check_qubit(state, target, "target")
    if not is_unitary(gate):
        raise ContractViolation("gate is not unitary")
    v = _pair_view(state, target)
    _apply_pair(v[:, 0, :], v[:, 1, :], np.asarray(gate))
    return state


def _controlled_slices(state: StateVector, control: int, target: int):
    hi, lo = max(control, target), min(control, target)
    v = state.amplitudes.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    c_axis, t_axis = (1, 3) if control == hi else (3, 1)
    idx0 = [slice(None)] * 5
    idx0[c_axis] = 1
    idx1 = list(idx0)
    idx0[t_axis] = 0
    idx1[t_axis] = 1
    return v[tuple(idx0)], v[tuple(idx1)]


def apply_controlled(state: StateVector, gate: Gate2x2, control: int, target: int) -> StateVector:
    """Apply ``gate`` to ``target`` on the amplitudes whose ``control`` bit is 1."""
    _check_qubit(state, control, "control")
    _check_qubit(state, target, "target")
    if control == target:
        raise DomainError("control and target must differ")
    if not is_unitary(gate):
        raise ContractViolation("gate is not unitary")
    t0, t1 = _controlled_slices(state, control, target)
    _apply_pair(t0, t1, np.asarray(gate))
    return state


def apply_swap(state: StateVector, q1: int, q2: int) -> StateVector:
    _check_qubit(state, q1)
    _check_qubit(state, q2)
    if q1 == q2:
        return state
    hi, lo = max(q1, q2), min(q1, q2)
    v = state.amplitudes.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    # |..1..0..> <-> |..0..1..>
    a = v[:, 1, :, 0, :].copy()
    v[:, 1, :, 0, :] = v[:, 0, :, 1, :]
    v[:, 0, :, 1, :] = a
    return state


def marginal(state: StateVector, qubits: QubitRange) -> np.ndarray:
    """Probability of each value of the register ``qubits``."""
    qubits.check(state)
    probs = state.probabilities().reshape(-1, qubits.size, 1 << qubits.start)
    return probs.sum(axis=(0, 2))


def project(state: StateVector, qubits: QubitRange, value: int) -> float:
    """Collapse ``state`` onto register value ``value``; returns that branch's probability."""
    marg = marginal(state, qubits)
    if not 0 <= value < qubits.size:
        raise DomainError(f"value {value} does not fit a {qubits.count}-qubit register")
    prob = float(marg[value])
    if prob < ZERO_PROB:
        raise DegenerateStateError(f"register value {value} has zero probability")
    v = state.amplitudes.reshape(-1, qubits.size, 1 << qubits.start)
    keep = v[:, value, :] / np.sqrt(prob)
    v[...] = 0
    v[:, value, :] = keep
    return prob


def measure_range(state: StateVector, qubits: QubitRange, rng: np.random.Generator) -> MeasurementOutcome:
    """Projectively measure a register and collapse ``state`` in place."""
    marg = marginal(state, qubits)
    total = marg.sum()
    if total < ZERO_PROB:
        raise DegenerateStateError("measured register has zero total probability")
    bits = int(rng.choice(marg.size, p=marg / total))
    project(state, qubits, bits)
    return MeasurementOutcome(bits, state)


def sample_counts(state: StateVector, shots: int, rng: np.random.Generator) -> dict[int, int]:
    """Non-destructive sampling of the full register; returns index -> count."""
    if shots < 1:
        raise DomainError("shots must be >= 1")
    probs = state.probabilities()
    counts = rng.multinomial(shots, probs / probs.sum())
    nz = np.flatnonzero(counts)
    return {int(i): int(counts[i]) for i in nz}

"""Stochastic Pauli noise and the 3-qubit bit-flip / phase-flip repetition codes.

Noise is sampled one trajectory at a time: each qubit independently picks X, Y,
Z or identity.  Syndrome extraction projects directly onto the joint
eigenspaces of the two stabilizers (Z0Z1, Z1Z2 for the bit-flip code, the
Hadamard-conjugated X0X1, X1X2 for the phase-flip code) instead of coupling
ancilla qubits.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gates import hadamard, pauli
from .state import (
    QubitRange,
    StateVector,
    apply_1q,
    apply_controlled,
    new_basis_state,
)

FIDELITY_TOL = 1e-9

# syndrome (s1, s2) -> qubit to correct
_DECODE = {(0, 0): None, (1, 0): 0, (1, 1): 1, (0, 1): 2}


class CodeKind(enum.Enum):
    BITFLIP = "bitflip"
    PHASEFLIP = "phaseflip"

    @property
    def error_axis(self) -> str:
        return "X" if self is CodeKind.BITFLIP else "Z"


@dataclass(frozen=True)
class NoiseModel:
    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0

    def __post_init__(self):
        for name in ("p_x", "p_y", "p_z"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name}={value} outside [0, 1]")
        if self.p_x + self.p_y + self.p_z > 1.0 + 1e-12:
            raise DomainError("p_x + p_y + p_z exceeds 1")

    @classmethod
    def matching(cls, kind: CodeKind, p: float) -> "NoiseModel":
        """Noise of the single error type ``kind`` protects against."""
        return cls(p_x=p) if kind is CodeKind.BITFLIP else cls(p_z=p)


@dataclass(frozen=True)
class SyndromeResult:
    s1: int
    s2: int

    @property
    def inferred_error(self) -> int | None:
        return _DECODE[(self.s1, self.s2)]


def error_rate_estimate(gate_time: float, t2: float, constant: float = 1.0) -> float:
    """Per-gate error probability ~ constant * gate_time / T2, clamped to 1."""
    if gate_time <= 0 or t2 <= 0:
        raise DomainError("gate_time and t2 must be positive")
    if constant <= 0:
        raise DomainError("constant must be positive")
    return min(constant * gate_time / t2, 1.0)


def apply_pauli_noise(
    state: StateVector,
    model: NoiseModel,
    qubits: QubitRange,
    rng: np.random.Generator,
) -> tuple[StateVector, list[tuple[int, str]]]:
    """Sample one Pauli trajectory on ``qubits``; returns the state and the (qubit, axis) errors."""
    qubits.check(state)
    thresholds = np.cumsum([model.p_x, model.p_y, model.p_z])
    errors = []
    for q in qubits.qubits():
        u = rng.random()
        for axis, edge in zip("XYZ", thresholds):
            if u < edge:
                apply_1q(state, pauli(axis), q)
                errors.append((q, axis))
                break
    return state, errors


def random_logical_state(rng: np.random.Generator) -> StateVector:
    """Haar-random single-qubit state."""
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    return StateVector(z, normalize=True)


def _hadamard_all(state: StateVector) -> StateVector:
    h = hadamard()
    for q in range(state.num_qubits):
        apply_1q(state, h, q)
    return state


def encode(logical: StateVector, kind: CodeKind) -> StateVector:
    """Spread a|0> + b|1> onto three qubits: a|000> + b|111> (then H on each for PHASEFLIP)."""
    if logical.num_qubits != 1:
        raise DomainError(f"encode takes a 1-qubit state, got {logical.num_qubits} qubits")
    state = new_basis_state(3, 0)
    state.amplitudes[:2] = logical.amplitudes
    x = pauli("X")
    apply_controlled(state, x, 0, 1)
    apply_controlled(state, x, 0, 2)
    if kind is CodeKind.PHASEFLIP:
        _hadamard_all(state)
    return state


def _check_three(state: StateVector) -> None:
    if state.num_qubits != 3:
        raise DomainError(f"repetition code acts on 3 qubits, got {state.num_qubits}")


_IDX = np.arange(8)
_PARITY_01 = (_IDX ^ (_IDX >> 1)) & 1
_PARITY_12 = ((_IDX >> 1) ^ (_IDX >> 2)) & 1
_SYNDROME_OF_INDEX = _PARITY_01 | (_PARITY_12 << 1)


def measure_syndrome(
    state: StateVector,
    kind: CodeKind,
    rng: np.random.Generator,
) -> tuple[SyndromeResult, StateVector]:
    """Projectively measure both stabilizer parities, collapsing ``state`` in place."""
    _check_three(state)
    if kind is CodeKind.PHASEFLIP:
        _hadamard_all(state)
    probs = np.bincount(_SYNDROME_OF_INDEX, weights=state.probabilities(), minlength=4)
    outcome = int(rng.choice(4, p=probs / probs.sum()))
    keep = _SYNDROME_OF_INDEX == outcome
    state.amplitudes[~keep] = 0
    state.amplitudes /= np.sqrt(probs[outcome])
    if kind is CodeKind.PHASEFLIP:
        _hadamard_all(state)
    return SyndromeResult(outcome & 1, outcome >> 1), state


def recover(state: StateVector, syndrome: SyndromeResult, kind: CodeKind) -> StateVector:
    """Undo the inferred error by applying the same Pauli again."""
    _check_three(state)
    q = syndrome.inferred_error
    if q is not None:
        apply_1q(state, pauli(kind.error_axis), q)
    return state


def majority_vote(bits) -> int:
    bits = list(bits)
    if len(bits) != 3:
        raise DomainError(f"majority_vote takes exactly 3 bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise DomainError("bits must be 0 or 1")
    return int(sum(bits) >= 2)


def correct_once(
    logical: StateVector,
    kind: CodeKind,
    errors,
    rng: np.random.Generator,
) -> float:
    """Encode, inject the given (qubit, axis) errors, correct; return logical fidelity."""
    encoded = encode(logical, kind)
    state = encoded.copy()
    for q, axis in errors:
        apply_1q(state, pauli(axis), q)
    syndrome, state = measure_syndrome(state, kind, rng)
    recover(state, syndrome, kind)
    return encoded.fidelity(state)


def run_trial(kind: CodeKind, model: NoiseModel, rng: np.random.Generator) -> bool:
    """One noisy trajectory end to end; True when the logical state was lost."""
    logical = random_logical_state(rng)
    encoded = encode(logical, kind)
    state, _ = apply_pauli_noise(encoded.copy(), model, QubitRange(0, 3), rng)
    syndrome, state = measure_syndrome(state, kind, rng)
    recover(state, syndrome, kind)
    return encoded.fidelity(state) < 1 - FIDELITY_TOL


def logical_error_rate(
    kind: CodeKind,
    p: float,
    trials: int,
    rng: np.random.Generator,
    method: str = "grouped",
) -> float:
    """Fraction of noisy trials whose corrected logical fidelity drops below 1 - 1e-9.

    ``method="trajectory"`` simulates every trial separately.  The default
    ``"grouped"`` samples all error patterns at once and runs the state-vector
    pipeline once per distinct pattern: a Pauli pattern on a codeword is a
    stabilizer eigenstate, so the syndrome outcome, and hence the trial
    verdict, depends on the pattern alone.
    """
    if not 0.0 <= p <= 0.5:
        raise DomainError(f"p={p} outside [0, 0.5]")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if method == "trajectory":
        model = NoiseModel.matching(kind, p)
        return sum(run_trial(kind, model, rng) for _ in range(trials)) / trials
    if method != "grouped":
        raise DomainError(f"unknown method {method!r}")
    flips = rng.random((trials, 3)) < p
    patterns = np.bincount(flips @ np.array([1, 2, 4]), minlength=8)
    axis = kind.error_axis
    failures = 0
    for pattern in np.flatnonzero(patterns):
        errors = [(q, axis) for q in range(3) if pattern >> q & 1]
        fidelity = correct_once(random_logical_state(rng), kind, errors, rng)
        if fidelity < 1 - FIDELITY_TOL:
            failures += int(patterns[pattern])
    return failures / trials


def analytic_logical_rate(p: float) -> float:
    """Probability of two or more flips among three: 3p^2 - 2p^3."""
    return 3 * p**2 - 2 * p**3

"""Quantum Fourier transform as a Hadamard / controlled-rotation ladder.

On a register of ``n`` qubits (Q = 2**n) the transform maps

    |x> -> Q**-0.5 * sum_y exp(sigma * 2*pi*i * x*y / Q) |y>

with ``sigma = -1`` for ``QftDirection.FORWARD`` and ``+1`` for
``QftDirection.INVERSE``.  The circuit is n Hadamards, n(n-1)/2 controlled
phase rotations and floor(n/2) swaps that undo the bit reversal.
"""
from __future__ import annotations

import enum
from typing import NamedTuple

from .gates import hadamard, phase_rotation
from .state import QubitRange, StateVector, apply_1q, apply_controlled, apply_swap


class QftDirection(enum.Enum):
    FORWARD = -1
    INVERSE = 1

    @property
    def sign(self) -> int:
        return self.value


class GateOp(NamedTuple):
    kind: str            # "h", "cphase" or "swap"
    qubits: tuple        # absolute qubit indices; (control, target) for cphase
    k: int = 0           # rotation order for cphase


def qft_circuit(qubits: QubitRange, direction: QftDirection = QftDirection.FORWARD) -> list[GateOp]:
    n, base = qubits.count, qubits.start
    ops = []
    for j in range(n - 1, -1, -1):
        ops.append(GateOp("h", (base + j,)))
        for m in range(j - 1, -1, -1):
            ops.append(GateOp("cphase", (base + m, base + j), j - m + 1))
    for j in range(n // 2):
        ops.append(GateOp("swap", (base + j, base + n - 1 - j)))
    return ops


def qft_gate_count(num_qubits: int) -> int:
    """L(L+1)/2 + floor(L/2): Hadamards, controlled rotations and swaps."""
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    return num_qubits * (num_qubits + 1) // 2 + num_qubits // 2


def run_circuit(state: StateVector, ops: list[GateOp], sign: int) -> int:
    """Execute ``ops`` on ``state``; returns the number of primitives applied."""
    h = hadamard()
    rotations = {}
    executed = 0
    for op in ops:
        if op.kind == "h":
            apply_1q(state, h, op.qubits[0])
        elif op.kind == "cphase":
            gate = rotations.get(op.k)
            if gate is None:
                gate = rotations[op.k] = phase_rotation(op.k, sign)
            apply_controlled(state, gate, *op.qubits)
        elif op.kind == "swap":
            apply_swap(state, *op.qubits)
        else:
            raise ValueError(f"unknown gate op {op.kind!r}")
        executed += 1
    return executed


def apply_qft(
    state: StateVector,
    qubits: QubitRange | None = None,
    direction: QftDirection = QftDirection.FORWARD,
) -> StateVector:
    """Transform the register ``qubits`` (whole state if omitted) in place."""
    if qubits is None:
        qubits = QubitRange(0, state.num_qubits)
    qubits.check(state)
    run_circuit(state, qft_circuit(qubits, direction), direction.sign)
    return state

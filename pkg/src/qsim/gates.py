"""Fixed single-qubit gate vocabulary.

Gates are plain 2x2 complex numpy arrays flagged read-only so they can be
shared freely between circuits.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError

Gate2x2 = np.ndarray

UNITARY_ATOL = 1e-12


def _frozen(m) -> Gate2x2:
    g = np.array(m, dtype=np.complex128)
    g.setflags(write=False)
    return g


_SQRT2_INV = 1 / math.sqrt(2)
_H = _frozen([[_SQRT2_INV, _SQRT2_INV], [_SQRT2_INV, -_SQRT2_INV]])
_I = _frozen([[1, 0], [0, 1]])
_PAULI = {
    "X": _frozen([[0, 1], [1, 0]]),
    "Y": _frozen([[0, -1j], [1j, 0]]),
    "Z": _frozen([[1, 0], [0, -1]]),
}


def hadamard() -> Gate2x2:
    return _H


def identity() -> Gate2x2:
    return _I


def pauli(axis: str) -> Gate2x2:
    """Return the Pauli matrix for ``axis`` ("X", "Y" or "Z", case-insensitive)."""
    try:
        return _PAULI[axis.upper()]
    except (KeyError, AttributeError):
        raise DomainError(f"unknown Pauli axis {axis!r}") from None


def phase_rotation(k: int, sign: int = 1) -> Gate2x2:
    """diag(1, exp(sign * 2*pi*i / 2**k)).

    ``sign`` is +1 by default; the QFT passes -1 to build the conjugate ladder.
    """
    if int(k) != k or k < 1:
        raise DomainError(f"phase_rotation needs integer k >= 1, got {k!r}")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    return _frozen([[1, 0], [0, cmath.exp(sign * 2j * math.pi / (1 << int(k)))]])


def dagger(gate: Gate2x2) -> Gate2x2:
    return _frozen(np.conj(np.asarray(gate)).T)


def is_unitary(gate, atol: float = UNITARY_ATOL) -> bool:
    g = np.asarray(gate, dtype=np.complex128)
    if g.shape != (2, 2) or not np.all(np.isfinite(g)):
        return False
    return bool(np.allclose(g @ g.conj().T, np.eye(2), rtol=0.0, atol=atol))

"""Brute-force oracles shared by the test modules."""
import numpy as np

from qsim.state import StateVector


def random_state(rng, num_qubits):
    z = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return StateVector(z, normalize=True)


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def dense_1q(gate, target, n):
    """Full 2**n matrix of a single-qubit gate (little-endian qubit order)."""
    m = np.eye(1)
    for q in range(n - 1, -1, -1):
        m = np.kron(m, gate if q == target else np.eye(2))
    return m


def dense_controlled(gate, control, target, n):
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        if not i >> control & 1:
            m[i, i] = 1
            continue
        bit = i >> target & 1
        for out_bit in (0, 1):
            j = (i & ~(1 << target)) | (out_bit << target)
            m[j, i] += gate[out_bit, bit]
    return m

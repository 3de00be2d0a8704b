"""Modular exponentiation: the classical routine and the |x>|0> -> |x>|a^x mod N> oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DomainError
from .state import QubitRange, StateVector


def modpow(a: int, x: int, m: int) -> int:
    """a**x mod m by right-to-left repeated squaring."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if x < 0:
        raise DomainError(f"exponent must be >= 0, got {x}")
    result = 1
    base = a % m
    while x:
        if x & 1:
            result = result * base % m
        base = base * base % m
        x >>= 1
    return result % m


def classical_period(a: int, N: int) -> int:
    """Multiplicative order of a mod N by brute-force iteration."""
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    if math.gcd(a, N) != 1:
        raise DomainError(f"gcd({a}, {N}) = {math.gcd(a, N)} != 1; no period exists")
    value, r = a % N, 1
    while value != 1:
        value = value * a % N
        r += 1
    return r


@dataclass(frozen=True)
class ModExpOracle:
    base: int
    modulus: int
    input: QubitRange
    output: QubitRange

    def __post_init__(self):
        if self.modulus < 2:
            raise DomainError("modulus must be >= 2")
        if math.gcd(self.base, self.modulus) != 1:
            raise DomainError(f"gcd({self.base}, {self.modulus}) != 1")
        if self.input.overlaps(self.output):
            raise DomainError("input and output registers overlap")
        if self.output.size <= self.modulus:
            raise DomainError(
                f"output register of {self.output.count} qubits cannot hold residues mod {self.modulus}"
            )

    def table(self) -> np.ndarray:
        """a**x mod N for every input-register value x."""
        out = np.empty(self.input.size, dtype=np.int64)
        for x in range(self.input.size):
            out[x] = modpow(self.base, x, self.modulus)
        return out


def apply_modexp_oracle(state: StateVector, oracle: ModExpOracle) -> StateVector:
    """Write a**x mod N into the (cleared) output register, permuting amplitudes in place."""
    oracle.input.check(state)
    oracle.output.check(state)
    amps = state.amplitudes
    idx = np.flatnonzero(amps)
    if np.any(oracle.output.values(idx)):
        raise ContractViolation("output register must be |0> on every populated basis state")
    fx = oracle.table()[oracle.input.values(idx)]
    dest = idx | (fx << oracle.output.start)
    moved = amps[idx].copy()
    amps[idx] = 0
    amps[dest] = moved
    return state

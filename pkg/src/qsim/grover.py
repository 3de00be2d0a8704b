"""Single-match Grover search over N = 2**L basis states."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .state import StateVector, check_capacity, sample_counts


@dataclass(frozen=True)
class GroverPlan:
    L: int
    N: int
    omega: int | None
    theta: float
    iterations: int
    predicted_success: float

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "N": self.N,
            "omega": self.omega,
            "theta": self.theta,
            "iterations": self.iterations,
            "predicted_success": self.predicted_success,
        }


def success_probability(N: int, iterations: int) -> float:
    """sin^2((2k+1) theta) after k Grover iterations."""
    theta = math.asin(N**-0.5)
    return math.sin((2 * iterations + 1) * theta) ** 2


def optimal_iterations(N: int, omega: int | None = None) -> GroverPlan:
    """Plan with r = round((pi/theta - 2) / 4), sin(theta) = 1/sqrt(N)."""
    if N < 2 or N & (N - 1):
        raise DomainError(f"N must be a power of two >= 2, got {N}")
    theta = math.asin(N**-0.5)
    r = max(0, round(0.25 * (math.pi / theta - 2)))
    return GroverPlan(
        L=N.bit_length() - 1,
        N=N,
        omega=omega,
        theta=theta,
        iterations=r,
        predicted_success=math.sin((2 * r + 1) * theta) ** 2,
    )


def prepare_uniform(L: int) -> StateVector:
    if L < 1:
        raise DomainError("need at least one qubit")
    check_capacity(L)
    N = 1 << L
    return StateVector._wrap(np.full(N, N**-0.5, dtype=np.complex128))


def apply_phase_oracle(state: StateVector, omega: int) -> StateVector:
    if not 0 <= omega < len(state):
        raise DomainError(f"omega={omega} outside 0..{len(state) - 1}")
    state.amplitudes[omega] *= -1
    return state


def apply_diffusion(state: StateVector) -> StateVector:
    """2|s><s| - I, i.e. every amplitude a_x -> 2*mean(a) - a_x."""
    amps = state.amplitudes
    mean = amps.mean()
    np.subtract(2 * mean, amps, out=amps)
    return state


def grover_iteration(state: StateVector, omega: int) -> StateVector:
    return apply_diffusion(apply_phase_oracle(state, omega))


def search(
    L: int,
    omega: int,
    shots: int,
    rng: np.random.Generator,
    iterations: int | None = None,
) -> tuple[dict[int, int], GroverPlan]:
    """Run Grover's iterations then sample ``shots`` outcomes.

    ``iterations`` overrides the planned count; the returned plan then
    reports that count and its analytic success probability.
    """
    N = 1 << L
    if not 0 <= omega < N:
        raise DomainError(f"omega={omega} outside 0..{N - 1}")
    if shots < 1:
        raise DomainError("shots must be >= 1")
    plan = optimal_iterations(N, omega)
    if iterations is not None:
        if iterations < 0:
            raise DomainError("iterations must be >= 0")
        plan = GroverPlan(L, N, omega, plan.theta, iterations, success_probability(N, iterations))
    state = prepare_uniform(L)
    for _ in range(plan.iterations):
        grover_iteration(state, omega)
    return sample_counts(state, shots, rng), plan

import math

import numpy as np
import pytest

from qsim.errors import DomainError
from qsim.grover import (
    apply_diffusion,
    apply_phase_oracle,
    grover_iteration,
    optimal_iterations,
    prepare_uniform,
    search,
    success_probability,
)
from qsim.state import StateVector, new_basis_state

from .helpers import random_state


def diffusion_matrix(N):
    s = np.full(N, N**-0.5)
    return 2 * np.outer(s, s) - np.eye(N)


class TestPrimitives:
    def test_uniform(self):
        assert np.allclose(prepare_uniform(1).amplitudes, [2**-0.5] * 2)
        assert np.allclose(prepare_uniform(2).amplitudes, [0.5] * 4)

    @pytest.mark.parametrize("L", [1, 3, 6])
    def test_overlap(self, L):
        s = prepare_uniform(L)
        for omega in range(0, 1 << L, max(1, (1 << L) // 5)):
            assert s.inner(new_basis_state(L, omega)) == pytest.approx(2 ** (-L / 2), abs=1e-15)

    def test_oracle(self):
        s = apply_phase_oracle(new_basis_state(3, 5), 5)
        assert s.amplitudes[5] == -1
        s = apply_phase_oracle(new_basis_state(3, 2), 5)
        assert s.amplitudes[2] == 1

    def test_oracle_twice_identity(self, rng):
        psi = random_state(rng, 4)
        out = apply_phase_oracle(apply_phase_oracle(psi.copy(), 7), 7)
        assert np.array_equal(out.amplitudes, psi.amplitudes)

    def test_oracle_range(self):
        with pytest.raises(DomainError):
            apply_phase_oracle(new_basis_state(3), 8)

    def test_diffusion_fixes_uniform(self):
        s = apply_diffusion(prepare_uniform(4))
        assert np.allclose(s.amplitudes, 0.25, atol=1e-15)

    def test_diffusion_negates_orthogonal(self):
        v = np.zeros(8, dtype=complex)
        v[0], v[1] = 2**-0.5, -(2**-0.5)
        s = apply_diffusion(StateVector(v))
        assert np.allclose(s.amplitudes, -v, atol=1e-15)

    @pytest.mark.parametrize("L", [1, 2, 3, 5])
    def test_diffusion_matches_dense_reflection(self, L, rng):
        psi = random_state(rng, L)
        expected = diffusion_matrix(1 << L) @ psi.amplitudes
        assert np.allclose(apply_diffusion(psi).amplitudes, expected, atol=1e-12)

    def test_diffusion_twice_identity(self, rng):
        psi = random_state(rng, 5)
        out = apply_diffusion(apply_diffusion(psi.copy()))
        assert np.max(np.abs(out.amplitudes - psi.amplitudes)) < 1e-12
        assert abs(out.norm() - 1) < 1e-12


class TestPlan:
    def test_n4(self):
        plan = optimal_iterations(4)
        assert plan.theta == pytest.approx(math.pi / 6, abs=1e-12)
        assert plan.iterations == 1
        assert plan.predicted_success == pytest.approx(1.0, abs=1e-12)

    def test_n8(self):
        plan = optimal_iterations(8)
        assert plan.theta == pytest.approx(0.361367, abs=1e-6)
        assert plan.iterations == 2
        assert plan.predicted_success == pytest.approx(0.9453, abs=1e-4)

    def test_n1024(self):
        plan = optimal_iterations(1024)
        assert plan.iterations == 25 == round(math.pi * math.sqrt(1024) / 4)
        assert plan.predicted_success == pytest.approx(0.9994612, abs=1e-7)

    @pytest.mark.parametrize("L", range(1, 21))
    def test_invariants(self, L):
        N = 1 << L
        plan = optimal_iterations(N)
        assert abs(math.sin(plan.theta) - N**-0.5) < 1e-12
        assert plan.iterations == round(0.25 * (math.pi / plan.theta - 2)) >= 0
        assert abs(plan.predicted_success - math.sin((2 * plan.iterations + 1) * plan.theta) ** 2) < 1e-12

    def test_rejects_non_power(self):
        with pytest.raises(DomainError):
            optimal_iterations(6)

    def test_failure_bounded_by_c_over_n(self):
        Ns = [16, 64, 256, 1024]
        failures = [1 - optimal_iterations(N).predicted_success for N in Ns]
        c = max(f * N for f, N in zip(failures, Ns))
        assert c < 1
        assert all(f <= c / N for f, N in zip(failures, Ns))

    @pytest.mark.parametrize("L", range(4, 13))
    def test_overshoot(self, L):
        N = 1 << L
        r = optimal_iterations(N).iterations
        assert success_probability(N, r + 1) < success_probability(N, r)


class TestGeometry:
    @pytest.mark.parametrize("L", range(2, 11))
    def test_confinement_and_rotation(self, L):
        N = 1 << L
        omega = (N * 3) // 7
        plan = optimal_iterations(N, omega)
        s = prepare_uniform(L)
        perp = np.full(N, (N - 1) ** -0.5)
        perp[omega] = 0
        for k in range(plan.iterations + 1):
            others = np.delete(s.amplitudes, omega)
            assert np.max(np.abs(others - others[0])) < 1e-12
            along = np.vdot(perp, s.amplitudes).real
            toward = s.amplitudes[omega].real
            angle = math.atan2(toward, along)
            assert angle == pytest.approx((2 * k + 1) * plan.theta, abs=1e-10)
            grover_iteration(s, omega)


class TestSearch:
    def test_exact_n4(self, rng):
        for omega in range(4):
            counts, plan = search(2, omega, 1000, rng)
            assert counts == {omega: 1000}
            assert plan.iterations == 1

    def test_n1024(self, rng):
        counts, plan = search(10, 611, 10_000, rng)
        assert counts.get(611, 0) / 10_000 >= 0.995

    def test_n8_statistics(self, rng):
        counts, plan = search(3, 5, 10_000, rng)
        p = plan.predicted_success
        sigma = math.sqrt(p * (1 - p) / 10_000)
        assert abs(counts.get(5, 0) / 10_000 - p) < 5 * sigma

    def test_iterations_override(self, rng):
        counts, plan = search(2, 1, 100, rng, iterations=0)
        assert plan.iterations == 0
        assert plan.predicted_success == pytest.approx(0.25)

    def test_bad_omega(self, rng):
        with pytest.raises(DomainError):
            search(3, 9, 10, rng)

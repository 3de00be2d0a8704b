"""Shor factoring: classical reduction to order finding plus simulated period finding.

The quantum subroutine runs on two registers of one state vector: the input
register (``t`` qubits, Q = 2**t) at qubits ``0..t-1`` and the output register
right above it.  By default ``t = 2*ceil(log2 N)`` so that Q >= N**2 and
continued fractions recover r reliably; ``paper_mode`` shrinks the input to
``ceil(log2 N)`` qubits (8 qubits in total for N = 15).
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ContractViolation, DomainError, NoFactorFound
from .gates import hadamard
from .modexp import ModExpOracle, apply_modexp_oracle, classical_period, modpow
from .qft import QftDirection, apply_qft
from .state import QubitRange, apply_1q, check_capacity, marginal, max_qubits, new_basis_state, project

log = logging.getLogger(__name__)


def euclid_gcd(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise DomainError("gcd arguments must be non-negative")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def classify_candidate(a: int, N: int) -> int | None:
    """Return gcd(a, N) when it is a nontrivial factor, else None (period needed)."""
    if not 1 < a < N:
        raise DomainError(f"need 1 < a < N, got a={a}, N={N}")
    g = euclid_gcd(a, N)
    return g if g != 1 else None


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def register_widths(N: int, paper_mode: bool = False) -> tuple[int, int]:
    """(input qubits, output qubits) for factoring N."""
    n = ceil_log2(N)
    t = n if paper_mode else 2 * n
    return t, N.bit_length()


@dataclass(frozen=True)
class ShorConfig:
    paper_mode: bool = False
    max_attempts: int = 32
    shots_per_attempt: int = 8
    seed: int | None = None

    def __post_init__(self):
        if self.max_attempts < 1 or self.shots_per_attempt < 1:
            raise DomainError("max_attempts and shots_per_attempt must be >= 1")


@dataclass
class ShorRun:
    N: int
    a: int | None = None
    measured: list[int] = field(default_factory=list)
    candidates: list[int] = field(default_factory=list)
    r: int | None = None
    factors: tuple[int, int] | None = None
    attempts: int = 0
    method: str | None = None
    history: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["factors"] = list(self.factors) if self.factors else None
        return d


class PeriodFinder:
    """Prepared period-finding register for one (a, N) pair.

    The state up to the oracle is deterministic, so it is built once.  After
    the output register is measured the state depends only on the observed
    value f(x0); the QFT'd input distribution is computed once per value and
    reused across shots.
    """

    def __init__(self, a: int, N: int, paper_mode: bool = False):
        t, n_out = register_widths(N, paper_mode)
        check_capacity(t + n_out)
        self.a, self.N = a, N
        self.input = QubitRange(0, t)
        self.output = QubitRange(t, n_out)
        self.Q = 1 << t
        state = new_basis_state(t + n_out)
        h = hadamard()
        for q in self.input.qubits():
            apply_1q(state, h, q)
        apply_modexp_oracle(state, ModExpOracle(a, N, self.input, self.output))
        self._prepared = state
        self._output_probs = marginal(state, self.output)
        self._input_probs: dict[int, np.ndarray] = {}

    def input_distribution(self, fx: int) -> np.ndarray:
        probs = self._input_probs.get(fx)
        if probs is None:
            state = self._prepared.copy()
            project(state, self.output, fx)
            apply_qft(state, self.input, QftDirection.FORWARD)
            probs = marginal(state, self.input)
            self._input_probs[fx] = probs / probs.sum()
            probs = self._input_probs[fx]
        return probs

    def run(self, rng: np.random.Generator) -> tuple[int, int]:
        """One subroutine pass; returns (y, f(x0))."""
        fx = int(rng.choice(self._output_probs.size, p=self._output_probs))
        y = int(rng.choice(self.Q, p=self.input_distribution(fx)))
        return y, fx

    def sample(self, shots: int, rng: np.random.Generator) -> np.ndarray:
        """y outcomes of ``shots`` independent passes."""
        fx_counts = rng.multinomial(shots, self._output_probs)
        ys = []
        for fx in np.flatnonzero(fx_counts):
            ys.append(rng.choice(self.Q, size=int(fx_counts[fx]), p=self.input_distribution(int(fx))))
        out = np.concatenate(ys)
        rng.shuffle(out)
        return out


def predicted_measurement_prob(y: int, r: int, Q: int, x0: int = 0) -> float:
    """Probability of observing the pair (y, f(x0)).

    Q**-2 * |sum_b exp(-2*pi*i * r*b*y / Q)|**2 over the b with x0 + r*b < Q;
    the x0 phase has unit modulus and drops out.
    """
    if not 1 <= r <= Q:
        raise DomainError(f"need 1 <= r <= Q, got r={r}, Q={Q}")
    if not 0 <= y < Q:
        raise DomainError(f"need 0 <= y < Q, got y={y}")
    if not 0 <= x0 < r:
        raise DomainError(f"need 0 <= x0 < r, got x0={x0}")
    terms = -(-(Q - x0) // r)
    b = np.arange(terms, dtype=np.int64)
    phases = (r * y * b) % Q
    total = np.exp(-2j * np.pi * phases / Q).sum()
    return float(abs(total) ** 2 / Q**2)


def predicted_distribution(r: int, Q: int) -> np.ndarray:
    """Marginal probability of each y, summed over the r output values."""
    return np.array(
        [sum(predicted_measurement_prob(y, r, Q, x0) for x0 in range(r)) for y in range(Q)]
    )


def continued_fraction_denominator(y: int, Q: int, bound: int) -> list[Fraction]:
    """Convergents of y/Q whose denominator is <= bound, best approximation last."""
    if Q < 2 or not 0 <= y < Q:
        raise DomainError(f"need Q >= 2 and 0 <= y < Q, got y={y}, Q={Q}")
    # h/k recurrences seeded with h_{-1}/k_{-1} = 1/0 and h_{-2}/k_{-2} = 0/1
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    num, den = y, Q
    out: list[Fraction] = []
    while den:
        q, rem = divmod(num, den)
        h_prev, h = h, q * h + h_prev
        k_prev, k = k, q * k + k_prev
        if k > bound:
            break
        out.append(Fraction(h, k))
        num, den = den, rem
    return out


def verify_period(a: int, N: int, r_candidate: int) -> bool:
    if r_candidate < 1:
        raise DomainError(f"period candidate must be >= 1, got {r_candidate}")
    return modpow(a, r_candidate, N) == 1


def expand_candidates(y: int, Q: int, r_prime: int, N: int) -> list[int]:
    """Multiples of r' first, then denominators recovered from y+-1 and y+-2."""
    if r_prime < 1:
        raise DomainError("r_prime must be >= 1")
    raw = [k * r_prime for k in range(2, ceil_log2(N) + 1)]
    for dy in (-1, 1, -2, 2):
        yy = y + dy
        if 0 <= yy < Q:
            convergents = continued_fraction_denominator(yy, Q, N)
            if convergents:
                raw.append(convergents[-1].denominator)
    out = []
    for c in raw:
        if 2 <= c <= N and c != r_prime and c not in out:
            out.append(c)
    return out


def quantum_period_find(
    a: int,
    N: int,
    cfg: ShorConfig,
    rng: np.random.Generator,
    measurements: list[int] | None = None,
    finder: PeriodFinder | None = None,
) -> list[int]:
    """Run the period-finding subroutine up to ``cfg.shots_per_attempt`` times.

    Returns the verified period candidates of the first successful pass, in
    the order they were tried; empty when every pass failed.  Each measured y
    is appended to ``measurements`` when given.
    """
    if math.gcd(a, N) != 1:
        raise DomainError(f"gcd({a}, {N}) != 1")
    finder = finder or PeriodFinder(a, N, cfg.paper_mode)
    for _ in range(cfg.shots_per_attempt):
        y, _fx = finder.run(rng)
        if measurements is not None:
            measurements.append(y)
        r_prime = continued_fraction_denominator(y, finder.Q, N)[-1].denominator
        tried = [r_prime] + expand_candidates(y, finder.Q, r_prime, N)
        verified = [c for c in tried if verify_period(a, N, c)]
        log.debug("a=%d y=%d r'=%d verified=%s", a, y, r_prime, verified)
        if verified:
            return verified
    return []


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def reduce_to_order(a: int, N: int, r: int) -> int:
    """Shrink a verified period to the exact order by dividing out primes."""
    if r < 1 or not verify_period(a, N, r):
        raise ContractViolation(f"{a}**{r} is not 1 mod {N}")
    for p in _prime_factors(r):
        while r % p == 0 and verify_period(a, N, r // p):
            r //= p
    return r


def extract_factors(a: int, N: int, r: int) -> tuple[int, int] | None:
    """gcd(a**(r/2) -+ 1, N), or None when this a must be retried."""
    if r < 1 or modpow(a, r, N) != 1:
        raise ContractViolation(f"{a}**{r} is not 1 mod {N}")
    if r % 2:
        return None
    half = modpow(a, r // 2, N)
    if half == N - 1:
        return None
    p, q = euclid_gcd(half - 1, N), euclid_gcd(half + 1, N)
    if not (1 < p < N and 1 < q < N):
        return None
    return p, q


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def perfect_power_root(n: int) -> int | None:
    """Smallest b > 1 with b**k == n for some k >= 2, if any."""
    best = None
    for k in range(2, n.bit_length() + 1):
        b = round(n ** (1.0 / k))
        for cand in (b - 1, b, b + 1):
            if cand > 1 and cand**k == n:
                best = cand if best is None else min(best, cand)
    return best


def factor(N: int, cfg: ShorConfig | None = None, rng: np.random.Generator | None = None) -> ShorRun:
    """Factor N into a nontrivial pair; raises NoFactorFound with the trace attached."""
    cfg = cfg or ShorConfig()
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if N < 4:
        raise DomainError(f"N must be >= 4, got {N}")
    run = ShorRun(N=N)

    if N % 2 == 0:
        run.factors, run.method = (2, N // 2), "even"
        return run
    root = perfect_power_root(N)
    if root is not None:
        run.factors, run.method = (root, N // root), "perfect_power"
        return run
    if is_prime(N):
        raise NoFactorFound(f"{N} is prime; it has no nontrivial factor", run)
    t, n_out = register_widths(N, cfg.paper_mode)
    if t + n_out > max_qubits():
        raise CapacityError(f"factoring {N} needs {t + n_out} qubits, above the guard of {max_qubits()}")

    for attempt, stream in enumerate(rng.spawn(cfg.max_attempts), start=1):
        run.attempts = attempt
        a = int(stream.integers(2, N - 1))
        run.a = a
        entry = {"attempt": attempt, "a": a}
        run.history.append(entry)
        g = classify_candidate(a, N)
        if g is not None:
            entry["outcome"] = "gcd"
            run.factors, run.method = (g, N // g), "gcd"
            return run
        ys: list[int] = []
        verified = quantum_period_find(a, N, cfg, stream, measurements=ys)
        run.measured.extend(ys)
        run.candidates.extend(verified)
        entry["measured"] = ys
        entry["candidates"] = verified
        if not verified:
            entry["outcome"] = "no_period"
            continue
        r = reduce_to_order(a, N, min(verified))
        entry["r"] = r
        pair = extract_factors(a, N, r)
        if pair is None:
            entry["outcome"] = "odd_r" if r % 2 else "half_power_minus_one"
            continue
        entry["outcome"] = "factored"
        run.r, run.factors, run.method = r, pair, "quantum"
        return run
    raise NoFactorFound(f"no factor of {N} after {cfg.max_attempts} attempts", run)


__all__ = [
    "PeriodFinder",
    "ShorConfig",
    "ShorRun",
    "classical_period",
    "classify_candidate",
    "continued_fraction_denominator",
    "euclid_gcd",
    "expand_candidates",
    "extract_factors",
    "factor",
    "predicted_distribution",
    "predicted_measurement_prob",
    "quantum_period_find",
    "reduce_to_order",
    "register_widths",
    "verify_period",
]

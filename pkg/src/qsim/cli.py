"""Command-line harness: ``qsim factor|grover|period-prob|qec|qft-bench``.

Every command builds a result payload (a dict whose ``rows`` entry is the
tabular part), prints it as text, JSON or CSV, and optionally appends a run
record to a JSON-lines file.  Exit codes: 0 success, 1 usage error, 2
algorithmic failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .errors import CapacityError, DomainError, NoFactorFound
from .grover import search
from .modexp import classical_period
from .qec import CodeKind, analytic_logical_rate, logical_error_rate
from .qft import qft_circuit, qft_gate_count
from .shor import ShorConfig, factor, predicted_distribution, register_widths
from .state import QubitRange, max_qubits

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2

log = logging.getLogger("qsim")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunRecord:
    command: str
    params: dict
    timing_ms: float
    result: dict
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def resolve_seed(seed: int | None) -> int:
    """Explicit seed, or fresh entropy; QSIM_CI=1 makes the seed mandatory."""
    if seed is not None:
        return seed
    if os.environ.get("QSIM_CI") == "1":
        raise UsageError("--seed is required when QSIM_CI=1")
    return int(np.random.SeedSequence().entropy)


def run_factor(args) -> tuple[dict, int]:
    if args.N < 4:
        raise UsageError(f"N must be >= 4, got {args.N}")
    cfg = ShorConfig(
        paper_mode=args.paper_mode,
        max_attempts=args.attempts,
        shots_per_attempt=args.shots,
        seed=args.seed,
    )
    try:
        run = factor(args.N, cfg, np.random.default_rng(args.seed))
    except NoFactorFound as exc:
        trace = exc.run.to_dict() if exc.run else {"N": args.N}
        diagnosis = "prime" if "prime" in str(exc) else "attempts_exhausted"
        return {**trace, "error": str(exc), "diagnosis": diagnosis, "rows": []}, EXIT_FAILURE
    p, q = sorted(run.factors)
    payload = run.to_dict()
    payload["rows"] = [{"N": args.N, "p": p, "q": q, "method": run.method,
                        "a": run.a, "r": run.r, "attempts": run.attempts}]
    return payload, EXIT_OK


def run_grover(args) -> tuple[dict, int]:
    if args.L < 1 or args.L > max_qubits():
        raise UsageError(f"L must be in 1..{max_qubits()}, got {args.L}")
    if not 0 <= args.omega < (1 << args.L):
        raise UsageError(f"omega must be in 0..{(1 << args.L) - 1}, got {args.omega}")
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    counts, plan = search(args.L, args.omega, args.shots, np.random.default_rng(args.seed),
                          iterations=args.iterations_override)
    payload = plan.to_dict()
    payload["shots"] = args.shots
    payload["empirical_success"] = counts.get(args.omega, 0) / args.shots
    payload["rows"] = [{"outcome": k, "count": v} for k, v in sorted(counts.items())]
    return payload, EXIT_OK


def run_period_prob(args) -> tuple[dict, int]:
    N, a = args.N, args.a
    if N < 3 or not 1 < a < N:
        raise UsageError(f"need N >= 3 and 1 < a < N, got N={N}, a={a}")
    g = math.gcd(a, N)
    if g != 1:
        raise UsageError(f"gcd({a}, {N}) = {g}: {g} is already a nontrivial factor")
    t, _ = register_widths(N, args.paper_mode)
    Q = 1 << t
    r = classical_period(a, N)
    dist = predicted_distribution(r, Q)
    payload = {"N": N, "a": a, "Q": Q, "period": r, "total": float(dist.sum()),
               "rows": [{"y": y, "probability": float(p)} for y, p in enumerate(dist)]}
    return payload, EXIT_OK


def run_qec(args) -> tuple[dict, int]:
    for p in args.p:
        if not 0.0 <= p <= 0.5:
            raise UsageError(f"--p must lie in [0, 0.5], got {p}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    kind = CodeKind(args.kind)
    rng = np.random.default_rng(args.seed)
    rows = []
    for p in args.p:
        rate = logical_error_rate(kind, p, args.trials, rng)
        rows.append({"p": p, "logical_rate": rate, "analytic": analytic_logical_rate(p),
                     "failures": round(rate * args.trials), "trials": args.trials})
    return {"kind": kind.value, "rows": rows}, EXIT_OK


def run_qft_bench(args) -> tuple[dict, int]:
    if not 1 <= args.Lmax <= max_qubits():
        raise UsageError(f"Lmax must be in 1..{max_qubits()}, got {args.Lmax}")
    rows = []
    for L in range(1, args.Lmax + 1):
        gates = qft_gate_count(L)
        rows.append({"L": L, "gates": gates, "executed": len(qft_circuit(QubitRange(0, L))),
                     "ratio": gates / L**2})
    return {"Lmax": args.Lmax, "rows": rows}, EXIT_OK


def to_csv(payload: dict) -> str:
    rows = payload.get("rows", [])
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def to_text(command: str, payload: dict) -> str:
    if "error" in payload:
        return f"no factor found for N={payload['N']} ({payload['diagnosis']}): {payload['error']}"
    if command == "factor":
        row = payload["rows"][0]
        return f"{row['N']} = {row['p']} x {row['q']} (method={row['method']}, attempts={row['attempts']})"
    if command == "grover":
        lines = [f"N={payload['N']} omega={payload['omega']} theta={payload['theta']:.6f} "
                 f"r={payload['iterations']} predicted_success={payload['predicted_success']:.6f}",
                 f"empirical_success={payload['empirical_success']:.6f} over {payload['shots']} shots"]
        lines += [f"{row['outcome']}\t{row['count']}" for row in payload["rows"]]
        return "\n".join(lines)
    if command == "period-prob":
        lines = [f"N={payload['N']} a={payload['a']} Q={payload['Q']} period={payload['period']}"]
        lines += [f"{row['y']}\t{row['probability']:.12g}" for row in payload["rows"]]
        return "\n".join(lines)
    if command == "qec":
        lines = [f"kind={payload['kind']}", "p\tlogical\tanalytic"]
        lines += [f"{r['p']:g}\t{r['logical_rate']:.6g}\t{r['analytic']:.6g}" for r in payload["rows"]]
        return "\n".join(lines)
    lines = ["L\tgates\tratio"]
    lines += [f"{r['L']}\t{r['gates']}\t{r['ratio']:.4f}" for r in payload["rows"]]
    return "\n".join(lines)


COMMANDS = {
    "factor": run_factor,
    "grover": run_grover,
    "period-prob": run_period_prob,
    "qec": run_qec,
    "qft-bench": run_qft_bench,
}
RANDOMIZED = {"factor", "grover", "qec"}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsim", description="State-vector quantum algorithm simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, seeded=True):
        if seeded:
            p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="append a JSON-lines run record here")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("factor", help="factor N with Shor's algorithm")
    p.add_argument("N", type=int)
    p.add_argument("--attempts", type=int, default=32)
    p.add_argument("--shots", type=int, default=8)
    p.add_argument("--paper-mode", action="store_true",
                   help="input register of ceil(log2 N) qubits instead of twice that")
    common(p)

    p = sub.add_parser("grover", help="Grover search for one marked index")
    p.add_argument("L", type=int)
    p.add_argument("omega", type=int)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--iterations-override", type=int, default=None)
    common(p)

    p = sub.add_parser("period-prob", aliases=["period_prob"],
                       help="predicted y distribution of the period-finding register")
    p.add_argument("N", type=int)
    p.add_argument("a", type=int)
    p.add_argument("--paper-mode", action="store_true")
    common(p, seeded=False)

    p = sub.add_parser("qec", help="repetition-code logical error rates")
    p.add_argument("--kind", choices=[k.value for k in CodeKind], default="bitflip")
    p.add_argument("--p", type=float, nargs="+", default=[0.01])
    p.add_argument("--trials", type=int, default=10000)
    common(p)

    p = sub.add_parser("qft-bench", aliases=["qft_bench"], help="QFT gate counts for L = 1..Lmax")
    p.add_argument("Lmax", type=int)
    common(p, seeded=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    command = args.command.replace("_", "-")
    try:
        if command in RANDOMIZED:
            args.seed = resolve_seed(args.seed)
        start = time.perf_counter()
        payload, code = COMMANDS[command](args)
        elapsed = (time.perf_counter() - start) * 1000
    except (UsageError, DomainError, CapacityError) as exc:
        print(f"qsim {command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    elif args.format == "csv":
        sys.stdout.write(to_csv(payload))
    else:
        print(to_text(command, payload))

    if args.out:
        params = {k: v for k, v in vars(args).items() if k not in ("out", "format", "verbose")}
        params["command"] = command
        record = RunRecord(command, params, round(elapsed, 3), payload)
        with open(args.out, "a") as fh:
            fh.write(record.to_json() + "\n")
    return code

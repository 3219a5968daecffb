"""``qubitdesk`` command line: demos, algorithms and circuit files.

Every subcommand prints one JSON document (or a text rendering of it) with
``schema_version``, ``seed`` and ``duration_s``. Wall-clock time is only
measured under ``--timing``; otherwise ``duration_s`` is null so repeated
invocations with the same seed are byte-identical.

Exit codes: 0 success, 1 algorithmic failure, 2 usage error.
"""

from __future__ import annotations

import functools
import json
import time
from collections import Counter

import click
import numpy as np

from . import classical_dynamics as cd
from .core_state import (
    StateVector,
    dump_state,
    format_index,
    new_basis_state,
    random_source,
    sample_outcomes,
)
from .errors import CircuitParseError, QubitDeskError, RecoveryError
from .gates import Circuit, parse_circuit, run_circuit, sqrt_not_gate
from .grover import PredicateOracle, classical_expected_draws, grover_iterations, grover_search
from .qft import apply_qft_circuit, qft_matrix
from .shor import ClassicalCase, PeriodicOracle, factor, find_period_traced, register_size

SCHEMA_VERSION = 1
DEFAULT_SEED = 20120101
CLI_MAX_QUBITS = 26
FACTOR_MAX_N = 1 << 20


class AlgorithmFailure(Exception):
    def __init__(self, report: dict):
        super().__init__(report.get("error", "failed"))
        self.report = report


def _render_text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item if isinstance(item, str) else json.dumps(item)}")
    else:
        lines.append(f"{pad}{json.dumps(value)}")
    return lines


def _emit(report: dict, output_format: str) -> None:
    if output_format == "json":
        click.echo(json.dumps(report, indent=2))
    else:
        click.echo("\n".join(_render_text(report)))


def common_options(f):
    """Attach --seed/--output-format/--timing and wrap the report envelope."""

    @click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
    @click.option("--output-format", type=click.Choice(["json", "text"]), default="json", show_default=True)
    @click.option("--timing", is_flag=True, help="Record wall-clock duration (breaks byte-identical output).")
    @functools.wraps(f)
    def wrapper(seed, output_format, timing, **kwargs):
        start = time.perf_counter()
        rng = random_source(seed)
        failed = False
        try:
            body = f(rng=rng, **kwargs)
        except AlgorithmFailure as exc:
            body, failed = exc.report, True
        except QubitDeskError as exc:
            raise click.UsageError(str(exc)) from None
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": click.get_current_context().info_name,
            "seed": seed,
            **body,
            "duration_s": round(time.perf_counter() - start, 6) if timing else None,
        }
        _emit(report, output_format)
        if failed:
            raise SystemExit(1)

    return wrapper


@click.group()
def main():
    """Desk-scale state-vector quantum simulation."""


def _p(x: float) -> float:
    # probabilities are exact to ~1e-15; print them at 12 decimals
    return round(float(x), 12)


@main.command()
@common_options
def interference(rng):
    """sqrt(NOT) once and twice from |0>, against a fair-coin random bit."""
    one = cd.interference_contrast(1)
    two = cd.interference_contrast(2)
    s = run_circuit(new_basis_state(1, 0), Circuit(1, [sqrt_not_gate(0)] * 2))
    p = cd.point_mass(1, 0)
    for _ in range(2):
        p = cd.apply_local_stochastic(p, cd.fair_coin(0))
    return {
        "quantum_one_step": _p(one["quantum_p1"]),
        "classical_one_step": _p(one["classical_p1"]),
        "quantum_two_step": _p(two["quantum_p1"]),
        "classical_two_step": _p(two["classical_p1"]),
        "difference_two_step": _p(two["difference"]),
        "quantum_distribution": [_p(x) for x in cd.quantum_to_distribution(s).probs],
        "classical_distribution": [_p(x) for x in p.probs],
    }


@main.command("run-circuit")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--input", "input_bits", default=None, help="Basis input as a bit string, qubit 0 rightmost.")
@click.option("--shots", type=click.IntRange(min=0), default=1024, show_default=True)
@click.option("--dump", is_flag=True, help="Include the final state as 'index_bits re im' lines.")
@common_options
def run_circuit_cmd(rng, path, input_bits, shots, dump):
    """Run a circuit file on a basis input and sample it."""
    with open(path) as fh:
        text = fh.read()
    try:
        circuit = parse_circuit(text)
    except CircuitParseError as exc:
        raise click.UsageError(f"{path}: {exc}") from None
    n = circuit.num_qubits
    if n > CLI_MAX_QUBITS:
        raise click.UsageError(f"{n} qubits exceeds the CLI limit of {CLI_MAX_QUBITS}")
    if input_bits is None:
        input_bits = "0" * n
    if len(input_bits) != n or set(input_bits) - {"0", "1"}:
        raise click.BadParameter(f"expected {n} bits of 0/1, got {input_bits!r}", param_hint="--input")
    final = run_circuit(new_basis_state(n, int(input_bits, 2)), circuit)
    counts = Counter(sample_outcomes(final, shots, rng).tolist())
    report = {
        "num_qubits": n,
        "num_gates": len(circuit),
        "input": input_bits,
        "shots": shots,
        "histogram": {format_index(i, n): counts[i] for i in sorted(counts)},
    }
    if dump:
        report["state_dump"] = dump_state(final)
    return report


def _parse_solutions(text: str, n: int) -> list[int]:
    try:
        values = sorted({int(v) for v in text.split(",") if v.strip()})
    except ValueError:
        raise click.BadParameter(f"not a comma-separated index list: {text!r}", param_hint="--solutions") from None
    if not values or any(not 0 <= v < (1 << n) for v in values) or len(values) >= (1 << n):
        raise click.BadParameter(f"need 1 to 2**n - 1 indices in [0, 2**{n})", param_hint="--solutions")
    return values


@main.command()
@click.option("--n", "n", type=click.IntRange(1, CLI_MAX_QUBITS), required=True)
@click.option("--solutions", required=True, help="Comma-separated marked indices.")
@click.option("--trials", type=click.IntRange(min=1), default=100, show_default=True)
@common_options
def grover(rng, n, solutions, trials):
    """Grover search for a set of marked indices."""
    marked = _parse_solutions(solutions, n)
    M = len(marked)
    oracle = PredicateOracle.from_solutions(n, marked)
    results = [grover_search(oracle, M, rng) for _ in range(trials)]
    calls = {r.oracle_calls for r in results}
    successes = sum(r.success for r in results)
    return {
        "n": n,
        "solutions": marked,
        "trials": trials,
        "iterations": grover_iterations(n, M),
        "oracle_calls_per_trial": calls.pop() if len(calls) == 1 else sorted(calls),
        "success_rate": successes / trials,
        "classical_expected_draws": classical_expected_draws(n, M),
        "found_histogram": {str(k): v for k, v in sorted(Counter(r.found for r in results).items())},
    }


@main.command("period-find")
@click.option("--n-bits", type=click.IntRange(1, CLI_MAX_QUBITS), required=True)
@click.option("--period", type=click.IntRange(min=1), required=True)
@click.option("--trials", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--max-attempts", type=click.IntRange(min=1), default=32, show_default=True)
@common_options
def period_find(rng, n_bits, period, trials, max_attempts):
    """Recover a hidden period r of f(x) = x mod r on n-bit inputs."""
    if period > (1 << n_bits):
        raise click.BadParameter(f"period must be at most 2**{n_bits}", param_hint="--period")
    oracle = PeriodicOracle.from_period(n_bits, period)
    runs = []
    for _ in range(trials):
        res = find_period_traced(oracle, max_attempts, rng)
        runs.append(
            {
                "period": res.period,
                "correct": res.period == period,
                "oracle_queries": res.queries,
                "attempts": [a.as_dict() for a in res.attempts],
            }
        )
    correct = sum(run["correct"] for run in runs)
    report = {
        "n_bits": n_bits,
        "true_period": period,
        "trials": trials,
        "max_attempts": max_attempts,
        "success_rate": correct / trials,
        "runs": runs,
    }
    if correct < trials:
        report["error"] = "period not recovered in every trial"
        raise AlgorithmFailure(report)
    return report


@main.command("factor")
@click.option("--n", "N", type=click.IntRange(min=2), required=True)
@click.option("--max-rounds", type=click.IntRange(min=1), default=20, show_default=True)
@common_options
def factor_cmd(rng, N, max_rounds):
    """Factor N by reduction to period finding."""
    if N >= FACTOR_MAX_N:
        raise click.BadParameter("N must be below 2**20", param_hint="--n")
    report = {"N": N}
    try:
        result = factor(N, max_rounds, rng)
    except ClassicalCase as exc:
        if exc.factor is None:
            raise click.BadParameter(str(exc), param_hint="--n") from None
        report.update(
            factor=exc.factor,
            cofactor=N // exc.factor,
            path="classical",
            note=f"{exc}; quantum pipeline bypassed",
        )
        return report
    except RecoveryError as exc:
        report.update(error=str(exc), rounds=list(getattr(exc, "trace", ())))
        raise AlgorithmFailure(report) from None
    report.update(
        factor=result.factor,
        cofactor=result.cofactor,
        path="period-finding",
        register_qubits=register_size(N),
        attempts=result.attempts,
        rounds=list(result.trace),
    )
    return report


@main.command("qft-check")
@click.option("--max-n", type=click.IntRange(1, 10), default=8, show_default=True)
@click.option("--states", type=click.IntRange(min=1), default=50, show_default=True)
@common_options
def qft_check(rng, max_n, states):
    """Max deviation between the QFT circuit and the dense QFT matrix."""
    per_n = {}
    for n in range(1, max_n + 1):
        F = qft_matrix(n)
        worst = 0.0
        for _ in range(states):
            v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            s = StateVector(n, v / np.linalg.norm(v))
            worst = max(worst, float(np.max(np.abs(apply_qft_circuit(s).amplitudes - F @ s.amplitudes))))
        per_n[str(n)] = worst
    overall = max(per_n.values())
    return {
        "states_per_n": states,
        "max_deviation_per_n": per_n,
        "max_deviation": overall,
        "tolerance": 1e-10,
        "passed": overall < 1e-10,
    }


if __name__ == "__main__":
    main()

"""Benchmark harness: scalability sweeps and report generators.

A sweep runs the factorization pipeline over a set of semiprimes (or
a bit range) in one or both base-selection modes and emits one flat
record per run with phase timings, so the bit-length versus time
trend can be re-plotted from the CSV alone. Histogram reports show
the measured counting-register distribution next to the ideal peak
positions k*2^t/r; entropy reports record the entanglement across the
register boundaries at every circuit checkpoint for each register
ordering.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from datetime import datetime, timezone

from . import mps as mps_mod
from .circuit import ORDERINGS, shor_order_circuit
from .numthy import SemiprimeSpec, multiplicative_order, semiprime_spec
from .pipeline import FactorizationOutcome, RunConfig, factor, run_period_finding

CSV_COLUMNS = [
    "n_value",
    "bit_length",
    "mode",
    "a_used",
    "shots",
    "status",
    "circuit_build_seconds",
    "simulation_seconds",
    "postprocess_seconds",
    "peak_chi",
    "swap_count",
    "timestamp",
    "seed",
]


@dataclass
class BenchRecord:
    n_value: int
    bit_length: int
    mode: str
    a_used: int | None
    shots: int
    status: str
    circuit_build_seconds: float
    simulation_seconds: float
    postprocess_seconds: float
    peak_chi: int
    swap_count: int
    timestamp: str
    seed: int

    def __post_init__(self):
        if self.status not in ("success", "timeout", "exhausted"):
            raise ValueError(f"bad status {self.status!r}")
        for name in ("circuit_build_seconds", "simulation_seconds", "postprocess_seconds"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.peak_chi < 1:
            raise ValueError("peak_chi must be >= 1")


def record_from_outcome(
    outcome: FactorizationOutcome, mode: str, shots: int, seed: int, timestamp: str
) -> BenchRecord:
    a_used = outcome.attempts[-1].a if outcome.attempts else None
    return BenchRecord(
        n_value=outcome.n_value,
        bit_length=outcome.n_value.bit_length(),
        mode=mode,
        a_used=a_used,
        shots=shots,
        status=outcome.status,
        circuit_build_seconds=outcome.timings["circuit_build_seconds"],
        simulation_seconds=outcome.timings["simulation_seconds"],
        postprocess_seconds=outcome.timings["postprocess_seconds"],
        peak_chi=max(outcome.stats.max_chi, 1),
        swap_count=outcome.stats.swap_count,
        timestamp=timestamp,
        seed=seed,
    )


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = {c: getattr(r, c) for c in CSV_COLUMNS}
        row["a_used"] = "" if r.a_used is None else r.a_used
        writer.writerow(row)
    return buf.getvalue()


def records_from_csv(text: str) -> list[BenchRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(
            BenchRecord(
                n_value=int(row["n_value"]),
                bit_length=int(row["bit_length"]),
                mode=row["mode"],
                a_used=None if row["a_used"] == "" else int(row["a_used"]),
                shots=int(row["shots"]),
                status=row["status"],
                circuit_build_seconds=float(row["circuit_build_seconds"]),
                simulation_seconds=float(row["simulation_seconds"]),
                postprocess_seconds=float(row["postprocess_seconds"]),
                peak_chi=int(row["peak_chi"]),
                swap_count=int(row["swap_count"]),
                timestamp=row["timestamp"],
                seed=int(row["seed"]),
            )
        )
    return out


def records_to_jsonl(records) -> str:
    lines = []
    for r in records:
        lines.append(json.dumps({f.name: getattr(r, f.name) for f in fields(r)}, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def records_from_jsonl(text: str) -> list[BenchRecord]:
    return [BenchRecord(**json.loads(line)) for line in text.splitlines() if line.strip()]


def _sweep_one(n: int, config: RunConfig) -> BenchRecord:
    timestamp = datetime.now(timezone.utc).isoformat()
    try:
        outcome = factor(n, config)
        return record_from_outcome(outcome, config.mode, config.shots, config.seed, timestamp)
    except Exception:
        # per-run failures must not kill the sweep; anything that is not a
        # clean timeout is recorded as an exhausted run with no base
        return BenchRecord(
            n_value=n,
            bit_length=n.bit_length(),
            mode=config.mode,
            a_used=None,
            shots=config.shots,
            status="exhausted",
            circuit_build_seconds=0.0,
            simulation_seconds=0.0,
            postprocess_seconds=0.0,
            peak_chi=1,
            swap_count=0,
            timestamp=timestamp,
            seed=config.seed,
        )


def bench_sweep(
    targets,
    config: RunConfig,
    modes: tuple[str, ...] | None = None,
    max_workers: int | None = None,
) -> list[BenchRecord]:
    """Run factor() for every target in every requested mode.

    Targets are semiprime values or SemiprimeSpec entries. Jobs run on
    a bounded thread pool but records come back in deterministic
    (target, mode) order, and each job gets a seed derived from the
    sweep seed and its position, so identical sweeps are identical up
    to timestamps and durations.
    """
    values = [t.value if isinstance(t, SemiprimeSpec) else int(t) for t in targets]
    if not values:
        raise ValueError("no sweep targets")
    if modes is None:
        modes = (config.mode,)
    jobs = []
    for i, n in enumerate(values):
        for j, mode in enumerate(modes):
            cfg = replace(config, mode=mode, seed=config.seed + 7919 * (i * len(modes) + j))
            jobs.append((n, cfg))
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(_sweep_one, n, cfg) for n, cfg in jobs]
        return [f.result() for f in futures]


@dataclass
class HistogramReport:
    n_value: int
    a: int
    t: int
    order: int
    shots: int
    counts: dict[int, int]
    expected_peaks: list[int]


def histogram_report(
    n: int, a: int, shots: int, backend: str = "mps", seed: int = 0,
    truncation: mps_mod.TruncationPolicy | None = None,
) -> HistogramReport:
    """Measured counting-register histogram plus the ideal peak positions."""
    cfg = RunConfig(
        shots=shots,
        backend=backend,
        seed=seed,
        truncation=truncation or mps_mod.TruncationPolicy(),
    )
    hist, _, _ = run_period_finding(n, a, cfg)
    r = multiplicative_order(a, n)
    t = 2 * n.bit_length()
    peaks = sorted({round(k * (1 << t) / r) % (1 << t) for k in range(r)})
    return HistogramReport(
        n_value=n, a=a, t=t, order=r, shots=shots, counts=dict(sorted(hist.items())),
        expected_peaks=peaks,
    )


def format_histogram_table(report: HistogramReport) -> str:
    lines = [
        f"N={report.n_value} a={report.a} order={report.order} "
        f"t={report.t} shots={report.shots}",
        f"ideal peaks (k*2^t/{report.order}): "
        + " ".join(str(p) for p in report.expected_peaks),
        f"{'y':>8} {'count':>8} {'freq':>8}",
    ]
    total = sum(report.counts.values())
    for y, c in report.counts.items():
        lines.append(f"{y:>8} {c:>8} {c / total:>8.4f}")
    return "\n".join(lines)


@dataclass
class EntropyReport:
    n_value: int
    a: int
    ordering: str
    rows: list[tuple[str, int, float]]  # (checkpoint label, cut, entropy bits)
    mean_entropy: float

    def __post_init__(self):
        width = 4 * self.n_value.bit_length() + 2
        for label, cut, s in self.rows:
            if not -1e-12 <= s <= min(cut, width - cut) + 1e-9:
                raise ValueError(f"entropy {s} out of bounds at {label} cut {cut}")


def entropy_report(
    n: int,
    a: int,
    orderings=ORDERINGS,
    checkpoints=None,
    truncation: mps_mod.TruncationPolicy | None = None,
    lambda_dump: dict[str, str] | None = None,
) -> list[EntropyReport]:
    """Register-boundary entanglement at every checkpoint, per ordering.

    Simulates the order-finding circuit once per register ordering on
    the MPS backend, recording the bond entropy at the two register
    boundary cuts after state preparation, after each controlled
    multiplier block, and after the final inverse Fourier transform.
    `checkpoints` optionally restricts recording to those labels;
    `lambda_dump` maps an ordering to a path that receives the final
    Schmidt spectra for that run.
    """
    wanted = None if checkpoints is None else set(checkpoints)
    reports = []
    for ordering in orderings:
        circ = shor_order_circuit(n, a, ordering)
        cuts = circ.layout.boundary_cuts()
        state = mps_mod.init_state(circ.width, truncation or mps_mod.TruncationPolicy())
        rows: list[tuple[str, int, float]] = []
        for label, gates in circ.segments():
            for g in gates:
                mps_mod.apply_gate(state, g)
            if wanted is not None and label not in wanted:
                continue
            for cut in cuts:
                rows.append((label, cut, mps_mod.bond_entropy(state, cut)))
        if lambda_dump and ordering in lambda_dump:
            mps_mod.dump_lambda_spectra(state, lambda_dump[ordering])
        mean = sum(s for _, _, s in rows) / len(rows)
        reports.append(
            EntropyReport(n_value=n, a=a, ordering=ordering, rows=rows, mean_entropy=mean)
        )
    return reports


def entropy_reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n_value", "a", "ordering", "checkpoint", "cut", "entropy_bits"])
    for rep in reports:
        for label, cut, s in rep.rows:
            writer.writerow([rep.n_value, rep.a, rep.ordering, label, cut, s])
    return buf.getvalue()


def entropy_reports_to_jsonl(reports) -> str:
    lines = []
    for rep in reports:
        lines.append(
            json.dumps(
                {
                    "n_value": rep.n_value,
                    "a": rep.a,
                    "ordering": rep.ordering,
                    "mean_entropy": rep.mean_entropy,
                    "rows": [[label, cut, s] for label, cut, s in rep.rows],
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def format_entropy_summary(reports) -> str:
    lines = [f"{'ordering':<24} {'mean entropy (bits)':>20}"]
    for rep in sorted(reports, key=lambda r: -r.mean_entropy):
        lines.append(f"{rep.ordering:<24} {rep.mean_entropy:>20.6f}")
    return "\n".join(lines)


def resolve_targets(values, bits: str | None, count_per_bit: int, seed: int):
    """Sweep targets from explicit values or a min:max bit range."""
    if values and bits:
        raise ValueError("give explicit semiprimes or --bits, not both")
    if values:
        return [semiprime_spec(int(v)).value for v in values]
    if bits:
        lo, _, hi = bits.partition(":")
        from .numthy import generate_semiprimes

        specs = generate_semiprimes(int(lo), int(hi or lo), count_per_bit, seed)
        return [s.value for s in specs]
    raise ValueError("no targets given")

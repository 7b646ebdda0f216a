"""Experiment harness: seeded sweeps, scaling-collapse output, subcommands.

Outputs are flat files: CSV for tables, JSON (stdout) for single-run
reports, and a hand-written self-contained SVG for the collapse figure.
Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cayley import alon_boppana_lower_bound, walk_counts
from .channel import Channel, build_hermitian_random, build_nonhermitian_random, build_weighted
from .edgex import converse_check, random_projector, tanner_chain_check
from .errors import NumericalError, QxError, ValidationError
from .matrixcore import SeededRng, haar_unitary
from .sdengine import evaluate_exact, evaluate_series, monte_carlo_expectation, parse_trace_expr
from .sdengine.rational import RationalInN
from .spectrum import (
    SuperopSpectrum,
    benchmark_values,
    eigen_spectrum,
    estimate_lambda2_from_moments,
    frobenius_moment,
    moment_trace,
    write_spectrum_csv,
)

SWEEP_HEADER = "N,D,seed,construction,lambda2,lambda_H,lambda_nH,alon_boppana_lb,gap_ok,wall_ms"
CONSTRUCTIONS = ("hermitian", "nonhermitian", "weighted")
GAP_SLACK = 1e-9


@dataclass(frozen=True)
class ExperimentConfig:
    construction: str
    N_list: tuple[int, ...]
    D: int
    trials: int
    master_seed: int
    output_dir: str
    m_max: int

    def __post_init__(self) -> None:
        if self.construction not in CONSTRUCTIONS:
            raise ValidationError(
                f"construction must be one of {CONSTRUCTIONS}, got {self.construction!r}"
            )
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        if not self.N_list:
            raise ValidationError("N_list must not be empty")
        for n in self.N_list:
            if not 2 <= n <= 64:
                raise ValidationError(f"every N must lie in 2..64, got {n}")
        if self.construction in ("hermitian", "weighted"):
            if self.D % 2 != 0 or self.D < 4:
                raise ValidationError(
                    f"{self.construction} construction needs even D >= 4, got D={self.D}"
                )
        elif self.D < 2:
            raise ValidationError(f"nonhermitian construction needs D >= 2, got D={self.D}")
        if self.m_max % 2 != 0 or self.m_max < 2:
            raise ValidationError(f"m_max must be even and >= 2, got {self.m_max}")


@dataclass(frozen=True)
class ExperimentRecord:
    N: int
    D: int
    seed: int
    construction: str
    lambda2: float
    lambda_H: float
    lambda_nH: float
    alon_boppana_lb: float
    gap_ok: bool | None  # None when the bound does not apply (nonhermitian)
    wall_ms: float
    error: str | None = None


def build_channel(construction: str, N: int, D: int, rng: SeededRng) -> Channel:
    if construction == "hermitian":
        return build_hermitian_random(N, D, rng)
    if construction == "nonhermitian":
        return build_nonhermitian_random(N, D, rng)
    if construction == "weighted":
        half = D // 2
        gam = rng.generator.gamma(1.0, size=half)
        w_half = gam / (2.0 * gam.sum())
        weights = np.concatenate([w_half, w_half])
        us = np.empty((D, N, N), dtype=complex)
        for s in range(half):
            us[s] = haar_unitary(N, rng)
            us[s + half] = us[s].conj().T
        return build_weighted(us, weights, hermitian=True)
    raise ValidationError(f"unknown construction {construction!r}")


def _run_one(config: ExperimentConfig, n: int, stream_index: int) -> tuple[ExperimentRecord, SuperopSpectrum | None]:
    bench = benchmark_values(config.D)
    start = time.perf_counter()
    try:
        rng = SeededRng(config.master_seed, stream_index)
        chan = build_channel(config.construction, n, config.D, rng)
        spec = eigen_spectrum(chan)
        if config.construction == "nonhermitian":
            lb, gap_ok = math.nan, None
        else:
            lb = alon_boppana_lower_bound(n, config.D, config.m_max).value
            gap_ok = spec.lambda2 >= lb - GAP_SLACK
        wall_ms = (time.perf_counter() - start) * 1000.0
        record = ExperimentRecord(
            N=n,
            D=config.D,
            seed=stream_index,
            construction=config.construction,
            lambda2=spec.lambda2,
            lambda_H=bench.lambda_H,
            lambda_nH=bench.lambda_nH,
            alon_boppana_lb=lb,
            gap_ok=gap_ok,
            wall_ms=wall_ms,
        )
        return record, spec
    except QxError as exc:
        wall_ms = (time.perf_counter() - start) * 1000.0
        record = ExperimentRecord(
            N=n,
            D=config.D,
            seed=stream_index,
            construction=config.construction,
            lambda2=math.nan,
            lambda_H=bench.lambda_H,
            lambda_nH=bench.lambda_nH,
            alon_boppana_lb=math.nan,
            gap_ok=None,
            wall_ms=wall_ms,
            error=str(exc),
        )
        return record, None


def run_sweep(
    config: ExperimentConfig, workers: int = 1, keep_spectra: bool = False
) -> tuple[list[ExperimentRecord], dict[tuple[int, int], SuperopSpectrum]]:
    """One record per (N, trial), in deterministic order with per-trial
    seed streams. A failing record reports its error; the sweep continues.
    """
    tasks = []
    stream = 0
    for n in config.N_list:
        for trial in range(config.trials):
            tasks.append((n, trial, stream))
            stream += 1
    records: list[ExperimentRecord] = []
    spectra: dict[tuple[int, int], SuperopSpectrum] = {}
    if workers <= 1:
        results = [_run_one(config, n, s) for n, _t, s in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda args: _run_one(config, args[0], args[2]), tasks))
    for (n, trial, _s), (record, spec) in zip(tasks, results):
        records.append(record)
        if keep_spectra and spec is not None:
            spectra[(n, trial)] = spec
        if record.error is not None:
            print(f"record (N={n}, trial={trial}) failed: {record.error}", file=sys.stderr)
    return records, spectra


def format_record(record: ExperimentRecord) -> str:
    gap = "" if record.gap_ok is None else ("true" if record.gap_ok else "false")
    return ",".join(
        [
            str(record.N),
            str(record.D),
            str(record.seed),
            record.construction,
            f"{record.lambda2:.12g}",
            f"{record.lambda_H:.12g}",
            f"{record.lambda_nH:.12g}",
            f"{record.alon_boppana_lb:.12g}",
            gap,
            f"{record.wall_ms:.3f}",
        ]
    )


def write_sweep_csv(records: list[ExperimentRecord], path) -> None:
    with open(path, "w") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for record in records:
            fh.write(format_record(record) + "\n")


# ---------------------------------------------------------------------------
# scaling collapse


def collapse_curve(spectrum: SuperopSpectrum) -> tuple[np.ndarray, np.ndarray]:
    """(a/N^2, eigenvalue) with eigenvalues from most positive to most negative."""
    n2 = spectrum.dim * spectrum.dim
    eigs = np.sort(spectrum.eigenvalues.real)[::-1]
    ranks = np.arange(1, n2 + 1) / n2
    return ranks, eigs


def quantile_distance(
    curve_a: tuple[np.ndarray, np.ndarray], curve_b: tuple[np.ndarray, np.ndarray]
) -> float:
    """Max vertical distance between two curves at matched a/N^2 quantiles.

    Evaluated on the coarser curve's quantiles, interpolating the other
    curve linearly. The first rank of each curve holds the deterministic
    unit eigenvalue, an atom sitting at unmatched quantiles for different
    N, so the comparison grid starts past it on both curves.
    """
    (xa, ya), (xb, yb) = curve_a, curve_b
    if len(xa) > len(xb):
        (xa, ya), (xb, yb) = (xb, yb), (xa, ya)
    if len(xa) < 2 or len(xb) < 2:
        raise ValidationError("quantile distance needs curves with at least 2 points")
    lo = max(xa[1], xb[1])
    mask = xa >= lo
    interp = np.interp(xa[mask], xb, yb)
    return float(np.max(np.abs(ya[mask] - interp)))


def emit_collapse(
    spectra: dict[int, SuperopSpectrum], out_dir
) -> dict:
    """Write collapse.csv (columns N,a_over_N2,eig) and collapse.svg.

    Needs Hermitian spectra for at least two values of N.
    """
    if len(spectra) < 2:
        raise ValidationError(f"collapse needs spectra for >= 2 values of N, got {len(spectra)}")
    for n, spec in spectra.items():
        if not spec.hermitian:
            raise ValidationError(f"collapse needs hermitian spectra, N={n} is not")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    curves = {n: collapse_curve(spec) for n, spec in sorted(spectra.items())}

    csv_path = out / "collapse.csv"
    with open(csv_path, "w") as fh:
        fh.write("N,a_over_N2,eig\n")
        for n, (xs, ys) in curves.items():
            for x, y in zip(xs, ys):
                fh.write(f"{n},{x:.12g},{y:.12g}\n")

    svg_path = out / "collapse.svg"
    with open(svg_path, "w") as fh:
        fh.write(_collapse_svg(curves))

    ns = sorted(curves)
    distances = {
        f"{a}-{b}": quantile_distance(curves[a], curves[b])
        for a, b in zip(ns, ns[1:])
    }
    return {"files": [str(csv_path), str(svg_path)], "quantile_distances": distances}


def _collapse_svg(curves: dict[int, tuple[np.ndarray, np.ndarray]]) -> str:
    width, height = 640, 440
    left, right, top, bottom = 60, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom
    y_min = min(float(ys.min()) for _, ys in curves.values())
    y_max = max(1.0, max(float(ys.max()) for _, ys in curves.values()))
    pad = 0.05 * (y_max - y_min or 1.0)
    y_min, y_max = y_min - pad, y_max + pad

    def px(x: float) -> float:
        return left + x * pw

    def py(y: float) -> float:
        return top + (y_max - y) / (y_max - y_min) * ph

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" '
        'stroke="black" stroke-width="1"/>',
    ]
    for k in range(5):
        x = k / 4.0
        parts.append(
            f'<line x1="{px(x):.1f}" y1="{top + ph}" x2="{px(x):.1f}" y2="{top + ph + 5}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px(x):.1f}" y="{top + ph + 20}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{x:g}</text>'
        )
    ticks = 5
    for k in range(ticks + 1):
        y = y_min + k * (y_max - y_min) / ticks
        parts.append(
            f'<line x1="{left - 5}" y1="{py(y):.1f}" x2="{left}" y2="{py(y):.1f}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{py(y) + 4:.1f}" font-size="12" '
            f'text-anchor="end" font-family="sans-serif">{y:.2f}</text>'
        )
    parts.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 12}" font-size="13" '
        'text-anchor="middle" font-family="sans-serif">a / N^2</text>'
    )
    parts.append(
        f'<text x="16" y="{top + ph / 2:.1f}" font-size="13" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 16 {top + ph / 2:.1f})">eigenvalue</text>'
    )
    for idx, (n, (xs, ys)) in enumerate(curves.items()):
        color = palette[idx % len(palette)]
        points = " ".join(f"{px(float(x)):.2f},{py(float(y)):.2f}" for x, y in zip(xs, ys))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{left + pw - 8}" y="{top + 18 + 16 * idx}" font-size="12" '
            f'text-anchor="end" font-family="sans-serif" fill="{color}">N={n}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# config files: flat key=value with ExperimentConfig's exact key names

_CONFIG_KEYS = {"construction", "N_list", "D", "trials", "master_seed", "output_dir", "m_max"}


def parse_config_file(path) -> dict:
    values: dict = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _parse_n_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValidationError(f"bad N list {text!r}: {exc}") from exc


def _parse_int(text, name: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad integer for {name}: {text!r}") from exc


def merge_config(args: argparse.Namespace) -> ExperimentConfig:
    """CLI flags override config-file values, which override defaults."""
    file_values = parse_config_file(args.config) if args.config else {}
    defaults = {
        "construction": "hermitian",
        "N_list": "20,30,50",
        "D": "4",
        "trials": "1",
        "master_seed": "0",
        "output_dir": ".",
        "m_max": "20",
    }
    merged = {**defaults, **file_values}
    if getattr(args, "construction", None) is not None:
        merged["construction"] = args.construction
    if getattr(args, "n_list", None) is not None:
        merged["N_list"] = args.n_list
    if getattr(args, "d", None) is not None:
        merged["D"] = str(args.d)
    if getattr(args, "trials", None) is not None:
        merged["trials"] = str(args.trials)
    if getattr(args, "seed", None) is not None:
        merged["master_seed"] = str(args.seed)
    if getattr(args, "out", None) is not None:
        merged["output_dir"] = args.out
    if getattr(args, "m_max", None) is not None:
        merged["m_max"] = str(args.m_max)
    return ExperimentConfig(
        construction=merged["construction"],
        N_list=_parse_n_list(merged["N_list"]),
        D=_parse_int(merged["D"], "D"),
        trials=_parse_int(merged["trials"], "trials"),
        master_seed=_parse_int(merged["master_seed"], "master_seed"),
        output_dir=merged["output_dir"],
        m_max=_parse_int(merged["m_max"], "m_max"),
    )


# ---------------------------------------------------------------------------
# subcommands


def _cmd_spectrum(args: argparse.Namespace) -> int:
    construction = args.construction or "hermitian"
    n = args.n or 20
    d = args.d or 4
    rng = SeededRng(args.seed or 0)
    chan = build_channel(construction, n, d, rng)
    spec = eigen_spectrum(chan)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "spectrum.csv"
    write_spectrum_csv(spec, csv_path)
    bench = benchmark_values(d)
    report = {
        "N": n,
        "D": d,
        "construction": construction,
        "seed": args.seed or 0,
        "lambda2": spec.lambda2,
        "lambda_H": bench.lambda_H,
        "lambda_nH": bench.lambda_nH,
        "unit_eigvec_residual": spec.unit_eigvec_residual,
        "files": [str(csv_path)],
    }
    print(json.dumps(report, indent=2))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = merge_config(args)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    records, _ = run_sweep(config, workers=args.workers)
    csv_path = out / "sweep.csv"
    write_sweep_csv(records, csv_path)
    failed = [r for r in records if r.error is not None]
    print(
        json.dumps(
            {
                "records": len(records),
                "failed": len(failed),
                "files": [str(csv_path)],
            },
            indent=2,
        )
    )
    return 0


def _cmd_collapse(args: argparse.Namespace) -> int:
    config = merge_config(args)
    if config.construction != "hermitian":
        raise ValidationError("collapse uses the hermitian construction")
    spectra: dict[int, SuperopSpectrum] = {}
    for stream, n in enumerate(config.N_list):
        rng = SeededRng(config.master_seed, stream)
        chan = build_hermitian_random(n, config.D, rng)
        spectra[n] = eigen_spectrum(chan)
    report = emit_collapse(spectra, config.output_dir)
    print(json.dumps(report, indent=2))
    return 0


def _cmd_moments(args: argparse.Namespace) -> int:
    construction = args.construction or "hermitian"
    n = args.n or 20
    d = args.d or 4
    rng = SeededRng(args.seed or 0)
    chan = build_channel(construction, n, d, rng)
    m_values = [int(part) for part in (args.m_list or "2,4,6").split(",") if part.strip()]
    rows = []
    for m in m_values:
        row: dict = {"m": m}
        if chan.hermitian and m % 2 == 0:
            row["moment_trace"] = moment_trace(chan, m)
            row["lambda2_estimate"] = estimate_lambda2_from_moments(chan, m)
        else:
            row["moment_trace"] = None
            row["lambda2_estimate"] = None
        row["frobenius_moment"] = frobenius_moment(chan, m)
        rows.append(row)
    print(json.dumps({"N": n, "D": d, "construction": construction, "moments": rows}, indent=2))
    return 0


def _cmd_cayley(args: argparse.Namespace) -> int:
    d = args.d or 4
    m_max = args.m_max if args.m_max is not None else 20
    table = walk_counts(d, m_max)
    lines = ["D,m,l,count"]
    for m in range(m_max + 1):
        for l in range(m + 1):
            c = table.count(l, m)
            if c:
                lines.append(f"{d},{m},{l},{c}")
    text = "\n".join(lines) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "cayley.csv").write_text(text)
        print(json.dumps({"files": [str(out / "cayley.csv")]}, indent=2))
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sd(args: argparse.Namespace) -> int:
    if args.action != "eval":
        raise ValidationError(f"unknown sd action {args.action!r}; expected 'eval'")
    parsed = parse_trace_expr(args.expr)
    power = parsed.n_factor_power
    n = args.n
    modes = [name for name, flag in (("exact", args.exact), ("series", args.series), ("mc", args.mc)) if flag]
    if len(modes) > 1:
        raise ValidationError(f"pick one of --exact/--series/--mc, got {modes}")
    mode = modes[0] if modes else "exact"
    report: dict = {"expression": args.expr, "mode": mode, "n": n, "tr1_factors": power}

    if mode == "exact":
        value = evaluate_exact(parsed.query) * RationalInN.n_power(power)
        report["rational"] = str(value)
        if n is not None:
            report["value"] = float(value.evaluate(n))
    elif mode == "series":
        if n is None:
            raise ValidationError("--series needs --n")
        result = evaluate_series(
            parsed.query,
            n,
            n_max=args.levels,
            tol=args.tol,
            node_budget=args.budget,
            allow_divergent=args.allow_divergent,
        )
        scale = n**power
        report["value"] = result.partial_total * scale
        report["levels_computed"] = result.levels_computed
        report["truncation_bound"] = result.truncation_bound * scale
        report["level_sums"] = [str(s) for s in result.level_sums]
    else:
        if n is None:
            raise ValidationError("--mc needs --n")
        rng = SeededRng(args.seed or 0)
        estimate, stderr = monte_carlo_expectation(parsed.query, n, args.samples, rng)
        scale = float(n**power)
        report["estimate"] = estimate * scale
        report["stderr"] = stderr * scale
    print(json.dumps(report, indent=2))
    return 0


def _cmd_edge(args: argparse.Namespace) -> int:
    n = args.n or 20
    d = args.d or 4
    seed = args.seed or 0
    chan = build_channel("hermitian", n, d, SeededRng(seed, 0))
    spec = eigen_spectrum(chan)
    proj_rng = SeededRng(seed, 1)
    count = args.projectors
    min_slack = math.inf
    for _ in range(count):
        rank = int(proj_rng.generator.integers(1, n // 2 + 1))
        p = random_projector(n, rank, proj_rng)
        _, slack = converse_check(chan, p, lambda2=spec.lambda2)
        min_slack = min(min_slack, slack)
    chain = tanner_chain_check(chan)
    report = {
        "N": n,
        "D": d,
        "seed": seed,
        "lambda2": spec.lambda2,
        "min_slack": min_slack,
        "chain": {"lhs": chain.lhs, "rhs": chain.rhs, "holds": chain.holds},
    }
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qexpander",
        description="Spectral-gap workbench for unitary-Kraus channels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--config", default=None, help="key=value config file")

    p_spec = sub.add_parser("spectrum", help="one channel: eigenvalues and lambda2")
    common(p_spec)
    p_spec.add_argument("--n", type=int, default=None)
    p_spec.add_argument("--d", type=int, default=None)
    p_spec.add_argument("--construction", choices=CONSTRUCTIONS, default=None)
    p_spec.set_defaults(func=_cmd_spectrum)

    p_sweep = sub.add_parser("sweep", help="seeded (N, trial) sweep to sweep.csv")
    common(p_sweep)
    p_sweep.add_argument("--n-list", default=None, help="comma-separated N values")
    p_sweep.add_argument("--d", type=int, default=None)
    p_sweep.add_argument("--trials", type=int, default=None)
    p_sweep.add_argument("--construction", choices=CONSTRUCTIONS, default=None)
    p_sweep.add_argument("--m-max", dest="m_max", type=int, default=None)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_col = sub.add_parser("collapse", help="sorted-spectrum collapse figure")
    common(p_col)
    p_col.add_argument("--n-list", default=None, help="comma-separated N values")
    p_col.add_argument("--d", type=int, default=None)
    p_col.add_argument("--construction", choices=CONSTRUCTIONS, default=None)
    p_col.add_argument("--trials", type=int, default=None)
    p_col.add_argument("--m-max", dest="m_max", type=int, default=None)
    p_col.set_defaults(func=_cmd_collapse)

    p_mom = sub.add_parser("moments", help="trace moments and gap estimates")
    common(p_mom)
    p_mom.add_argument("--n", type=int, default=None)
    p_mom.add_argument("--d", type=int, default=None)
    p_mom.add_argument("--construction", choices=CONSTRUCTIONS, default=None)
    p_mom.add_argument("--m-list", default=None, help="comma-separated moment orders")
    p_mom.set_defaults(func=_cmd_moments)

    p_cay = sub.add_parser("cayley", help="exact walk counts as CSV")
    common(p_cay)
    p_cay.add_argument("--d", type=int, default=None)
    p_cay.add_argument("--m-max", dest="m_max", type=int, default=None)
    p_cay.set_defaults(func=_cmd_cayley)

    p_sd = sub.add_parser("sd", help="evaluate a trace-product expectation")
    common(p_sd)
    p_sd.add_argument("action", help="'eval'")
    p_sd.add_argument("expr", help="e.g. \"tr(U1 U1) tr(U1' U1')\"")
    p_sd.add_argument("--n", type=int, default=None)
    p_sd.add_argument("--exact", action="store_true")
    p_sd.add_argument("--series", action="store_true")
    p_sd.add_argument("--mc", action="store_true")
    p_sd.add_argument("--levels", type=int, default=12)
    p_sd.add_argument("--tol", type=float, default=1e-12)
    p_sd.add_argument("--samples", type=int, default=10_000)
    p_sd.add_argument("--budget", type=int, default=10_000_000)
    p_sd.add_argument("--allow-divergent", action="store_true")
    p_sd.set_defaults(func=_cmd_sd)

    p_edge = sub.add_parser("edge", help="edge-expansion report as JSON")
    common(p_edge)
    p_edge.add_argument("--n", type=int, default=None)
    p_edge.add_argument("--d", type=int, default=None)
    p_edge.add_argument("--projectors", type=int, default=20)
    p_edge.set_defaults(func=_cmd_edge)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

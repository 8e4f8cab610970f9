"""Command-line surface: audit, synth, bench, adult-prep.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 capacity
error. All randomness flows from --seed.
"""

from __future__ import annotations

import csv
import functools
import sys
from pathlib import Path

import click

from ._util import atomic_write_text
from .auditor import audit_dataset, levels_csv, subgroups_csv
from .bench import bench_csv, run_bench
from .errors import CapacityError, ConfigError, DataError, FairlatticeError
from .ingest import (
    BinarizationConfig,
    adult_preset,
    identity_config,
    load_config,
    load_csv,
    write_binary_csv,
)
from .synth import SyntheticConfig, generate

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_CAPACITY = 4


def _exit_code(exc: FairlatticeError) -> int:
    if isinstance(exc, CapacityError):
        return EXIT_CAPACITY
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, DataError):
        return EXIT_DATA
    return 1


def guarded(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FairlatticeError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_exit_code(exc))
    return wrapper


@click.group()
def main():
    """Audit intersectional fairness over the full subgroup lattice."""


def _header_identity_config(path: str) -> BinarizationConfig:
    """Identity config for a binarized CSV: every non-label column is an attribute."""
    try:
        with open(path, "r", encoding="utf-8-sig", newline="") as handle:
            header = [h.strip() for h in next(csv.reader(handle))]
    except FileNotFoundError:
        raise ConfigError(f"input file not found: {path}") from None
    except StopIteration:
        raise DataError(f"{path} is empty") from None
    if "label" not in header:
        raise ConfigError(
            f"{path} has no 'label' column; supply --config to map the columns"
        )
    attributes = [c for c in header if c not in ("label", "pred")]
    if not attributes:
        raise ConfigError(f"{path} has no attribute columns besides the label")
    return identity_config(
        attributes, "label", "pred" if "pred" in header else None
    )


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(), help="Input CSV.")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Binarization config (JSON). Default: identity mapping from the header.")
@click.option("--n-sub", default=100, show_default=True, help="Rows drawn per vertex.")
@click.option("--n-repeats", default=20, show_default=True, help="Subsample repetitions.")
@click.option("--seed", default=0, show_default=True, help="Master seed.")
@click.option("--allow-sparse", is_flag=True,
              help="Keep going when vertices hold fewer than n-sub rows.")
@click.option("--dump-subgroups", is_flag=True,
              help="Also write subgroups.csv with every one of the 3**M subgroups.")
@click.option("--out-dir", default=".", show_default=True, type=click.Path(),
              help="Directory for report.json, levels.csv and subgroups.csv.")
@click.option("--max-m", default=None, type=int, help="Override the attribute-count cap.")
@guarded
def audit(input_path, config_path, n_sub, n_repeats, seed, allow_sparse,
          dump_subgroups, out_dir, max_m):
    """Audit a CSV and write report.json plus plot-ready levels.csv."""
    cfg = load_config(config_path) if config_path else _header_identity_config(input_path)
    ingest = load_csv(input_path, cfg)
    result = audit_dataset(
        ingest.dataset,
        n_sub=n_sub,
        n_repeats=n_repeats,
        seed=seed,
        allow_sparse=allow_sparse,
        max_m=max_m,
        source=str(input_path),
        n_dropped_missing=ingest.n_dropped_missing,
    )
    out = Path(out_dir)
    atomic_write_text(out / "report.json", result.report.to_json())
    atomic_write_text(out / "levels.csv", levels_csv(result.report))
    if dump_subgroups:
        atomic_write_text(out / "subgroups.csv", subgroups_csv(result.table))
    for warning in result.report.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"rows audited: {result.report.n} (dropped {result.report.n_dropped_missing})")
    click.echo(f"attributes: {ingest.attribute_names}")
    click.echo(f"var_ratio(0) = {result.report.var_ratio_0:.4f} "
               f"[{result.report.interpretation_text}]")
    click.echo(f"wrote {out / 'report.json'} and {out / 'levels.csv'}"
               + (f" and {out / 'subgroups.csv'}" if dump_subgroups else ""))


@main.command()
@click.option("--m", default=10, show_default=True, help="Number of protected attributes.")
@click.option("--p-base", default=0.5, show_default=True, help="Base success probability.")
@click.option("--delta", default=0.0, show_default=True, help="Bias magnitude.")
@click.option("--n-biased-low", default=0, show_default=True,
              help="Vertices assigned p_base - delta.")
@click.option("--n-biased-high", default=0, show_default=True,
              help="Vertices assigned p_base + delta.")
@click.option("--bias-placement", default="ends", show_default=True,
              type=click.Choice(["ends", "random"]),
              help="Where the biased vertices sit in the lexicographic vertex order.")
@click.option("--vertex-size", default=None, type=int,
              help="Fixed rows per vertex; default draws size-unit * U{1..size-multiplier-max}.")
@click.option("--size-unit", default=200, show_default=True)
@click.option("--size-multiplier-max", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True, help="Master seed.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output CSV path.")
@guarded
def synth(m, p_base, delta, n_biased_low, n_biased_high, bias_placement,
          vertex_size, size_unit, size_multiplier_max, seed, out_path):
    """Generate a synthetic benchmark dataset as CSV (columns p1..pM, label)."""
    cfg = SyntheticConfig(
        m=m,
        p_base=p_base,
        delta=delta,
        n_biased_low=n_biased_low,
        n_biased_high=n_biased_high,
        seed=seed,
        vertex_size=vertex_size,
        size_unit=size_unit,
        size_multiplier_max=size_multiplier_max,
        bias_placement=bias_placement,
    )
    data = generate(cfg)
    write_binary_csv(data, out_path)
    click.echo(f"wrote {data.n} rows over {2 ** m} vertices to {out_path}")


@main.command()
@click.option("--m", "m_values", multiple=True, type=int, default=(4, 8),
              show_default=True, help="Attribute counts to benchmark (repeatable).")
@click.option("--n", "n_values", multiple=True, type=int, default=(1000, 10000),
              show_default=True, help="Row counts to benchmark (repeatable).")
@click.option("--seed", default=0, show_default=True)
@click.option("--max-m", default=None, type=int, help="Override the attribute-count cap.")
@click.option("--max-work", default=None, type=int,
              help="Cap on 3**m * n oracle filter ops before a row is skipped.")
@click.option("--out", "out_path", default=None, type=click.Path(),
              help="Also write the table as CSV.")
@guarded
def bench(m_values, n_values, seed, max_m, max_work, out_path):
    """Time the propagation engine against the brute-force oracle."""
    rows = run_bench(m_values, n_values, seed=seed, max_m=max_m, max_work=max_work)
    click.echo(f"{'m':>3} {'rows':>8} {'prop_s':>10} {'edges':>12} {'bound':>12} "
               f"{'oracle_s':>10} {'ratio':>10} equal")
    for r in rows:
        if r.skipped:
            click.echo(f"{r.m:>3} {r.n_rows:>8} skipped: {r.reason}")
            continue
        click.echo(
            f"{r.m:>3} {r.n_rows:>8} {r.prop_seconds:>10.4f} {r.edge_traversals:>12} "
            f"{r.traversal_bound:>12} {r.oracle_seconds:>10.4f} {r.time_ratio:>10.1f} "
            f"{r.results_equal}"
        )
    if out_path:
        atomic_write_text(out_path, bench_csv(rows))
        click.echo(f"wrote {out_path}")


@main.command("adult-prep")
@click.option("--input", "input_path", required=True, type=click.Path(),
              help="User-supplied Adult census CSV (headered; nothing is downloaded).")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Output binarized CSV (columns p1..p4, label).")
@guarded
def adult_prep(input_path, out_path):
    """Binarize a local Adult census CSV with the built-in preset."""
    preset = adult_preset()
    ingest = load_csv(input_path, preset)
    write_binary_csv(ingest.dataset, out_path)
    click.echo(f"read {ingest.n_rows_read} rows, dropped {ingest.n_dropped_missing} "
               f"with missing values")
    mapping = ", ".join(
        f"p{i + 1}={name}" for i, name in enumerate(ingest.attribute_names)
    )
    click.echo(f"columns: {mapping}")
    click.echo(f"wrote {ingest.dataset.n} rows to {out_path}")


if __name__ == "__main__":
    main()

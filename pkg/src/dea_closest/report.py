"""Pipeline orchestration and machine-readable reporting.

A report is a pure function of (dataset, run configuration): DMU order, key
order, and numeric rendering (9 significant digits, round-half-even) are
all fixed, so identical runs produce byte-identical output except for the
isolated timing field.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .data import Dataset, PriorityRanking, load_dataset, priority_from_labels
from .efficiency import EfficiencyResult, EfficientSet, evaluate_all
from .errors import ValidationError
from .projection import Projection, closest_projection
from .reference_set import McrsResult, identify_mcrs
from .returns_to_scale import RtsBounds, RtsLabel, classify_rts, intercept_bounds
from .solver import SolverConfig

COMMANDS = ("efficiency", "project", "mcrs", "rts", "report")
SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on besides the dataset itself."""

    input_path: str
    command: str = "report"
    priority_spec: str = "default"
    big_m: float = 1e5
    tol: float | None = None
    max_iterations: int | None = None
    max_nodes: int | None = None
    output_format: str = "json"
    plot_data_path: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.output_format not in ("json", "csv"):
            raise ValidationError(f"unknown output format {self.output_format!r}")
        if not self.input_path:
            raise ValidationError("input path must not be empty")

    def solver_config(self) -> SolverConfig:
        kwargs = {"big_m": self.big_m}
        if self.tol is not None:
            kwargs["zero_tol"] = self.tol
        if self.max_iterations is not None:
            kwargs["max_iterations"] = self.max_iterations
        if self.max_nodes is not None:
            kwargs["max_nodes"] = self.max_nodes
        return SolverConfig(**kwargs)


@dataclass
class DmuAnalysis:
    """All results computed for one DMU (later stages may be None, depending
    on the subcommand)."""

    name: str
    efficiency: EfficiencyResult
    projection: Projection | None = None
    mcrs: McrsResult | None = None
    rts_bounds: RtsBounds | None = None
    rts_label: RtsLabel | None = None


@dataclass
class AnalysisReport:
    """Per-DMU analysis records plus run metadata, renderable as JSON or CSV."""

    command: str
    dataset: Dataset
    priority: PriorityRanking
    config: RunConfig
    records: list[DmuAnalysis]
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        ds = self.dataset
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": {
                "input": self.config.input_path,
                "priority": list(self.priority.labels(ds)),
                "big_m": _num(self.config.big_m),
                "zero_tol": _num(self.config.solver_config().zero_tol),
                "format": self.config.output_format,
            },
            "dataset": {
                "n": ds.n, "m": ds.m, "s": ds.s,
                "input_names": list(ds.input_names),
                "output_names": list(ds.output_names),
            },
            "results": [self._record_dict(rec) for rec in self.records],
            "meta": {
                "generator": "dea-closest",
                "version": __version__,
                "timings": {k: round(v, 6) for k, v in self.timings.items()},
            },
        }

    def _record_dict(self, rec: DmuAnalysis) -> dict:
        ds = self.dataset
        out: dict = {
            "name": rec.name,
            "efficiency": {
                "theta": _num(rec.efficiency.theta),
                "efficient": rec.efficiency.is_efficient,
            },
        }
        if rec.projection is not None:
            labels = ds.slack_labels()
            out["projection"] = {
                "target_inputs": [_num(v) for v in rec.projection.target_inputs],
                "target_outputs": [_num(v) for v in rec.projection.target_outputs],
                "slacks": {labels[i]: _num(rec.projection.slacks[i])
                           for i in range(ds.m + ds.s)},
            }
        if rec.mcrs is not None:
            weights = dict(zip(rec.mcrs.columns, rec.mcrs.lambda_max))
            out["mcrs"] = {
                "members": [{"name": ds.dmus[j].name, "weight": _num(weights[j])}
                            for j in rec.mcrs.members],
            }
        if rec.rts_label is not None:
            out["rts"] = {
                "label": rec.rts_label.value,
                "intercept_upper": _num(rec.rts_bounds.upper),
                "intercept_lower": _num(rec.rts_bounds.lower),
                "stages": rec.rts_bounds.stage_count,
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        ds = self.dataset
        labels = ds.slack_labels()
        header = ["name", "theta", "efficient"]
        has_proj = any(r.projection is not None for r in self.records)
        has_mcrs = any(r.mcrs is not None for r in self.records)
        has_rts = any(r.rts_label is not None for r in self.records)
        if has_proj:
            header += [f"target_in:{nm}" for nm in ds.input_names]
            header += [f"target_out:{nm}" for nm in ds.output_names]
            header += [f"slack_{lb}" for lb in labels]
        if has_mcrs:
            header += ["mcrs", "mcrs_weights"]
        if has_rts:
            header += ["rts", "intercept_lower", "intercept_upper"]

        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for rec in self.records:
            row: list[str] = [rec.name, _text(rec.efficiency.theta),
                              str(rec.efficiency.is_efficient).lower()]
            if has_proj:
                p = rec.projection
                row += [_text(v) for v in p.target_inputs]
                row += [_text(v) for v in p.target_outputs]
                row += [_text(v) for v in p.slacks]
            if has_mcrs:
                names = [ds.dmus[j].name for j in rec.mcrs.members]
                weights = _member_weights(rec.mcrs)
                row += [";".join(names), ";".join(_text(w) for w in weights)]
            if has_rts:
                row += [rec.rts_label.value,
                        _text(rec.rts_bounds.lower), _text(rec.rts_bounds.upper)]
            writer.writerow(row)
        return out.getvalue()


def _member_weights(mcrs: McrsResult) -> list[float]:
    by_index = dict(zip(mcrs.columns, mcrs.lambda_max))
    return [float(by_index[j]) for j in mcrs.members]


def _num(v) -> float | str:
    """JSON-ready number: 9 significant digits; infinities become strings."""
    v = float(v)
    if np.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return float(f"{v:.9g}")


def _text(v) -> str:
    v = float(v)
    if np.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return f"{v:.9g}"


def analyze(dataset: Dataset, config: RunConfig, priority: PriorityRanking | None = None,
            ) -> AnalysisReport:
    """Run the pipeline stages the subcommand asks for, in dataset order."""
    cfg = config.solver_config()
    if priority is None:
        priority = priority_from_labels(config.priority_spec, dataset)
    level = COMMANDS.index(config.command)
    need_projection = level >= 1 or config.plot_data_path is not None

    t0 = time.perf_counter()
    eff = evaluate_all(dataset, cfg)
    j_e = EfficientSet(tuple(r.dmu for r in eff if r.is_efficient))

    records: list[DmuAnalysis] = []
    for o in range(dataset.n):
        rec = DmuAnalysis(dataset.dmus[o].name, eff[o])
        if need_projection:
            rec.projection = closest_projection(dataset, j_e, o, priority, cfg)
        if level >= 2:
            rec.mcrs = identify_mcrs(dataset, j_e, rec.projection, cfg)
        if level >= 3:
            rec.rts_bounds = intercept_bounds(dataset, rec.projection.target_inputs,
                                              rec.projection.target_outputs, cfg)
            rec.rts_label = classify_rts(rec.rts_bounds, cfg)
        records.append(rec)

    report = AnalysisReport(config.command, dataset, priority, config, records)
    report.timings["total_seconds"] = time.perf_counter() - t0
    return report


def emit_plot_data(report: AnalysisReport, path: str) -> None:
    """Frontier polyline, observed points, and projection arrows as CSV.

    Only defined for single-input single-output datasets, where the
    efficient frontier is a polyline over the efficient DMUs ordered by
    input level.
    """
    ds = report.dataset
    if ds.m != 1 or ds.s != 1:
        raise ValidationError("plot data requires exactly one input and one output "
                              f"(dataset has {ds.m} and {ds.s})")
    rows = [("kind", "name", "x", "y", "target_x", "target_y")]
    efficient = [(i, ds.dmus[i]) for i, rec in enumerate(report.records)
                 if rec.efficiency.is_efficient]
    efficient.sort(key=lambda item: (item[1].inputs[0], item[1].outputs[0]))
    for _, dmu in efficient:
        rows.append(("frontier", dmu.name, _text(dmu.inputs[0]), _text(dmu.outputs[0]), "", ""))
    for dmu in ds.dmus:
        rows.append(("observed", dmu.name, _text(dmu.inputs[0]), _text(dmu.outputs[0]), "", ""))
    for rec in report.records:
        if rec.efficiency.is_efficient or rec.projection is None:
            continue
        dmu = ds.dmus[rec.projection.dmu]
        rows.append(("projection", dmu.name, _text(dmu.inputs[0]), _text(dmu.outputs[0]),
                     _text(rec.projection.target_inputs[0]),
                     _text(rec.projection.target_outputs[0])))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(out.getvalue())


def run(config: RunConfig) -> AnalysisReport:
    """Load, analyze, optionally emit plot data; raises typed errors for the CLI."""
    dataset = load_dataset(config.input_path)
    report = analyze(dataset, config)
    if config.plot_data_path is not None:
        emit_plot_data(report, config.plot_data_path)
        if COMMANDS.index(config.command) < 1:
            for rec in report.records:  # projections were only computed for the plot
                rec.projection = None
    return report

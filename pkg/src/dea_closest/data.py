"""Dataset model, CSV ingestion, and slack priority rankings.

The CSV contract: header ``dmu,in:<name>[,in:<name>...],out:<name>[,out:<name>...]``,
one row per DMU, UTF-8, plain decimal numbers.  Input columns come before
output columns and there is at least one of each.  Row order is preserved
everywhere downstream — it is the canonical tie-break order.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Dmu:
    """One decision-making unit: a named bundle of nonnegative inputs/outputs."""

    name: str
    inputs: tuple[float, ...]
    outputs: tuple[float, ...]


@dataclass(frozen=True)
class Dataset:
    """Immutable table of n DMUs sharing m inputs and s outputs."""

    dmus: tuple[Dmu, ...]
    input_names: tuple[str, ...]
    output_names: tuple[str, ...]

    def __post_init__(self):
        if not self.dmus:
            raise ValidationError("dataset contains no DMUs")
        if not self.input_names or not self.output_names:
            raise ValidationError("dataset needs at least one input and one output measure")
        seen: set[str] = set()
        for dmu in self.dmus:
            if dmu.name in seen:
                raise ValidationError(f"duplicate DMU name {dmu.name!r}")
            seen.add(dmu.name)
            if len(dmu.inputs) != self.m or len(dmu.outputs) != self.s:
                raise ValidationError(f"DMU {dmu.name!r} has inconsistent dimensions")
            vals = [*dmu.inputs, *dmu.outputs]
            if any(v < 0 for v in vals):
                raise ValidationError(f"DMU {dmu.name!r} has a negative value")
            if all(v == 0 for v in vals):
                raise ValidationError(f"DMU {dmu.name!r} is identically zero")

    @property
    def n(self) -> int:
        return len(self.dmus)

    @property
    def m(self) -> int:
        return len(self.input_names)

    @property
    def s(self) -> int:
        return len(self.output_names)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.dmus)

    def input_matrix(self) -> np.ndarray:
        """(n, m) array of inputs, row per DMU."""
        return np.array([d.inputs for d in self.dmus], dtype=float)

    def output_matrix(self) -> np.ndarray:
        """(n, s) array of outputs, row per DMU."""
        return np.array([d.outputs for d in self.dmus], dtype=float)

    def slack_labels(self) -> tuple[str, ...]:
        """The m input slack labels followed by the s output slack labels."""
        return tuple([f"in:{nm}" for nm in self.input_names]
                     + [f"out:{nm}" for nm in self.output_names])

    def with_dmu(self, name: str, inputs: Iterable[float], outputs: Iterable[float]) -> "Dataset":
        """New dataset with one extra DMU appended (used to test virtual points)."""
        extra = Dmu(name, tuple(float(v) for v in inputs), tuple(float(v) for v in outputs))
        return Dataset(self.dmus + (extra,), self.input_names, self.output_names)

    def reordered(self, permutation: Iterable[int]) -> "Dataset":
        perm = list(permutation)
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation of the DMU indices")
        return Dataset(tuple(self.dmus[i] for i in perm), self.input_names, self.output_names)


@dataclass(frozen=True)
class PriorityRanking:
    """Order in which the m+s slacks are minimized, highest priority first.

    Slack indices 0..m-1 are the input slacks, m..m+s-1 the output slacks.
    """

    order: tuple[int, ...]
    m: int
    s: int

    def __post_init__(self):
        if sorted(self.order) != list(range(self.m + self.s)):
            raise ValidationError("priority ranking must be a permutation of all slack labels")

    def labels(self, dataset: Dataset) -> tuple[str, ...]:
        all_labels = dataset.slack_labels()
        return tuple(all_labels[i] for i in self.order)


def default_priority(m: int, s: int) -> PriorityRanking:
    """Outputs before inputs, each group in declaration order."""
    if m < 1 or s < 1:
        raise ValidationError("need at least one input and one output")
    return PriorityRanking(tuple(range(m, m + s)) + tuple(range(m)), m, s)


def priority_from_labels(spec: str, dataset: Dataset) -> PriorityRanking:
    """Parse a comma-separated slack-label list (or ``default``) against a dataset."""
    if spec.strip() == "default":
        return default_priority(dataset.m, dataset.s)
    labels = dataset.slack_labels()
    index = {label: i for i, label in enumerate(labels)}
    order: list[int] = []
    for part in spec.split(","):
        label = part.strip()
        if label not in index:
            raise ValidationError(f"unknown slack label {label!r}; expected one of {', '.join(labels)}")
        if index[label] in order:
            raise ValidationError(f"slack label {label!r} listed twice in priority spec")
        order.append(index[label])
    if len(order) != len(labels):
        missing = [l for l in labels if index[l] not in order]
        raise ValidationError(f"priority spec misses slack labels: {', '.join(missing)}")
    return PriorityRanking(tuple(order), dataset.m, dataset.s)


def _parse_header(fields: list[str]) -> tuple[list[str], list[str]]:
    if not fields or fields[0].strip() != "dmu":
        raise ValidationError("header must start with the 'dmu' column", row=1, column=1)
    input_names: list[str] = []
    output_names: list[str] = []
    for col, raw in enumerate(fields[1:], start=2):
        token = raw.strip()
        if token.startswith("in:"):
            if output_names:
                raise ValidationError("input columns must precede output columns",
                                      row=1, column=col)
            input_names.append(token[3:])
        elif token.startswith("out:"):
            output_names.append(token[4:])
        else:
            raise ValidationError(f"column header {token!r} must start with 'in:' or 'out:'",
                                  row=1, column=col)
    if not input_names:
        raise ValidationError("no input columns declared", row=1)
    if not output_names:
        raise ValidationError("no output columns declared", row=1)
    return input_names, output_names


def load_dataset(source: str | Path | TextIO) -> Dataset:
    """Read and validate a dataset from a CSV path, CSV text, or open stream.

    Every malformed cell is reported with its 1-based row/column coordinates;
    a partially constructed dataset is never returned.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()

    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader]
    # csv yields [] for blank lines; drop trailing ones but keep interior gaps as errors
    while rows and not rows[-1]:
        rows.pop()
    if not rows:
        raise ValidationError("empty dataset file", row=1)

    input_names, output_names = _parse_header(rows[0])
    m, s = len(input_names), len(output_names)

    dmus: list[Dmu] = []
    names_seen: dict[str, int] = {}
    for r, row in enumerate(rows[1:], start=2):
        if not row:
            raise ValidationError("blank line inside the table", row=r)
        if len(row) != 1 + m + s:
            raise ValidationError(f"expected {1 + m + s} cells, found {len(row)}", row=r)
        name = row[0].strip()
        if not name:
            raise ValidationError("empty DMU name", row=r, column=1)
        if name in names_seen:
            raise ValidationError(f"duplicate DMU name {name!r} (first seen on row {names_seen[name]})",
                                  row=r, column=1)
        names_seen[name] = r
        values: list[float] = []
        for c, cell in enumerate(row[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise ValidationError(f"non-numeric cell {cell.strip()!r}", row=r, column=c) from None
            if not np.isfinite(v):
                raise ValidationError(f"non-finite cell {cell.strip()!r}", row=r, column=c)
            if v < 0:
                raise ValidationError(f"negative value {v}", row=r, column=c)
            values.append(v)
        if all(v == 0 for v in values):
            raise ValidationError(f"DMU {name!r} is identically zero", row=r)
        dmus.append(Dmu(name, tuple(values[:m]), tuple(values[m:])))

    if not dmus:
        raise ValidationError("dataset has a header but no DMU rows", row=2)
    return Dataset(tuple(dmus), tuple(input_names), tuple(output_names))


def dump_dataset(dataset: Dataset) -> str:
    """CSV text for a dataset; numbers use shortest exact representation, so a
    load/dump round trip preserves every value bit for bit."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["dmu"] + [f"in:{nm}" for nm in dataset.input_names]
                    + [f"out:{nm}" for nm in dataset.output_names])
    for dmu in dataset.dmus:
        writer.writerow([dmu.name] + [repr(v) for v in (*dmu.inputs, *dmu.outputs)])
    return out.getvalue()

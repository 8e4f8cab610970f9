"""CSV ingestion: binarize raw tabular columns into audit-ready attributes.

A binarization config maps each protected attribute to one column via a
threshold rule (numeric, value >= threshold -> 1) or a value-set rule
(categorical, listed values -> 1). Rows with missing values in configured
columns are dropped and counted, never imputed.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import atomic_write_text
from .dataset import Dataset
from .errors import ConfigError, DataError, MappingError

DEFAULT_MISSING = ("?", "")


@dataclass(frozen=True)
class ThresholdRule:
    """Numeric column; value >= threshold maps to 1."""

    name: str
    column: str
    threshold: float


@dataclass(frozen=True)
class ValueSetRule:
    """Categorical column; values in ``positive`` map to 1.

    With ``negative`` unset, every other value maps to 0. With ``negative``
    given, a value outside both sets is an error (strict mode).
    """

    name: str
    column: str
    positive: frozenset[str]
    negative: frozenset[str] | None = None


@dataclass(frozen=True)
class LabelRule:
    """Binary target column: values in ``positive`` map to 1."""

    column: str
    positive: frozenset[str]
    negative: frozenset[str] | None = None


AttributeRule = ThresholdRule | ValueSetRule


@dataclass(frozen=True)
class BinarizationConfig:
    attributes: tuple[AttributeRule, ...]
    label: LabelRule
    prediction: LabelRule | None = None
    missing_values: tuple[str, ...] = DEFAULT_MISSING

    def __post_init__(self):
        if not self.attributes:
            raise ConfigError("binarization config needs at least one attribute rule")
        names = [rule.name for rule in self.attributes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate attribute names in config: {names}")

    @property
    def m(self) -> int:
        return len(self.attributes)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(rule.name for rule in self.attributes)


def adult_preset() -> BinarizationConfig:
    """Binarization of the Adult census dataset's four protected attributes.

    sex: Male -> 1; race: White -> 1, other listed races -> 0; age: >= 40 ->
    1; marital-status: the three Married-* statuses -> 1, the four others ->
    0; label: class above 50K -> 1. The 0/1 polarity of sex and race is an
    arbitrary labelling; every audit statistic is polarity-symmetric.
    """
    return BinarizationConfig(
        attributes=(
            ValueSetRule("sex", "sex", frozenset({"Male"}), frozenset({"Female"})),
            ValueSetRule(
                "race",
                "race",
                frozenset({"White"}),
                frozenset({"Black", "Asian-Pac-Islander", "Amer-Indian-Eskimo", "Other"}),
            ),
            ThresholdRule("age", "age", 40.0),
            ValueSetRule(
                "married",
                "marital-status",
                frozenset({"Married-civ-spouse", "Married-spouse-absent", "Married-AF-spouse"}),
                frozenset({"Never-married", "Divorced", "Separated", "Widowed"}),
            ),
        ),
        label=LabelRule("class", frozenset({">50K", ">50K."}), frozenset({"<=50K", "<=50K."})),
        missing_values=("?", ""),
    )


def identity_config(attribute_columns, label_column: str = "label",
                    prediction_column: str | None = None) -> BinarizationConfig:
    """Config for already-binarized CSVs holding literal 0/1 cells."""
    attrs = tuple(
        ValueSetRule(col, col, frozenset({"1"}), frozenset({"0"}))
        for col in attribute_columns
    )
    pred = None
    if prediction_column is not None:
        pred = LabelRule(prediction_column, frozenset({"1"}), frozenset({"0"}))
    return BinarizationConfig(
        attributes=attrs,
        label=LabelRule(label_column, frozenset({"1"}), frozenset({"0"})),
        prediction=pred,
    )


def _missing_key(where: str, key: str):
    raise ConfigError(f"{where} rule needs a '{key}' entry")


def _label_rule_from_dict(block: dict, where: str) -> LabelRule:
    if "column" not in block:
        _missing_key(where, "column")
    if "positive" not in block:
        _missing_key(where, "positive")
    negative = block.get("negative")
    return LabelRule(
        column=str(block["column"]),
        positive=frozenset(str(v) for v in block["positive"]),
        negative=None if negative is None else frozenset(str(v) for v in negative),
    )


def load_config(path: str | Path) -> BinarizationConfig:
    """Parse a JSON binarization config file (schema in the README)."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict) or "attributes" not in raw or "label" not in raw:
        raise ConfigError("config must be an object with 'attributes' and 'label'")
    rules: list[AttributeRule] = []
    for i, block in enumerate(raw["attributes"]):
        where = f"attribute #{i + 1}"
        if "column" not in block:
            _missing_key(where, "column")
        name = str(block.get("name", block["column"]))
        column = str(block["column"])
        kind = block.get("rule", "values")
        if kind == "threshold":
            if "threshold" not in block:
                _missing_key(where, "threshold")
            rules.append(ThresholdRule(name, column, float(block["threshold"])))
        elif kind == "values":
            if "positive" not in block:
                _missing_key(where, "positive")
            negative = block.get("negative")
            rules.append(ValueSetRule(
                name,
                column,
                frozenset(str(v) for v in block["positive"]),
                None if negative is None else frozenset(str(v) for v in negative),
            ))
        else:
            raise ConfigError(f"{where}: unknown rule kind {kind!r}")
    prediction = raw.get("prediction")
    return BinarizationConfig(
        attributes=tuple(rules),
        label=_label_rule_from_dict(raw["label"], "label"),
        prediction=None if prediction is None else _label_rule_from_dict(prediction, "prediction"),
        missing_values=tuple(str(v) for v in raw.get("missing", DEFAULT_MISSING)),
    )


@dataclass(frozen=True)
class IngestResult:
    dataset: Dataset
    attribute_names: tuple[str, ...]
    n_rows_read: int
    n_dropped_missing: int


def _apply_threshold(rule: ThresholdRule, cell: str, row_number: int) -> int:
    try:
        return 1 if float(cell) >= rule.threshold else 0
    except ValueError:
        raise MappingError(
            f"row {row_number}: column {rule.column!r} value {cell!r} is not numeric"
        ) from None


def _apply_value_set(rule, cell: str, row_number: int) -> int:
    if cell in rule.positive:
        return 1
    if rule.negative is None or cell in rule.negative:
        return 0
    raise MappingError(
        f"row {row_number}: column {rule.column!r} value {cell!r} matches no rule "
        f"and the rule has no default"
    )


def load_csv(path: str | Path, cfg: BinarizationConfig) -> IngestResult:
    """Load a comma-delimited, headered CSV and binarize per ``cfg``.

    Row order follows the file. Rows with a missing value in any configured
    column are dropped and counted in the result.
    """
    columns = [rule.column for rule in cfg.attributes] + [cfg.label.column]
    if cfg.prediction is not None:
        columns.append(cfg.prediction.column)
    missing = set(cfg.missing_values)

    attr_rows: list[list[int]] = []
    labels: list[int] = []
    preds: list[int] = []
    n_read = 0
    n_dropped = 0
    try:
        handle = open(path, "r", encoding="utf-8-sig", newline="")
    except FileNotFoundError:
        raise ConfigError(f"input file not found: {path}") from None
    with handle:
        reader = csv.reader(handle)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        position = {name: i for i, name in enumerate(header)}
        absent = [c for c in columns if c not in position]
        if absent:
            raise ConfigError(f"{path} is missing configured columns {absent}; header is {header}")
        needed = max(position[c] for c in columns)
        for row_number, row in enumerate(reader, start=1):
            if not row:
                continue
            n_read += 1
            if len(row) <= needed:
                raise DataError(
                    f"{path} row {row_number}: {len(row)} fields, header has {len(header)}"
                )
            cells = {c: row[position[c]].strip() for c in columns}
            if any(cells[c] in missing for c in columns):
                n_dropped += 1
                continue
            values = []
            for rule in cfg.attributes:
                cell = cells[rule.column]
                if isinstance(rule, ThresholdRule):
                    values.append(_apply_threshold(rule, cell, row_number))
                else:
                    values.append(_apply_value_set(rule, cell, row_number))
            attr_rows.append(values)
            labels.append(_apply_value_set(cfg.label, cells[cfg.label.column], row_number))
            if cfg.prediction is not None:
                preds.append(_apply_value_set(
                    cfg.prediction, cells[cfg.prediction.column], row_number))
    if not attr_rows:
        raise DataError(f"{path} holds no usable rows ({n_dropped} dropped for missing values)")
    dataset = Dataset(
        np.array(attr_rows, dtype=np.uint8),
        np.array(labels, dtype=np.uint8),
        np.array(preds, dtype=np.uint8) if cfg.prediction is not None else None,
    )
    return IngestResult(
        dataset=dataset,
        attribute_names=cfg.attribute_names,
        n_rows_read=n_read,
        n_dropped_missing=n_dropped,
    )


def write_binary_csv(dataset: Dataset, path: str | Path,
                     attribute_names: tuple[str, ...] | None = None) -> None:
    """Write a binarized dataset as CSV (default columns p1..pM, label[, pred])."""
    names = attribute_names or tuple(f"p{i + 1}" for i in range(dataset.m))
    if len(names) != dataset.m:
        raise ConfigError(f"need {dataset.m} attribute names, got {len(names)}")
    header = list(names) + ["label"] + (["pred"] if dataset.has_predictions else [])
    parts = [dataset.attrs, dataset.y_true[:, None]]
    if dataset.has_predictions:
        parts.append(dataset.y_pred[:, None])
    body = io.StringIO()
    np.savetxt(body, np.hstack(parts), fmt="%d", delimiter=",")
    atomic_write_text(path, ",".join(header) + "\n" + body.getvalue())

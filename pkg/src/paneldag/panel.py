"""Indicator-panel ingestion: WDI wide files, emissions files, assembly into a
standardized pooled sample matrix.

Pooling convention: every (economy, year) pair inside the window is one sample
row. Rows are sorted by (economy code, year) so identical inputs always yield
identical matrices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import (
    DataError,
    DegenerateDataError,
    DomainError,
    DuplicateKeyError,
    EmptyResultError,
    FormatError,
    ParseError,
)

__all__ = [
    "TARGET_LABEL",
    "IndicatorPanel",
    "TargetSeries",
    "SampleMatrix",
    "IngestConfig",
    "load_wdi",
    "load_emissions",
    "assemble_samples",
]

logger = logging.getLogger(__name__)

# Label given to the appended emissions column (the WDI code for per-capita CO2).
TARGET_LABEL = "EN.ATM.CO2E.PC"

_WDI_REQUIRED = ["Country Name", "Country Code", "Indicator Name", "Indicator Code"]

# Cell contents treated as "no observation" (real WDI exports use "..").
_MISSING_MARKERS = {"", ".."}


@dataclass
class IndicatorPanel:
    """(economy x indicator x year) value cube with a missingness mask."""

    economies: list[tuple[str, str]]  # (name, code)
    indicators: list[tuple[str, str]]  # (name, code)
    years: list[int]
    values: np.ndarray = field(repr=False)
    missing_mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = (len(self.economies), len(self.indicators), len(self.years))
        if self.values.shape != shape or self.missing_mask.shape != shape:
            raise DataError(f"panel arrays must have shape {shape}")
        for kind, items in (("economy", self.economies), ("indicator", self.indicators)):
            codes = [c for _, c in items]
            if len(set(codes)) != len(codes):
                raise DuplicateKeyError(f"duplicate {kind} codes")
        if not np.isfinite(self.values[~self.missing_mask]).all():
            raise DataError("non-missing panel values must be finite")


@dataclass
class TargetSeries:
    """Per-economy, per-year target values (per-capita CO2, t/person)."""

    economies: list[str]
    years: list[int]
    values: np.ndarray = field(repr=False)
    missing_mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = (len(self.economies), len(self.years))
        if self.values.shape != shape or self.missing_mask.shape != shape:
            raise DataError(f"target arrays must have shape {shape}")
        present = self.values[~self.missing_mask]
        if not np.isfinite(present).all():
            raise DataError("non-missing target values must be finite")
        if (present < 0).any():
            raise DomainError("emission values must be non-negative")


@dataclass
class SampleMatrix:
    """Standardized n x d observation matrix; the unit every estimator consumes.

    ``standardization`` is either the string "raw" or a (means, stds) pair with
    which ``raw()`` recovers the original values. The target column is last by
    convention.
    """

    data: np.ndarray
    labels: tuple[str, ...]
    row_keys: list[tuple[str, int]]
    standardization: object = "raw"

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        self.labels = tuple(self.labels)
        n, d = self.data.shape
        if n < 2 or d < 1:
            raise DataError(f"sample matrix needs n >= 2 and d >= 1, got {self.data.shape}")
        if len(self.labels) != d or len(set(self.labels)) != d:
            raise DataError("labels must be unique and match the column count")
        if len(self.row_keys) != n:
            raise DataError("row_keys must match the row count")
        if not np.isfinite(self.data).all():
            raise DataError("sample matrix must be fully observed and finite")
        if self.standardization != "raw":
            means, stds = self.standardization
            if np.abs(self.data.mean(axis=0)).max() > 1e-9:
                raise DataError("standardized columns must have mean within 1e-9 of 0")
            if np.abs(self.data.var(axis=0) - 1.0).max() > 1e-6:
                raise DataError("standardized columns must have variance within 1e-6 of 1")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def raw(self) -> np.ndarray:
        if self.standardization == "raw":
            return self.data
        means, stds = self.standardization
        return self.data * stds + means

    def column(self, label: str) -> np.ndarray:
        return self.data[:, self.labels.index(label)]

    def select(self, labels) -> "SampleMatrix":
        """Column subset, preserving standardization bookkeeping."""
        idx = [self.labels.index(l) for l in labels]
        std = self.standardization
        if std != "raw":
            std = (std[0][idx], std[1][idx])
        return SampleMatrix(self.data[:, idx], tuple(labels), list(self.row_keys), std)

    # -- CSV round trip ------------------------------------------------------

    def to_csv(self, path) -> None:
        """Header = labels, one row per sample at 17 significant digits,
        preceded by a ``# rows:`` comment carrying the row keys."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            keys = " ".join(f"{code}:{year}" for code, year in self.row_keys)
            fh.write(f"# rows: {keys}\n")
            fh.write(",".join(self.labels) + "\n")
            for row in self.data:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "SampleMatrix":
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline().rstrip("\n")
            if not first.startswith("# rows: "):
                raise FormatError("sample CSV must start with a '# rows:' comment line")
            row_keys = []
            for token in first[len("# rows: "):].split():
                code, _, year = token.rpartition(":")
                row_keys.append((code, int(year)))
            labels = fh.readline().rstrip("\n").split(",")
            data = []
            for line_num, line in enumerate(fh, start=3):
                line = line.strip()
                if not line:
                    continue
                try:
                    data.append([float(tok) for tok in line.split(",")])
                except ValueError as exc:
                    raise ParseError(f"line {line_num}: {exc}") from exc
        return cls(np.array(data), tuple(labels), row_keys, "raw")


# -- loaders ------------------------------------------------------------------


def _read_csv(path) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as exc:
        raise FormatError(f"{path}: file is empty") from exc
    except OSError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if df.shape[1] == 0:
        raise FormatError(f"{path}: no columns found")
    return df


def _parse_cell(text: str, row: int, col: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"row {row}, column {col!r}: cannot parse {text!r} as a number") from None


def load_wdi(path, indicator_whitelist=None) -> IndicatorPanel:
    """Load a wide-format indicator file: fixed name/code columns then one
    column per calendar year. Empty (or "..") cells are missing."""
    df = _read_csv(path)
    for col in _WDI_REQUIRED:
        if col not in df.columns:
            raise FormatError(f"{path}: missing required column {col!r}")
    year_cols: list[tuple[str, int]] = []
    for col in df.columns:
        if col in _WDI_REQUIRED or col.startswith("Unnamed") or col.strip() == "":
            continue
        try:
            year_cols.append((col, int(col)))
        except ValueError:
            raise FormatError(f"{path}: unexpected non-year column {col!r}") from None
    if not year_cols:
        raise FormatError(f"{path}: no year columns found")
    year_cols.sort(key=lambda pair: pair[1])
    years = [y for _, y in year_cols]

    economies: dict[str, str] = {}
    indicators: dict[str, str] = {}
    cells: dict[tuple[str, str], np.ndarray] = {}
    for i, row in enumerate(df.itertuples(index=False), start=2):
        rec = dict(zip(df.columns, row))
        e_code, e_name = rec["Country Code"], rec["Country Name"]
        i_code, i_name = rec["Indicator Code"], rec["Indicator Name"]
        if indicator_whitelist is not None and i_code not in indicator_whitelist:
            continue
        economies.setdefault(e_code, e_name)
        indicators.setdefault(i_code, i_name)
        if (e_code, i_code) in cells:
            raise DuplicateKeyError(f"{path}: duplicate row for ({e_code}, {i_code})")
        vals = np.full(len(years), np.nan)
        for k, (col, _) in enumerate(year_cols):
            text = rec[col].strip()
            if text in _MISSING_MARKERS:
                continue
            vals[k] = _parse_cell(text, i, col)
        cells[(e_code, i_code)] = vals

    e_codes = sorted(economies)
    i_codes = sorted(indicators)
    values = np.full((len(e_codes), len(i_codes), len(years)), np.nan)
    for a, ec in enumerate(e_codes):
        for b, ic in enumerate(i_codes):
            if (ec, ic) in cells:
                values[a, b] = cells[(ec, ic)]
    missing = ~np.isfinite(values)
    values[missing] = 0.0
    return IndicatorPanel(
        economies=[(economies[c], c) for c in e_codes],
        indicators=[(indicators[c], c) for c in i_codes],
        years=years,
        values=values,
        missing_mask=missing,
    )


def load_emissions(path) -> TargetSeries:
    """Load per-capita emissions, long (``code,year,value``) or wide (one
    column per year), autodetected from the header."""
    df = _read_csv(path)
    lower = {c.lower(): c for c in df.columns}
    records: dict[tuple[str, int], float] = {}

    if "year" in lower:  # long format
        code_col = lower.get("code") or lower.get("country code") or df.columns[0]
        value_col = lower.get("value") or df.columns[-1]
        for i, rec in enumerate(df.itertuples(index=False), start=2):
            rec = dict(zip(df.columns, rec))
            code = rec[code_col].strip()
            year = int(_parse_cell(rec[lower["year"]].strip(), i, "year"))
            text = rec[value_col].strip()
            if text in _MISSING_MARKERS:
                continue
            value = _parse_cell(text, i, value_col)
            if (code, year) in records:
                raise DuplicateKeyError(f"{path}: duplicate entry for ({code}, {year})")
            records[(code, year)] = value
    else:  # wide format: first column = code, year columns follow
        code_col = df.columns[0]
        year_cols = []
        for col in df.columns[1:]:
            try:
                year_cols.append((col, int(col)))
            except ValueError:
                continue  # unit or other metadata column
        if not year_cols:
            raise FormatError(f"{path}: no year columns found in wide emissions file")
        seen = set()
        for i, rec in enumerate(df.itertuples(index=False), start=2):
            rec = dict(zip(df.columns, rec))
            code = rec[code_col].strip()
            if code in seen:
                raise DuplicateKeyError(f"{path}: duplicate economy {code!r}")
            seen.add(code)
            for col, year in year_cols:
                text = rec[col].strip()
                if text in _MISSING_MARKERS:
                    continue
                records[(code, year)] = _parse_cell(text, i, col)

    if not records:
        raise EmptyResultError(f"{path}: no emission values found")
    codes = sorted({c for c, _ in records})
    years = sorted({y for _, y in records})
    values = np.full((len(codes), len(years)), np.nan)
    for (code, year), value in records.items():
        values[codes.index(code), years.index(year)] = value
    missing = ~np.isfinite(values)
    values[missing] = 0.0
    return TargetSeries(economies=codes, years=years, values=values, missing_mask=missing)


# -- assembly -----------------------------------------------------------------


@dataclass(frozen=True)
class IngestConfig:
    year_start: int = 2000
    year_end: int = 2020
    max_indicator_missing: float = 0.3
    max_row_missing: float = 0.5
    impute: str = "interpolate"  # or "median"
    standardize: bool = True


def _impute_series(years: np.ndarray, values: np.ndarray, mode: str) -> np.ndarray:
    """Fill gaps in one economy's indicator series; NaNs may remain when the
    series has no observations at all."""
    out = values.copy()
    have = np.isfinite(values)
    if not have.any():
        return out
    if mode == "interpolate":
        out[~have] = np.interp(years[~have], years[have], values[have])
    return out


def assemble_samples(panel: IndicatorPanel, target: TargetSeries, cfg: IngestConfig = IngestConfig()) -> SampleMatrix:
    """Pool (economy, year) rows over the window, drop over-missing indicators
    and rows, impute remaining gaps, standardize, and append the target column.

    Rows whose target value is missing are dropped (the quantity under study is
    never imputed). Indicators above the missingness cap are dropped and logged;
    columns that end up constant are dropped with a warning.
    """
    if cfg.impute not in ("interpolate", "median"):
        raise DataError(f"unknown imputation mode {cfg.impute!r}")
    years = [y for y in panel.years if cfg.year_start <= y <= cfg.year_end and y in target.years]
    econs = [
        (name, code) for name, code in panel.economies if code in set(target.economies)
    ]
    if not years or not econs:
        raise EmptyResultError("no overlapping (economy, year) coverage in the window")

    y_idx = np.array([panel.years.index(y) for y in years])
    e_idx = np.array([panel.economies.index(pair) for pair in econs])
    cube = panel.values[np.ix_(e_idx, range(len(panel.indicators)), y_idx)].copy()
    cube_missing = panel.missing_mask[np.ix_(e_idx, range(len(panel.indicators)), y_idx)]
    cube[cube_missing] = np.nan

    # indicator missingness cap
    miss_frac = cube_missing.mean(axis=(0, 2))
    keep_ind = []
    for b, (name, code) in enumerate(panel.indicators):
        if miss_frac[b] > cfg.max_indicator_missing:
            logger.info("dropping indicator %s: %.0f%% missing in window", code, 100 * miss_frac[b])
        else:
            keep_ind.append(b)
    cube = cube[:, keep_ind, :]
    ind_labels = [panel.indicators[b][1] for b in keep_ind]

    # target lookup aligned to (econ, year)
    t_years = np.array([target.years.index(y) for y in years])
    t_econ = [target.economies.index(code) for _, code in econs]
    t_vals = target.values[np.ix_(t_econ, t_years)].astype(float).copy()
    t_miss = target.missing_mask[np.ix_(t_econ, t_years)]
    t_vals[t_miss] = np.nan

    # per-economy imputation along years
    yr_arr = np.array(years, dtype=float)
    if cfg.impute == "interpolate":
        for a in range(cube.shape[0]):
            for b in range(cube.shape[1]):
                cube[a, b] = _impute_series(yr_arr, cube[a, b], "interpolate")
    # median fallback per indicator
    for b in range(cube.shape[1]):
        col = cube[:, b, :]
        if np.isnan(col).any():
            med = np.nanmedian(col)
            col[np.isnan(col)] = med

    # build rows: (economy, year), drop rows with missing target or too-missing inputs
    rows, keys = [], []
    row_missing_before_impute = cube_missing[:, keep_ind, :]
    for a, (_, code) in enumerate(econs):
        for k, year in enumerate(years):
            if np.isnan(t_vals[a, k]):
                continue
            if row_missing_before_impute[a, :, k].mean() > cfg.max_row_missing:
                continue
            rows.append(np.append(cube[a, :, k], t_vals[a, k]))
            keys.append((code, int(year)))
    if not rows:
        raise EmptyResultError("no rows survived the window/missingness filters")
    order = np.argsort([f"{code}\x00{year:06d}" for code, year in keys])
    data = np.array(rows)[order]
    keys = [keys[i] for i in order]
    labels = ind_labels + [TARGET_LABEL]

    if np.isnan(data).any():
        raise DataError("imputation left missing values (indicator with no data kept?)")

    # drop constant columns (cannot be standardized)
    stds = data.std(axis=0)
    keep_cols = []
    for j, label in enumerate(labels):
        if stds[j] == 0:
            logger.warning("dropping constant column %s", label)
        else:
            keep_cols.append(j)
    data = data[:, keep_cols]
    labels = [labels[j] for j in keep_cols]

    if not cfg.standardize:
        return SampleMatrix(data, tuple(labels), keys, "raw")
    means = data.mean(axis=0)
    stds = data.std(axis=0)
    return SampleMatrix((data - means) / stds, tuple(labels), keys, (means, stds))

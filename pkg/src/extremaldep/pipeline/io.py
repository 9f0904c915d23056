"""Price files, every-other-day absolute log returns and pair alignment.

Input is a long-format CSV with header exactly
``asset_id,market,sector,date,adjusted_close`` and ISO dates.
"""
from __future__ import annotations

import csv
import datetime as dt
import logging
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

PRICE_HEADER = ["asset_id", "market", "sector", "date", "adjusted_close"]
META_HEADER = ["asset_id", "market", "sector"]


class PriceFileError(ValueError):
    """Malformed price or metadata file; carries the offending line number."""

    def __init__(self, path, line, msg):
        super().__init__(f"{path}:{line}: {msg}")
        self.line = line


class EmptySeriesError(ValueError):
    pass


class EmptyJoinError(ValueError):
    pass


@dataclass(frozen=True)
class PriceSeries:
    asset_id: str
    market: str
    sector: str
    dates: np.ndarray  # datetime64[D], strictly increasing
    prices: np.ndarray
    dropped: int = 0

    def __len__(self):
        return self.prices.shape[0]


@dataclass(frozen=True)
class ReturnSeries:
    asset_id: str
    market: str
    sector: str
    dates: np.ndarray
    values: np.ndarray

    def __len__(self):
        return self.values.shape[0]


def _parse_date(text, path, line):
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise PriceFileError(path, line, f"bad date {text!r}") from None


def load_prices(path) -> list[PriceSeries]:
    """Read a long-format price file into one series per asset.

    Rows with an empty or non-positive price are dropped and counted in
    :attr:`PriceSeries.dropped`. Dates are sorted per asset; a repeated
    date for the same asset is an error. Series come back sorted by id.
    """
    path = Path(path)
    rows = defaultdict(list)
    labels = {}
    dropped = defaultdict(int)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != PRICE_HEADER:
            raise PriceFileError(path, 1, f"header must be {','.join(PRICE_HEADER)}")
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(PRICE_HEADER):
                raise PriceFileError(path, line, f"expected {len(PRICE_HEADER)} fields, got {len(row)}")
            asset, market, sector, date_s, price_s = (c.strip() for c in row)
            if not asset:
                raise PriceFileError(path, line, "empty asset_id")
            if labels.setdefault(asset, (market, sector)) != (market, sector):
                raise PriceFileError(path, line, f"asset {asset} changes market/sector")
            date = _parse_date(date_s, path, line)
            if not price_s:
                dropped[asset] += 1
                continue
            try:
                price = float(price_s)
            except ValueError:
                raise PriceFileError(path, line, f"bad price {price_s!r}") from None
            if not np.isfinite(price) or price <= 0:
                dropped[asset] += 1
                continue
            rows[asset].append((date, price, line))

    out = []
    for asset in sorted(labels):
        pts = sorted(rows.get(asset, []))
        for (d0, _, _), (d1, _, line) in zip(pts, pts[1:]):
            if d0 == d1:
                raise PriceFileError(path, line, f"duplicate date {d1} for {asset}")
        market, sector = labels[asset]
        dates = np.array([p[0] for p in pts], dtype="datetime64[D]")
        prices = np.array([p[1] for p in pts], dtype=np.float64)
        out.append(PriceSeries(asset, market, sector, dates, prices, dropped[asset]))
    total = sum(dropped.values())
    if total:
        logger.warning("%s: dropped %d rows with missing or non-positive prices", path, total)
    return out


def write_prices(path, panel) -> None:
    """Write ``(asset_id, market, sector, dates, prices)`` tuples as a price file."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PRICE_HEADER)
        for asset, market, sector, dates, prices in panel:
            for d, p in zip(dates, prices):
                w.writerow([asset, market, sector, str(d), repr(float(p))])


def load_metadata(path) -> dict[str, tuple[str, str]]:
    """``asset_id -> (market, sector)`` from a metadata CSV.

    A price file is accepted too; only its first three columns are used.
    """
    path = Path(path)
    meta = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header[:3] != META_HEADER:
            raise PriceFileError(path, 1, f"header must start with {','.join(META_HEADER)}")
        for row in reader:
            if not row:
                continue
            if len(row) < 3:
                raise PriceFileError(path, reader.line_num, "expected asset_id,market,sector")
            meta[row[0].strip()] = (row[1].strip(), row[2].strip())
    return meta


def every_other_day(series: PriceSeries, offset: int = 0) -> PriceSeries:
    """Keep positions ``offset, offset + 2, ...`` of the date-sorted series."""
    if offset not in (0, 1):
        raise ValueError("offset must be 0 or 1")
    return PriceSeries(
        series.asset_id,
        series.market,
        series.sector,
        series.dates[offset::2],
        series.prices[offset::2],
        series.dropped,
    )


def abs_log_returns(series: PriceSeries) -> ReturnSeries:
    """``|log(P_t / P_{t-1})|`` over consecutive points, dated by the later point."""
    if len(series) < 2:
        raise EmptySeriesError(f"{series.asset_id}: need at least two prices")
    values = np.abs(np.log(series.prices[1:] / series.prices[:-1]))
    return ReturnSeries(series.asset_id, series.market, series.sector, series.dates[1:], values)


def returns_from_prices(series_list, offset: int = 0) -> list[ReturnSeries]:
    out = []
    for s in series_list:
        try:
            out.append(abs_log_returns(every_other_day(s, offset)))
        except EmptySeriesError as exc:
            logger.warning("skipping asset: %s", exc)
    return out


def align_pair(a: ReturnSeries, b: ReturnSeries) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inner join on date: ``(dates, a_values, b_values)`` in ascending date order."""
    dates, ia, ib = np.intersect1d(a.dates, b.dates, assume_unique=True, return_indices=True)
    if dates.shape[0] == 0:
        raise EmptyJoinError(f"{a.asset_id} and {b.asset_id} share no dates")
    return dates, a.values[ia], b.values[ib]

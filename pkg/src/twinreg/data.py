"""CSV ingestion, temporal encodings, and scale transforms.

The canonical input is a quarterly CSV with header
``date,loss,total_pop,ratio,aplir,ffr,av_claims`` (any column order).  Rows
with any empty field carry no usable information and are dropped.  Remaining
rows are validated, sorted by date, and turned into a ModelFrame whose
columns feed both regression engines:

* ``adj_pop``    = total_pop / 1e8
* ``adj_claims`` = av_claims / 1e6
* ``exp_claims`` = exp(adj_claims)
* ``month_index``, ``year_index`` from :func:`encode_time` with the first
  observed date as origin.
"""

from __future__ import annotations

import csv
import datetime
import io
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DataError, ParseError

QUARTER_MONTHS = (1, 4, 7, 10)

CSV_COLUMNS = ("date", "loss", "total_pop", "ratio", "aplir", "ffr", "av_claims")

REGRESSOR_NAMES = ("Month", "Year", "AdjPop", "Ratio", "APLIR", "FFR", "ExpClaims")


@dataclass(frozen=True)
class Observation:
    """One quarterly row of raw measurements."""

    date: datetime.date
    loss: float
    total_pop: float
    ratio: float
    aplir: float
    ffr: float
    av_claims: float


@dataclass
class ModelFrame:
    """Transformed design data: response plus the seven regressors."""

    dates: tuple[datetime.date, ...]
    month_index: np.ndarray
    year_index: np.ndarray
    adj_pop: np.ndarray
    ratio: np.ndarray
    aplir: np.ndarray
    ffr: np.ndarray
    exp_claims: np.ndarray
    loss: np.ndarray
    names: tuple[str, ...] = field(default=REGRESSOR_NAMES)

    def __len__(self) -> int:
        return len(self.loss)

    def regressor_columns(self) -> list[np.ndarray]:
        """Columns in model order (Month, Year, AdjPop, Ratio, APLIR, FFR, ExpClaims)."""
        return [
            self.month_index.astype(float),
            self.year_index.astype(float),
            self.adj_pop,
            self.ratio,
            self.aplir,
            self.ffr,
            self.exp_claims,
        ]

    def to_csv_bytes(self) -> bytes:
        """Serialize with round-trip float formatting (repr)."""
        out = io.StringIO()
        out.write("month_index,year_index,adj_pop,ratio,aplir,ffr,exp_claims,loss\n")
        for i in range(len(self)):
            out.write(
                f"{int(self.month_index[i])},{int(self.year_index[i])},"
                f"{float(self.adj_pop[i])!r},{float(self.ratio[i])!r},"
                f"{float(self.aplir[i])!r},{float(self.ffr[i])!r},"
                f"{float(self.exp_claims[i])!r},{float(self.loss[i])!r}\n"
            )
        return out.getvalue().encode("utf-8")

    @classmethod
    def from_csv_bytes(cls, data: bytes, dates: Sequence[datetime.date] = ()) -> "ModelFrame":
        rows = list(csv.DictReader(io.StringIO(data.decode("utf-8"))))
        cols = {k: [r[k] for r in rows] for k in rows[0]}
        return cls(
            dates=tuple(dates),
            month_index=np.array([int(v) for v in cols["month_index"]]),
            year_index=np.array([int(v) for v in cols["year_index"]]),
            adj_pop=np.array([float(v) for v in cols["adj_pop"]]),
            ratio=np.array([float(v) for v in cols["ratio"]]),
            aplir=np.array([float(v) for v in cols["aplir"]]),
            ffr=np.array([float(v) for v in cols["ffr"]]),
            exp_claims=np.array([float(v) for v in cols["exp_claims"]]),
            loss=np.array([float(v) for v in cols["loss"]]),
        )


def _as_text_lines(data: bytes | str | IO[bytes]) -> io.StringIO:
    if isinstance(data, bytes):
        return io.StringIO(data.decode("utf-8"))
    if isinstance(data, str):
        return io.StringIO(data)
    return io.StringIO(data.read().decode("utf-8"))


def _parse_quarter_date(text: str, line: int) -> datetime.date:
    try:
        d = datetime.date.fromisoformat(text.strip())
    except ValueError:
        raise ParseError(f"malformed date {text!r}", line=line) from None
    if d.day != 1 or d.month not in QUARTER_MONTHS:
        raise ParseError(
            f"non-quarterly date {text!r} (expected the first of Jan/Apr/Jul/Oct)",
            line=line,
        )
    return d


def _parse_number(text: str, column: str, line: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"non-numeric {column} field {text!r}", line=line) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite {column} field {text!r}", line=line)
    return v


def parse_csv(data: bytes | str | IO[bytes]) -> list[Observation]:
    """Parse the canonical quarterly CSV into date-ordered Observations.

    Rows with any empty field are dropped.  Malformed dates, non-numeric
    fields, duplicate dates, and non-quarterly dates raise ParseError with
    the offending 1-based line number.
    """
    reader = csv.reader(_as_text_lines(data))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input: missing header row", line=1) from None
    names = [h.strip() for h in header]
    if sorted(names) != sorted(CSV_COLUMNS):
        raise ParseError(
            f"header must name the columns {', '.join(CSV_COLUMNS)}; got {names}",
            line=1,
        )
    idx = {name: names.index(name) for name in CSV_COLUMNS}

    out: list[Observation] = []
    seen: dict[datetime.date, int] = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(names):
            raise ParseError(
                f"expected {len(names)} fields, got {len(row)}", line=line
            )
        cells = {name: row[idx[name]].strip() for name in CSV_COLUMNS}
        if any(cell == "" for cell in cells.values()):
            continue  # the stated omission rule: incomplete rows are dropped
        date = _parse_quarter_date(cells["date"], line)
        if date in seen:
            raise ParseError(
                f"duplicate date {date.isoformat()} (first seen on line {seen[date]})",
                line=line,
            )
        seen[date] = line
        loss = _parse_number(cells["loss"], "loss", line)
        total_pop = _parse_number(cells["total_pop"], "total_pop", line)
        ratio = _parse_number(cells["ratio"], "ratio", line)
        aplir = _parse_number(cells["aplir"], "aplir", line)
        ffr = _parse_number(cells["ffr"], "ffr", line)
        av_claims = _parse_number(cells["av_claims"], "av_claims", line)
        if total_pop <= 0:
            raise ParseError(f"total_pop must be positive, got {total_pop}", line=line)
        if ratio <= 0:
            raise ParseError(f"ratio must be positive, got {ratio}", line=line)
        if av_claims < 0:
            raise ParseError(f"av_claims must be nonnegative, got {av_claims}", line=line)
        out.append(Observation(date, loss, total_pop, ratio, aplir, ffr, av_claims))
    out.sort(key=lambda o: o.date)
    return out


def load_csv(path: str) -> list[Observation]:
    with open(path, "rb") as fh:
        return parse_csv(fh)


def encode_time(date: datetime.date, origin: datetime.date) -> tuple[int, int]:
    """Discrete time encoding: (quarters since origin + 1, years since origin + 1)."""
    for d, label in ((origin, "origin"), (date, "date")):
        if d.day != 1 or d.month not in QUARTER_MONTHS:
            raise DataError(f"{label} {d.isoformat()} is not a quarter start")
    if date < origin:
        raise DataError(
            f"date {date.isoformat()} precedes origin {origin.isoformat()}"
        )
    quarters = (date.year - origin.year) * 4 + (
        QUARTER_MONTHS.index(date.month) - QUARTER_MONTHS.index(origin.month)
    )
    return quarters + 1, date.year - origin.year + 1


def apply_transforms(obs: Sequence[Observation]) -> ModelFrame:
    """Build the ModelFrame: time encodings plus the documented scale transforms."""
    if not obs:
        raise DataError("cannot build a model frame from zero observations")
    rows = sorted(obs, key=lambda o: o.date)
    origin = rows[0].date
    encoded = [encode_time(o.date, origin) for o in rows]
    return ModelFrame(
        dates=tuple(o.date for o in rows),
        month_index=np.array([m for m, _ in encoded], dtype=np.int64),
        year_index=np.array([y for _, y in encoded], dtype=np.int64),
        adj_pop=np.array([o.total_pop / 1e8 for o in rows]),
        ratio=np.array([o.ratio for o in rows]),
        aplir=np.array([o.aplir for o in rows]),
        ffr=np.array([o.ffr for o in rows]),
        exp_claims=np.array([math.exp(o.av_claims / 1e6) for o in rows]),
        loss=np.array([o.loss for o in rows]),
    )


def _prior_month(quarter_start: datetime.date) -> tuple[int, int]:
    if quarter_start.month == 1:
        return quarter_start.year - 1, 12
    return quarter_start.year, quarter_start.month - 1


def aggregate_prior_month(
    daily: Iterable[tuple[datetime.date, float | None]],
    quarter_start: datetime.date,
) -> float:
    """Mean of the non-empty values dated in the month before quarter_start."""
    year, month = _prior_month(quarter_start)
    vals = [
        v
        for d, v in daily
        if v is not None and d.year == year and d.month == month
    ]
    if not vals:
        raise DataError(
            f"no usable values in the month preceding {quarter_start.isoformat()}"
        )
    return sum(vals) / len(vals)


def parse_daily_csv(data: bytes | str | IO[bytes]) -> list[tuple[datetime.date, float | None]]:
    """Parse the daily-series helper input (header ``date,value``)."""
    reader = csv.reader(_as_text_lines(data))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input: missing header row", line=1) from None
    names = [h.strip() for h in header]
    if sorted(names) != ["date", "value"]:
        raise ParseError(f"header must name the columns date, value; got {names}", line=1)
    di, vi = names.index("date"), names.index("value")
    out: list[tuple[datetime.date, float | None]] = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", line=line)
        try:
            date = datetime.date.fromisoformat(row[di].strip())
        except ValueError:
            raise ParseError(f"malformed date {row[di]!r}", line=line) from None
        text = row[vi].strip()
        value = None if text == "" else _parse_number(text, "value", line)
        out.append((date, value))
    return out

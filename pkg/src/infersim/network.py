"""Network-transfer-time models: Gaussian profiles, CV parameterization, trace replay.

A Gaussian profile describes the distribution of one request's total network
time (upload plus download together); draws are clamped at zero. The
simulator splits each draw into symmetric upload/download halves, which makes
the policy-side round-trip estimate (twice the upload time) agree with the
profile by construction.

Trace files instead record measured per-direction times, one request per row:
``request_id,t_input_ms`` or ``request_id,t_input_ms,t_output_ms``. When the
download column is absent the download mirrors the upload. Replay preserves
file order and wraps around with a warning once the rows run out.
"""

from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussianNetwork:
    """Normal(mean, std) network time, clamped at zero."""

    mean_ms: float
    std_ms: float

    def __post_init__(self) -> None:
        if self.mean_ms <= 0.0:
            raise ValidationError(f"network mean_ms must be > 0, got {self.mean_ms}")
        if self.std_ms < 0.0:
            raise ValidationError(f"network std_ms must be >= 0, got {self.std_ms}")

    def sample(self, rng: np.random.Generator) -> float:
        if self.std_ms == 0.0:
            return self.mean_ms
        return max(0.0, self.mean_ms + self.std_ms * rng.standard_normal())

    def sample_pair(self, rng: np.random.Generator) -> tuple[float, float]:
        """Upload/download times for one request (symmetric halves of a draw)."""
        half = self.sample(rng) / 2.0
        return half, half

    def fork(self) -> "GaussianNetwork":
        return self


def gaussian_network(mean_ms: float, std_ms: float) -> GaussianNetwork:
    return GaussianNetwork(mean_ms=mean_ms, std_ms=std_ms)


def cv_network(mean_ms: float, cv: float) -> GaussianNetwork:
    """Gaussian network parameterized by its coefficient of variation.

    Values above 1 are accepted but flagged in the log, since they describe a
    network more variable than any the bundled experiments exercise.
    """
    if cv < 0.0:
        raise ValidationError(f"cv must be >= 0, got {cv}")
    if cv > 1.0:
        logger.warning("cv %.3f exceeds 1.0; network will be extremely variable", cv)
    return gaussian_network(mean_ms, cv * mean_ms)


@dataclass(frozen=True)
class TraceRecord:
    request_id: str
    t_input_ms: float
    t_output_ms: float | None = None

    def __post_init__(self) -> None:
        if self.t_input_ms < 0.0:
            raise ValidationError("t_input_ms must be >= 0")
        if self.t_output_ms is not None and self.t_output_ms < 0.0:
            raise ValidationError("t_output_ms must be >= 0")


@dataclass
class TraceNetwork:
    """Replays recorded per-direction transfer times in file order.

    Carries a cursor, so an instance serves a single simulation run; use
    :meth:`fork` to obtain a fresh replay for each run.
    """

    records: tuple[TraceRecord, ...]
    cursor: int = field(default=0)

    def __post_init__(self) -> None:
        if not self.records:
            raise ValidationError("trace must contain at least one record")

    def __len__(self) -> int:
        return len(self.records)

    def sample_pair(self, rng: np.random.Generator | None = None) -> tuple[float, float]:
        n = len(self.records)
        if self.cursor > 0 and self.cursor % n == 0:
            warnings.warn(
                f"trace exhausted after {n} samples; wrapping around", stacklevel=2
            )
        record = self.records[self.cursor % n]
        self.cursor += 1
        t_out = record.t_output_ms if record.t_output_ms is not None else record.t_input_ms
        return record.t_input_ms, t_out

    def fork(self) -> "TraceNetwork":
        return TraceNetwork(records=self.records)


NetworkModel = Union[GaussianNetwork, TraceNetwork]


def load_trace(path: str | Path) -> TraceNetwork:
    """Load a replayable trace from CSV.

    Raises :class:`ParseError` with the line number for malformed or negative
    values and :class:`ValidationError` for an empty trace.
    """
    path = Path(path)
    two_col = ("request_id", "t_input_ms")
    three_col = ("request_id", "t_input_ms", "t_output_ms")
    records: list[TraceRecord] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(h.strip() for h in next(reader))
        except StopIteration:
            raise ValidationError(f"{path}: empty trace file") from None
        if header == two_col:
            has_output = False
        elif header == three_col:
            has_output = True
        else:
            raise ParseError(
                f"{path}:1: expected header {','.join(two_col)!r} or "
                f"{','.join(three_col)!r}, got {','.join(header)!r}"
            )
        expected_fields = 3 if has_output else 2
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != expected_fields:
                raise ParseError(
                    f"{path}:{lineno}: expected {expected_fields} fields, got {len(row)}"
                )
            try:
                t_input = float(row[1])
                t_output = float(row[2]) if has_output else None
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            try:
                records.append(TraceRecord(row[0].strip(), t_input, t_output))
            except ValidationError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
    if not records:
        raise ValidationError(f"{path}: no trace rows")
    return TraceNetwork(records=tuple(records))


def estimate_round_trip(t_input_ms: float) -> float:
    """Conservative round-trip estimate: twice the measured upload time."""
    if t_input_ms < 0.0:
        raise ValidationError(f"t_input_ms must be >= 0, got {t_input_ms}")
    return 2.0 * t_input_ms

"""Catalog of functionally-equivalent inference models.

Each profile pairs a model's top-1 accuracy with the mean and standard
deviation of its server-side execution latency. A built-in catalog of twelve
image-classification models benchmarked on a GPU server ships with the
package; custom catalogs load from CSV files with the header
``name,accuracy_pct,exec_mean_ms,exec_std_ms`` (accuracy as a percentage,
latencies in milliseconds).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError

MODEL_FILE_HEADER = ("name", "accuracy_pct", "exec_mean_ms", "exec_std_ms")

# Synthetic low-accuracy twin of "NasNet Large" (same latency distribution).
# It exists to probe how selection policies discriminate between equal-latency
# candidates; experiments exclude it unless they study that question.
FICTIONAL_MODEL_NAME = "NasNet Fictional"


@dataclass(frozen=True)
class ModelProfile:
    """One deployable model: accuracy fraction plus execution-latency stats.

    ``accuracy`` is a fraction in [0, 1] (file format uses percentages).
    Latency is characterized by mean and standard deviation in milliseconds.
    """

    name: str
    accuracy: float
    exec_mean_ms: float
    exec_std_ms: float

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("model name must be non-empty")
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValidationError(
                f"model {self.name!r}: accuracy {self.accuracy} outside [0, 1]"
            )
        if self.exec_mean_ms <= 0.0:
            raise ValidationError(f"model {self.name!r}: exec_mean_ms must be > 0")
        if self.exec_std_ms < 0.0:
            raise ValidationError(f"model {self.name!r}: exec_std_ms must be >= 0")


@dataclass(frozen=True)
class ModelSet:
    """Immutable ordered collection of uniquely named model profiles."""

    profiles: tuple[ModelProfile, ...]

    def __post_init__(self) -> None:
        if not self.profiles:
            raise ValidationError("model set must not be empty")
        names = [p.name for p in self.profiles]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValidationError(f"duplicate model names: {', '.join(dupes)}")

    def __iter__(self):
        return iter(self.profiles)

    def __len__(self) -> int:
        return len(self.profiles)

    def __contains__(self, item: ModelProfile | str) -> bool:
        if isinstance(item, str):
            return any(p.name == item for p in self.profiles)
        return item in self.profiles

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.profiles)

    def get(self, name: str) -> ModelProfile:
        for p in self.profiles:
            if p.name == name:
                return p
        raise KeyError(name)

    def fastest(self) -> ModelProfile:
        """Profile with the lowest mean latency.

        Ties break toward the smaller standard deviation, then the
        lexicographically smaller name, so results are order-independent.
        """
        return min(self.profiles, key=lambda p: (p.exec_mean_ms, p.exec_std_ms, p.name))

    def most_accurate(self) -> ModelProfile:
        """Profile with the highest accuracy (ties: smaller mean, then name)."""
        return min(self.profiles, key=lambda p: (-p.accuracy, p.exec_mean_ms, p.name))

    def without(self, *names: str) -> ModelSet:
        """A copy with the given names removed (missing names are ignored)."""
        dropped = set(names)
        return ModelSet(tuple(p for p in self.profiles if p.name not in dropped))


# (name, accuracy %, execution mean ms, execution std ms), measured on a
# GPU-accelerated server over repeated runs; accuracy is ILSVRC-2012 top-1.
_BUILTIN_ROWS = (
    ("SqueezeNet", 49.0, 4.91, 0.06),
    ("MobileNetV1 0.25", 49.7, 3.21, 0.08),
    ("MobileNetV1 0.5", 63.2, 4.21, 0.06),
    ("DenseNet", 64.2, 25.49, 0.14),
    ("MobileNetV1 0.75", 68.3, 4.67, 0.07),
    ("MobileNetV1 1.0", 71.0, 5.43, 0.11),
    ("NasNet Mobile", 73.9, 21.18, 0.17),
    ("InceptionResNetV2", 77.5, 50.85, 0.33),
    ("InceptionV3", 77.9, 31.11, 0.19),
    ("InceptionV4", 80.1, 59.21, 0.22),
    ("NasNet Large", 82.6, 112.61, 0.36),
    (FICTIONAL_MODEL_NAME, 50.0, 112.61, 0.36),
)


def builtin_models() -> ModelSet:
    """The bundled twelve-model catalog, including the fictional twin."""
    return ModelSet(
        tuple(
            ModelProfile(name, pct / 100.0, mean, std)
            for name, pct, mean, std in _BUILTIN_ROWS
        )
    )


def load_models(path: str | Path) -> ModelSet:
    """Load a model catalog from a CSV file.

    Raises :class:`ParseError` (with the line number) for malformed rows and
    :class:`ValidationError` for semantic problems such as duplicate names,
    out-of-range values, or an empty catalog.
    """
    path = Path(path)
    profiles: list[ModelProfile] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty model file") from None
        if tuple(h.strip() for h in header) != MODEL_FILE_HEADER:
            raise ParseError(
                f"{path}:1: expected header {','.join(MODEL_FILE_HEADER)!r}, "
                f"got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise ParseError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            name = row[0].strip()
            try:
                pct = float(row[1])
                mean = float(row[2])
                std = float(row[3])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            try:
                profiles.append(ModelProfile(name, pct / 100.0, mean, std))
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
    if not profiles:
        raise ValidationError(f"{path}: no model rows")
    try:
        return ModelSet(tuple(profiles))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def save_models(models: ModelSet, path: str | Path) -> None:
    """Write a catalog in the CSV format accepted by :func:`load_models`."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MODEL_FILE_HEADER)
        for p in models:
            writer.writerow(
                [p.name, repr(p.accuracy * 100.0), repr(p.exec_mean_ms), repr(p.exec_std_ms)]
            )

"""Result rows shared by simulation and theory, and their CSV form."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

__all__ = ["BerRecord", "CSV_COLUMNS", "emit_csv", "read_csv", "sort_records"]

# first seven columns are the fixed schema; profile and note are appended
CSV_COLUMNS = ("snr_db", "system", "detector", "source", "bits", "errors", "ber", "profile", "note")


@dataclass(frozen=True)
class BerRecord:
    """One point of a BER curve.

    Theory rows (``source="theory"``) carry no bit/error counts. ``note``
    says why a simulated point stopped (``min_errors`` or ``max_bits``) or
    flags a theory value clamped to 1/2.
    """

    snr_db: float
    system: str
    detector: str
    source: str
    bits: int | None
    errors: int | None
    ber: float
    profile: str = ""
    note: str = ""

    def __post_init__(self):
        if self.source not in ("sim", "theory"):
            raise ValueError(f"source must be 'sim' or 'theory', got {self.source!r}")
        if self.source == "sim":
            if not self.bits or self.errors is None or not 0 <= self.errors <= self.bits:
                raise ValueError(f"inconsistent counts: errors={self.errors}, bits={self.bits}")
            if self.ber != self.errors / self.bits:
                raise ValueError("ber must equal errors / bits")
        if not 0.0 <= self.ber <= 1.0:
            raise ValueError(f"ber={self.ber} outside [0, 1]")

    @classmethod
    def from_counts(cls, snr_db, system, detector, bits, errors, profile="", note="") -> "BerRecord":
        return cls(float(snr_db), system, detector, "sim", int(bits), int(errors), errors / bits, profile, note)


def sort_records(records: Iterable[BerRecord]) -> list[BerRecord]:
    """Stable sort by (system, profile, snr); theory and sim rows interleave."""
    return sorted(records, key=lambda r: (r.system, r.profile, r.snr_db))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(records: Iterable[BerRecord], path) -> None:
    rows = sort_records(records)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([_fmt(getattr(r, name)) for name in CSV_COLUMNS])


def read_csv(path) -> list[BerRecord]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for row in reader:
            out.append(
                BerRecord(
                    snr_db=float(row["snr_db"]),
                    system=row["system"],
                    detector=row["detector"],
                    source=row["source"],
                    bits=int(row["bits"]) if row["bits"] else None,
                    errors=int(row["errors"]) if row["errors"] else None,
                    ber=float(row["ber"]),
                    profile=row["profile"],
                    note=row["note"],
                )
            )
    return out


"""Reading and writing ``iq-csv`` captures (header ``n,i,q``, one sample per row)."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from ..errors import CaptureFormatError, InvalidArgumentError
from ..frft import SampleSet

HEADER = ("n", "i", "q")


def fmt(x: float) -> str:
    # 17 significant digits round-trip every double
    return format(float(x), ".17g")


def export_samples(samples: SampleSet, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for n, y in enumerate(samples.values):
            w.writerow((n, fmt(y.real), fmt(y.imag)))
    return path


def ingest_capture(path, format: str = "iq-csv", theta=None, T=None) -> SampleSet:
    """Load a capture as a :class:`SampleSet`, attaching ``theta`` and ``T``.

    Rows must carry ``n`` as consecutive integers starting at 0.
    """
    if format != "iq-csv":
        raise InvalidArgumentError(f"unsupported capture format {format!r}")
    if theta is None or T is None:
        raise InvalidArgumentError("theta and T must be supplied with a capture")
    path = Path(path)
    values = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CaptureFormatError("empty file, expected header 'n,i,q'", line=1)
        if tuple(h.strip().lower() for h in header) != HEADER:
            raise CaptureFormatError(f"expected header 'n,i,q', got {','.join(header)!r}", line=1)
        prev = -1
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3:
                raise CaptureFormatError(f"expected 3 fields, got {len(row)}", line=line)
            try:
                n = int(row[0])
                i, q = float(row[1]), float(row[2])
            except ValueError:
                raise CaptureFormatError(f"unparseable row {','.join(row)!r}", line=line) from None
            if not (math.isfinite(i) and math.isfinite(q)):
                raise CaptureFormatError("non-finite sample value", line=line)
            if n <= prev:
                raise CaptureFormatError(f"sample index {n} is not strictly increasing", line=line)
            if n != prev + 1:
                raise CaptureFormatError(
                    f"sample index {n} skips {prev + 1}; indices must run 0, 1, 2, ...", line=line
                )
            prev = n
            values.append(complex(i, q))
    if not values:
        raise CaptureFormatError("header present but no sample rows", line=2)
    return SampleSet(np.array(values), T, theta, {"source": str(path)})

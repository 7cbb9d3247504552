"""Deterministic JSON/CSV writers and run-config hashing."""

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1
SIG_DIGITS = 12


@dataclass(frozen=True)
class RunConfig:
    command: str
    n_max: int | None = None
    a_spec: str | None = None
    b_spec: str | None = None
    seed: int = 0
    r_override: float | None = None
    output: str | None = None
    format: str = "json"
    extra: dict = field(default_factory=dict)

    def content_hash(self):
        """Git blob SHA-1 of the canonical JSON form (output location excluded)."""
        body = asdict(self)
        body.pop("output")
        data = json.dumps(to_plain(body), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def derive_seed(seed, *labels):
    """Child seed for one randomised input, fully determined by the run seed."""
    entropy = [int(seed)] + [int.from_bytes(hashlib.sha1(str(x).encode()).digest()[:4], "little") for x in labels]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def fmt_float(x):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{SIG_DIGITS}g}"


def to_plain(obj):
    """JSON-safe copy with floats rounded to 12 significant digits."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(fmt_float(x)) if math.isfinite(x) else fmt_float(x)
    if isinstance(obj, complex):
        return {"re": to_plain(obj.real), "im": to_plain(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "__dataclass_fields__"):
        return to_plain(asdict(obj))
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(payload):
    body = {"schema_version": SCHEMA_VERSION, **to_plain(payload)}
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def dumps_csv(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return "" if v is None else str(v)


def write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def human_table(rows):
    """Two-column key/value table for terminal output."""
    rows = [(str(k), fmt_float(v) if isinstance(v, float) else str(v)) for k, v in rows]
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)

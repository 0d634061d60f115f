"""Serialization helpers: every emitted number round-trips through a 64-bit
float (17 significant digits), and table-facing values also carry a
truncated-3-digit convenience form.  All emitters are deterministic."""

import csv
import io
import json

import mpmath as mp

SCHEMA_VERSION = 1


def number(x):
    """Round to the nearest 64-bit float for emission."""
    if x is None:
        return None
    return float(mp.mpf(x))


def trunc3(x):
    """Truncate toward zero after the third decimal digit.

    A nudge of 1e-12 absorbs representation error in values that are exact
    multiples of 1/1000, so -0.4 truncates to -0.4 and not -0.401.
    """
    x = mp.mpf(x)
    sign = -1 if x < 0 else 1
    return float(sign * mp.floor(abs(x) * 1000 + mp.mpf("1e-12")) / 1000)


def envelope(command, payload, config=None):
    out = {"schema": SCHEMA_VERSION, "command": command}
    if config:
        out["config"] = config
    out.update(payload)
    return out


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def fmt17(x) -> str:
    """Fixed 17-significant-digit decimal form (CSV cells)."""
    if x is None:
        return ""
    return f"{float(mp.mpf(x)):.17g}"

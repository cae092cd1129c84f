"""Remainder-versus-bound tables for |z| = 20, N in {5, 10} and
arg z in {0, pi/4, 3pi/8, pi/2}."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .coefficients import OrderPair
from .errors import ConvergenceError
from .lommel import (oracle_remainder_S, remainder_bound_combined_real,
                     remainder_bound_complex_combined)

__all__ = ["TABLES", "ANGLES", "TableRow", "table_rows", "format_sci"]

TABLES = {
    1: OrderPair(-2, 1.5),
    2: OrderPair(-6, 4.5),
    3: OrderPair(2 + 2j, 0.5 - 1j),
}
ANGLES = (("0", 0.0), ("pi/4", math.pi / 4), ("3pi/8", 3 * math.pi / 8), ("pi/2", math.pi / 2))
ORDERS = (5, 10)
ABS_Z = 20.0


@dataclass(frozen=True)
class TableRow:
    arg_label: str
    theta: float
    N: int
    remainder: float
    bound: float
    ok: bool = True


def _bound(tid, z, pair, N):
    if tid == 3:
        return remainder_bound_complex_combined(z, pair, N)
    return remainder_bound_combined_real(z, pair, N)


def table_rows(tid, rel_tol=None):
    if tid not in TABLES:
        raise ValueError(f"table id must be 1, 2 or 3, got {tid!r}")
    pair = TABLES[tid]
    rows = []
    for label, th in ANGLES:
        for N in ORDERS:
            z = cmath.rect(ABS_Z, th)
            b = _bound(tid, z, pair, N)
            try:
                r = abs(oracle_remainder_S(z, pair, N, rel_tol=rel_tol))
                rows.append(TableRow(label, th, N, r, b))
            except ConvergenceError:
                rows.append(TableRow(label, th, N, math.nan, b, ok=False))
    return rows


def format_sci(x, digits=5):
    """0.dddddEk-style mantissa in [0.1, 1), as in 0.47440e-5."""
    if x == 0 or not math.isfinite(x):
        return str(x)
    e = math.floor(math.log10(abs(x))) + 1
    m = round(x / 10 ** e, digits)
    if abs(m) >= 1:
        m /= 10
        e += 1
    return f"{m:.{digits}f}e{e}"

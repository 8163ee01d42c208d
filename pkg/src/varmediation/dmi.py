"""Dynamic Mediation Index.

    DMI(n) = <theta_Y[n+1..H], theta_Y^(M_n)[n+1..H]> / <theta_Y[n+1..H], theta_Y[n+1..H]>

the projection coefficient of a mediator's contribution window onto the
outcome's impulse-response window. It is signed and keeps the scale of the
contribution, so values outside [-1, 1] are possible. DMI(H) is 0.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decomposition import DecompositionTable, IrfPath
from .exceptions import DegenerateWindowError

DEGENERATE_TOL = 1e-14


@dataclass(frozen=True)
class DmiSeries:
    values: dict[int, float]
    H: int
    mediator: str
    outcome: str

    def as_array(self) -> np.ndarray:
        return np.array([self.values[n] for n in range(self.H + 1)])

    def to_dict(self) -> dict:
        return {
            "mediator": self.mediator,
            "outcome": self.outcome,
            "H": self.H,
            "values": {str(n): v for n, v in sorted(self.values.items())},
        }


def dmi_at(table: DecompositionTable, irf: IrfPath, mediator: str, outcome: str, n: int, H: int) -> float:
    if not 0 <= n <= H <= irf.H:
        raise ValueError(f"need 0 <= n <= H <= {irf.H}, got n={n}, H={H}")
    if n == H:
        return 0.0
    if H > table.H:
        raise ValueError(f"table only reaches horizon {table.H}, asked for H={H}")
    total = irf.theta[n + 1 : H + 1, irf.index(outcome)]
    part = table.window(n, H, mediator, outcome)
    denom = float(total @ total)
    if denom < DEGENERATE_TOL:
        raise DegenerateWindowError(
            f"impulse response of {outcome!r} is numerically zero over horizons {n + 1}..{H}", n=n
        )
    return float(total @ part) / denom


def dmi_series(table: DecompositionTable, irf: IrfPath, mediator: str, outcome: str, H: int) -> DmiSeries:
    missing = sorted(set(range(H)) - set(table.n_list))
    if missing:
        raise ValueError(f"decomposition table lacks fronts n={missing}; build it with n_list=range({H})")
    values = {}
    for n in range(H + 1):
        try:
            values[n] = dmi_at(table, irf, mediator, outcome, n, H)
        except DegenerateWindowError as exc:
            raise DegenerateWindowError(f"n={n}: {exc}", n=n) from exc
    return DmiSeries(values, H, mediator, outcome)


def dmi_to_csv(series: DmiSeries, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "dmi"])
        for n in range(series.H + 1):
            writer.writerow([n, repr(series.values[n])])


def dmi_from_csv(path: str | Path, mediator: str = "", outcome: str = "") -> DmiSeries:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        values = {int(r["n"]): float(r["dmi"]) for r in csv.DictReader(fh)}
    return DmiSeries(values, max(values), mediator, outcome)


def save_dmi_json(series: DmiSeries, path: str | Path) -> None:
    Path(path).write_text(json.dumps(series.to_dict(), indent=1) + "\n", encoding="utf-8")

"""Shock impact vectors, impulse responses and their per-variable decomposition.

For a decomposition time n < h the response at horizon h splits as

    theta_h = sum_{k=0}^{n} Phi_{k+1}^(h-n) theta_{n-k}
            = sum_v sum_{k=0}^{n} Phi_{.v,k+1}^(h-n) theta_{v,n-k},

and the inner sum for a given variable v is its contribution theta_h^(v_n).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .exceptions import AdditivityError, DataError
from .gir import GirSet
from .var import VarModel

Normalization = Literal["unit", "sd", "user"]

ADDITIVITY_TOL = 1e-8


@dataclass(frozen=True)
class ShockIdentification:
    """Impact response theta_0 of all variables to the identified shock."""

    shock_var: str
    theta0: np.ndarray
    shock_sd: float
    normalization: Normalization

    def scaled(self, c: float) -> "ShockIdentification":
        return ShockIdentification(self.shock_var, c * self.theta0, self.shock_sd, self.normalization)


def identify_shock(model: VarModel, shock_var: str, normalization: Normalization = "sd") -> ShockIdentification:
    """Recursive identification with the shock variable ordered first.

    The shock is the shock variable's own innovation, so the impact vector is
    the regression of all innovations on it, ``Sigma_u e_X / Sigma_u[X, X]``.
    With ``normalization="sd"`` this is rescaled to a one-standard-deviation shock.
    """
    i = model.index(shock_var)
    var_x = model.sigma_u[i, i]
    if not var_x > 0:
        raise DataError(f"innovation variance of {shock_var!r} is not positive ({var_x})")
    sd = float(np.sqrt(var_x))
    theta0 = model.sigma_u[:, i] / var_x
    if normalization == "sd":
        theta0 = theta0 * sd
    elif normalization != "unit":
        raise ValueError(f"normalization must be 'unit' or 'sd', got {normalization!r}")
    return ShockIdentification(shock_var, theta0, sd, normalization)


def shock_from_vector(model: VarModel, shock_var: str, theta0: Sequence[float]) -> ShockIdentification:
    """Wrap an externally identified impact vector (e.g. from an instrument)."""
    theta0 = np.asarray(theta0, dtype=float)
    if theta0.shape != (model.K,):
        raise DataError(f"theta0 needs {model.K} entries, got {theta0.size}")
    i = model.index(shock_var)
    return ShockIdentification(shock_var, theta0, float(np.sqrt(model.sigma_u[i, i])), "user")


@dataclass(frozen=True)
class IrfPath:
    """``theta[h]`` is the response of all K variables at horizon h."""

    theta: np.ndarray
    shock: ShockIdentification
    names: tuple[str, ...]

    @property
    def H(self) -> int:
        return self.theta.shape[0] - 1

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise DataError(f"unknown variable {label!r}; variables are {list(self.names)}") from None


def impulse_response(gir: GirSet, shock: ShockIdentification, H: int) -> IrfPath:
    """theta_h = Phi_1^(h) theta_0 for h = 1..H."""
    if H > gir.H_max:
        raise ValueError(f"horizon {H} exceeds the gir table (H_max={gir.H_max})")
    theta = np.empty((H + 1, gir.K))
    theta[0] = shock.theta0
    if H:
        theta[1:] = gir.coeffs[:H, 0] @ shock.theta0
    return IrfPath(theta, shock, gir.names)


def _check_nh(gir: GirSet, irf: IrfPath, n: int, h: int) -> None:
    if not 0 <= n < h:
        raise ValueError(f"decomposition time must satisfy 0 <= n < h, got n={n}, h={h}")
    if h > irf.H:
        raise ValueError(f"horizon {h} exceeds the impulse response length {irf.H}")
    if h - n > gir.H_max or n + 1 > gir.J_max:
        raise ValueError(f"(n={n}, h={h}) needs Phi_j^(h-n) beyond the stored gir table")


def _front(gir: GirSet, irf: IrfPath, n: int, h: int) -> np.ndarray:
    """Contributions of every variable at (n, h) as a K x K matrix, column v = theta_h^(v_n)."""
    blocks = gir.coeffs[h - n - 1, : n + 1]  # Phi_{k+1}^(h-n), k = 0..n
    past = irf.theta[n::-1]  # theta_{n-k}, k = 0..n
    return np.einsum("kiv,kv->iv", blocks, past)


def represent_at(gir: GirSet, irf: IrfPath, n: int, h: int) -> np.ndarray:
    """sum_{k=0}^{n} Phi_{k+1}^(h-n) theta_{n-k}; equals theta_h."""
    _check_nh(gir, irf, n, h)
    out = np.zeros(gir.K)
    for k in range(n + 1):
        out += gir.coef(h - n, k + 1) @ irf.theta[n - k]
    return out


def contribution(gir: GirSet, irf: IrfPath, v: str, n: int, h: int) -> np.ndarray:
    """theta_h^(v_n): the part of theta_h carried by variable v's path through period n."""
    _check_nh(gir, irf, n, h)
    return _front(gir, irf, n, h)[:, gir.index(v)]


@dataclass(frozen=True)
class DecompositionTable:
    """Per-variable contributions for several decomposition times.

    ``values[i, h, :, v]`` is theta_h^(v_n) for ``n = n_list[i]`` (a K-vector over
    responding variables); cells with ``h <= n`` are NaN. ``totals[h]`` is theta_h.
    The constructor does not check additivity so synthetic tables can be built;
    :func:`build_table` and :meth:`verify_additivity` do.
    """

    values: np.ndarray
    totals: np.ndarray
    n_list: tuple[int, ...]
    names: tuple[str, ...]

    @property
    def H(self) -> int:
        return self.totals.shape[0] - 1

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise DataError(f"unknown variable {label!r}; variables are {list(self.names)}") from None

    def front(self, n: int) -> np.ndarray:
        try:
            return self.values[self.n_list.index(n)]
        except ValueError:
            raise KeyError(f"no decomposition at n={n}; available: {list(self.n_list)}") from None

    def get(self, n: int, h: int, v: str) -> np.ndarray:
        if not n < h <= self.H:
            raise ValueError(f"contributions exist only for n < h <= {self.H}, got n={n}, h={h}")
        return self.front(n)[h, :, self.index(v)]

    def window(self, n: int, H: int, v: str, row: str) -> np.ndarray:
        """Row ``row`` of theta_{h}^(v_n) for h = n+1..H."""
        return self.front(n)[n + 1 : H + 1, self.index(row), self.index(v)]

    def verify_additivity(self, tol: float = ADDITIVITY_TOL) -> float:
        """Largest |sum_v theta_h^(v_n) - theta_h| over stored cells; raises if above ``tol``."""
        worst = 0.0
        for i, n in enumerate(self.n_list):
            resum = self.values[i, n + 1 :].sum(axis=2)
            if resum.size:
                worst = max(worst, float(np.max(np.abs(resum - self.totals[n + 1 :]))))
        if worst > tol:
            raise AdditivityError(f"contributions miss the impulse response by {worst:.3e} (> {tol:g})")
        return worst


def build_table(gir: GirSet, irf: IrfPath, n_list: Iterable[int], H: int) -> DecompositionTable:
    """Decompose theta_h for every n in ``n_list`` and n < h <= H."""
    n_list = tuple(sorted(set(int(n) for n in n_list)))
    if not n_list:
        raise ValueError("n_list is empty")
    if any(n < 0 or n >= H for n in n_list):
        raise ValueError(f"every decomposition time must lie in [0, {H}), got {list(n_list)}")
    if H > irf.H:
        raise ValueError(f"H={H} exceeds the impulse response length {irf.H}")
    K = gir.K
    values = np.full((len(n_list), H + 1, K, K), np.nan)
    for i, n in enumerate(n_list):
        for h in range(n + 1, H + 1):
            _check_nh(gir, irf, n, h)
            values[i, h] = _front(gir, irf, n, h)
    table = DecompositionTable(values, irf.theta[: H + 1].copy(), n_list, gir.names)
    table.verify_additivity()
    return table


# --- file formats -----------------------------------------------------------


def table_to_csv(table: DecompositionTable, outcome: str, path: str | Path) -> None:
    """Long CSV: n, h, variable, contribution (outcome row), plus a ``total`` row per (n, h)."""
    row = table.index(outcome)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "h", "variable", "contribution"])
        for i, n in enumerate(table.n_list):
            for h in range(n + 1, table.H + 1):
                for v, name in enumerate(table.names):
                    writer.writerow([n, h, name, repr(float(table.values[i, h, row, v]))])
                writer.writerow([n, h, "total", repr(float(table.totals[h, row]))])


def table_from_csv(path: str | Path) -> tuple[dict[tuple[int, int], dict[str, float]], list[str]]:
    """Read a decomposition CSV back as ``{(n, h): {variable: value, 'total': theta}}``."""
    cells: dict[tuple[int, int], dict[str, float]] = {}
    names: list[str] = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            key = (int(rec["n"]), int(rec["h"]))
            cells.setdefault(key, {})[rec["variable"]] = float(rec["contribution"])
            if rec["variable"] != "total" and rec["variable"] not in names:
                names.append(rec["variable"])
    return cells, names


def csv_additivity_gap(path: str | Path) -> float:
    """Largest |sum of contributions - total| in a decomposition CSV."""
    cells, names = table_from_csv(path)
    return max(abs(sum(c[v] for v in names) - c["total"]) for c in cells.values())


def table_to_dict(table: DecompositionTable) -> dict:
    """Nested n -> h -> variable -> K-vector (responding variables in ``names`` order)."""
    out: dict = {
        "names": list(table.names),
        "H": table.H,
        "n_list": list(table.n_list),
        "irf": table.totals.tolist(),
        "fronts": {},
    }
    for i, n in enumerate(table.n_list):
        out["fronts"][str(n)] = {
            str(h): {
                **{name: table.values[i, h, :, v].tolist() for v, name in enumerate(table.names)},
                "total": table.totals[h].tolist(),
            }
            for h in range(n + 1, table.H + 1)
        }
    return out


def table_from_dict(d: dict) -> DecompositionTable:
    names = tuple(d["names"])
    H, n_list = int(d["H"]), tuple(int(n) for n in d["n_list"])
    K = len(names)
    values = np.full((len(n_list), H + 1, K, K), np.nan)
    totals = np.array(d["irf"], dtype=float)
    for i, n in enumerate(n_list):
        for h_key, cell in d["fronts"][str(n)].items():
            h = int(h_key)
            for v, name in enumerate(names):
                values[i, h, :, v] = cell[name]
    return DecompositionTable(values, totals, n_list, names)


def save_table_json(table: DecompositionTable, path: str | Path) -> None:
    Path(path).write_text(json.dumps(table_to_dict(table)) + "\n", encoding="utf-8")


def irf_to_csv(irf: IrfPath, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["h", *irf.names])
        for h, row in enumerate(irf.theta):
            writer.writerow([h, *(repr(float(x)) for x in row)])

"""Multi-horizon projection coefficients and Granger non-causality checks.

The h-step-ahead linear projection of a VAR(p) is

    W_{t+h} = sum_j Phi_j^(h) W_{t+1-j} + u_t^(h),

and its coefficient matrices follow the recursion

    Phi_j^(1) = Phi_j,    Phi_j^(h+1) = Phi_{j+1}^(h) + Phi_1^(h) Phi_j.

``Phi_1^(h)`` is the moving-average coefficient at lag h, and a zero
(to, from) entry for every j is the condition for ``from`` not to
Granger-cause ``to`` at horizon h.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DataError, UnstableModelError
from .var import VarModel, is_stable


@dataclass(frozen=True)
class GirSet:
    """Dense table of Phi_j^(h) for 1 <= h <= H_max, 1 <= j <= J_max.

    ``coeffs[h-1, j-1]`` is the K x K matrix Phi_j^(h).
    """

    coeffs: np.ndarray
    names: tuple[str, ...]
    source_model: VarModel | None = None

    def __post_init__(self):
        self.coeffs.flags.writeable = False

    @property
    def H_max(self) -> int:
        return self.coeffs.shape[0]

    @property
    def J_max(self) -> int:
        return self.coeffs.shape[1]

    @property
    def K(self) -> int:
        return self.coeffs.shape[2]

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise DataError(f"unknown variable {label!r}; variables are {list(self.names)}") from None

    def coef(self, h: int, j: int) -> np.ndarray:
        """Phi_j^(h)."""
        if not (1 <= h <= self.H_max and 1 <= j <= self.J_max):
            raise IndexError(f"(h={h}, j={j}) outside stored range h<= {self.H_max}, j<= {self.J_max}")
        return self.coeffs[h - 1, j - 1]

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "H_max": self.H_max,
            "J_max": self.J_max,
            "coeffs": {
                str(h): {str(j): self.coef(h, j).tolist() for j in range(1, self.J_max + 1)}
                for h in range(1, self.H_max + 1)
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GirSet":
        H, J = int(d["H_max"]), int(d["J_max"])
        coeffs = np.array(
            [[d["coeffs"][str(h)][str(j)] for j in range(1, J + 1)] for h in range(1, H + 1)],
            dtype=float,
        )
        return cls(coeffs, tuple(d["names"]))


def compute_gir(model: VarModel, H_max: int, J_max: int | None = None) -> GirSet:
    """Fill Phi_j^(h) with the incremental recursion.

    ``J_max`` defaults to ``p + H_max`` so every coefficient needed to
    decompose responses up to ``H_max`` is stored. Entries with ``j > p``
    are zero for a finite-order VAR.
    """
    if H_max < 1:
        raise ValueError(f"H_max must be >= 1, got {H_max}")
    p, K = model.p, model.K
    if J_max is None:
        J_max = p + H_max
    if J_max < 1:
        raise ValueError(f"J_max must be >= 1, got {J_max}")
    # one spare column so Phi_{j+1}^(h) is always addressable
    width = max(J_max, p) + 1
    lag = np.zeros((width, K, K))
    lag[:p] = model.phi
    out = np.zeros((H_max, width, K, K))
    out[0] = lag
    for h in range(1, H_max):
        prev = out[h - 1]
        out[h, :-1] = prev[1:] + prev[0] @ lag[:-1]
    return GirSet(out[:, :J_max].copy(), model.names, model)


def ma_coefficients(model: VarModel, H: int) -> np.ndarray:
    """Moving-average matrices Psi_0..Psi_H of W_t = sum_h Psi_h u_{t-h}.

    Psi_0 = I and Psi_h = sum_{j=1}^{min(h,p)} Psi_{h-j} Phi_j.
    """
    if not is_stable(model):
        raise UnstableModelError("moving-average representation requires a stable VAR")
    K, p = model.K, model.p
    psi = np.zeros((H + 1, K, K))
    psi[0] = np.eye(K)
    for h in range(1, H + 1):
        for j in range(1, min(h, p) + 1):
            psi[h] += psi[h - j] @ model.phi[j - 1]
    return psi


def granger_coefficients(gir: GirSet, from_var: str, to_var: str, horizon: int) -> np.ndarray:
    """The (to_var, from_var) entries of Phi_j^(horizon) for j = 1..J_max."""
    if not 1 <= horizon <= gir.H_max:
        raise IndexError(f"horizon {horizon} outside 1..{gir.H_max}")
    return gir.coeffs[horizon - 1, :, gir.index(to_var), gir.index(from_var)].copy()


def is_noncausal(
    gir: GirSet, from_var: str, to_var: str, horizon: int, tol: float = 1e-10
) -> bool:
    """True iff ``from_var`` does not Granger-cause ``to_var`` at ``horizon``.

    This is an exact-nullity check with tolerance ``tol``, not a statistical test.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return bool(np.all(np.abs(granger_coefficients(gir, from_var, to_var, horizon)) < tol))


def save_gir_json(gir: GirSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(gir.to_dict()) + "\n", encoding="utf-8")


def gir_slice_csv(
    gir: GirSet, from_var: str, to_var: str, n_lags: int | None = None, digits: int | None = None
) -> str:
    """One (to, from) slice as CSV text: a row per horizon h, a column per lag j."""
    J = gir.J_max if n_lags is None else n_lags
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["h"] + [f"j{j}" for j in range(1, J + 1)])
    for h in range(1, gir.H_max + 1):
        row = granger_coefficients(gir, from_var, to_var, h)[:J]
        cells = [f"{x:.{digits}f}" if digits is not None else repr(float(x)) for x in row]
        writer.writerow([h] + cells)
    return buf.getvalue()

"""Average mediation effects, local-projection regressions and the
Granger non-causality / zero-mediation check.

Under the linear structural equation model implied by a VAR with a
recursively identified shock, the average mediation effect of M on Y at
horizon h, taking the mediator path through period n, is the outcome row of
M's decomposition contribution. The three local projections below estimate
the same objects directly from data:

* total effect      Y_{t+h} on X_t and p lags of W
* mediator equation M_{t+j}, j = 0..n, on X_t and p lags of W
* outcome equation  Y_{t+h} on W_{t+n}, ..., W_t and p further lags of W
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from .dataset import Dataset
from .decomposition import IrfPath, contribution
from .exceptions import DataError, InsufficientDataError
from .gir import GirSet, granger_coefficients
from .ols import lag_matrix, ols
from .var import VarSpec, prepare_values

LpKind = Literal["total-effect", "mediator-equation", "outcome-equation"]


@dataclass(frozen=True)
class MediationEffect:
    value: float
    h: int
    n: int
    mediator: str
    outcome: str


def ame(gir: GirSet, irf: IrfPath, mediator: str, outcome: str, n: int, h: int) -> MediationEffect:
    """Average mediation effect through ``mediator`` on ``outcome``.

    Linear in the treatment, so the effect does not depend on the treatment
    level and no level argument is taken.
    """
    if mediator == outcome:
        raise DataError("mediator and outcome must be different variables")
    value = contribution(gir, irf, mediator, n, h)[gir.index(outcome)]
    return MediationEffect(float(value), h, n, mediator, outcome)


# --- local projections ------------------------------------------------------


@dataclass(frozen=True)
class LpRegression:
    kind: LpKind
    coefficients: np.ndarray
    residuals: np.ndarray
    h: int | None
    n: int | None
    design: np.ndarray = field(repr=False)
    all_coefficients: np.ndarray = field(repr=False)
    regressors: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()


def _roles(data: Dataset, spec: VarSpec, need_mediator: bool = False) -> tuple[int, int, int | None]:
    spec = spec.resolve(data)
    if spec.shock_var is None or spec.outcome_var is None:
        raise DataError("local projections need a treatment (shock) and an outcome variable")
    if need_mediator and spec.mediator_var is None:
        raise DataError("this regression needs a mediator variable")
    m = data.index(spec.mediator_var) if spec.mediator_var is not None else None
    return data.index(spec.shock_var), data.index(spec.outcome_var), m


def _controls(values: np.ndarray, names: tuple[str, ...], p: int, lead: int, demean: bool):
    """Intercept (optional) and W_{t-1..t-p} for t = p..T-1-lead."""
    T = values.shape[0]
    if T - lead - p < values.shape[1] * p + p + 1:
        raise InsufficientDataError(
            f"too few rows ({T}) for {p} lags and a lead of {lead} periods"
        )
    lags = lag_matrix(values, p, p, T - lead)
    labels = [f"{name}(t-{j})" for j in range(1, p + 1) for name in names]
    if demean:
        lags = np.column_stack([np.ones(lags.shape[0]), lags])
        labels = ["const"] + labels
    return lags, labels


def lp_total_effect(data: Dataset, spec: VarSpec, h: int) -> LpRegression:
    """Regress Y_{t+h} on X_t and p lags; the slope on X_t estimates theta_{Y,h}
    in unit-innovation scale."""
    if h < 0:
        raise ValueError(f"h must be >= 0, got {h}")
    x, y, _ = _roles(data, spec)
    V = prepare_values(data, spec)
    T, p = data.T, spec.p
    controls, labels = _controls(V, data.names, p, h, spec.demean)
    t = np.arange(p, T - h)
    X = np.column_stack([V[t, x], controls])
    beta, resid = ols(V[t + h, y], X)
    return LpRegression(
        "total-effect", beta[:1].copy(), resid, h, None, X, beta,
        (f"{data.names[x]}(t)", *labels),
    )


def lp_mediator_equation(data: Dataset, spec: VarSpec, n: int) -> LpRegression:
    """Regress M_{t+j} (j = 0..n) on X_t and p lags on a common sample; the
    slopes estimate (theta_{M,0}, ..., theta_{M,n})."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    x, _, m = _roles(data, spec, need_mediator=True)
    V = prepare_values(data, spec)
    T, p = data.T, spec.p
    controls, labels = _controls(V, data.names, p, n, spec.demean)
    t = np.arange(p, T - n)
    X = np.column_stack([V[t, x], controls])
    Y = np.column_stack([V[t + j, m] for j in range(n + 1)])
    beta, resid = ols(Y, X)
    return LpRegression(
        "mediator-equation", beta[0].copy(), resid, None, n, X, beta,
        (f"{data.names[x]}(t)", *labels),
    )


def lp_outcome_equation(data: Dataset, spec: VarSpec, n: int, h: int) -> LpRegression:
    """Regress Y_{t+h} on every variable at t+n, ..., t and p further lags.

    The mediator block estimates (Phi_{YM,1}^(h-n), ..., Phi_{YM,n+1}^(h-n)).
    Regressor blocks are ordered mediator, outcome, treatment, then any
    remaining variables, each running from t+n back to t. The trailing
    controls stop at lag p, which is exact for a VAR(p).
    """
    if not 0 <= n < h:
        raise ValueError(f"need 0 <= n < h, got n={n}, h={h}")
    x, y, m = _roles(data, spec, need_mediator=True)
    V = prepare_values(data, spec)
    T, p = data.T, spec.p
    controls, labels = _controls(V, data.names, p, h, spec.demean)
    t = np.arange(p, T - h)
    order = [m, y, x] + [k for k in range(data.K) if k not in (m, y, x)]
    blocks, names = [], []
    for k in order:
        for lead in range(n, -1, -1):
            blocks.append(V[t + lead, k])
            names.append(f"{data.names[k]}(t+{lead})" if lead else f"{data.names[k]}(t)")
    X = np.column_stack(blocks + [controls])
    beta, resid = ols(V[t + h, y], X)
    return LpRegression(
        "outcome-equation", beta[: n + 1].copy(), resid, h, n, X, beta,
        (*names, *labels), (f"trailing controls truncated at lag p={p}",),
    )


# --- Granger non-causality implies zero mediation ---------------------------


@dataclass(frozen=True)
class NoncausalityReport:
    """Outcome of checking that Granger non-causality of M for Y at horizon h-n
    forces a zero mediation effect.

    ``noncausal`` is the full condition (all lags j); ``relevant_zero`` the
    weaker one (j <= n+1), which is all the effect depends on. ``passed`` is
    None when neither holds and the implication says nothing.
    """

    n: int
    h: int
    mediator: str
    outcome: str
    granger_coeffs: list[float]
    noncausal: bool
    relevant_zero: bool
    ame: float
    bound: float
    passed: bool | None
    status: str

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def check_zero_mediation(
    gir: GirSet,
    irf: IrfPath,
    mediator: str,
    outcome: str,
    n: int,
    h: int,
    tol: float = 1e-10,
) -> NoncausalityReport:
    if not 0 <= n < h:
        raise ValueError(f"need 0 <= n < h, got n={n}, h={h}")
    coeffs = granger_coefficients(gir, mediator, outcome, h - n)
    noncausal = bool(np.all(np.abs(coeffs) < tol))
    relevant_zero = bool(np.all(np.abs(coeffs[: n + 1]) < tol))
    effect = ame(gir, irf, mediator, outcome, n, h).value
    theta_m = irf.theta[: n + 1, gir.index(mediator)]
    bound = tol * (n + 1) * float(np.max(np.abs(theta_m)))
    if relevant_zero:
        passed = abs(effect) <= bound
        status = "pass" if passed else "fail"
    else:
        passed, status = None, "precondition unmet"
    return NoncausalityReport(
        n, h, mediator, outcome, coeffs.tolist(), noncausal, relevant_zero,
        float(effect), bound, passed, status,
    )


def save_reports_json(reports: list[NoncausalityReport], path: str | Path) -> None:
    Path(path).write_text(json.dumps([r.to_dict() for r in reports], indent=1) + "\n", encoding="utf-8")

"""Reduced-form VAR(p): estimation, stability, simulation and model files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .dataset import Dataset, normalize_roles
from .exceptions import DataError, InsufficientDataError, UnstableModelError, VarMediationError
from .ols import lag_matrix, linear_detrend, ols

STABILITY_MARGIN = 1e-8

Sampler = Callable[[np.random.Generator, tuple[int, int]], np.ndarray]


@dataclass(frozen=True)
class VarSpec:
    """Estimation settings. ``demean`` adds an intercept to every equation;
    ``detrend`` removes a linear time trend from each series beforehand."""

    p: int
    demean: bool = True
    detrend: bool = False
    shock_var: str | None = None
    outcome_var: str | None = None
    mediator_var: str | None = None
    dof_correction: bool = True

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or self.p < 1:
            raise ValueError(f"lag order must be a positive integer, got {self.p!r}")
        labels = [v for v in (self.shock_var, self.outcome_var, self.mediator_var) if v is not None]
        if len(set(labels)) != len(labels):
            raise ValueError(f"shock, outcome and mediator variables must differ: {labels}")

    def resolve(self, data: Dataset) -> "VarSpec":
        """Fill unset shock/outcome/mediator labels from the dataset's roles."""
        mediators = data.mediators
        return VarSpec(
            p=self.p,
            demean=self.demean,
            detrend=self.detrend,
            shock_var=self.shock_var or data.treatment,
            outcome_var=self.outcome_var or data.outcome,
            mediator_var=self.mediator_var or (mediators[0] if mediators else None),
            dof_correction=self.dof_correction,
        )


@dataclass(frozen=True)
class VarModel:
    """W_t = c + Phi_1 W_{t-1} + ... + Phi_p W_{t-p} + u_t,  u_t ~ (0, sigma_u)."""

    phi: np.ndarray
    sigma_u: np.ndarray
    names: tuple[str, ...]
    intercepts: np.ndarray | None = None
    residuals: np.ndarray | None = None
    roles: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float)
        if phi.ndim == 2:
            phi = phi[None]
        if phi.ndim != 3 or phi.shape[1] != phi.shape[2] or phi.shape[0] < 1:
            raise ValueError(f"phi must have shape (p, K, K), got {phi.shape}")
        K = phi.shape[1]
        sigma = np.array(self.sigma_u, dtype=float).reshape(K, K)
        if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-10):
            raise ValueError("sigma_u is not symmetric")
        try:
            np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError:
            raise ValueError("sigma_u is not positive definite") from None
        names = tuple(self.names) if self.names else tuple(f"y{i + 1}" for i in range(K))
        if len(names) != K:
            raise ValueError(f"{len(names)} names for K={K}")
        c = np.zeros(K) if self.intercepts is None else np.array(self.intercepts, dtype=float)
        if c.shape != (K,):
            raise ValueError(f"intercepts must have length {K}")
        arrays = {"phi": phi, "sigma_u": sigma, "intercepts": c}
        if self.residuals is not None:
            arrays["residuals"] = np.array(self.residuals, dtype=float)
        for key, arr in arrays.items():
            arr.flags.writeable = False
            object.__setattr__(self, key, arr)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "roles", normalize_roles(self.roles))

    @property
    def p(self) -> int:
        return self.phi.shape[0]

    @property
    def K(self) -> int:
        return self.phi.shape[1]

    @property
    def stable(self) -> bool:
        return is_stable(self)

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise DataError(f"unknown variable {label!r}; model variables are {list(self.names)}") from None

    def role_var(self, role: str) -> str | None:
        found = [name for name, r in self.roles.items() if r == role]
        return found[0] if found else None

    def companion(self) -> np.ndarray:
        K, p = self.K, self.p
        F = np.zeros((K * p, K * p))
        F[:K] = np.hstack(list(self.phi))
        F[K:, : K * (p - 1)] = np.eye(K * (p - 1))
        return F

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "names": list(self.names),
            "roles": dict(self.roles),
            "phi": self.phi.tolist(),
            "sigma_u": self.sigma_u.tolist(),
            "intercepts": self.intercepts.tolist(),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "VarModel":
        phi = np.array(d["phi"], dtype=float)
        if phi.shape[0] != int(d["p"]):
            raise ValueError(f"model file declares p={d['p']} but holds {phi.shape[0]} matrices")
        return cls(
            phi=phi,
            sigma_u=np.array(d["sigma_u"], dtype=float),
            names=tuple(d["names"]),
            intercepts=d.get("intercepts"),
            roles=d.get("roles") or {},
        )


def save_model(model: VarModel, path: str | Path) -> None:
    # json writes floats with repr(), which round-trips every double exactly
    Path(path).write_text(json.dumps(model.to_dict(), indent=1) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> VarModel:
    return VarModel.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def min_rows(K: int, p: int) -> int:
    return K * p + p + 1


def prepare_values(data: Dataset, spec: VarSpec) -> np.ndarray:
    """Remove a linear time trend from each column when requested."""
    values = np.asarray(data.values, dtype=float)
    if spec.detrend:
        values = linear_detrend(values)
    return values


def estimate_var(data: Dataset, spec: VarSpec) -> VarModel:
    """Equation-by-equation least squares of W_t on p lags (plus intercept when demeaning).

    The innovation covariance divides the residual cross-product by
    ``T - p - K*p - 1`` (with an intercept), or by ``T - p`` when
    ``spec.dof_correction`` is off. Residuals are aligned to ``t = p+1..T``.
    """
    T, K, p = data.T, data.K, spec.p
    if T < min_rows(K, p):
        raise InsufficientDataError(
            f"VAR({p}) with K={K} needs at least {min_rows(K, p)} rows, dataset has {T}"
        )
    values = prepare_values(data, spec)
    X = lag_matrix(values, p, p, T)
    if spec.demean:
        X = np.column_stack([np.ones(T - p), X])
    beta, resid = ols(values[p:], X)
    n_det = 1 if spec.demean else 0
    intercepts = beta[0] if spec.demean else np.zeros(K)
    slopes = beta[n_det:]  # (K*p) x K, block j holds Phi_j'
    phi = np.stack([slopes[j * K : (j + 1) * K].T for j in range(p)])
    dof = (T - p - X.shape[1]) if spec.dof_correction else (T - p)
    if dof <= 0:
        raise InsufficientDataError(f"no residual degrees of freedom (T={T}, p={p}, K={K})")
    sigma = resid.T @ resid / dof
    sigma = (sigma + sigma.T) / 2
    if np.linalg.matrix_rank(sigma) < K:
        raise InsufficientDataError(
            f"residual covariance is singular with {T - p} usable rows for {X.shape[1]} regressors per equation"
        )
    return VarModel(
        phi=phi,
        sigma_u=sigma,
        names=data.names,
        intercepts=intercepts,
        residuals=resid,
        roles=data.roles,
    )


def is_stable(model: VarModel) -> bool:
    """True iff every companion-matrix eigenvalue lies strictly inside the unit circle."""
    radius = np.max(np.abs(np.linalg.eigvals(model.companion())))
    return bool(radius < 1 - STABILITY_MARGIN)


def spectral_radius(model: VarModel) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(model.companion()))))


def gaussian_sampler(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    return rng.standard_normal(shape)


def simulate_var(
    model: VarModel,
    T: int,
    seed: int,
    burn_in: int = 1000,
    sampler: Sampler = gaussian_sampler,
) -> Dataset:
    """Simulate ``T`` periods from a stable VAR, starting from zeros.

    ``sampler(rng, (n, K))`` must return standardized innovations (zero
    mean, identity covariance); they are coloured by the Cholesky factor of
    ``sigma_u``. The same inputs always give bit-identical output.
    """
    if T < 1:
        raise VarMediationError(f"T must be positive, got {T}")
    if burn_in < 0:
        raise VarMediationError(f"burn_in must be non-negative, got {burn_in}")
    if not is_stable(model):
        raise UnstableModelError(
            f"cannot simulate an unstable VAR (spectral radius {spectral_radius(model):.6f})"
        )
    K, p = model.K, model.p
    n = T + burn_in
    rng = np.random.default_rng(seed)
    z = np.asarray(sampler(rng, (n, K)), dtype=float)
    if z.shape != (n, K):
        raise VarMediationError(f"sampler returned shape {z.shape}, expected {(n, K)}")
    u = z @ np.linalg.cholesky(model.sigma_u).T + model.intercepts
    A = np.hstack(list(model.phi))  # K x Kp
    W = np.zeros((n + p, K))
    state = np.zeros(K * p)  # [W_{t-1}, ..., W_{t-p}]
    for t in range(n):
        w = A @ state + u[t]
        W[p + t] = w
        state[K:] = state[:-K]
        state[:K] = w
    return Dataset(W[p + burn_in :], model.names, model.roles)

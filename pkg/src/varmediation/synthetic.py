"""Synthetic eight-variable monthly panel shaped like a monetary-policy VAR.

The data-generating VAR has a policy rate (GS2) that moves a risk premium
(EBP), which in turn depresses output (IP); a default-risk series (EDR)
barely feeds back. It is only a stand-in for structural dry runs; the
numbers carry no empirical content.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from .dataset import Dataset, load_dataset
from .var import VarModel, simulate_var

NAMES = ("IP", "CPI", "EBP", "EDR", "UNEMP", "PCE", "GS2", "WAGE")
ROLES = {"GS2": "treatment", "IP": "outcome", "EBP": "mediator", "EDR": "mediator"}
N_OBS = 383
SEED = 19880201

_FILE = "synthetic_panel.csv"


def synthetic_model() -> VarModel:
    idx = {name: i for i, name in enumerate(NAMES)}
    K = len(NAMES)
    phi1 = np.diag([0.85, 0.9, 0.7, 0.75, 0.9, 0.6, 0.9, 0.85])
    phi2 = -0.08 * np.eye(K)
    links = [  # (to, from, coefficient) on the first lag
        ("EBP", "GS2", 0.15),
        ("IP", "EBP", -0.2),
        ("PCE", "GS2", -0.1),
        ("IP", "PCE", 0.1),
        ("UNEMP", "IP", -0.1),
        ("CPI", "IP", 0.05),
        ("WAGE", "CPI", 0.1),
        ("EDR", "IP", -0.02),
        ("IP", "EDR", -0.01),
        ("GS2", "CPI", 0.05),
    ]
    for to, frm, c in links:
        phi1[idx[to], idx[frm]] = c
    sd = np.array([0.6, 0.2, 0.1, 0.05, 0.1, 0.4, 0.15, 0.2])
    corr = np.eye(K)
    corr[idx["GS2"], idx["EBP"]] = corr[idx["EBP"], idx["GS2"]] = 0.3
    corr[idx["IP"], idx["PCE"]] = corr[idx["PCE"], idx["IP"]] = 0.2
    sigma = corr * np.outer(sd, sd)
    return VarModel(phi=np.stack([phi1, phi2]), sigma_u=sigma, names=NAMES, roles=ROLES)


def generate_panel(T: int = N_OBS, seed: int = SEED) -> Dataset:
    """Simulate the panel afresh, rounded to six decimals as in the bundled file."""
    data = simulate_var(synthetic_model(), T, seed=seed, burn_in=500)
    return Dataset(np.round(data.values, 6), data.names, data.roles)


def panel_path():
    return resources.files("varmediation") / "data" / _FILE


def load_panel() -> Dataset:
    """The bundled 383 x 8 panel with roles GS2 -> (EBP, EDR) -> IP."""
    with resources.as_file(panel_path()) as path:
        return load_dataset(path, ROLES)

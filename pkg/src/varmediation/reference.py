"""Reference three-variable VAR(6) whose Sims response of X to Y is zero for
five periods although Y Granger-causes X at every horizon.

Variables are ordered (X, Y, M); innovations have identity covariance.
"""

from __future__ import annotations

import numpy as np

from .var import VarModel

NAMES = ("X", "Y", "M")

PHI = np.array(
    [
        [[0.6, 0.0, 0.2], [0.2, 0.6, 0.0], [-0.2, 0.4, 0.7]],
        [[-0.4, -0.08, 0.36], [0.0, -0.2, 0.1], [0.1, 0.0, -0.5]],
        [[0.1, -0.2, 0.0], [0.1, 0.2, 0.0], [0.1, 0.0, -0.2]],
        [[0.3, -0.1, 0.19], [0.0, 0.2, 0.0], [0.0, 0.05, 0.15]],
        [[0.0, -0.04, -0.1], [0.0, 0.08, 0.03], [0.0, 0.0, -0.02]],
        [[-0.1, 0.01, 0.03], [-0.08, 0.03, 0.06], [0.0, 0.0, 0.0]],
    ]
)

# Phi_{XY,j}^(h) rounded to 3 decimals; row h-1, column j-1.
GIR_XY_TABLE = np.array(
    [
        [0.0, -0.080, -0.200, -0.100, -0.040, 0.010],
        [0.0, -0.248, -0.220, -0.090, -0.014, 0.006],
        [0.0, -0.214, -0.074, 0.025, 0.009, -0.001],
        [0.0, -0.051, 0.083, 0.065, 0.011, -0.003],
        [0.0, 0.068, 0.027, -0.002, -0.011, 0.002],
        [-0.062, -0.013, -0.101, -0.076, -0.018, 0.005],
        [-0.124, -0.104, -0.128, -0.059, -0.008, 0.000],
        [-0.074, -0.087, -0.044, 0.001, -0.002, -0.006],
        [0.044, -0.012, 0.029, 0.027, -0.003, -0.004],
        [0.054, 0.016, 0.026, 0.006, -0.003, 0.002],
    ]
)


def reference_model(phi: np.ndarray | None = None) -> VarModel:
    """The reference VAR(6); ``phi`` overrides the coefficients (e.g. to perturb one)."""
    return VarModel(
        phi=PHI if phi is None else phi,
        sigma_u=np.eye(3),
        names=NAMES,
        roles={"X": "treatment", "Y": "outcome", "M": "mediator"},
    )

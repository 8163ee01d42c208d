"""Time-series datasets with variable roles, and CSV ingestion."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .exceptions import DataError

ROLES = ("treatment", "outcome", "mediator", "other")

# short keys accepted on the command line and in role mappings
ROLE_ALIASES = {"X": "treatment", "Y": "outcome", "M": "mediator"}


@dataclass(frozen=True)
class Dataset:
    """A T x K observation matrix with column labels and role tags.

    ``roles`` maps a column label to one of ``treatment``, ``outcome``,
    ``mediator`` or ``other``. Untagged columns are treated as ``other``.
    A dataset either carries no treatment/outcome tags at all (e.g. a raw
    simulation) or exactly one of each.
    """

    values: np.ndarray
    names: tuple[str, ...]
    roles: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise DataError(f"values must be 2-D, got shape {values.shape}")
        names = tuple(str(n) for n in self.names)
        if len(names) != values.shape[1]:
            raise DataError(f"{len(names)} names for {values.shape[1]} columns")
        if len(set(names)) != len(names):
            raise DataError(f"duplicate column labels in {names}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise DataError(f"non-finite value at row {bad[0]}, column {names[bad[1]]!r}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "roles", _validate_roles(dict(self.roles), names))

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def K(self) -> int:
        return self.values.shape[1]

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise DataError(f"unknown variable {label!r}; columns are {list(self.names)}") from None

    def column(self, label: str) -> np.ndarray:
        return self.values[:, self.index(label)]

    def role_var(self, role: str) -> str | None:
        """Label of the single column tagged ``role`` (None if untagged)."""
        found = [name for name, r in self.roles.items() if r == role]
        return found[0] if found else None

    @property
    def treatment(self) -> str | None:
        return self.role_var("treatment")

    @property
    def outcome(self) -> str | None:
        return self.role_var("outcome")

    @property
    def mediators(self) -> list[str]:
        return [name for name in self.names if self.roles.get(name) == "mediator"]

    def with_roles(self, roles: Mapping[str, str]) -> "Dataset":
        return Dataset(self.values, self.names, roles)


def normalize_roles(roles: Mapping[str, str] | None) -> dict[str, str]:
    """Turn a role mapping into ``{column: role}`` form.

    Accepts either ``{column: role}`` or the command-line orientation
    ``{"X": column, "Y": column, "M": column}``.
    """
    if not roles:
        return {}
    out: dict[str, str] = {}
    for key, value in roles.items():
        if value in ROLES:
            role, column = value, key
        elif key in ROLE_ALIASES:
            role, column = ROLE_ALIASES[key], value
        elif value in ROLE_ALIASES:
            role, column = ROLE_ALIASES[value], key
        else:
            role, column = value, key
        if column in out:
            raise DataError(f"column {column!r} assigned more than one role")
        out[column] = role
    return out


def parse_roles(text: str) -> dict[str, str]:
    """Parse ``"X=ffr,Y=ip,M=ebp"`` into ``{column: role}``."""
    pairs = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise DataError(f"malformed role assignment {item!r}; expected KEY=column")
        key, column = (s.strip() for s in item.split("=", 1))
        if key not in ROLE_ALIASES:
            raise DataError(f"unknown role key {key!r}; use X, Y or M")
        if key in pairs:
            raise DataError(f"role {key} given twice")
        pairs[key] = column
    return normalize_roles(pairs)


def _validate_roles(roles: dict[str, str], names: tuple[str, ...]) -> dict[str, str]:
    roles = normalize_roles(roles)
    for column, role in roles.items():
        if column not in names:
            raise DataError(f"role {role!r} references missing column {column!r}")
        if role not in ROLES:
            raise DataError(f"unknown role {role!r} for column {column!r}")
    n_treat = sum(r == "treatment" for r in roles.values())
    n_out = sum(r == "outcome" for r in roles.values())
    if roles and (n_treat, n_out) != (1, 1):
        raise DataError(
            f"need exactly one treatment and one outcome column, got {n_treat} and {n_out}"
        )
    return roles


def load_dataset(path: str | Path, roles: Mapping[str, str] | None = None) -> Dataset:
    """Read a header-first numeric CSV, oldest period first."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} cells, found {len(raw)}")
            row = []
            for col, cell in zip(header, raw):
                try:
                    x = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}:{lineno}: non-numeric value {cell!r} in column {col!r}"
                    ) from None
                if not math.isfinite(x):
                    raise DataError(f"{path}:{lineno}: non-finite value in column {col!r}")
                row.append(x)
            rows.append(row)
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows, found {len(rows)}")
    return Dataset(np.array(rows), tuple(header), roles or {})


def save_dataset(data: Dataset, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(data.names)
        for row in data.values:
            writer.writerow([repr(float(x)) for x in row])

"""Command-line interface.

Each analysis stage is its own subcommand; stages communicate through the
JSON model file, so an externally identified impact vector can be supplied
with ``--theta0`` without re-estimating.

    varmediation estimate  --input data.csv --roles X=GS2,Y=IP,M=EBP --lags 12 --out-dir out
    varmediation decompose --model out/model.json --nlist 0,3,6,12 --horizon 36 --out-dir out
    varmediation dmi       --model out/model.json --horizon 36 --out-dir out
    varmediation granger   --model out/model.json --from EBP --to IP --horizon 10
    varmediation mediation --model out/model.json --nlist 0,3 --horizon 12 --out-dir out
    varmediation simulate  --model out/model.json --periods 500 --seed 7 --out-dir out
    varmediation replicate
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import reference
from .dataset import load_dataset, parse_roles, save_dataset
from .decomposition import (
    build_table,
    identify_shock,
    impulse_response,
    irf_to_csv,
    save_table_json,
    shock_from_vector,
    table_to_csv,
)
from .dmi import dmi_series, dmi_to_csv, save_dmi_json
from .exceptions import VarMediationError
from .gir import compute_gir, gir_slice_csv, granger_coefficients
from .mediation import check_zero_mediation, save_reports_json
from .var import VarModel, VarSpec, estimate_var, load_model, save_model, simulate_var, spectral_radius

log = logging.getLogger("varmediation")


@dataclass
class RunConfig:
    input: Path | None = None
    model: Path | None = None
    roles: dict[str, str] = field(default_factory=dict)
    lags: int | None = None
    demean: bool = True
    detrend: bool = False
    dof_correction: bool = True
    normalization: str = "sd"
    theta0: list[float] | None = None
    nlist: list[int] = field(default_factory=lambda: [0])
    horizon: int = 36
    tol: float = 1e-10
    seed: int = 0
    out_dir: Path = Path(".")
    fmt: str = "csv"

    def validate(self) -> None:
        for path in (self.input, self.model):
            if path is not None and not path.is_file():
                raise VarMediationError(f"file not found: {path}")
        if self.horizon < 1:
            raise VarMediationError(f"--horizon must be >= 1, got {self.horizon}")
        bad = [n for n in self.nlist if not 0 <= n < self.horizon]
        if bad:
            raise VarMediationError(f"--nlist entries must lie in [0, {self.horizon}), got {bad}")
        if self.tol <= 0:
            raise VarMediationError("--tol must be positive")


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        input=Path(args.input) if getattr(args, "input", None) else None,
        model=Path(args.model) if getattr(args, "model", None) else None,
        roles=parse_roles(args.roles) if getattr(args, "roles", None) else {},
        lags=getattr(args, "lags", None),
        demean=getattr(args, "demean", True),
        detrend=getattr(args, "detrend", False),
        dof_correction=getattr(args, "dof_correction", True),
        normalization=getattr(args, "normalization", "sd"),
        theta0=getattr(args, "theta0", None),
        nlist=getattr(args, "nlist", None) or [0],
        horizon=getattr(args, "horizon", 36),
        tol=getattr(args, "tol", 1e-10),
        seed=getattr(args, "seed", 0),
        out_dir=Path(getattr(args, "out_dir", ".")),
        fmt=getattr(args, "format", "csv"),
    )
    cfg.validate()
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    return cfg


def _model(cfg: RunConfig) -> VarModel:
    if cfg.model is not None:
        model = load_model(cfg.model)
        if cfg.roles:
            model = VarModel(model.phi, model.sigma_u, model.names, model.intercepts, roles=cfg.roles)
        return model
    if cfg.input is None:
        raise VarMediationError("give either --model or --input")
    if cfg.lags is None:
        raise VarMediationError("--lags is required when estimating from --input")
    data = load_dataset(cfg.input, cfg.roles)
    spec = VarSpec(cfg.lags, demean=cfg.demean, detrend=cfg.detrend, dof_correction=cfg.dof_correction)
    return estimate_var(data, spec)


def _role(model: VarModel, role: str, override: str | None = None) -> str:
    label = override or model.role_var(role)
    if label is None and model.K == 1 and role in ("treatment", "outcome"):
        label = model.names[0]
    if label is None:
        raise VarMediationError(f"no {role} variable: pass --roles or the matching flag")
    model.index(label)
    return label


def _shock(model: VarModel, cfg: RunConfig):
    x = _role(model, "treatment")
    if cfg.theta0 is not None:
        return shock_from_vector(model, x, cfg.theta0)
    return identify_shock(model, x, cfg.normalization)


def _out(cfg: RunConfig, stem: str) -> Path:
    return cfg.out_dir / f"{stem}.{cfg.fmt}"


def cmd_estimate(args) -> int:
    cfg = _config(args)
    if cfg.input is None:
        raise VarMediationError("estimate needs --input")
    model = _model(cfg)
    path = cfg.out_dir / "model.json"
    save_model(model, path)
    radius = spectral_radius(model)
    print(f"VAR({model.p}) on {model.K} variables written to {path}")
    print(f"stable: {model.stable} (spectral radius {radius:.6f})")
    print("sigma_u diagonal: " + ", ".join(f"{n}={s:.6g}" for n, s in zip(model.names, np.diag(model.sigma_u))))
    return 0


def cmd_decompose(args) -> int:
    cfg = _config(args)
    model = _model(cfg)
    outcome = _role(model, "outcome")
    H = cfg.horizon
    gir = compute_gir(model, H)
    irf = impulse_response(gir, _shock(model, cfg), H)
    table = build_table(gir, irf, cfg.nlist, H)
    path = _out(cfg, "decomposition")
    if cfg.fmt == "json":
        save_table_json(table, path)
    else:
        table_to_csv(table, outcome, path)
    irf_to_csv(irf, cfg.out_dir / "irf.csv")
    print(f"decomposition of {outcome} at n={list(table.n_list)}, H={H} written to {path}")
    return 0


def cmd_granger(args) -> int:
    cfg = _config(args)
    model = _model(cfg)
    src = _role(model, "mediator", args.from_var)
    dst = _role(model, "outcome", args.to_var)
    gir = compute_gir(model, cfg.horizon, model.p)
    rows = []
    for h in range(1, cfg.horizon + 1):
        coeffs = granger_coefficients(gir, src, dst, h)
        rows.append({"h": h, "coefficients": coeffs.tolist(), "noncausal": bool(np.all(np.abs(coeffs) < cfg.tol))})
    text = gir_slice_csv(gir, src, dst)
    print(f"gir coefficients Phi_j^(h)[{dst}, {src}], j = 1..{model.p}")
    print(gir_slice_csv(gir, src, dst, digits=3), end="")
    quiet = [str(r["h"]) for r in rows if r["noncausal"]]
    if quiet:
        print(f"{src} does not Granger-cause {dst} at h = {', '.join(quiet)} (tol {cfg.tol:g})")
    else:
        print(f"{src} Granger-causes {dst} at every h <= {cfg.horizon} (tol {cfg.tol:g})")
    path = _out(cfg, "granger")
    if cfg.fmt == "json":
        path.write_text(json.dumps({"from": src, "to": dst, "tol": cfg.tol, "horizons": rows}, indent=1) + "\n", encoding="utf-8")
    else:
        path.write_text(text, encoding="utf-8")
    return 0


def cmd_mediation(args) -> int:
    cfg = _config(args)
    model = _model(cfg)
    m = _role(model, "mediator", args.mediator)
    y = _role(model, "outcome")
    H = cfg.horizon
    gir = compute_gir(model, H)
    irf = impulse_response(gir, _shock(model, cfg), H)
    reports = [
        check_zero_mediation(gir, irf, m, y, n, h, cfg.tol) for n in cfg.nlist for h in range(n + 1, H + 1)
    ]
    path = cfg.out_dir / "mediation.json"
    save_reports_json(reports, path)
    failed = [r for r in reports if r.passed is False]
    print(f"{len(reports)} mediation checks written to {path}; {len(failed)} failed")
    return 1 if failed else 0


def cmd_dmi(args) -> int:
    cfg = _config(args)
    model = _model(cfg)
    m = _role(model, "mediator", args.mediator)
    y = _role(model, "outcome")
    H = cfg.horizon
    gir = compute_gir(model, H)
    irf = impulse_response(gir, _shock(model, cfg), H)
    table = build_table(gir, irf, range(H), H)
    series = dmi_series(table, irf, m, y, H)
    path = _out(cfg, f"dmi_{m}")
    if cfg.fmt == "json":
        save_dmi_json(series, path)
    else:
        dmi_to_csv(series, path)
    print(f"DMI of {m} for {y}, H={H}, written to {path}")
    return 0


def replicate_table(phi: np.ndarray | None = None) -> tuple[np.ndarray, list[tuple[int, int, float, float]]]:
    """Recompute the reference (X, Y) gir slice; return it and any cells that
    differ from the printed values at 3 decimals."""
    model = reference.reference_model(phi)
    gir = compute_gir(model, 10, 6)
    got = np.array([granger_coefficients(gir, "Y", "X", h)[:6] for h in range(1, 11)])
    rounded = np.round(got, 3) + 0.0  # drop negative zeros
    mismatches = [
        (h + 1, j + 1, float(rounded[h, j]), float(reference.GIR_XY_TABLE[h, j]))
        for h in range(10)
        for j in range(6)
        if abs(rounded[h, j] - reference.GIR_XY_TABLE[h, j]) > 1e-9
    ]
    return got, mismatches


def cmd_replicate(args) -> int:
    got, mismatches = replicate_table()
    print("h  " + "".join(f"{'j=' + str(j):>9}" for j in range(1, 7)))
    for h, row in enumerate(got, start=1):
        print(f"{h:<3}" + "".join(f"{x + 0.0:9.3f}" for x in np.round(row, 3)))
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        save_model(reference.reference_model(), out / "reference_model.json")
        (out / "gir_XY.csv").write_text(
            gir_slice_csv(compute_gir(reference.reference_model(), 10, 6), "Y", "X", digits=3),
            encoding="utf-8",
        )
    if mismatches:
        for h, j, a, b in mismatches:
            print(f"mismatch at h={h}, j={j}: computed {a:.3f}, expected {b:.3f}", file=sys.stderr)
        return 1
    print(f"{got.size}/{got.size} cells match")
    return 0


def cmd_simulate(args) -> int:
    cfg = _config(args)
    if cfg.model is None:
        raise VarMediationError("simulate needs --model")
    model = load_model(cfg.model)
    data = simulate_var(model, args.periods, seed=cfg.seed, burn_in=args.burn_in)
    path = cfg.out_dir / "simulated.csv"
    save_dataset(data, path)
    print(f"{data.T} x {data.K} simulated observations written to {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varmediation", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_args(p, lags_required=False):
        p.add_argument("--input", help="CSV with a header row, one row per period")
        p.add_argument("--model", help="model JSON written by 'estimate'")
        p.add_argument("--roles", help="role assignment, e.g. X=GS2,Y=IP,M=EBP")
        p.add_argument("--lags", type=int, required=lags_required)
        p.add_argument("--demean", action=argparse.BooleanOptionalAction, default=True)
        p.add_argument("--detrend", action=argparse.BooleanOptionalAction, default=False)
        p.add_argument("--no-dof-correction", dest="dof_correction", action="store_false")
        p.add_argument("--out-dir", default=".")

    def shock_args(p):
        p.add_argument("--normalization", choices=("unit", "sd"), default="sd")
        p.add_argument("--theta0", type=_float_list, help="externally identified impact vector 'v1,v2,...'")
        p.add_argument("--horizon", type=int, default=36)
        p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("estimate", help="estimate a VAR and write model.json")
    data_args(p, lags_required=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("decompose", help="impulse response decomposition table")
    data_args(p)
    shock_args(p)
    p.add_argument("--nlist", type=_int_list, default=[0, 3, 6, 12])
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("granger", help="multi-horizon Granger coefficients and non-causality verdicts")
    data_args(p)
    p.add_argument("--from", dest="from_var", help="candidate cause (default: mediator role)")
    p.add_argument("--to", dest="to_var", help="target (default: outcome role)")
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_granger)

    p = sub.add_parser("mediation", help="mediation effects and the non-causality check")
    data_args(p)
    shock_args(p)
    p.add_argument("--mediator", help="override the mediator role")
    p.add_argument("--nlist", type=_int_list, default=[0])
    p.set_defaults(func=cmd_mediation)

    p = sub.add_parser("dmi", help="Dynamic Mediation Index series")
    data_args(p)
    shock_args(p)
    p.add_argument("--mediator", help="override the mediator role")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_dmi)

    p = sub.add_parser("replicate", help="reproduce the reference gir table")
    p.add_argument("--out-dir", help="also write the reference model and the table here")
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("simulate", help="simulate data from a model file")
    p.add_argument("--model", required=True)
    p.add_argument("--periods", "-T", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except VarMediationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

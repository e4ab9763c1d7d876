"""Command-line surface: sweep experiments to CSV curve data, correlation
file ingestion, the randomized property battery, and single witness runs.

CSV files carry a '#'-prefixed header embedding the full configuration, so
every output is reproducible from the file alone.  Verdict flips along a
sweep axis are reported as the midpoint of the bracketing grid cells.  Exit
codes: 0 success, 1 usage error, 2 input-validation error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .criterion import (
    ENTANGLED,
    CorrelationData,
    CriterionEvaluator,
    DataValidationError,
    criterion_matrix_from_data,
    detect,
)
from .linalg import HermiticityError
from .observables import collective_spin_set, hp_quadrature_set, pauli_product_set, rotate_so3
from .reference import AnnealParams, ppt_min_eigenvalue, witness_optimize
from .states import bell_state, spin_ensemble_state, werner_mix
from .suite import run_property_battery

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

EW_DIM_CAP = 36

CRITERIA = ("cm", "ds", "ppt", "ew")


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep run depends on; embedded verbatim in the CSV."""

    experiment: str
    m: int
    mu_grid: tuple[float, float, int]
    t_grid: tuple[float, float, int]
    criteria: tuple[str, ...]
    tolerance: float
    seed: int
    out: str | None
    rotate: tuple[float, ...] | None = None
    jobs: int = 1
    ew_sweeps: int = 300
    ew_t0: float = 1.0
    ew_decay: float = 0.98
    ew_box: float = 10.0

    def __post_init__(self):
        for name, (lo, hi, steps) in (("mu", self.mu_grid), ("t", self.t_grid)):
            if steps < 1:
                raise ValueError(f"{name} grid needs at least 1 step")
            if lo > hi:
                raise ValueError(f"{name} grid has min {lo} > max {hi}")
        lo, hi, _ = self.mu_grid
        if lo < 0.0 or hi > 1.0:
            raise ValueError("mu grid must stay inside [0, 1]")
        for c in self.criteria:
            if c not in CRITERIA:
                raise ValueError(f"unknown criterion {c!r}; choose from {','.join(CRITERIA)}")
        if not self.criteria:
            raise ValueError("at least one criterion is required")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    """Inclusive endpoints, uniform spacing."""
    return np.linspace(lo, hi, steps)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _flip_midpoints(xs, flags) -> list[float]:
    return [
        0.5 * (xs[i - 1] + xs[i])
        for i in range(1, len(xs))
        if flags[i] != flags[i - 1]
    ]


def _point_seed(master: int, index: int) -> int:
    return int(np.random.SeedSequence([int(master), int(index)]).generate_state(1)[0])


def _write_csv(out, config: dict, comments, columns, rows):
    lines = ["# entcov " + config["experiment"].lower().replace("_", "-") + " output"]
    lines.append("# config: " + json.dumps(config, sort_keys=True))
    lines.extend("# " + c for c in comments)
    lines.append(",".join(columns))
    lines.extend(",".join(row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        print(f"wrote {out} ({len(rows)} rows)")


def run_werner_bell(cfg: SweepConfig) -> int:
    """Eigenvalue sweep of the two-qubit Werner mixture of the Bell state."""
    evaluator = CriterionEvaluator(pauli_product_set())
    bell = bell_state()
    mus = _grid(*cfg.mu_grid)
    columns = ["mu", "eig_1", "eig_2", "eig_3", "det", "verdict"]
    rows = []
    flags = []
    for mu in mus:
        report = detect(evaluator.matrix(werner_mix(bell, mu)), cfg.tolerance)
        rows.append(
            [_fmt(mu), *(_fmt(e) for e in report.eigenvalues),
             _fmt(report.determinant), report.verdict]
        )
        flags.append(report.verdict == ENTANGLED)
    comments = [f"verdict flip at mu = {_fmt(x)}" for x in _flip_midpoints(mus, flags)]
    _write_csv(cfg.out, asdict(cfg), comments, columns, rows)
    for c in comments:
        print(c)
    return EXIT_OK


def _ew_task(task):
    m, mu, t, params, seed = task
    rho = werner_mix(spin_ensemble_state(m, t), mu)
    result = witness_optimize(rho, m, params, seed)
    return result.min_expectation, result.feasibility_residual


def run_spin_ensemble(cfg: SweepConfig) -> int:
    """Criteria comparison over the (mu, t) grid of two evolved ensembles."""
    if cfg.m < 1:
        raise ValueError("ensemble size m must be >= 1")
    if "ew" in cfg.criteria and (cfg.m + 1) ** 2 > EW_DIM_CAP:
        raise ValueError(
            f"witness runs are capped at joint dimension {EW_DIM_CAP} "
            f"(m <= {int(np.sqrt(EW_DIM_CAP)) - 1}): the constrained annealing cost "
            "grows with the Hilbert space dimension, not the operator count"
        )
    spin = collective_spin_set(cfg.m)
    if cfg.rotate is not None:
        spin = rotate_so3(spin, np.asarray(cfg.rotate, dtype=float).reshape(3, 3))
    evaluators = {}
    if "cm" in cfg.criteria:
        evaluators["cm"] = CriterionEvaluator(spin)
    if "ds" in cfg.criteria:
        evaluators["ds"] = CriterionEvaluator(hp_quadrature_set(cfg.m, spin_set=spin))

    mus = _grid(*cfg.mu_grid)
    ts = _grid(*cfg.t_grid)
    columns = ["mu", "t"]
    if "cm" in cfg.criteria:
        columns += [f"cm_eig_{i + 1}" for i in range(6)] + ["cm_det", "cm_verdict"]
    if "ds" in cfg.criteria:
        columns += ["ds_min_eig", "ds_det", "ds_verdict"]
    if "ppt" in cfg.criteria:
        columns += ["ppt_min_eig"]
    if "ew" in cfg.criteria:
        columns += ["ew_min_expectation", "ew_residual"]

    states = [spin_ensemble_state(cfg.m, t) for t in ts]

    ew_values = {}
    if "ew" in cfg.criteria:
        params = AnnealParams(
            t0=cfg.ew_t0, decay=cfg.ew_decay, sweeps=cfg.ew_sweeps, box_scale=cfg.ew_box
        )
        tasks = []
        for i_mu, mu in enumerate(mus):
            for i_t, t in enumerate(ts):
                index = i_mu * len(ts) + i_t
                tasks.append((cfg.m, float(mu), float(t), params, _point_seed(cfg.seed, index)))
        if cfg.jobs > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                results = list(pool.map(_ew_task, tasks))
        else:
            results = [_ew_task(t) for t in tasks]
        ew_values = dict(zip(range(len(tasks)), results))

    rows = []
    flags = {name: [] for name in ("cm", "ds")}
    for i_mu, mu in enumerate(mus):
        for name in flags:
            flags[name].append([])
        for i_t, t in enumerate(ts):
            rho = werner_mix(states[i_t], mu)
            row = [_fmt(mu), _fmt(t)]
            if "cm" in cfg.criteria:
                report = detect(evaluators["cm"].matrix(rho), cfg.tolerance)
                row += [_fmt(e) for e in report.eigenvalues]
                row += [_fmt(report.determinant), report.verdict]
                flags["cm"][-1].append(report.verdict == ENTANGLED)
            if "ds" in cfg.criteria:
                report = detect(evaluators["ds"].matrix(rho), cfg.tolerance)
                row += [_fmt(report.min_eigenvalue), _fmt(report.determinant), report.verdict]
                flags["ds"][-1].append(report.verdict == ENTANGLED)
            if "ppt" in cfg.criteria:
                row += [_fmt(ppt_min_eigenvalue(rho))]
            if "ew" in cfg.criteria:
                value, residual = ew_values[i_mu * len(ts) + i_t]
                row += [_fmt(value), _fmt(residual)]
            rows.append(row)

    comments = []
    for name in ("cm", "ds"):
        if name not in cfg.criteria:
            continue
        for i_mu, mu in enumerate(mus):
            for x in _flip_midpoints(ts, flags[name][i_mu]):
                comments.append(f"{name} verdict flip at t = {_fmt(x)} for mu = {_fmt(mu)}")
    _write_csv(cfg.out, asdict(cfg), comments, columns, rows)
    for c in comments:
        print(c)
    return EXIT_OK


def run_from_data(path: str, tol: float) -> int:
    """Verdict for an externally measured correlation record."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    data = CorrelationData.from_dict(payload)
    report = detect(criterion_matrix_from_data(data), tol)
    print(f"operators: {len(data.labels)} ({', '.join(data.labels)})")
    print("eigenvalues: " + " ".join(_fmt(e) for e in report.eigenvalues))
    print(f"min_eigenvalue: {_fmt(report.min_eigenvalue)}")
    print(f"determinant: {_fmt(report.determinant)}")
    print(f"verdict: {report.verdict}")
    return EXIT_OK


def run_uncertainty_suite(trials: int, max_n: int, seed: int) -> int:
    results = run_property_battery(trials=trials, max_n=max_n, seed=seed)
    all_passed = True
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        print(f"[{tag}] {r.name}: {r.detail}")
        all_passed &= r.passed
    return EXIT_OK if all_passed else EXIT_NUMERICAL


def run_witness(args) -> int:
    if (args.m + 1) ** 2 > EW_DIM_CAP:
        raise ValueError(
            f"witness runs are capped at joint dimension {EW_DIM_CAP}: the "
            "constrained annealing cost grows with the Hilbert space dimension"
        )
    params = AnnealParams(
        t0=args.t0, decay=args.decay, sweeps=args.sweeps, box_scale=args.box
    )
    rho = werner_mix(spin_ensemble_state(args.m, args.t), args.mu)
    result = witness_optimize(rho, args.m, params, args.seed)
    print(f"min_expectation: {_fmt(result.min_expectation)}")
    print(f"feasibility_residual: {_fmt(result.feasibility_residual)}")
    print(f"iterations: {result.iterations}")
    print("verdict: " + (ENTANGLED if result.min_expectation < -1e-6 else "UNDETECTED"))
    if args.out is not None:
        config = {
            "experiment": "WITNESS",
            "m": args.m, "mu": args.mu, "t": args.t, "seed": args.seed,
            "sweeps": args.sweeps, "t0": args.t0, "decay": args.decay, "box": args.box,
        }
        columns = ["min_expectation", "feasibility_residual", "iterations"]
        columns += [f"c_{i}{j}" for i in range(4) for j in range(4)]
        row = [_fmt(result.min_expectation), _fmt(result.feasibility_residual),
               str(result.iterations)]
        row += [_fmt(c) for c in result.coefficients.ravel()]
        _write_csv(args.out, config, [], columns, [row])
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _sweep_config(args, experiment: str) -> SweepConfig:
    return SweepConfig(
        experiment=experiment,
        m=getattr(args, "m", 0),
        mu_grid=(args.mu_min, args.mu_max, args.mu_steps),
        t_grid=(getattr(args, "t_min", 0.0), getattr(args, "t_max", 0.0),
                getattr(args, "t_steps", 1)),
        criteria=tuple(getattr(args, "criteria", "cm").split(",")),
        tolerance=args.tol,
        seed=getattr(args, "seed", 0),
        out=args.out,
        rotate=tuple(args.rotate) if getattr(args, "rotate", None) else None,
        jobs=getattr(args, "jobs", 1),
        ew_sweeps=getattr(args, "ew_sweeps", 300),
        ew_t0=getattr(args, "ew_t0", 1.0),
        ew_decay=getattr(args, "ew_decay", 0.98),
        ew_box=getattr(args, "ew_box", 10.0),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="entcov",
        description="Entanglement detection from covariance and commutation matrices",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("werner-bell", help="two-qubit Werner-Bell eigenvalue sweep")
    p.add_argument("--mu-min", type=float, default=0.0)
    p.add_argument("--mu-max", type=float, default=1.0)
    p.add_argument("--mu-steps", type=int, default=201)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=lambda a: run_werner_bell(_sweep_config(a, "WERNER_BELL")))

    p = sub.add_parser("spin-ensemble", help="two-ensemble (mu, t) criteria sweep")
    p.add_argument("--m", type=int, required=True, help="qubits per ensemble")
    p.add_argument("--mu-min", type=float, default=1.0)
    p.add_argument("--mu-max", type=float, default=1.0)
    p.add_argument("--mu-steps", type=int, default=1)
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=0.5)
    p.add_argument("--t-steps", type=int, default=200)
    p.add_argument("--criteria", default="cm", help="comma list from cm,ds,ppt,ew")
    p.add_argument("--rotate", type=float, nargs=9, default=None,
                   help="row-major 3x3 rotation applied to both spin triples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for witness points")
    p.add_argument("--ew-sweeps", type=int, default=300, help="witness annealing sweeps")
    p.add_argument("--ew-t0", type=float, default=1.0, help="witness starting temperature")
    p.add_argument("--ew-decay", type=float, default=0.98, help="witness temperature decay")
    p.add_argument("--ew-box", type=float, default=10.0, help="witness coefficient box scale")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=lambda a: run_spin_ensemble(_sweep_config(a, "SPIN_ENSEMBLE")))

    p = sub.add_parser("from-data", help="verdict for a measured correlation file")
    p.add_argument("--input", required=True, help="JSON correlation record")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=lambda a: run_from_data(a.input, a.tol))

    p = sub.add_parser("uncertainty-suite", help="randomized property battery")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=lambda a: run_uncertainty_suite(a.trials, a.max_n, a.seed))

    p = sub.add_parser("witness", help="single witness optimization run")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--t", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweeps", type=int, default=300)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--decay", type=float, default=0.98)
    p.add_argument("--box", type=float, default=10.0)
    p.add_argument("--out", default=None, help="CSV path for the result row")
    p.set_defaults(func=run_witness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except HermiticityError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DataValidationError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()

"""Command-line interface: ``aca fit|transform|depth|explain|simulate|benchmark``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io as aio
from .benchmark import ELLIPTICAL, run_benchmark
from .datagen import SETTINGS, SimulationSpec, simulate
from .depth import dataset_depths
from .errors import InvalidInputError
from .explain import cell_scores, component_loadings
from .model import fit
from .optimize import OptimizerConfig

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4

logger = logging.getLogger("aca")


class UsageError(Exception):
    pass


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return parse


def _add_search_flags(p: argparse.ArgumentParser, seed_required: bool) -> None:
    p.add_argument("--depth", choices=("pd", "apd"), default="pd",
                   help="depth notion (default: pd)")
    p.add_argument("--budget", type=_positive(int), default=1000,
                   help="objective evaluations per point (default: 1000)")
    p.add_argument("--restarts", type=_positive(int), default=10,
                   help="Nelder-Mead restarts per point (default: 10)")
    p.add_argument("--seed", type=int, required=seed_required,
                   default=None if seed_required else 0,
                   help="random seed" + ("" if seed_required else " (default: 0)"))


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(budget_k=args.budget, restarts=args.restarts, seed=args.seed)


def _read(path) -> aio.Table:
    try:
        return aio.read_csv(path)
    except OSError as exc:
        raise aio.DataError(f"cannot read {path}: {exc.strerror}") from None


def _check_rows(table: aio.Table, path) -> np.ndarray:
    if table.values.shape[0] < 2:
        raise aio.DataError(f"{path}: need at least 2 data rows")
    return table.values


def cmd_fit(args) -> int:
    table = _read(args.input)
    X = _check_rows(table, args.input)
    d = X.shape[1]
    if not 1 <= args.components <= d:
        raise UsageError(f"--components must be in [1, {d}], got {args.components}")
    model = fit(X, args.components, args.depth, _config(args))
    aio.save_model(model, args.output)
    out = sys.stdout
    out.write(f"fitted {model.n_components} component(s) on {X.shape[0]} rows, d={d}\n")
    out.write("component  min_depth            anchor_row\n")
    for i, (md, row) in enumerate(zip(model.min_depths, model.anchor_rows), start=1):
        out.write(f"AC{i:<8d} {md:<20.10g} {int(row) + 1}\n")
    out.write("\ncontributions of the three most important variables\n")
    for i in range(1, model.n_components + 1):
        cells = [f"{table.names[v]} ({load:+.3f}, {100 * share:.1f}%)"
                 for v, load, share in component_loadings(model, i).top(3)]
        out.write(f"AC{i}: " + "; ".join(cells) + "\n")
    return 0


def cmd_transform(args) -> int:
    model = aio.load_model(args.model)
    table = _read(args.input)
    X = table.values
    if X.shape[0] and X.shape[1] != model.ambient_dim:
        raise aio.DataError(f"input has {X.shape[1]} columns but the model expects "
                            f"{model.ambient_dim}")
    if X.shape[0] == 0 and len(table.names) not in (0, model.ambient_dim):
        raise aio.DataError(f"input has {len(table.names)} columns but the model expects "
                            f"{model.ambient_dim}")
    scores = model.transform(X.reshape(-1, model.ambient_dim))
    header = [f"AC{i}" for i in range(1, model.n_components + 1)]
    aio.write_csv(args.output, header, scores)
    return 0


def cmd_depth(args) -> int:
    X = _check_rows(_read(args.input), args.input)
    depths, dirs, _ = dataset_depths(X, None, args.depth, _config(args))
    header = ["depth"] + [f"u{j}" for j in range(1, X.shape[1] + 1)]
    aio.write_csv(args.output, header, np.column_stack([depths, dirs]))
    return 0


def _parse_point(text: str, d: int) -> np.ndarray:
    try:
        y = np.array([float(c) for c in text.split(",")])
    except ValueError:
        raise aio.DataError(f"--point is not a comma-separated list of numbers: {text!r}") from None
    if y.size != d or not np.all(np.isfinite(y)):
        raise aio.DataError(f"--point needs {d} finite values, got {y.size}")
    return y


def cmd_explain(args) -> int:
    model = aio.load_model(args.model)
    d = model.ambient_dim
    names = [f"X{j + 1}" for j in range(d)]
    X = None
    if args.input is not None:
        table = _read(args.input)
        if table.values.shape[1] != d:
            raise aio.DataError(f"input has {table.values.shape[1]} columns but the model "
                                f"expects {d}")
        X = _check_rows(table, args.input)
        names = table.names
    if args.point is not None and X is None:
        raise UsageError("--point needs --input with the reference data")
    if not 1 <= args.component <= model.n_components:
        raise UsageError(f"--component must be in [1, {model.n_components}]")
    top = d if args.top is None else min(args.top, d)
    report = component_loadings(model, args.component)
    ranking = [{"rank": r, "variable": names[v], "index": v + 1, "loading": load,
                "share": share}
               for r, (v, load, share) in enumerate(report.top(top), start=1)]
    scores = None
    if args.point is not None:
        y = _parse_point(args.point, d)
        cfg = OptimizerConfig(budget_k=model.config.budget_k,
                              restarts=model.config.restarts, seed=model.config.seed)
        scores = cell_scores(y, X, cfg)
    if args.json:
        doc = {"component": args.component, "ranking": ranking}
        if scores is not None:
            # inf is not valid JSON; it is written as null
            doc["cell_scores"] = {n: (float(s) if np.isfinite(s) else None)
                                  for n, s in zip(names, scores)}
        sys.stdout.write(aio.dumps(doc))
        return 0
    out = sys.stdout
    out.write(f"variable ranking for AC{args.component}\n")
    out.write(f"{'rank':>4}  {'variable':<16} {'loading':>10} {'share':>8}\n")
    for e in ranking:
        out.write(f"{e['rank']:>4}  {e['variable']:<16} {e['loading']:>+10.4f} "
                  f"{100 * e['share']:>7.2f}%\n")
    if scores is not None:
        out.write("\ncell scores\n")
        for n, s in zip(names, scores):
            out.write(f"  {n:<16} {s:.6g}\n")
    return 0


def cmd_simulate(args) -> int:
    try:
        spec = SimulationSpec(args.setting, args.n, args.d, args.eps, args.seed)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None
    ds = simulate(spec)
    names = [f"X{j}" for j in range(1, args.d + 1)]
    aio.write_csv(args.output, names, ds.data)
    aio.write_csv(args.labels, ["anomaly"],
                  [["true" if b else "false"] for b in ds.labels])
    if args.meta:
        meta = {"mu_tilde": list(ds.anomaly_center), "cov": [list(r) for r in ds.normal_cov],
                "n": args.n, "d": args.d, "eps": args.eps, "seed": args.seed,
                "n_anomalies": ds.n_anomalies, "setting": args.setting}
        Path(args.meta).write_text(aio.dumps(meta), encoding="utf-8", newline="\n")
    return 0


def cmd_benchmark(args) -> int:
    if not 0.0 <= args.eps < 1.0:
        raise UsageError("--eps must lie in [0, 1)")
    cfg = OptimizerConfig(budget_k=args.budget, restarts=args.restarts, seed=args.seed)
    result = run_benchmark(args.setting, args.n, args.d, args.eps, args.runs, args.seed,
                           cfg, args.components, args.depth)
    text = aio.dumps(result)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aca", description="Abnormal component analysis.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit abnormal components and save a model file")
    p.add_argument("--input", required=True, help="numeric CSV, optional header row")
    p.add_argument("--components", type=int, required=True, help="number of components p")
    p.add_argument("--output", required=True, help="model JSON path")
    _add_search_flags(p, seed_required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("transform", help="project data onto fitted components")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="scores CSV (AC1..ACp)")
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("depth", help="approximate depth and minimizing direction per row")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    _add_search_flags(p, seed_required=False)
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("explain", help="variable ranking and cell scores")
    p.add_argument("--model", required=True)
    p.add_argument("--component", type=int, default=1, help="component to rank (default: 1)")
    p.add_argument("--input", help="reference data CSV (names and cell scores)")
    p.add_argument("--point", help="comma-separated point for cell scores")
    p.add_argument("--top", type=_positive(int), help="show only the m leading variables")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--seed", type=int, default=None,
                   help="ignored; cell scores reuse the model's seed")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("simulate", help="draw a contaminated benchmark dataset")
    p.add_argument("--setting", choices=SETTINGS, required=True)
    p.add_argument("--n", type=_positive(int), required=True)
    p.add_argument("--d", type=_positive(int), required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", required=True, help="data CSV")
    p.add_argument("--labels", required=True, help="labels CSV")
    p.add_argument("--meta", help="meta JSON")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("benchmark", help="alignment of ACA and PCA with the oracle direction")
    p.add_argument("--setting", choices=ELLIPTICAL, default="mvn_a09")
    p.add_argument("--n", type=_positive(int), default=1000)
    p.add_argument("--d", type=_positive(int), default=10)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--runs", type=_positive(int), default=50)
    p.add_argument("--components", type=_positive(int), default=None,
                   help="nominal p (default: d)")
    p.add_argument("--output", help="JSON path (default: standard output)")
    _add_search_flags(p, seed_required=True)
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"aca {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (aio.DataError, InvalidInputError) as exc:
        sys.stderr.write(f"aca {args.command}: data error: {exc}\n")
        return EXIT_DATA
    except OSError as exc:
        sys.stderr.write(f"aca {args.command}: {exc}\n")
        return EXIT_DATA
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"aca {args.command}: numeric failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands::

    shiftsvm datasets                    summary of the registered datasets
    shiftsvm run --dataset NAME ...      cross-validate one or more methods
    shiftsvm tables ...                  the full method grid and its three tables
    shiftsvm compare LOG [LOG] ...       Wilcoxon test between two methods

Settings are resolved as: command-line flags, then the ``[run]`` section of
``--config``, then registry defaults (fold count), then built-in defaults.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
from pathlib import Path

from .dataio import DataError, dataset_summary, load_dataset, read_registry
from .evaluation import compare_results, read_fold_log, run_experiment, write_fold_log
from .evaluation.experiment import parse_method
from .evaluation.report import (
    CONFUSION_METHODS,
    REGRESSION_METHODS,
    SMOTE_METHODS,
    aggregate_rows,
    confusion_report,
    method_lines,
    regression_table,
    smote_table,
    write_csv,
)
from .smote import SmoteParams
from .svm import SvmParams

log = logging.getLogger("shiftsvm")

DEFAULT_REPS = 10
PAPER_REPS = 100
DEFAULTS = {
    "reps": DEFAULT_REPS,
    "seed": 0,
    "out": "results",
    "jobs": 1,
    "C": 1.0,
    "epsilon": None,
    "tolerance": 1e-3,
    "max_epochs": 1000,
    "solver": "smo",
    "smote_k": 10,
    "smote_paper_formula": False,
}
_TYPES = {"reps": int, "seed": int, "jobs": int, "C": float, "epsilon": float, "tolerance": float,
          "max_epochs": int, "smote_k": int, "folds": int}


class UsageError(Exception):
    pass


def _common(p):
    p.add_argument("--registry", help="dataset registry file (default: bundled registry)")
    p.add_argument("--data-dir", help="directory with the data files (default: $SHIFTSVM_DATA or ./data)")
    p.add_argument("--config", help="INI file whose [run] section supplies defaults for these flags")
    p.add_argument("--reps", type=int, help=f"CV repetitions (default {DEFAULT_REPS})")
    p.add_argument("--paper-scale", action="store_true", help=f"use {PAPER_REPS} repetitions")
    p.add_argument("--folds", type=int, help="number of CV folds (default: registry value)")
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.add_argument("--out", help="output directory (default ./results)")
    p.add_argument("--jobs", type=int, help="parallel worker processes (default 1)")
    p.add_argument("--C", type=float, dest="C", help="box constraint (default 1)")
    p.add_argument("--epsilon", type=float, help="SVR tube width (default IQR(targets)/13.49)")
    p.add_argument("--tolerance", type=float, help="solver stopping tolerance (default 1e-3)")
    p.add_argument("--max-epochs", type=int, dest="max_epochs", help="solver epoch cap (default 1000)")
    p.add_argument("--solver", choices=("smo", "dcd"), help="dual solver (default smo)")
    p.add_argument("--smote-k", type=int, dest="smote_k", help="SMOTE neighbours (default 10)")
    p.add_argument("--smote-paper-formula", action="store_true", default=None,
                   help="generate x + r*(x - y) instead of x + r*(y - x)")


def build_parser():
    parser = argparse.ArgumentParser(prog="shiftsvm", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("datasets", help="print the registered dataset summary")
    p.add_argument("--registry")
    p.add_argument("--data-dir")
    p.add_argument("--datasets", nargs="+")

    p = sub.add_parser("run", help="cross-validate methods on one dataset")
    p.add_argument("--dataset", required=True, help="registered dataset name")
    p.add_argument("--method", action="append", dest="methods",
                   help="csvm | smote | omega | omega-tilde | shift:M (repeatable)")
    _common(p)

    p = sub.add_parser("tables", help="run the full grid and write the three result tables")
    p.add_argument("--datasets", nargs="+", help="subset of registered datasets (default: all)")
    _common(p)

    p = sub.add_parser("compare", help="Wilcoxon signed-rank test between two methods")
    p.add_argument("logs", nargs="+", help="one or two fold logs (JSON lines)")
    p.add_argument("--methods", nargs=2, metavar=("A", "B"), help="method tags to compare")
    p.add_argument("--dataset", help="dataset to use when a log holds several")
    p.add_argument("--metric", choices=("gmean", "f1", "both"), default="both")
    p.add_argument("--alpha", type=float, default=0.05)
    return parser


def _settings(args, registry_folds=None):
    conf = dict(DEFAULTS)
    if getattr(args, "config", None):
        cp = configparser.ConfigParser(interpolation=None)
        if not cp.read(args.config):
            raise UsageError(f"cannot read config file {args.config}")
        if cp.has_section("run"):
            section = cp["run"]
            for raw, value in section.items():
                key = raw.replace("-", "_")
                key = "C" if key == "c" else key
                if key == "smote_paper_formula":
                    conf[key] = section.getboolean(raw)
                elif key in _TYPES:
                    conf[key] = _TYPES[key](value)
                elif key in conf or key == "methods":
                    conf[key] = value
                else:
                    raise UsageError(f"unknown config key {key!r}")
    for key in list(DEFAULTS) + ["folds"]:
        value = getattr(args, key, None)
        if value is not None:
            conf[key] = value
    if getattr(args, "paper_scale", False):
        conf["reps"] = PAPER_REPS
    conf.setdefault("folds", None)
    if conf["folds"] is None and registry_folds is not False:
        conf["folds"] = registry_folds or 10
    if conf["reps"] < 1:
        raise UsageError("--reps must be >= 1")
    if conf["folds"] is not None and conf["folds"] < 2:
        raise UsageError("--folds must be >= 2")
    if conf["reps"] >= PAPER_REPS:
        log.warning("running %d repetitions; this can take hours", conf["reps"])
    return conf


def _params(conf):
    try:
        svm = SvmParams(C=conf["C"], epsilon=conf["epsilon"], tolerance=conf["tolerance"],
                        max_epochs=conf["max_epochs"], solver=conf["solver"])
        smote = SmoteParams(k=conf["smote_k"], paper_formula=bool(conf["smote_paper_formula"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return svm, smote


def _registry(args):
    return read_registry(args.registry, args.data_dir)


def cmd_datasets(args):
    specs = _registry(args)
    names = args.datasets or list(specs)
    print(f"{'dataset':<14} {'#S':>5} {'#F':>5} {'minority : majority'}")
    missing = []
    for name in names:
        if name not in specs:
            raise UsageError(f"unknown dataset {name!r}")
        if not Path(specs[name].path).is_file():
            missing.append(name)
            print(f"{name:<14} (data file not found: {specs[name].path})")
            continue
        print(dataset_summary(load_dataset(specs[name])))
    if missing:
        raise UsageError(f"missing data for {', '.join(missing)}")
    return 0


def cmd_run(args):
    specs = _registry(args)
    if args.dataset not in specs:
        raise UsageError(f"unknown dataset {args.dataset!r}; registered: {', '.join(specs)}")
    spec = specs[args.dataset]
    conf = _settings(args, spec.folds)
    methods = args.methods or (conf["methods"].split() if "methods" in conf else None)
    if not methods:
        raise UsageError("give at least one --method")
    try:
        methods = [parse_method(m) for m in methods]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ds = load_dataset(spec)
    for m in methods:
        try:
            m.check(ds.n_minus, ds.n_plus)
        except ValueError as exc:
            raise UsageError(f"{ds.name}: {exc}") from exc
    svm, smote = _params(conf)
    results = run_experiment(ds, methods, conf["reps"], conf["folds"], conf["seed"], svm, smote, conf["jobs"])
    out = Path(conf["out"])
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{ds.name}_seed{conf['seed']}"
    log_path = out / f"{stem}_folds.jsonl"
    write_fold_log(log_path, list(results.values()))
    # aggregates are recomputed from the log so they carry no hidden state
    rebuilt = {ds.name: {key[1]: res for key, res in read_fold_log(log_path).items()}}
    write_csv(out / f"{stem}_aggregate.csv", aggregate_rows(rebuilt))
    lines = method_lines(rebuilt)
    (out / f"{stem}_aggregate.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    print(f"fold log: {log_path}")
    return 0


def cmd_tables(args):
    specs = _registry(args)
    names = args.datasets or list(specs)
    for name in names:
        if name not in specs:
            raise UsageError(f"unknown dataset {name!r}; registered: {', '.join(specs)}")
        if not Path(specs[name].path).is_file():
            raise UsageError(f"{name}: data file not found: {specs[name].path}")
    # fold count stays per-dataset unless set by flag or config
    conf = _settings(args, registry_folds=False)
    svm, smote = _params(conf)
    out = Path(conf["out"])
    out.mkdir(parents=True, exist_ok=True)
    methods = list(dict.fromkeys(REGRESSION_METHODS + SMOTE_METHODS + CONFUSION_METHODS))
    results = {}
    for name in names:
        ds = load_dataset(specs[name])
        folds = conf["folds"] or specs[name].folds or 10
        log.info("%s: %d x %d-fold CV, %d methods", name, conf["reps"], folds, len(methods))
        res = run_experiment(ds, methods, conf["reps"], folds, conf["seed"], svm, smote, conf["jobs"])
        log_path = out / f"tables_{name}_folds.jsonl"
        write_fold_log(log_path, list(res.values()))
        results[name] = {key[1]: r for key, r in read_fold_log(log_path).items()}
    texts = {
        "table_regression": regression_table(results),
        "table_smote": smote_table(results),
        "table_confusion": confusion_report(results),
    }
    for stem, text in texts.items():
        (out / f"{stem}.txt").write_text(text)
        print(text)
    write_csv(out / "table_regression.csv", aggregate_rows(results, REGRESSION_METHODS))
    write_csv(out / "table_smote.csv", aggregate_rows(results, SMOTE_METHODS))
    write_csv(out / "table_confusion.csv", aggregate_rows(results, CONFUSION_METHODS))
    return 0


def _pick(results, method, dataset, path):
    if dataset:
        results = {k: v for k, v in results.items() if k[0] == dataset}
    if method:
        results = {k: v for k, v in results.items() if k[1] == method}
    if len(results) != 1:
        found = sorted(f"{d}/{m}" for d, m in results)
        raise UsageError(f"{path}: need exactly one result, found {found or 'none'}; "
                         "narrow it with --methods/--dataset")
    return next(iter(results.values()))


def cmd_compare(args):
    """``compare A.jsonl B.jsonl`` takes one side from each log;
    ``compare LOG --methods A B`` takes both sides from one log."""
    if len(args.logs) > 2:
        raise UsageError("give one or two fold logs")
    logs = [read_fold_log(p) for p in args.logs]
    names = args.methods or (None, None)
    if len(logs) == 1:
        if not args.methods:
            raise UsageError("with a single log, name two methods with --methods")
        logs = logs * 2
        paths = args.logs * 2
    else:
        paths = args.logs
    a, b = (_pick(lg, m, args.dataset, p) for lg, m, p in zip(logs, names, paths))
    metrics = ("gmean", "f1") if args.metric == "both" else (args.metric,)
    for metric in metrics:
        try:
            cmp = compare_results(a, b, metric, args.alpha)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        print(cmp.report())
    return 0


COMMANDS = {"datasets": cmd_datasets, "run": cmd_run, "tables": cmd_tables, "compare": cmd_compare}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DataError, ValueError, RuntimeError, OSError) as exc:
        print(f"shiftsvm {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Plain-text and CSV renderings of the result tables.

``results`` arguments are ``{dataset: {method_tag: ExperimentResult}}``.

* :func:`regression_table` -- G-mean/F1 of rSVM on Omega, Omega~ and
  Omega~s(1.0), best value per column in brackets.
* :func:`smote_table` -- SMOTE against Omega~s(m) for a range of m; an
  asterisk marks the winner of a significant Wilcoxon difference between
  SMOTE and the best shifted variant.
* :func:`confusion_report` -- averaged confusion tables, rounded half away
  from zero.
"""

from __future__ import annotations

import csv
import io

from .experiment import compare_results, parse_method

__all__ = [
    "REGRESSION_METHODS",
    "SMOTE_METHODS",
    "CONFUSION_METHODS",
    "regression_table",
    "smote_table",
    "confusion_report",
    "aggregate_rows",
    "write_csv",
    "method_lines",
]

REGRESSION_METHODS = ("omega", "omega-tilde", "shift:1.0")
SMOTE_METHODS = ("smote", "shift:1.0", "shift:1.1", "shift:1.2", "shift:1.3", "shift:1.4", "shift:1.5")
CONFUSION_METHODS = ("smote", "shift:1.0", "shift:1.1")
METRICS = ("gmean", "f1")


def _mean(res, metric):
    return res.gmean_mean if metric == "gmean" else res.f1_mean


def _std(res, metric):
    return res.gmean_std if metric == "gmean" else res.f1_std


def _label(tag):
    return parse_method(tag).label


def _grid(results, methods, marks):
    datasets = list(results)
    head = f"{'':<16}" + "".join(f"{ds + ' (' + str(_first(results[ds]).reps) + 'x' + str(_first(results[ds]).folds) + ')':^22}" for ds in datasets)
    sub = f"{'':<16}" + "".join(f"{'G-mean':>11}{'F1':>11}" for _ in datasets)
    lines = [head, sub, "-" * len(sub)]
    for tag in methods:
        row = f"{_label(tag):<16}"
        dev = f"{'':<16}"
        for ds in datasets:
            res = results[ds][tag]
            for metric in METRICS:
                text = f"{_mean(res, metric):.1f}"
                if (ds, metric) in marks and tag in marks[(ds, metric)]:
                    text = marks[(ds, metric)][tag].format(text)
                row += f"{text:>11}"
                dev += f"{'+-' + format(_std(res, metric), '.1f'):>11}"
        lines += [row, dev]
    lines.append("-" * len(sub))
    return lines


def _first(d):
    return next(iter(d.values()))


def _best(results, ds, methods, metric):
    vals = {tag: round(_mean(results[ds][tag], metric), 1) for tag in methods}
    top = max(vals.values())
    return [tag for tag, v in vals.items() if v == top]


def regression_table(results, alpha=0.05):
    marks = {}
    notes = []
    for ds in results:
        for metric in METRICS:
            marks[(ds, metric)] = {tag: "[{}]" for tag in _best(results, ds, REGRESSION_METHODS, metric)}
            shifted = results[ds]["shift:1.0"]
            for other in ("omega", "omega-tilde"):
                cmp = compare_results(shifted, results[ds][other], metric, alpha)
                notes.append(f"  {ds:<14} {metric:<6} Omega~s(1.0) vs {_label(other):<7} "
                             f"p={cmp.test.pvalue:.3g} "
                             f"{'significant' if cmp.significant else 'not significant'}"
                             f"{', better: ' + _label(cmp.better) if cmp.better else ''}")
    lines = ["Averaged G-mean and F1-score (%) of rSVM with the Omega, Omega~ and Omega~s(1.0) targets.",
             "Best value per column in brackets."]
    lines += _grid(results, REGRESSION_METHODS, marks)
    lines.append(f"Two-sided Wilcoxon signed-rank test over repetition means, alpha={alpha:g}:")
    lines += notes
    return "\n".join(lines) + "\n"


def smote_table(results, alpha=0.05):
    shifted = [t for t in SMOTE_METHODS if t != "smote"]
    marks = {}
    notes = []
    for ds in results:
        for metric in METRICS:
            m = {tag: "[{}]" for tag in _best(results, ds, SMOTE_METHODS, metric)}
            best_shift = _best(results, ds, shifted, metric)[0]
            cmp = compare_results(results[ds][best_shift], results[ds]["smote"], metric, alpha)
            if cmp.significant and cmp.better:
                m[cmp.better] = "*" + m.get(cmp.better, "{}")
            marks[(ds, metric)] = m
            notes.append(f"  {ds:<14} {metric:<6} {_label(best_shift)} vs SMOTE p={cmp.test.pvalue:.3g}")
    lines = ["Averaged G-mean and F1-score (%) of cSVM + SMOTE and rSVM with Omega~s(m).",
             "Best value per column in brackets; * marks a significant difference (two-sided Wilcoxon,",
             f"alpha={alpha:g}) between SMOTE and the best Omega~s(m), placed on the better of the two."]
    lines += _grid(results, SMOTE_METHODS, marks)
    lines += notes
    return "\n".join(lines) + "\n"


def confusion_report(results):
    datasets = list(results)
    head = f"{'true | pred':<16}" + "".join(f"{ds:^16}" for ds in datasets)
    sub = f"{'':<16}" + "".join(f"{'Min':>8}{'Maj':>8}" for _ in datasets)
    lines = ["Averaged confusion tables (rows: true class, columns: predicted class).", head, sub, "-" * len(sub)]
    for tag in CONFUSION_METHODS:
        top = f"{_label(tag):<16}"
        bottom = f"{'':<16}"
        for ds in datasets:
            ct = results[ds][tag].confusion.rounded()
            top += f"{ct.t_minus:>8}{ct.f_plus:>8}"
            bottom += f"{ct.f_minus:>8}{ct.t_plus:>8}"
        lines += [top, bottom, "-" * len(sub)]
    return "\n".join(lines) + "\n"


def aggregate_rows(results, methods=None):
    """Flat rows (dicts) for CSV output, one per (dataset, method)."""
    rows = []
    for ds, by_method in results.items():
        for tag, res in by_method.items():
            if methods is not None and tag not in methods:
                continue
            ct = res.confusion
            rows.append({
                "dataset": ds,
                "method": tag,
                "reps": res.reps,
                "folds": res.folds,
                "seed": res.seed,
                "gmean_mean": f"{res.gmean_mean:.4f}",
                "gmean_std": f"{res.gmean_std:.4f}",
                "f1_mean": f"{res.f1_mean:.4f}",
                "f1_std": f"{res.f1_std:.4f}",
                "t_minus": f"{ct.t_minus:.4f}",
                "f_plus": f"{ct.f_plus:.4f}",
                "f_minus": f"{ct.f_minus:.4f}",
                "t_plus": f"{ct.t_plus:.4f}",
                "non_converged": res.non_converged,
            })
    return rows


def write_csv(path, rows):
    if not rows:
        raise ValueError("nothing to write")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def method_lines(results):
    """``mean +- std`` summary lines for every (dataset, method)."""
    return [res.summary_line() for by in results.values() for res in by.values()]


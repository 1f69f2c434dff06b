"""Plain-text and JSON renderings of an experiment report."""

from __future__ import annotations

import json

from seqlid.harness import ExperimentReport, RunReport


def _pct(x: float) -> str:
    return "-" if x != x else f"{100 * x:.1f}"


def _num(x: float | None, digits: int = 2) -> str:
    return "" if x is None else f"{x:.{digits}f}"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    fmt = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
    return [fmt(header), "  ".join("-" * w for w in widths)] + [fmt(r) for r in rows]


def detail_run(report: ExperimentReport) -> RunReport:
    """Largest training size at the highest threshold."""
    return report.run(max(report.spec.train_sizes), max(report.thresholds))


def render_text(report: ExperimentReport) -> str:
    sizes = list(report.spec.test_file_sizes)
    out = [f"mode={report.mode.value} categories={len(report.categories)} end_policy={report.end_policy.value}", ""]

    out.append("Accuracy (%) and decisiveness (%) by tokens of test data")
    header = ["train", "threshold"] + [f"acc{s}" for s in sizes] + ["accAll"]
    header += [f"dec{s}" for s in sizes] + ["decAll"]
    rows = []
    for r in report.runs:
        cells = [r.metrics(s) for s in sizes] + [r.metrics()]
        rows.append(
            [str(r.train_size), f"{r.threshold:g}"]
            + [_pct(c.accuracy) for c in cells]
            + [_pct(c.decisiveness) for c in cells]
        )
    out += _table(header, rows)

    out += ["", "Average number of tokens read before convergence"]
    rows = []
    for r in report.runs:
        c = r.convergence
        rows.append(
            [str(r.train_size), f"{r.threshold:g}", _num(c.correct), _num(c.incorrect), _num(c.all), _num(c.max, 0)]
        )
    out += _table(["train", "threshold", "correct", "incorrect", "all", "max"], rows)

    detail = detail_run(report)
    rem = detail.remaining
    out += [
        "",
        f"Categories remaining at end of input (train={detail.train_size}, threshold={detail.threshold:g})",
    ]
    rows = [[str(k), str(c), str(i), str(a)] for k, (c, i, a) in rem.histogram.items()]
    out += _table(["remaining", "correct", "incorrect", "all"], rows)
    out.append(f"mean remaining: {_num(rem.mean)} of {len(report.categories)}")

    out += ["", f"Confusion matrix (rows actual, columns assigned; train={detail.train_size}, threshold={detail.threshold:g})"]
    cats = report.categories
    matrix = detail.confusion(cats)
    rows = [[a] + [str(matrix[a][p]) if matrix[a][p] else "" for p in cats] for a in cats]
    out += _table([""] + cats, rows)
    return "\n".join(out) + "\n"


def render_json(report: ExperimentReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=False) + "\n"

"""Campaign reports: delimited text and an optional rendered figure.

One line per run, space delimited, stable field order::

    run 3 max_weight=12 proof_found len=5 rich=3 cplx=11 size=41

Unproved runs carry "-" in the metric fields.  The figure renderer is
the only place the package touches matplotlib; it is imported lazily
so plain text paths never pay for it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .campaign import RunReport


def report_line(report: RunReport) -> str:
    m = report.metrics
    if report.proof is None or m is None:
        length = rich = cplx = size = "-"
    else:
        length, rich, cplx, size = m.length, m.richness, m.complexity, m.size
    return (f"run {report.run} {report.delta} {report.outcome} "
            f"len={length} rich={rich} cplx={cplx} size={size}")


def report_lines(reports: Iterable[RunReport]) -> str:
    return "".join(report_line(r) + "\n" for r in reports)


def write_report(reports: Iterable[RunReport], path) -> None:
    Path(path).write_text(report_lines(reports))


def render_report_figure(reports: Iterable[RunReport], path,
                         title: str = "campaign") -> None:
    """Bar chart of proof length and size per run, written to `path`.

    Unproved runs show as empty slots so the x axis still matches the
    report text line for line.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    reports = list(reports)
    runs = [str(r.run) for r in reports]
    lengths = [r.metrics.length if r.proof is not None and r.metrics else 0
               for r in reports]
    sizes = [r.metrics.size if r.proof is not None and r.metrics else 0
             for r in reports]
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(8, 5), sharex=True)
    top.bar(runs, lengths, color="#4878cf")
    top.set_ylabel("length")
    top.set_title(title)
    bottom.bar(runs, sizes, color="#6acc65")
    bottom.set_ylabel("size")
    bottom.set_xlabel("run")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)

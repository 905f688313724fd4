"""Report emission: delimited tables, figures, and key:value summaries.

All writers are deterministic (identical results give byte-identical
files) and atomic (temp file in the target directory, then rename).
Numbers are formatted to 6 significant digits; CSV follows RFC 4180 with
CRLF line endings and a header row naming SI units.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "anchorsim"
matplotlib.rcParams["svg.fonttype"] = "none"

import matplotlib.pyplot as plt

CSV_FORMAT = "csv"
SVG_FORMAT = "svg"
SUMMARY_FORMAT = "summary"
FORMATS = (CSV_FORMAT, SVG_FORMAT, SUMMARY_FORMAT)


def fmt(value) -> str:
    """Render one cell: floats to 6 significant digits, blanks for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.6g}"
    return str(value)


@dataclass
class TableResult:
    """A rectangular table plus optional labelled footer rows and scalars.

    ``columns`` name the CSV header; ``rows`` are sequences matching it.
    ``footer`` rows start with a label cell and pad to the column count.
    ``summary`` is an ordered mapping rendered by the summary format.
    ``curves`` describes the figure: (x_label, y_label, [(name, xs, ys)]).
    """

    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    footer: list[tuple] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    title: str = ""
    x_label: str = ""
    y_label: str = ""
    curves: list[tuple] = field(default_factory=list)
    markers: list[tuple] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        for row in self.footer:
            cells = [fmt(v) for v in row]
            cells += [""] * (len(self.columns) - len(cells))
            writer.writerow(cells)
        return buf.getvalue()

    def to_summary(self) -> str:
        lines = [f"{key}: {fmt(value)}" for key, value in self.summary.items()]
        return "\n".join(lines) + "\n"

    def to_svg(self) -> bytes:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        try:
            if self.curves:
                for name, xs, ys in self.curves:
                    ax.plot(xs, ys, label=name)
                ax.legend(loc="best")
            for label, x, y in self.markers:
                ax.axvline(x, color="0.4", linestyle="--", linewidth=0.8)
                ax.plot([x], [y], marker="o", color="0.2")
                ax.annotate(
                    label,
                    xy=(x, y),
                    xytext=(4, 6),
                    textcoords="offset points",
                    fontsize=9,
                )
            if self.curves or self.markers:
                ax.axhline(0.0, color="0.8", linewidth=0.6)
            ax.set_xlabel(self.x_label)
            ax.set_ylabel(self.y_label)
            if self.title:
                ax.set_title(self.title)
            buf = io.BytesIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
            return buf.getvalue()
        finally:
            plt.close(fig)


def atomic_write_text(path: str, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def atomic_write_bytes(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".anchorsim-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_report(result: TableResult, fmt_name: str, out_path: str | None) -> str | None:
    """Write ``result`` in the requested format.

    With ``out_path`` None, csv and summary render to the returned string
    (the CLI prints it); the svg format requires a path.
    """
    if fmt_name not in FORMATS:
        raise ValueError(f"unknown format {fmt_name!r}; expected one of {FORMATS}")
    if fmt_name == CSV_FORMAT:
        text = result.to_csv()
    elif fmt_name == SUMMARY_FORMAT:
        text = result.to_summary()
    else:
        data = result.to_svg()
        if out_path is None:
            raise ValueError("svg output needs --out <path>")
        atomic_write_bytes(out_path, data)
        return None
    if out_path is None:
        return text
    atomic_write_text(out_path, text)
    return None


def emit_plot(result: TableResult, plot_path: str) -> None:
    """Render the figure companion next to a delimited report."""
    atomic_write_bytes(plot_path, result.to_svg())

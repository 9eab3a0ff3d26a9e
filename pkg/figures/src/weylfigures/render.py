"""Render torusweyl CSV outputs into static images.

Strictly a presentation layer: numbers are plotted exactly as read and never
re-derived.  Cell values are kept as the raw strings from the file so that
``dump_plotted`` can echo the plotted columns byte-equal to the input.

Four figure kinds, keyed to the producing subcommands' schemas:

    scatter   draw_index,re,im                      (spectrum)
    counting  r,mean_count,stderr,weyl_prediction   (weyl-sweep)
    fig3      log10_inv_delta,lhs,rhs_C1            (rmt-fig3)
    portrait  re_z,im_z,sigma_min                   (pseudospectrum)

Images are deterministic: Agg backend, fixed size and fonts, axes from the
data with 5% margins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

KIND_SCHEMAS = {
    "scatter": ["draw_index", "re", "im"],
    "counting": ["r", "mean_count", "stderr", "weyl_prediction"],
    "fig3": ["log10_inv_delta", "lhs", "rhs_C1"],
    "portrait": ["re_z", "im_z", "sigma_min"],
}

# columns echoed by --dump-plotted, in plot order
PLOTTED_COLUMNS = {
    "scatter": ["re", "im"],
    "counting": ["r", "mean_count", "stderr", "weyl_prediction"],
    "fig3": ["log10_inv_delta", "lhs", "rhs_C1"],
    "portrait": ["re_z", "im_z", "sigma_min"],
}

FIGSIZE = (6.4, 4.8)
DPI = 130


class SchemaError(ValueError):
    """Input CSV does not match the figure kind's schema."""


@dataclass
class FigureJob:
    inputs: list[Path]
    kind: str
    output: Path
    overlay_disk: float | None = None
    overlay_strip: float | None = None

    def __post_init__(self):
        if self.kind not in KIND_SCHEMAS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; "
                              f"known: {sorted(KIND_SCHEMAS)}")
        self.inputs = [Path(p) for p in self.inputs]
        self.output = Path(self.output)
        for p in self.inputs:
            if not p.exists():
                raise SchemaError(f"input {p} does not exist")


@dataclass
class Table:
    """A CSV held as raw strings, column-addressable."""

    header: list[str]
    rows: list[list[str]]
    columns: dict[str, list[str]] = field(init=False)

    def __post_init__(self):
        self.columns = {name: [row[i] for row in self.rows]
                        for i, name in enumerate(self.header)}

    def floats(self, name: str) -> np.ndarray:
        return np.array([float(v) for v in self.columns[name]])


def read_table(path: Path, kind: str) -> Table:
    lines = [ln for ln in Path(path).read_text().splitlines()
             if ln and not ln.startswith("#")]
    if not lines:
        raise SchemaError(f"{path}: empty CSV")
    header = lines[0].split(",")
    expected = KIND_SCHEMAS[kind]
    if header != expected:
        missing = [c for c in expected if c not in header]
        extra = [c for c in header if c not in expected]
        offending = (missing or extra or header)[0]
        raise SchemaError(
            f"{path}: column {offending!r} does not match the {kind} schema "
            f"{expected}, got {header}")
    rows = [ln.split(",") for ln in lines[1:]]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    for ln in rows:
        if len(ln) != len(header):
            raise SchemaError(f"{path}: ragged row {ln}")
    return Table(header=header, rows=rows)


def _margins(lo: float, hi: float) -> tuple[float, float]:
    width = hi - lo
    pad = 0.05 * (width if width > 0 else max(abs(hi), 1.0))
    return lo - pad, hi + pad


def _render_scatter(job: FigureJob, table: Table, ax):
    re = table.floats("re")
    im = table.floats("im")
    ax.scatter(re, im, s=2.0, c="tab:blue", linewidths=0, rasterized=True)
    extent = [re.min(), re.max(), im.min(), im.max()]
    if job.overlay_disk:
        th = np.linspace(0, 2 * np.pi, 361)
        r = job.overlay_disk
        ax.plot(r * np.cos(th), r * np.sin(th), "r-", lw=1.2)
        extent[0] = min(extent[0], -r)
        extent[1] = max(extent[1], r)
    if job.overlay_strip:
        r = job.overlay_strip
        for xv in (-r, r):
            ax.axvline(xv, color="darkorange", lw=1.2, ls="--")
    ax.set_xlim(*_margins(extent[0], extent[1]))
    ax.set_ylim(*_margins(extent[2], extent[3]))
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_aspect("equal")


def _render_counting(job: FigureJob, table: Table, ax):
    r = table.floats("r")
    mean = table.floats("mean_count")
    err = table.floats("stderr")
    pred = table.floats("weyl_prediction")
    ax.errorbar(r, mean, yerr=err, fmt="o-", ms=3, lw=1.0, capsize=2,
                label="mean count")
    ax.plot(r, pred, "k--", lw=1.2, label="phase-space prediction")
    ax.set_xlim(*_margins(r.min(), r.max()))
    lo = min(mean.min(), pred.min())
    hi = max(mean.max(), pred.max())
    ax.set_ylim(*_margins(lo, hi))
    ax.set_xlabel("r")
    ax.set_ylabel("count")
    ax.legend(frameon=False)


def _render_fig3(job: FigureJob, table: Table, ax):
    x = table.floats("log10_inv_delta")
    lhs = table.floats("lhs")
    rhs = table.floats("rhs_C1")
    ax.plot(x, lhs, "o-", ms=4, lw=1.0, label="trace integral")
    ax.plot(x, rhs, "s--", ms=4, lw=1.0, label="log-trace bound (C=1)")
    ax.set_xlim(*_margins(x.min(), x.max()))
    lo = min(lhs.min(), rhs.min())
    hi = max(lhs.max(), rhs.max())
    ax.set_ylim(*_margins(lo, hi))
    ax.set_xlabel("log10(1/delta)")
    ax.set_ylabel("value")
    ax.legend(frameon=False)


def _render_portrait(job: FigureJob, table: Table, ax):
    re = table.floats("re_z")
    im = table.floats("im_z")
    sig = table.floats("sigma_min")
    res = np.unique(re)
    ims = np.unique(im)
    if res.size * ims.size != sig.size:
        raise SchemaError("portrait nodes do not form a rectangular grid")
    grid = np.full((ims.size, res.size), np.nan)
    ridx = {v: i for i, v in enumerate(res)}
    iidx = {v: i for i, v in enumerate(ims)}
    for a, b, s in zip(re, im, sig):
        grid[iidx[b], ridx[a]] = s
    floor = max(sig[sig > 0].min() if np.any(sig > 0) else 1e-16, 1e-16)
    img = ax.imshow(np.log10(np.maximum(grid, floor)), origin="lower",
                    extent=(res.min(), res.max(), ims.min(), ims.max()),
                    aspect="equal", cmap="viridis")
    plt.colorbar(img, ax=ax, label="log10 sigma_min")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")


_RENDERERS = {
    "scatter": _render_scatter,
    "counting": _render_counting,
    "fig3": _render_fig3,
    "portrait": _render_portrait,
}


def render(job: FigureJob) -> Path:
    """Render the job to its output path; raises SchemaError before touching
    the output file on any input problem."""
    tables = [read_table(p, job.kind) for p in job.inputs]
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    try:
        for table in tables:
            _RENDERERS[job.kind](job, table, ax)
        job.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(job.output)
    finally:
        plt.close(fig)
    return job.output


def dump_plotted(job: FigureJob) -> str:
    """The plotted columns, cell for cell byte-equal to the input CSVs."""
    chunks = []
    for p in job.inputs:
        table = read_table(p, job.kind)
        cols = PLOTTED_COLUMNS[job.kind]
        lines = [",".join(cols)]
        for k in range(len(table.rows)):
            lines.append(",".join(table.columns[c][k] for c in cols))
        chunks.append("\n".join(lines))
    return "\n".join(chunks) + "\n"

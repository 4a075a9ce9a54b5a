"""Plain-text landscape tables and ROC CSV export."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..evaluation import LandscapeSummary, RegimeRow, ScorePool, roc
from ..f3vdm import DiscomfortReport, F3VDMBand

LABEL_WIDTH = 30
COLUMN_WIDTH = 26


def fmt(x) -> str:
    """Five significant digits; fixed notation in [1e-3, 1e5), exponent otherwise."""
    if x is None:
        return "-"
    x = float(x)
    if math.isnan(x):
        return "n/a"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    if 1e-3 <= abs(x) < 1e5:
        s = f"{x:#.5g}"
        if "e" not in s:
            return s.rstrip(".")
    mant, exp = f"{x:.4E}".split("E")
    return f"{mant}E{int(exp)}"


@dataclass
class ReportColumn:
    name: str
    summary: LandscapeSummary
    regimes: Sequence[RegimeRow] = field(default_factory=list)
    code_size: str = "-"
    filter_size: str = "-"


def _pair(a, b) -> str:
    return f"{fmt(a)} / {fmt(b)}"


def _line(label: str, cells: Sequence[str]) -> str:
    return (label.ljust(LABEL_WIDTH) + "".join(c.ljust(COLUMN_WIDTH) for c in cells)).rstrip()


def _target_label(metric: str, target: float) -> str:
    return f"{metric} near {target:g}:"


def emit_report(
    columns: Sequence[ReportColumn],
    band: F3VDMBand | None = None,
    band_discomfort: DiscomfortReport | None = None,
) -> str:
    """Render the evaluation-criteria and functioning-regime table."""
    lines = [_line("Encoder:", [c.name for c in columns])]

    def row(label, values):
        lines.append(_line(label, values))

    def section(title):
        lines.append(title)

    section("System parameters:")
    row("Iris code size", [c.code_size for c in columns])
    row("Hilbert filter size", [c.filter_size for c in columns])
    section("Inter-class distribution:")
    row("Mean / Standard deviation", [_pair(c.summary.imposter.mean, c.summary.imposter.std) for c in columns])
    row("Degrees-of-freedom", [fmt(c.summary.imposter.dof) for c in columns])
    row("Number of scores", [str(c.summary.imposter.count) for c in columns])
    section("Intra-class distribution:")
    row("Mean / Standard deviation", [_pair(c.summary.genuine.mean, c.summary.genuine.std) for c in columns])
    row("Degrees-of-freedom", [fmt(c.summary.genuine.dof) for c in columns])
    row("Number of scores", [str(c.summary.genuine.count) for c in columns])
    section("Evaluation criteria:")
    row("Decidability / Fisher's ratio", [_pair(c.summary.d_prime, c.summary.fisher) for c in columns])
    row("Overlap / EER", [_pair(c.summary.overlap, c.summary.eer) for c in columns])
    row("EER threshold", [fmt(c.summary.t_eer) for c in columns])
    row("OEE / POEE", [_pair(c.summary.oee, c.summary.poee) for c in columns])
    row("MIS / mGS", [_pair(c.summary.mis, c.summary.mgs) for c in columns])
    row("FAR(MIS) / FRR(MIS)", [_pair(c.summary.far_mis, c.summary.frr_mis) for c in columns])
    row("FAR(mGS) / FRR(mGS)", [_pair(c.summary.far_mgs, c.summary.frr_mgs) for c in columns])
    row("POFA(mGS) / POFR(MIS)", [_pair(c.summary.pofa_mgs, c.summary.pofr_mis) for c in columns])

    n_regimes = max((len(c.regimes) for c in columns), default=0)
    flagged = False
    if n_regimes:
        section("FUNCTIONING REGIMES")
        for k in range(n_regimes):
            first = next(c.regimes[k] for c in columns if len(c.regimes) > k)
            section(_target_label(first.metric, first.target))
            cells = {"t": [], "frr": [], "far": [], "ofa": []}
            for c in columns:
                if len(c.regimes) <= k:
                    for v in cells.values():
                        v.append("-")
                    continue
                r = c.regimes[k]
                mark = " *" if r.approximate else ""
                flagged |= r.approximate
                cells["t"].append(_pair(r.threshold, r.frr) + mark)
                cells["far"].append(_pair(r.far, r.pofa))
                cells["frr"].append(_pair(r.pofr, r.ofr))
                cells["ofa"].append(fmt(r.ofa))
            row("threshold (t) / FRR(t)", cells["t"])
            row("FAR(t) / POFA(t)", cells["far"])
            row("POFR(t) / OFR(t)", cells["frr"])
            row("OFA(t)", cells["ofa"])
    if flagged:
        lines.append("* nearest achievable value is more than 50% away from the target")

    if band is not None:
        section("F3VDM safety band:")
        row("I: [a, 1]", [f"[{fmt(band.a)}, 1]"])
        row("O: (r, a)", [f"({fmt(band.r)}, {fmt(band.a)})"])
        row("D: [0, r]", [f"[0, {fmt(band.r)}]"])
        row("Provenance", [band.provenance])
        if band_discomfort is not None:
            row("Genuine discomfort POFR(a)", [fmt(band_discomfort.genuine_discomfort)])
            row("Imposter discomfort POFA(r)", [fmt(band_discomfort.imposter_discomfort)])
            row("Total discomfort", [fmt(band_discomfort.total)])
    return "\n".join(lines) + "\n"


def default_roc_grid(step: float = 1e-3) -> np.ndarray:
    n = int(round(1.0 / step))
    return np.arange(n + 1) / n


def roc_csv(pool: ScorePool, grid=None) -> str:
    """ROC table as CSV with header ``threshold,far,frr``."""
    grid = default_roc_grid() if grid is None else grid
    lines = ["threshold,far,frr"]
    for t, fa, fr in roc(pool, grid):
        lines.append(f"{t:.5g},{fa:.5g},{fr:.5g}")
    return "\n".join(lines) + "\n"

"""Figures for the Frobenius survey, rendered to files with the Agg backend."""

from __future__ import annotations

from collections import Counter

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (8.0, 3.2),
    "savefig.dpi": 120,
    # keep PNG/SVG output byte-stable across runs
    "svg.hashsalt": "galois40",
    "path.simplify": False,
}


def _stable_metadata(path: str):
    """Drop timestamps/version strings so identical runs give identical files."""
    ext = path.rsplit(".", 1)[-1].lower()
    if ext == "png":
        return {"Software": None}
    if ext == "svg":
        return {"Date": None, "Creator": None}
    if ext == "pdf":
        return {"CreationDate": None, "Producer": None, "Creator": None}
    return None


def survey_figure(report, path: str) -> str:
    """Two panels: fixed-point histogram and pattern class split by p mod 3."""
    with plt.rc_context(STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2)
        sq = report.squarefree_samples
        fixed = Counter(s.pattern.count(1) for s in sq)
        ks = sorted(fixed)
        ax1.bar(ks, [fixed[k] for k in ks], color="0.35", width=0.8)
        mean = report.mean_fixed_points()
        ax1.axvline(mean, color="C3", lw=1, ls="--", label=f"mean {mean:.2f}")
        ax1.set_xlabel("linear factors mod p")
        ax1.set_ylabel("primes")
        ax1.set_title("fixed points of Frobenius")
        ax1.legend(frameon=False)

        classes = ("psp", "pgsp-only", "violation")
        colors = ("C0", "C1", "C3")
        fr = report.fractions()
        bottom = [0.0, 0.0]
        for cls, col in zip(classes, colors):
            vals = [fr[1][cls], fr[2][cls]]
            ax2.bar(["p = 1 mod 3", "p = 2 mod 3"], vals, bottom=bottom, color=col, label=cls)
            bottom = [b + v for b, v in zip(bottom, vals)]
        ax2.set_ylim(0, 1.05)
        ax2.set_ylabel("fraction of patterns")
        ax2.set_title("pattern class")
        ax2.legend(frameon=False, loc="upper right")
        pt = ",".join(str(c) for c in report.point)
        fig.suptitle(f"Frobenius survey at ({pt}), {len(sq)} primes")
        fig.tight_layout()
        fig.savefig(path, metadata=_stable_metadata(path))
        plt.close(fig)
    return path

"""Static SVG plots for audit outputs.

All charts are written as SVG with a fixed hash salt and no embedded date,
so reruns on identical inputs are byte-identical. A provenance comment
(seed, row count) is inserted right after the XML prolog of every file.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

_MEASURE_PANELS = ("fitzpatrick", "mean_ita", "p1", "p2", "p3", "p4", "p5", "p6")
_SVG_SALT = "lesionaudit"


def _finish(fig, path, provenance: dict) -> None:
    plt.rcParams["svg.hashsalt"] = _SVG_SALT
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    text = path.read_text(encoding="utf-8")
    head, sep, rest = text.partition("\n")
    note = " ".join(f"{k}={v}" for k, v in sorted(provenance.items()))
    path.write_text(f"{head}{sep}<!-- lesionaudit {note} -->\n{rest}", encoding="utf-8")


def _classes_of(rows) -> list[str]:
    return sorted({r.class_label or "unlabeled" for r in rows})


def plot_tone_by_class(rows, path, provenance) -> None:
    """Box plots of each tone measure, one box per disease class."""
    classes = _classes_of(rows)
    fig, axes = plt.subplots(2, 4, figsize=(16, 7))
    for ax, measure in zip(axes.ravel(), _MEASURE_PANELS):
        data = []
        for cls in classes:
            vals = [
                r.measure(measure)
                for r in rows
                if (r.class_label or "unlabeled") == cls
            ]
            data.append([v for v in vals if not math.isnan(v)])
        ax.boxplot(data, tick_labels=classes)
        ax.set_title(measure)
        ax.tick_params(axis="x", rotation=45)
    fig.suptitle("Tone measures by class")
    fig.tight_layout()
    _finish(fig, path, provenance)


def plot_correlation_bands(cells, path, provenance) -> None:
    """Per-measure charts of rho vs metric with a min-max band across models.

    Uses the 'all' stratum only; cells without a defined rho are left out.
    """
    usable = [c for c in cells if c.stratum == "all" and c.rho is not None]
    measures = sorted({c.measure for c in usable})
    metrics = sorted({c.metric for c in usable})
    models = sorted({c.model for c in usable})
    ncols = 4
    nrows = max(1, -(-len(measures) // ncols))
    fig, axes = plt.subplots(nrows, ncols, figsize=(4 * ncols, 3.2 * nrows), squeeze=False)
    x = np.arange(len(metrics))
    for idx, measure in enumerate(measures):
        ax = axes[idx // ncols][idx % ncols]
        per_model = {}
        for model in models:
            vals = []
            for metric in metrics:
                match = [
                    c.rho
                    for c in usable
                    if c.measure == measure and c.metric == metric and c.model == model
                ]
                vals.append(match[0] if match else np.nan)
            per_model[model] = np.array(vals)
        if per_model:
            stacked = np.vstack(list(per_model.values()))
            with np.errstate(all="ignore"):
                lo = np.nanmin(stacked, axis=0)
                hi = np.nanmax(stacked, axis=0)
            band = ~(np.isnan(lo) | np.isnan(hi))
            ax.fill_between(x[band], lo[band], hi[band], color="lightblue", alpha=0.6,
                            label="model min-max")
            for model, vals in per_model.items():
                ax.plot(x, vals, marker="o", markersize=3, linewidth=1, label=model)
        ax.axhline(0.0, color="gray", linewidth=0.6)
        ax.set_xticks(x, metrics, rotation=45)
        ax.set_ylim(-1.05, 1.05)
        ax.set_title(measure)
    for idx in range(len(measures), nrows * ncols):
        axes[idx // ncols][idx % ncols].set_axis_off()
    if measures and models:
        axes[0][0].legend(fontsize=7)
    fig.suptitle("Spearman correlation by metric (stratum: all)")
    fig.tight_layout()
    _finish(fig, path, provenance)


def plot_class_heatmap(cells, model: str, path, provenance) -> None:
    """|rho| heatmaps (class strata x metric), one panel per tone measure.

    Missing cells stay masked (rendered in the bad-value color) rather
    than being drawn as zero.
    """
    class_cells = [
        c for c in cells if c.model == model and c.stratum.startswith("class:")
    ]
    classes = sorted({c.stratum.split(":", 1)[1] for c in class_cells})
    metrics = sorted({c.metric for c in class_cells})
    if not classes or not metrics:
        fig = plt.figure(figsize=(6, 2))
        fig.text(0.5, 0.5, f"no class-stratified cells for {model}", ha="center")
        _finish(fig, path, provenance)
        return
    fig, axes = plt.subplots(2, 4, figsize=(16, 7))
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad("lightgray")
    for ax, measure in zip(axes.ravel(), _MEASURE_PANELS):
        grid = np.full((len(classes), len(metrics)), np.nan)
        for c in class_cells:
            if c.measure != measure or c.rho is None:
                continue
            i = classes.index(c.stratum.split(":", 1)[1])
            j = metrics.index(c.metric)
            grid[i, j] = abs(c.rho)
        im = ax.imshow(np.ma.masked_invalid(grid), vmin=0.0, vmax=1.0, cmap=cmap,
                       aspect="auto")
        ax.set_xticks(range(len(metrics)), metrics, rotation=45)
        ax.set_yticks(range(len(classes)), classes)
        ax.set_title(measure)
    fig.colorbar(im, ax=axes.ravel().tolist(), shrink=0.7, label="|rho|")
    fig.suptitle(f"Absolute correlations by class: {model}")
    _finish(fig, path, provenance)


def emit_plots(rows, cells, outdir, provenance: dict) -> list:
    """Write all audit charts into ``outdir``; returns the created paths."""
    outdir.mkdir(parents=True, exist_ok=True)
    prov = dict(provenance)
    prov["n_rows"] = len(rows)
    paths = []
    if rows:
        p = outdir / "tone_by_class.svg"
        plot_tone_by_class(rows, p, prov)
        paths.append(p)
        p = outdir / "correlation_bands.svg"
        plot_correlation_bands(cells, p, prov)
        paths.append(p)
        if any(c.stratum.startswith("class:") for c in cells):
            for model in sorted({r.model for r in rows}):
                p = outdir / f"class_heatmap_{model}.svg"
                plot_class_heatmap(cells, model, p, prov)
                paths.append(p)
    return paths

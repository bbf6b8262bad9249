"""Render benchmark figures from a records CSV and a summary JSON.

The figures are strictly read-only consumers: boxplots and scatter points come
from CSV rows, while every printed statistic (correlation coefficients,
runtime means and stddevs) is taken verbatim from the summary JSON, never
recomputed here.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

FIGURE_IDS = (
    "sev_box_sis",
    "sev_box_ois",
    "sev_box_igs",
    "sensitivity_3panel",
    "corr_3panel",
    "runtime_3panel",
)

_BOX_METRIC = {
    "sev_box_sis": "sis",
    "sev_box_ois": "ois",
    "sev_box_igs": "igs",
}

_BASE_COLUMNS = ["circuit_id", "kind", "mode", "severity", "status"]


class SchemaError(ValueError):
    """The input CSV does not carry the benchmark schema."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"missing column: {column}")


def load_records(csv_path) -> pd.DataFrame:
    df = pd.read_csv(csv_path)
    for col in _BASE_COLUMNS:
        if col not in df.columns:
            raise SchemaError(col)
    return df


def load_summary(summary_path) -> dict:
    with open(summary_path) as fh:
        return json.load(fh)


def _require(df: pd.DataFrame, columns) -> None:
    for col in columns:
        if col not in df.columns:
            raise SchemaError(col)


def _severity_frame(df: pd.DataFrame, metric: str) -> pd.DataFrame:
    _require(df, [metric])
    sub = df[(df["mode"] == "severity") & (df["status"] == "ok")]
    return sub[sub[metric].notna()]


def _box_figure(df: pd.DataFrame, metric: str):
    sub = _severity_frame(df, metric)
    kinds = sorted(sub["kind"].unique())
    severities = sorted(sub["severity"].unique())
    ncols = 4
    nrows = max(1, -(-len(kinds) // ncols))
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.0 * ncols, 2.6 * nrows),
        sharey=True, squeeze=False,
    )
    facets = 0
    for ax, kind in zip(axes.flat, kinds):
        groups = [sub.loc[(sub["kind"] == kind) & (sub["severity"] == s), metric]
                  for s in severities]
        ax.boxplot([g.values for g in groups],
                   tick_labels=[f"{s:g}" for s in severities])
        ax.set_title(kind, fontsize=9)
        ax.set_ylim(-0.05, 1.05)
        facets += sum(1 for g in groups if len(g))
    for ax in axes.flat[len(kinds):]:
        ax.set_visible(False)
    for ax in axes[-1]:
        ax.set_xlabel("severity")
    for row in axes:
        row[0].set_ylabel(metric.upper())
    fig.suptitle(f"{metric.upper()} by anomaly kind and severity")
    fig.tight_layout(rect=(0, 0, 1, 0.96))
    meta = {
        "kinds": kinds,
        "severities": severities,
        "facet_count": facets,
    }
    return fig, meta


def _sensitivity_figure(df: pd.DataFrame):
    metrics = ("sis", "ois", "igs")
    _require(df, list(metrics))
    sub = df[(df["mode"] == "severity") & (df["status"] == "ok")]
    kinds = sorted(sub["kind"].unique())
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.4), sharey=True)
    for ax, metric in zip(axes, metrics):
        have = sub[sub[metric].notna()]
        means = [have.loc[have["kind"] == k, metric].mean() for k in kinds]
        stds = [have.loc[have["kind"] == k, metric].std(ddof=1) for k in kinds]
        pos = np.arange(len(kinds))
        ax.bar(pos, means, yerr=np.nan_to_num(stds), capsize=3)
        ax.set_xticks(pos)
        ax.set_xticklabels(kinds, rotation=45, ha="right", fontsize=8)
        ax.set_title(metric.upper())
        ax.set_ylim(0, 1.05)
    axes[0].set_ylabel("mean score")
    fig.suptitle("Per-kind metric sensitivity (severity cells)")
    fig.tight_layout(rect=(0, 0, 1, 0.94))
    return fig, {"kinds": kinds, "panel_count": 3}


def _corr_figure(df: pd.DataFrame, summary: dict):
    _require(df, ["igs", "ois"])
    per_severity = summary["correlations"]["per_severity"]
    severities = sorted(per_severity, key=float)
    fig, axes = plt.subplots(1, len(severities),
                             figsize=(4.0 * len(severities), 3.4), sharey=True)
    if len(severities) == 1:
        axes = [axes]
    annotations = {}
    for ax, key in zip(axes, severities):
        sub = df[(df["mode"] == "severity") & (df["status"] == "ok")
                 & (df["severity"] == float(key))
                 & df["igs"].notna() & df["ois"].notna()]
        ax.scatter(sub["igs"], sub["ois"], s=12, alpha=0.7)
        if len(sub) >= 2 and sub["igs"].nunique() > 1:
            slope, intercept = np.polyfit(sub["igs"], sub["ois"], 1)
            xs = np.linspace(sub["igs"].min(), sub["igs"].max(), 50)
            ax.plot(xs, slope * xs + intercept, color="tab:red", lw=1)
        entry = per_severity[key]
        annotations[key] = {
            "pearson_r": entry["pearson_r"],
            "spearman_rho": entry["spearman_rho"],
        }
        if entry["pearson_r"] is not None:
            ax.annotate(
                f"r = {entry['pearson_r']:.4f}\n"
                f"ρ = {entry['spearman_rho']:.4f}",
                xy=(0.04, 0.04), xycoords="axes fraction", fontsize=9,
            )
        ax.set_title(f"severity {key}")
        ax.set_xlabel("IGS")
    axes[0].set_ylabel("OIS")
    fig.suptitle("IGS vs OIS per severity")
    fig.tight_layout(rect=(0, 0, 1, 0.94))
    return fig, {"panel_count": len(severities), "annotations": annotations}


def _runtime_figure(summary: dict):
    table = summary["runtime_table"]
    qubits = [row["num_qubits"] for row in table]
    series = {}
    for label, mean_key, std_key in (
        ("IGS", "t_igs_ms_mean", "t_igs_ms_stddev"),
        ("OIS", "t_ois_ms_mean", "t_ois_ms_stddev"),
    ):
        points = [(q, row[mean_key], row[std_key] or 0.0)
                  for q, row in zip(qubits, table) if row[mean_key] is not None]
        if points:
            series[label] = points
    missing = [label for label in ("IGS", "OIS") if label not in series]
    for label in missing:
        warnings.warn(f"{label} timing series missing; panel will be empty")
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.4))
    for ax, label in zip(axes[:2], ("IGS", "OIS")):
        if label in series:
            qs, means, stds = zip(*series[label])
            ax.errorbar(qs, means, yerr=stds, marker="o", capsize=3)
        ax.set_title(f"{label} runtime")
        ax.set_xlabel("qubits")
        ax.set_ylabel("ms")
    for label, style in (("IGS", "o-"), ("OIS", "s--")):
        if label in series:
            qs, means, _ = zip(*series[label])
            axes[2].plot(qs, means, style, label=label)
    axes[2].set_title("comparison")
    axes[2].set_xlabel("qubits")
    axes[2].set_ylabel("mean ms")
    axes[2].set_yscale("log")
    if series:
        axes[2].legend()
    fig.suptitle("Metric runtime by qubit count")
    fig.tight_layout(rect=(0, 0, 1, 0.94))
    return fig, {"panel_count": 3, "missing_series": missing}


def render(figure_id: str, csv_path, summary_path, out_path):
    """Build one figure and write vector (svg) plus raster (png) files.

    Returns (written paths, metadata dict).
    """
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id '{figure_id}'")
    df = load_records(csv_path)
    summary = load_summary(summary_path) if summary_path else None
    if figure_id in _BOX_METRIC:
        fig, meta = _box_figure(df, _BOX_METRIC[figure_id])
    elif figure_id == "sensitivity_3panel":
        fig, meta = _sensitivity_figure(df)
    elif figure_id == "corr_3panel":
        if summary is None:
            raise ValueError("corr_3panel requires --summary")
        fig, meta = _corr_figure(df, summary)
    else:
        if summary is None:
            raise ValueError("runtime_3panel requires --summary")
        fig, meta = _runtime_figure(summary)
    base = Path(out_path)
    base.parent.mkdir(parents=True, exist_ok=True)
    stem = base.with_suffix("")
    written = []
    for suffix in (".svg", ".png"):
        target = stem.with_suffix(suffix)
        fig.savefig(target)
        written.append(target)
    plt.close(fig)
    return written, meta

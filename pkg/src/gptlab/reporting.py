"""Report serialization: deterministic JSON, flat CSV, and figure rendering."""

from __future__ import annotations

import csv
import io
import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":"))


def flatten(report: dict, prefix: str = "") -> dict[str, object]:
    flat: dict[str, object] = {}
    for key, val in report.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            flat.update(flatten(val, f"{name}."))
        elif isinstance(val, list):
            flat[name] = ";".join(str(v) for v in val)
        else:
            flat[name] = val
    return flat


def to_csv(report: dict) -> str:
    flat = flatten(report)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    keys = sorted(flat)
    writer.writerow(keys)
    writer.writerow([flat[k] for k in keys])
    return buf.getvalue()


def _frac(value) -> float:
    if isinstance(value, str) and "/" in value:
        num, den = value.split("/")
        return int(num) / int(den)
    return float(value)


def render_figure(kind: str, report: dict, path: str) -> None:
    """Render a one-glance summary figure for a report."""
    fig, ax = plt.subplots(figsize=(5, 3.2))
    if kind == "check-theory":
        names = ["causality", "tomographic_locality", "bit_symmetry"]
        vals = [1 if report[n] else 0 for n in names]
        ax.bar(range(3), vals, color=["#2a9d8f" if v else "#e76f51" for v in vals])
        ax.set_xticks(range(3), ["causal", "tomo. local", "bit-symm."])
        ax.set_ylim(0, 1.2)
        ax.set_yticks([0, 1], ["fails", "holds"])
        ax.set_title(f"principles ({report.get('mode', 'exact')})")
    elif kind == "fbox":
        ax.bar(
            ["parity violations", "samples"],
            [report["parity_violations"], report["samples"]],
            color=["#e76f51", "#457b9d"],
        )
        ax.set_yscale("symlog")
        ax.set_title(f"f-box n={report['n']}, weight {report['nonzero_weight']}")
    elif kind == "commcc":
        labels, vals = [], []
        if report.get("max_messages") is not None:
            labels.append("shared-box bits")
            vals.append(report["max_messages"])
        if report.get("one_way_cc") is not None:
            labels.append("classical one-way")
            vals.append(report["one_way_cc"])
        if report.get("det_cc") is not None:
            labels.append("classical two-way")
            vals.append(report["det_cc"])
        ax.bar(labels, vals, color="#457b9d")
        ax.set_ylabel("bits")
        ax.set_title("communication cost")
    elif kind == "advice":
        ax.bar(
            ["agreement", "total"],
            [report["agreement"], report["total"]],
            color=["#2a9d8f", "#adb5bd"],
        )
        ax.set_title(
            f"advice decision, n={report['n']}, gap {report['gap']}, "
            f"ports {report['advice_ports']}"
        )
    else:
        ax.text(0.5, 0.5, kind, ha="center")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(kind: str, report: dict, out_dir: str) -> list[str]:
    """Write report.json, report.csv and a PNG figure into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    json_path = os.path.join(out_dir, f"{kind}.json")
    with open(json_path, "w") as fh:
        fh.write(to_json(report) + "\n")
    paths.append(json_path)
    csv_path = os.path.join(out_dir, f"{kind}.csv")
    with open(csv_path, "w") as fh:
        fh.write(to_csv(report))
    paths.append(csv_path)
    fig_path = os.path.join(out_dir, f"{kind}.png")
    render_figure(kind, report, fig_path)
    paths.append(fig_path)
    return paths

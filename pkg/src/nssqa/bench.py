"""Batch benchmark harness: score a dataset over a measure x space grid
and emit per-distortion correlation tables, improvement classes, and
between-method correlation matrices.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .colorspace import ColorSpace
from .dataset import DISTORTION_CATALOG, EvaluationRecord
from .errors import DegenerateInput, DegenerateScores, DivisionByZero, NssqaError
from .evaluation import evaluate, improvement_class, plcc, srcc
from .image import load_image
from .measures import MeasureConfig, extract_features, score
from .statmodel import Measure

# Tables-style presentation order
MEASURE_ORDER = (Measure.WNISM, Measure.RRED, Measure.EMISM, Measure.DNT)
SPACE_ORDER = (ColorSpace.GRAYSCALE, ColorSpace.RGB, ColorSpace.CIELAB)
SPACE_LABEL = {
    ColorSpace.GRAYSCALE: "Grayscale",
    ColorSpace.RGB: "RGB",
    ColorSpace.CIELAB: "LAB",
}


@dataclass(frozen=True)
class RunManifest:
    dataset_root: str
    out_dir: str
    measures: tuple = MEASURE_ORDER
    spaces: tuple = SPACE_ORDER
    jobs: int = 1
    seed: int = 0
    config_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.measures or not self.spaces:
            raise ValueError("need at least one measure x space cell")

    def cell_config(self, measure: Measure, space: ColorSpace) -> MeasureConfig:
        return MeasureConfig(measure=measure, space=space, **self.config_overrides)


def _score_one(args):
    """Score one record; failures are returned, not raised, so one bad
    file cannot abort a long batch (also keeps the pool workers alive)."""
    config, ref_features, distorted_path = args
    try:
        return score(ref_features, load_image(distorted_path), config).total
    except (NssqaError, FileNotFoundError) as exc:
        return exc


def score_records(
    records: list[EvaluationRecord], config: MeasureConfig, jobs: int = 1
):
    """Score every record; returns (scored records, failure messages).

    Reference features are extracted once per reference image and
    shared. Output order always matches input order.
    """
    by_ref = {}
    failures = []
    scored: list = [None] * len(records)
    tasks = []
    for i, rec in enumerate(records):
        if rec.reference_path not in by_ref:
            try:
                by_ref[rec.reference_path] = extract_features(
                    load_image(rec.reference_path), config
                )
            except NssqaError as exc:
                by_ref[rec.reference_path] = exc
        feats = by_ref[rec.reference_path]
        if isinstance(feats, Exception):
            failures.append(f"{rec.reference_path}: {feats}")
            continue
        tasks.append((i, (config, feats, rec.distorted_path)))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_score_one, [t for _, t in tasks]))
    else:
        results = [_score_one(t) for _, t in tasks]
    for (i, task), value in zip(tasks, results):
        if isinstance(value, Exception):
            failures.append(f"{task[2]}: {value}")
        else:
            scored[i] = records[i].with_score(float(value))
    return [r for r in scored if r is not None], failures


def _cell_correlations(records):
    """Per-distortion-type and overall PLCC/SRCC for scored records."""
    def correlate(subset):
        scores = [r.score for r in subset]
        mos = [r.mos for r in subset]
        try:
            report = evaluate(scores, mos)
            return {"plcc": report.plcc, "srcc": report.srcc, "n": len(subset),
                    "fit": list(report.fitted.as_array())}
        except (ValueError, DegenerateScores, DegenerateInput):
            # too few points (or degenerate) for the logistic fit: fall
            # back to raw-score correlations
            try:
                return {"plcc": plcc(mos, scores), "srcc": srcc(mos, scores),
                        "n": len(subset), "fit": None}
            except (ValueError, DegenerateInput):
                return {"plcc": float("nan"), "srcc": float("nan"),
                        "n": len(subset), "fit": None}

    types = sorted({r.distortion_type for r in records})
    out = {"types": {}, "all": correlate(records) if records else None}
    for t in types:
        out["types"][t] = correlate([r for r in records if r.distortion_type == t])
    return out


def run_benchmark(manifest: RunManifest, records: list[EvaluationRecord]) -> dict:
    """Score all cells and assemble the report structure."""
    report = {"cells": {}, "failures": {}}
    for measure in manifest.measures:
        for space in manifest.spaces:
            config = manifest.cell_config(measure, space)
            scored, failures = score_records(records, config, jobs=manifest.jobs)
            key = f"{measure.value}/{space.value}"
            report["cells"][key] = {
                "correlations": _cell_correlations(scored),
                "scores": [
                    {"path": Path(r.distorted_path).name, "type": r.distortion_type,
                     "level": r.level, "mos": r.mos, "score": r.score}
                    for r in scored
                ],
            }
            if failures:
                report["failures"][key] = failures
    report["improvement"] = _improvement_tables(report, manifest)
    report["method_correlation"] = _method_correlations(report, manifest)
    return report


def _cell_value(report, measure, space, metric, type_key):
    cell = report["cells"].get(f"{measure.value}/{space.value}")
    if cell is None:
        return None
    corr = cell["correlations"]
    entry = corr["all"] if type_key == "all" else corr["types"].get(type_key)
    if entry is None:
        return None
    return entry[metric]


def _improvement_tables(report, manifest):
    """Color-vs-grayscale improvement classes per distortion type."""
    if ColorSpace.GRAYSCALE not in manifest.spaces:
        return {}
    out = {}
    color_spaces = [s for s in manifest.spaces if s is not ColorSpace.GRAYSCALE]
    type_keys = sorted(
        {t for cell in report["cells"].values() for t in cell["correlations"]["types"]}
    )
    for metric in ("plcc", "srcc"):
        rows = []
        for t in type_keys + ["all"]:
            for measure in manifest.measures:
                gray = _cell_value(report, measure, ColorSpace.GRAYSCALE, metric, t)
                for space in color_spaces:
                    color = _cell_value(report, measure, space, metric, t)
                    if gray is None or color is None or not np.isfinite([gray, color]).all():
                        continue
                    try:
                        cls = improvement_class(gray, color)
                    except DivisionByZero:
                        continue
                    rows.append({
                        "type": t, "measure": measure.value,
                        "space": SPACE_LABEL[space], "per": cls.per,
                        "class": cls.level.value, "direction": cls.direction.value,
                    })
        out[metric] = rows
    return out


def _method_correlations(report, manifest):
    """Pearson correlation between per-type correlation columns of each
    method pair, per color space. Matrices are symmetric, unit diagonal."""
    out = {}
    type_keys = sorted(
        {t for cell in report["cells"].values() for t in cell["correlations"]["types"]}
    )
    if len(type_keys) < 3:
        return out
    for metric in ("plcc", "srcc"):
        per_space = {}
        for space in manifest.spaces:
            columns = {}
            for measure in manifest.measures:
                col = [_cell_value(report, measure, space, metric, t) for t in type_keys]
                if None in col or not np.isfinite(col).all():
                    continue
                columns[measure.value] = col
            names = list(columns)
            size = len(names)
            matrix = np.eye(size)
            for i in range(size):
                for j in range(i + 1, size):
                    try:
                        c = plcc(columns[names[i]], columns[names[j]])
                    except DegenerateInput:
                        c = float("nan")
                    matrix[i, j] = matrix[j, i] = c
            per_space[SPACE_LABEL[space]] = {
                "methods": names, "matrix": matrix.tolist()
            }
        out[metric] = per_space
    return out


def _fmt(value):
    if value is None or not np.isfinite(value):
        return ""
    return f"{value:.2f}"


def write_reports(report: dict, manifest: RunManifest) -> list[str]:
    """Emit CSV + JSON artifacts; returns the paths written."""
    out_dir = Path(manifest.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out_dir / "report.json"
    json_path.write_text(json.dumps(report, indent=2, sort_keys=True))
    written.append(str(json_path))

    type_keys = sorted(
        {t for cell in report["cells"].values() for t in cell["correlations"]["types"]}
    )
    for metric in ("plcc", "srcc"):
        lines = []
        header = ["Label"]
        for measure in manifest.measures:
            for space in manifest.spaces:
                header.append(f"{measure.value.upper()}-{SPACE_LABEL[space]}")
        lines.append(",".join(header))
        for t in type_keys + ["all"]:
            label = DISTORTION_CATALOG.get(t, str(t)) if t != "all" else "All"
            row = [str(t) if t != "all" else "All"]
            for measure in manifest.measures:
                for space in manifest.spaces:
                    row.append(_fmt(_cell_value(report, measure, space, metric, t)))
            lines.append(",".join(row))
        path = out_dir / f"report_{metric}.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(str(path))

    for metric, rows in report.get("improvement", {}).items():
        lines = ["type,measure,space,per,class,direction"]
        for r in rows:
            lines.append(
                f"{r['type']},{r['measure']},{r['space']},{r['per']:.2f},{r['class']},{r['direction']}"
            )
        path = out_dir / f"improvement_{metric}.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(str(path))

    for metric, per_space in report.get("method_correlation", {}).items():
        lines = ["space,method_a,method_b,correlation"]
        for space_name, entry in per_space.items():
            names = entry["methods"]
            matrix = entry["matrix"]
            for i in range(len(names)):
                for j in range(i + 1, len(names)):
                    lines.append(
                        f"{space_name},{names[i]},{names[j]},{_fmt(matrix[i][j])}"
                    )
        path = out_dir / f"method_correlation_{metric}.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(str(path))
    return written

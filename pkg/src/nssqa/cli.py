"""Command-line front door: extract, compare, bench, synth."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .bench import MEASURE_ORDER, SPACE_ORDER, RunManifest, run_benchmark, write_reports
from .colorspace import ColorSpace
from .dataset import SYNTH_TYPES, load_tid2013, synth_dataset
from .decompose import DecompositionConfig
from .errors import NssqaError
from .image import ImagePlane, RgbImage, load_image
from .measures import MeasureConfig, config_from_snapshot, extract_features, score
from .statmodel import Measure, features_from_json, features_to_json

_MEASURES = {m.value: m for m in Measure}
_SPACES = {"gray": ColorSpace.GRAYSCALE, "rgb": ColorSpace.RGB, "lab": ColorSpace.CIELAB}


def _build_config(measure, space, scales, orientations, d0, block_size) -> MeasureConfig:
    return MeasureConfig(
        measure=_MEASURES[measure],
        space=_SPACES[space],
        d0=d0,
        decomposition=DecompositionConfig(scales=scales, orientations=orientations),
        rred_block_size=block_size,
    )


def _fail(exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Reduced-reference image quality measures from natural scene statistics."""


_measure_opt = click.option(
    "--measure", type=click.Choice(sorted(_MEASURES)), default="wnism", show_default=True
)
_space_opt = click.option(
    "--space", type=click.Choice(sorted(_SPACES)), default="gray", show_default=True
)
_scales_opt = click.option("--scales", type=int, default=3, show_default=True)
_orient_opt = click.option("--orientations", type=int, default=4, show_default=True)
_d0_opt = click.option("--d0", type=float, default=0.1, show_default=True)
_block_opt = click.option("--block-size", type=int, default=3, show_default=True)


@main.command()
@click.argument("image", type=click.Path())
@_measure_opt
@_space_opt
@_scales_opt
@_orient_opt
@_d0_opt
@_block_opt
@click.option("--out", "-o", type=click.Path(), required=True, help="feature file to write")
def extract(image, measure, space, scales, orientations, d0, block_size, out):
    """Extract the reduced-reference payload from a reference image."""
    try:
        config = _build_config(measure, space, scales, orientations, d0, block_size)
        features = extract_features(load_image(image), config)
        payload = features_to_json(features)
        Path(out).write_text(payload)
    except (NssqaError, FileNotFoundError, ValueError) as exc:
        _fail(exc)
    click.echo(f"wrote {out} ({len(payload.encode())} bytes)")


@main.command()
@click.argument("features_file", type=click.Path())
@click.argument("distorted", type=click.Path())
@click.option("--measure", type=click.Choice(sorted(_MEASURES)), default=None,
              help="must match the feature file if given")
@click.option("--space", type=click.Choice(sorted(_SPACES)), default=None)
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def compare(features_file, distorted, measure, space, as_json):
    """Score a distorted image against a stored feature payload."""
    try:
        features = features_from_json(Path(features_file).read_text())
        config = config_from_snapshot(features.config)
        if measure is not None and _MEASURES[measure] is not config.measure:
            raise NssqaError(
                f"ConfigMismatch: features are {config.measure.value}, flag says {measure}"
            )
        if space is not None and _SPACES[space] is not config.space:
            raise NssqaError(
                f"ConfigMismatch: features are {config.space.value}, flag says {space}"
            )
        result = score(features, load_image(distorted), config)
    except (NssqaError, FileNotFoundError, ValueError, KeyError) as exc:
        _fail(exc)
        return
    if as_json:
        click.echo(json.dumps(result.to_json_dict(), indent=2))
    else:
        click.echo(f"total: {result.total:.6f}")
        for name, value in result.per_channel:
            click.echo(f"  {name}: {value:.6f}")


@main.command()
@click.option("--dataset", type=click.Path(), required=True,
              help="TID2013-layout root (synth output qualifies)")
@click.option("--out", type=click.Path(), required=True, help="report directory")
@click.option("--measure", "measures", multiple=True,
              type=click.Choice(sorted(_MEASURES) + ["all"]), default=("all",))
@click.option("--space", "spaces", multiple=True,
              type=click.Choice(sorted(_SPACES) + ["all"]), default=("all",))
@_scales_opt
@_orient_opt
@_d0_opt
@_block_opt
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def bench(dataset, out, measures, spaces, scales, orientations, d0, block_size, jobs, seed):
    """Run the full correlation benchmark over a measure x space grid."""
    try:
        records, warnings = load_tid2013(dataset)
        for w in warnings:
            click.echo(f"warning: {w}", err=True)
        if not records:
            raise NssqaError(f"no usable records under {dataset}")
        chosen_measures = (
            MEASURE_ORDER if "all" in measures
            else tuple(m for m in MEASURE_ORDER if m.value in measures)
        )
        chosen_spaces = (
            SPACE_ORDER if "all" in spaces
            else tuple(s for s in SPACE_ORDER if s.value in {_SPACES[x].value for x in spaces})
        )
        manifest = RunManifest(
            dataset_root=str(dataset),
            out_dir=str(out),
            measures=chosen_measures,
            spaces=chosen_spaces,
            jobs=jobs,
            seed=seed,
            config_overrides={
                "d0": d0,
                "rred_block_size": block_size,
                "decomposition": DecompositionConfig(
                    scales=scales, orientations=orientations
                ),
            },
        )
        report = run_benchmark(manifest, records)
        written = write_reports(report, manifest)
    except (NssqaError, FileNotFoundError, ValueError) as exc:
        _fail(exc)
        return
    for path in written:
        click.echo(f"wrote {path}")
    for key, failures in report["failures"].items():
        click.echo(f"{key}: {len(failures)} record(s) failed", err=True)


@main.command()
@click.option("--out", type=click.Path(), required=True, help="dataset directory to create")
@click.option("--references", type=int, default=2, show_default=True,
              help="number of procedural reference images")
@click.option("--width", type=int, default=512, show_default=True)
@click.option("--height", type=int, default=384, show_default=True)
@click.option("--types", multiple=True, type=click.Choice(SYNTH_TYPES),
              default=SYNTH_TYPES)
@click.option("--levels", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def synth(out, references, width, height, types, levels, seed):
    """Generate a synthetic distortion-ladder dataset."""
    try:
        refs = [
            make_reference(width, height, seed=seed + i) for i in range(references)
        ]
        records = synth_dataset(refs, out, types=types, levels=levels, seed=seed)
    except (NssqaError, ValueError) as exc:
        _fail(exc)
        return
    click.echo(f"wrote {len(records)} distorted images under {out}")


def make_reference(width: int, height: int, seed: int = 0) -> RgbImage:
    """Procedural natural-scene-like reference: 1/f texture plus smooth
    colored blobs, so subband statistics resemble photographs."""
    rng = np.random.default_rng(seed)
    fy = np.fft.fftfreq(height)[:, None]
    fx = np.fft.fftfreq(width)[None, :]
    radius = np.hypot(fy, fx)
    radius[0, 0] = 1.0
    channels = []
    base_phase = rng.uniform(0, 2 * np.pi, size=(height, width))
    for c in range(3):
        spectrum = (radius**-1.1) * np.exp(
            1j * (base_phase + 0.35 * rng.uniform(0, 2 * np.pi, size=(height, width)))
        )
        texture = np.fft.ifft2(spectrum).real
        texture = (texture - texture.mean()) / (texture.std() + 1e-12)
        yy, xx = np.mgrid[0:height, 0:width]
        blobs = np.zeros((height, width))
        for _ in range(6):
            cy, cx = rng.uniform(0, height), rng.uniform(0, width)
            sig = rng.uniform(min(height, width) / 8, min(height, width) / 3)
            blobs += rng.uniform(-1, 1) * np.exp(
                -((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * sig**2)
            )
        plane = 128 + 36 * texture + 40 * blobs
        channels.append(np.clip(plane, 0, 255))
    return RgbImage(
        r=ImagePlane(channels[0]), g=ImagePlane(channels[1]), b=ImagePlane(channels[2])
    )


if __name__ == "__main__":
    main()

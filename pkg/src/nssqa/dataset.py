"""Dataset ingestion: TID2013-layout directories and synthetic ladders.

A TID2013 tree holds 25 reference images, distorted images named
i<RR>_<TT>_<L>.<ext>, and a MOS file. The synthetic generator produces
a desk-scale equivalent with proxy MOS for ordering-only experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from scipy.ndimage import gaussian_filter

from .errors import MissingMosFile, MissingReference
from .image import ImagePlane, RgbImage, save_image

DISTORTION_CATALOG = {
    1: "Additive Gaussian noise",
    2: "Additive noise in color components",
    3: "Spatially correlated noise",
    4: "Masked noise",
    5: "High frequency noise",
    6: "Impulse noise",
    7: "Quantization noise",
    8: "Gaussian blur",
    9: "Image denoising",
    10: "JPEG compression",
    11: "JPEG2000 compression",
    12: "JPEG transmission errors",
    13: "JPEG2000 transmission errors",
    14: "Non eccentricity pattern noise",
    15: "Local block-wise distortion of different intensity",
    16: "Mean shift",
    17: "Contrast change",
    18: "Change of color saturation",
    19: "Multiplicative Gaussian noise",
    20: "Comfort noise",
    21: "Lossy compression of noisy images",
    22: "Image color quantization with dither",
    23: "Chromatic aberrations",
    24: "Sparse sampling and reconstruction",
}

SYNTH_TYPES = ("noise", "blur", "quantize", "jpeg")


@dataclass(frozen=True)
class EvaluationRecord:
    reference_id: int
    distortion_type: int
    level: int
    mos: float
    reference_path: str
    distorted_path: str
    score: float | None = None

    def with_score(self, value: float) -> "EvaluationRecord":
        return replace(self, score=value)


def _parse_distorted_name(name: str):
    """i<RR>_<TT>_<L>.<ext> -> (reference, type, level) or None."""
    stem = Path(name).stem.lower()
    if not stem.startswith("i"):
        return None
    parts = stem[1:].split("_")
    if len(parts) != 3:
        return None
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        return None


def _read_mos(root: Path):
    """MOS entries keyed by lowercased distorted filename.

    `mos_with_names.txt`-style files win over bare `mos.txt` (which is
    ordered but nameless and needs the distorted listing to join).
    """
    named = None
    bare = None
    for candidate in sorted(root.iterdir()):
        lname = candidate.name.lower()
        if lname in ("mos_with_names.txt", "mos_names.txt"):
            named = candidate
        elif lname == "mos.txt":
            bare = candidate
    if named is not None:
        table = {}
        for line in named.read_text().splitlines():
            parts = line.split()
            if len(parts) >= 2:
                try:
                    table[parts[0].lower()] = float(parts[1])
                except ValueError:
                    continue
        return table
    if bare is not None:
        values = [float(tok) for tok in bare.read_text().split()]
        return values
    raise MissingMosFile(f"no mos_with_names.txt or mos.txt under {root}")


def _find_dir(root: Path, names):
    for name in names:
        for child in root.iterdir():
            if child.is_dir() and child.name.lower() == name:
                return child
    return root


def load_tid2013(root) -> tuple[list[EvaluationRecord], list[str]]:
    """Parse a TID2013-layout tree into records.

    Returns (records, warnings); unparseable filenames and missing
    references are collected as warnings rather than raised, so partial
    datasets remain usable.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(str(root))
    mos = _read_mos(root)
    dist_dir = _find_dir(root, ("distorted_images",))
    ref_dir = _find_dir(root, ("reference_images",))

    references = {}
    for f in sorted(ref_dir.iterdir()):
        stem = f.stem.lower()
        if stem.startswith("i") and stem[1:].isdigit():
            references[int(stem[1:])] = f

    distorted = sorted(
        (f for f in dist_dir.iterdir() if f.is_file() and _parse_distorted_name(f.name)),
        key=lambda f: f.name.lower(),
    )
    warnings = []
    records = []
    for i, f in enumerate(distorted):
        ref_id, dtype, level = _parse_distorted_name(f.name)
        if ref_id not in references:
            warnings.append(f"{f.name}: reference i{ref_id:02d} missing")
            continue
        if isinstance(mos, dict):
            value = mos.get(f.name.lower())
            if value is None:
                warnings.append(f"{f.name}: no MOS entry")
                continue
        else:
            if i >= len(mos):
                warnings.append(f"{f.name}: mos.txt shorter than image list")
                continue
            value = mos[i]
        records.append(
            EvaluationRecord(
                reference_id=ref_id,
                distortion_type=dtype,
                level=level,
                mos=value,
                reference_path=str(references[ref_id]),
                distorted_path=str(f),
            )
        )
    for f in dist_dir.iterdir():
        if f.is_file() and f.suffix.lower() in (".bmp", ".png") and not _parse_distorted_name(f.name):
            warnings.append(f"{f.name}: unparseable filename")
    if not records and not warnings:
        raise MissingReference(f"no distorted images found under {dist_dir}")
    return records, warnings


def _rgb_array(img: RgbImage) -> np.ndarray:
    return np.stack([img.r.data, img.g.data, img.b.data], axis=-1)


def _from_array(arr: np.ndarray) -> RgbImage:
    arr = np.clip(arr, 0.0, 255.0)
    return RgbImage(
        r=ImagePlane(arr[:, :, 0]), g=ImagePlane(arr[:, :, 1]), b=ImagePlane(arr[:, :, 2])
    )


def apply_distortion(img: RgbImage, kind: str, level: int, seed: int) -> RgbImage:
    """One synthetic distortion at severity `level` (1 = mildest)."""
    arr = _rgb_array(img)
    rng = np.random.default_rng(seed)
    if kind == "noise":
        # the unit noise field depends on the seed only, so the ladder is
        # nested: each level scales the same realization up
        sigma = 6.0 * 1.9 ** (level - 1)
        out = arr + sigma * rng.normal(0.0, 1.0, size=arr.shape)
    elif kind == "blur":
        sigma = 0.5 * 1.4 ** (level - 1)
        out = np.stack(
            [gaussian_filter(arr[:, :, c], sigma) for c in range(3)], axis=-1
        )
    elif kind == "quantize":
        step = 8.0 * 2.0 ** (level - 1)
        out = np.round(arr / step) * step
    elif kind == "jpeg":
        out = _jpeg_like(arr, quality_step=5.0 * 1.9 ** (level - 1))
    else:
        raise ValueError(f"unknown distortion kind {kind!r}")
    return _from_array(out)


def _dct_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    mat = np.cos(np.pi * (2 * k[None, :] + 1) * k[:, None] / (2 * n))
    mat[0] *= 1.0 / np.sqrt(2)
    return mat * np.sqrt(2.0 / n)

_DCT8 = _dct_matrix(8)


def _jpeg_like(arr: np.ndarray, quality_step: float) -> np.ndarray:
    """Quantize 8x8 DCT blocks per channel, harsher at high frequencies."""
    h, w, _ = arr.shape
    hh, ww = (h // 8) * 8, (w // 8) * 8
    out = arr.copy()
    u = np.arange(8)
    qtable = quality_step * (1.0 + (u[:, None] + u[None, :]))
    for c in range(3):
        plane = arr[:hh, :ww, c]
        blocks = plane.reshape(hh // 8, 8, ww // 8, 8).swapaxes(1, 2)
        coeffs = np.einsum("ij,abjk,lk->abil", _DCT8, blocks, _DCT8)
        coeffs = np.round(coeffs / qtable) * qtable
        rec = np.einsum("ji,abjk,kl->abil", _DCT8, coeffs, _DCT8)
        out[:hh, :ww, c] = rec.swapaxes(1, 2).reshape(hh, ww)
    return out


def synth_dataset(
    references: list[RgbImage],
    out_dir,
    types=SYNTH_TYPES,
    levels: int = 5,
    seed: int = 0,
) -> list[EvaluationRecord]:
    """Write a synthetic distortion-ladder dataset to disk.

    Proxy MOS is -level (ordering-only ground truth). Deterministic for
    a given seed. Distortion types map to TID-style labels via their
    index in SYNTH_TYPES (1-based).
    """
    if levels < 2:
        raise ValueError("need at least 2 levels")
    out = Path(out_dir)
    (out / "reference_images").mkdir(parents=True, exist_ok=True)
    (out / "distorted_images").mkdir(parents=True, exist_ok=True)
    records = []
    for ref_idx, ref in enumerate(references, start=1):
        ref_path = out / "reference_images" / f"i{ref_idx:02d}.png"
        save_image(ref, ref_path)
        for t_idx, kind in enumerate(types, start=1):
            for level in range(1, levels + 1):
                dst_path = (
                    out / "distorted_images" / f"i{ref_idx:02d}_{t_idx:02d}_{level}.png"
                )
                # stable across processes (no str hashing); level excluded so
                # noise ladders share one realization scaled per level
                sub_seed = (seed * 1009 + ref_idx) * 101 + t_idx
                dst = apply_distortion(ref, kind, level, seed=sub_seed)
                save_image(dst, dst_path)
                records.append(
                    EvaluationRecord(
                        reference_id=ref_idx,
                        distortion_type=t_idx,
                        level=level,
                        mos=-float(level),
                        reference_path=str(ref_path),
                        distorted_path=str(dst_path),
                    )
                )
    with open(out / "mos_with_names.txt", "w") as fh:
        for rec in records:
            fh.write(f"{Path(rec.distorted_path).name} {rec.mos}\n")
    return records

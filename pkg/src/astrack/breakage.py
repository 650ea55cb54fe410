"""Visual breakage analysis over paired screenshots.

Per site: several vanilla browser screenshot pairs establish the expected
similarity band (mean - z*std of normalized cross correlation); the
screenshot taken with replacements applied is flagged suspicious when it
falls below the band. Suspicious sites get a pixel diff mask for the human
pass, whose category labels accumulate in an append-only log.
"""

from __future__ import annotations

import json
import re
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from PIL import Image

CATEGORIES = (
    "ANIMATION", "BANNER", "BROKEN", "COOKIE", "FONTS",
    "MEDIA", "MINOR", "TEXT", "TRACKING",
)

HEATMAP_CANVAS = (1280, 1024)  # (width, height)

_GRAY_WEIGHTS = np.array([0.299, 0.587, 0.114])


class BreakageError(Exception):
    pass


class InvalidImage(BreakageError):
    pass


class InsufficientRuns(BreakageError):
    pass


class Variant(str, Enum):
    VANILLA_A = "vanilla_a"
    VANILLA_B = "vanilla_b"
    MODIFIED = "modified"


@dataclass(frozen=True)
class Screenshot:
    site_id: str
    variant: Variant
    run_index: int
    pixels: np.ndarray  # h×w grayscale in [0, 1]
    original_dims: tuple[int, int]  # (width, height) as captured

    def __post_init__(self):
        if self.pixels.ndim != 2 or self.pixels.size == 0:
            raise InvalidImage(f"empty screenshot for {self.site_id}")


def load_screenshot(path, site_id: str, variant: Variant, run_index: int) -> Screenshot:
    """PNG → grayscale intensities; alpha is composited over white."""
    with Image.open(path) as img:
        rgba = img.convert("RGBA")
    arr = np.asarray(rgba, dtype=np.float64) / 255.0
    alpha = arr[..., 3:4]
    rgb = arr[..., :3] * alpha + (1.0 - alpha)  # over white
    gray = rgb @ _GRAY_WEIGHTS
    h, w = gray.shape
    if h == 0 or w == 0:
        raise InvalidImage(f"empty screenshot: {path}")
    return Screenshot(site_id=site_id, variant=variant, run_index=run_index,
                      pixels=gray, original_dims=(w, h))


def reconcile(a: Screenshot, b: Screenshot) -> tuple[np.ndarray, np.ndarray, float]:
    """Crop both to the top-left intersection; returns the cropped fraction
    of the larger canvas (0.0 when dimensions already agree)."""
    ha, wa = a.pixels.shape
    hb, wb = b.pixels.shape
    h, w = min(ha, hb), min(wa, wb)
    if h == 0 or w == 0:
        raise InvalidImage("no overlapping area")
    total = max(ha * wa, hb * wb)
    cropped = 1.0 - (h * w) / total
    return a.pixels[:h, :w], b.pixels[:h, :w], cropped


def ncc(a: Screenshot, b: Screenshot) -> float:
    """Normalized cross correlation clamped to [0, 1].

    Dimensions must already be reconciled. Constant images are the limits:
    both constant and equal → 1, otherwise 0.
    """
    pa, pb = a.pixels, b.pixels
    if pa.size == 0 or pb.size == 0:
        raise InvalidImage("empty image")
    if pa.shape != pb.shape:
        raise InvalidImage(f"unreconciled dimensions {pa.shape} vs {pb.shape}")
    da = pa - pa.mean()
    db = pb - pb.mean()
    va = float((da * da).sum())
    vb = float((db * db).sum())
    if va == 0.0 and vb == 0.0:
        return 1.0 if float(pa.flat[0]) == float(pb.flat[0]) else 0.0
    if va == 0.0 or vb == 0.0:
        return 0.0
    r = float((da * db).sum()) / float(np.sqrt(va * vb))
    return max(r, 0.0)


@dataclass(frozen=True)
class Band:
    mean: float
    std: float
    lower_bound: float


def expected_band(vanilla_sims, z: float = 1.96,
                  degenerate_epsilon: float = 1e-9) -> Band:
    """Sample mean and sample std (n-1 denominator) with lower bound
    mean - z*std, floored at 0; a zero-variance run degrades to
    mean - degenerate_epsilon."""
    sims = sorted(vanilla_sims)  # summation order must not leak into the band
    if len(sims) < 2:
        raise InsufficientRuns(f"need >= 2 vanilla similarities, got {len(sims)}")
    arr = np.asarray(sims, dtype=np.float64)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1))
    if std == 0.0:
        lower = mean - degenerate_epsilon
    else:
        lower = mean - z * std
    return Band(mean=mean, std=std, lower_bound=max(lower, 0.0))


@dataclass(frozen=True)
class SimilarityRecord:
    site_id: str
    vanilla_sims: tuple[float, ...]
    modified_sim: float
    mean: float
    std: float
    lower_bound: float
    suspicious: bool
    cropped_fraction: float = 0.0


def make_similarity_record(site_id: str, vanilla_sims, modified_sim: float,
                           z: float = 1.96, degenerate_epsilon: float = 1e-9,
                           cropped_fraction: float = 0.0) -> SimilarityRecord:
    band = expected_band(vanilla_sims, z=z, degenerate_epsilon=degenerate_epsilon)
    return SimilarityRecord(
        site_id=site_id, vanilla_sims=tuple(float(v) for v in vanilla_sims),
        modified_sim=float(modified_sim),
        mean=band.mean, std=band.std, lower_bound=band.lower_bound,
        suspicious=float(modified_sim) < band.lower_bound,
        cropped_fraction=cropped_fraction,
    )


def flag_suspicious(record: SimilarityRecord) -> bool:
    return record.modified_sim < record.lower_bound


# -- diff masks ---------------------------------------------------------------


@dataclass(frozen=True)
class DiffMask:
    site_id: str
    mask: np.ndarray  # h×w bool, True = differing pixel

    @property
    def differing_fraction(self) -> float:
        return float(self.mask.sum()) / self.mask.size


def diff_mask(a: Screenshot, b: Screenshot, intensity_threshold: float = 0.0) -> DiffMask:
    pa, pb = a.pixels, b.pixels
    if pa.shape != pb.shape:
        raise InvalidImage(f"unreconciled dimensions {pa.shape} vs {pb.shape}")
    return DiffMask(site_id=a.site_id, mask=np.abs(pa - pb) > intensity_threshold)


def mask_overlay(mask: DiffMask, base: Screenshot | None = None) -> Image.Image:
    """Render differing pixels as red over the base image (white if none)."""
    h, w = mask.mask.shape
    if base is not None and base.pixels.shape == (h, w):
        gray = (base.pixels * 255).astype(np.uint8)
    else:
        gray = np.full((h, w), 255, dtype=np.uint8)
    rgb = np.stack([gray, gray, gray], axis=-1)
    rgb[mask.mask] = (255, 0, 0)
    return Image.fromarray(rgb, mode="RGB")


def heatmap(masks, canvas: tuple[int, int] = HEATMAP_CANVAS) -> np.ndarray:
    """Per-pixel mean mask membership on a fixed canvas (nearest-neighbor)."""
    masks = list(masks)
    if not masks:
        raise BreakageError("no masks to aggregate")
    w, h = canvas
    acc = np.zeros((h, w), dtype=np.float64)
    for m in masks:
        img = Image.fromarray(m.mask.astype(np.uint8) * 255, mode="L")
        resized = np.asarray(img.resize((w, h), Image.NEAREST), dtype=np.float64) / 255.0
        acc += resized
    return acc / len(masks)


# -- triage labels -------------------------------------------------------------


@dataclass(frozen=True)
class TriageLabel:
    site_id: str
    categories: frozenset[str]
    notes: str = ""
    labeler: str = ""
    timestamp: float = field(default_factory=time.time)

    def __post_init__(self):
        if not self.categories:
            raise ValueError("label needs at least one category")
        unknown = set(self.categories) - set(CATEGORIES)
        if unknown:
            raise ValueError(f"unknown categories: {sorted(unknown)}")

    def to_dict(self) -> dict:
        return {
            "site_id": self.site_id, "categories": sorted(self.categories),
            "notes": self.notes, "labeler": self.labeler, "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TriageLabel":
        return cls(
            site_id=obj["site_id"], categories=frozenset(obj["categories"]),
            notes=obj.get("notes", ""), labeler=obj.get("labeler", ""),
            timestamp=obj.get("timestamp", 0.0),
        )


class TriageStore:
    """Append-only JSON-lines label log; single writer, concurrent readers."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, label: TriageLabel) -> None:
        line = json.dumps(label.to_dict()) + "\n"
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)

    def labels(self) -> list[TriageLabel]:
        if not self.path.exists():
            return []
        out = []
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(TriageLabel.from_dict(json.loads(line)))
        return out

    def labels_by_site(self) -> dict[str, list[TriageLabel]]:
        grouped: dict[str, list[TriageLabel]] = {}
        for label in self.labels():
            grouped.setdefault(label.site_id, []).append(label)
        return grouped

    def summary(self) -> dict[str, int]:
        """Count of labeled sites per category (multi-label counts in each)."""
        site_categories: dict[str, set[str]] = {}
        for label in self.labels():
            site_categories.setdefault(label.site_id, set()).update(label.categories)
        counts = {category: 0 for category in CATEGORIES}
        for cats in site_categories.values():
            for category in cats:
                counts[category] += 1
        return counts

    def broken_site_count(self) -> int:
        """Sites whose labels include BROKEN: the only category counted as
        real functionality loss."""
        return sum(
            1 for cats in (
                {c for label in labels for c in label.categories}
                for labels in self.labels_by_site().values()
            ) if "BROKEN" in cats
        )


# -- screenshot directory layout ------------------------------------------------

_SHOT_RE = re.compile(r"^(vanilla_a|vanilla_b|modified)_(\d+)\.png$")


def scan_screenshot_dir(root) -> dict[str, dict[Variant, dict[int, Path]]]:
    """Layout: ``{site_id}/{variant}_{run}.png``."""
    root = Path(root)
    sites: dict[str, dict[Variant, dict[int, Path]]] = {}
    if not root.exists():
        return sites
    for site_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        shots: dict[Variant, dict[int, Path]] = {}
        for png in sorted(site_dir.glob("*.png")):
            m = _SHOT_RE.match(png.name)
            if not m:
                continue
            variant = Variant(m.group(1))
            shots.setdefault(variant, {})[int(m.group(2))] = png
        if shots:
            sites[site_dir.name] = shots
    return sites


@dataclass(frozen=True)
class BreakageConfig:
    pair_mode: str = "paired"  # "paired": a_i vs b_i; "all_pairs": every a_i×b_j
    z: float = 1.96
    degenerate_epsilon: float = 1e-9
    intensity_threshold: float = 0.0

    def __post_init__(self):
        if self.pair_mode not in ("paired", "all_pairs"):
            raise ValueError("pair_mode must be 'paired' or 'all_pairs'")


@dataclass(frozen=True)
class SiteAnalysis:
    record: SimilarityRecord
    mask: DiffMask | None  # present only for suspicious sites
    base: Screenshot  # the cropped vanilla used for the modified comparison


def analyze_site(site_id: str, shots: dict[Variant, dict[int, Path]],
                 config: BreakageConfig) -> SiteAnalysis:
    """Similarity record plus, when suspicious, the vanilla/modified diff."""
    a_runs = shots.get(Variant.VANILLA_A, {})
    b_runs = shots.get(Variant.VANILLA_B, {})
    m_runs = shots.get(Variant.MODIFIED, {})
    if not a_runs or not b_runs:
        raise BreakageError(f"{site_id}: missing vanilla screenshot pair")
    if not m_runs:
        raise BreakageError(f"{site_id}: missing modified screenshot")

    def load(variant: Variant, run: int, path: Path) -> Screenshot:
        return load_screenshot(path, site_id, variant, run)

    sims: list[float] = []
    cropped = 0.0
    if config.pair_mode == "paired":
        pairs = [(r, r) for r in sorted(set(a_runs) & set(b_runs))]
    else:
        pairs = [(i, j) for i in sorted(a_runs) for j in sorted(b_runs)]
    for i, j in pairs:
        sa = load(Variant.VANILLA_A, i, a_runs[i])
        sb = load(Variant.VANILLA_B, j, b_runs[j])
        pa, pb, frac = reconcile(sa, sb)
        cropped = max(cropped, frac)
        sims.append(ncc(
            Screenshot(site_id, Variant.VANILLA_A, i, pa, sa.original_dims),
            Screenshot(site_id, Variant.VANILLA_B, j, pb, sb.original_dims),
        ))

    first_a = min(a_runs)
    first_m = min(m_runs)
    base = load(Variant.VANILLA_A, first_a, a_runs[first_a])
    mod = load(Variant.MODIFIED, first_m, m_runs[first_m])
    pa, pm, frac = reconcile(base, mod)
    cropped = max(cropped, frac)
    base_c = Screenshot(site_id, Variant.VANILLA_A, first_a, pa, base.original_dims)
    mod_c = Screenshot(site_id, Variant.MODIFIED, first_m, pm, mod.original_dims)
    modified_sim = ncc(base_c, mod_c)

    record = make_similarity_record(
        site_id, sims, modified_sim,
        z=config.z, degenerate_epsilon=config.degenerate_epsilon,
        cropped_fraction=cropped,
    )
    mask = None
    if record.suspicious:
        mask = diff_mask(base_c, mod_c, config.intensity_threshold)
    return SiteAnalysis(record=record, mask=mask, base=base_c)


def similarity_csv(records, n_runs: int) -> str:
    header = ["site_id"] + [f"sim_run{i + 1}" for i in range(n_runs)] + [
        "mean", "std", "lower", "modified", "suspicious"]
    lines = [",".join(header)]
    for r in sorted(records, key=lambda r: r.site_id):
        sims = list(r.vanilla_sims) + [""] * (n_runs - len(r.vanilla_sims))
        row = [r.site_id] + [f"{s:.9f}" if s != "" else "" for s in sims] + [
            f"{r.mean:.9f}", f"{r.std:.9f}", f"{r.lower_bound:.9f}",
            f"{r.modified_sim:.9f}", str(r.suspicious).lower()]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"

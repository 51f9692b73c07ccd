"""Pipeline orchestration: features -> dissimilarity -> ordering -> counts.

``run_report`` reproduces the three analyses: per-scene and per-city subsets
(16 ordered dissimilarity images on the full dataset), an all-data run, and
single-subset runs.  Every artifact write is atomic, and re-running on the
same inputs produces byte-identical files.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import os
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .audio import AudioConfig, extract_features
from .cce import CceConfig, cce_count
from .errors import InputError
from .manifest import CITIES, CITY_PALETTE, SCENE_PALETTE, SCENES, LabeledManifest
from .matrix import euclidean_dissim
from .specvat import SpecVatConfig, a_specvat_select_k, specvat
from .stacks import label_stack, stack_csv, stack_svg
from .vat import odi_from, ordering_to_json, vat_order, write_pgm
from .vatf import atomic_write_text, read_vatf, write_vatf

GROUPINGS = ("by_scene", "by_city", "all", "single_subset")
METHODS = ("vat", "specvat")


@dataclass(frozen=True)
class ReportConfig:
    audio: AudioConfig
    spec: SpecVatConfig
    cce: CceConfig


DEFAULT_CONFIG = ReportConfig(AudioConfig(), SpecVatConfig(), CceConfig())


def load_config(path: Optional[str]) -> ReportConfig:
    """Read a JSON config with optional ``audio``/``specvat``/``cce`` sections."""
    if path is None:
        return DEFAULT_CONFIG
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"config {path} must be a JSON object")
    unknown = set(doc) - {"audio", "specvat", "cce"}
    if unknown:
        raise InputError(f"config {path}: unknown section(s) {sorted(unknown)}")

    def build(cls, defaults, section):
        fields = doc.get(section, {})
        if not isinstance(fields, dict):
            raise InputError(f"config section {section!r} must be an object")
        valid = set(defaults.__dataclass_fields__)
        bad = set(fields) - valid
        if bad:
            raise InputError(
                f"config section {section!r}: unknown key(s) {sorted(bad)}"
            )
        return replace(defaults, **fields)

    return ReportConfig(
        audio=build(AudioConfig, AudioConfig(), "audio"),
        spec=build(SpecVatConfig, SpecVatConfig(), "specvat"),
        cce=build(CceConfig, CceConfig(), "cce"),
    )


# --------------------------------------------------------------------------
# Feature extraction with caching


def feature_cache_key(path: str, size: int, cfg: AudioConfig) -> str:
    raw = f"{path}|{size}|{cfg.cache_key()}".encode("utf-8")
    return hashlib.sha256(raw).hexdigest()


def features_for_manifest(
    manifest: LabeledManifest,
    cfg: AudioConfig = AudioConfig(),
    *,
    audio_root: Optional[str] = None,
    cache_dir: Optional[str] = None,
    threads: int = 1,
) -> np.ndarray:
    """Extract one feature row per manifest record, in manifest order.

    Missing audio files are enumerated in a single error.  With a cache
    directory, rows are re-used when (path, byte size, config) match, so
    large runs are restartable.  Results do not depend on thread count.
    """
    paths = []
    missing = []
    for rec in manifest.records:
        p = rec.path
        if audio_root is not None and not os.path.isabs(p):
            p = os.path.join(audio_root, p)
        if not os.path.isfile(p):
            missing.append(p)
        paths.append(p)
    if missing:
        raise InputError(
            "missing audio file(s): " + ", ".join(missing[:20])
            + (f" ... and {len(missing) - 20} more" if len(missing) > 20 else "")
        )
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)

    def one(path: str) -> np.ndarray:
        key = None
        if cache_dir is not None:
            size = os.path.getsize(path)
            key = os.path.join(
                cache_dir, feature_cache_key(path, size, cfg) + ".vatf"
            )
            if os.path.isfile(key):
                return read_vatf(key)[0]
        with open(path, "rb") as fh:
            data = fh.read()
        try:
            vec = extract_features(data, cfg)
        except InputError as exc:
            raise InputError(f"{path}: {exc}") from exc
        if key is not None:
            write_vatf(key, vec[np.newaxis, :])
        return vec

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, paths))
    else:
        rows = [one(p) for p in paths]
    return np.vstack(rows)


# --------------------------------------------------------------------------
# Grouping and reporting


def _subsets(manifest: LabeledManifest, grouping: str,
             subset: Optional[str]) -> list[tuple[str, np.ndarray, str]]:
    """Yield (name, record indices, stack label kind) per subset."""
    scenes = np.asarray(manifest.scenes)
    cities = np.asarray(manifest.cities)
    if grouping == "by_scene":
        return [
            (s, np.flatnonzero(scenes == s), "city") for s in SCENES
        ]
    if grouping == "by_city":
        return [
            (c, np.flatnonzero(cities == c), "scene") for c in CITIES
        ]
    if grouping == "all":
        return [("all", np.arange(len(manifest)), "both")]
    if grouping == "single_subset":
        if subset is None:
            raise InputError("grouping 'single_subset' requires a subset name")
        if subset in SCENES:
            return [(subset, np.flatnonzero(scenes == subset), "city")]
        if subset in CITIES:
            return [(subset, np.flatnonzero(cities == subset), "scene")]
        raise InputError(f"subset {subset!r} is neither a scene nor a city")
    raise InputError(f"unknown grouping {grouping!r}; expected one of {GROUPINGS}")


def _stack_artifacts(kind, manifest, idx, ordering, subset_dir):
    """Write stack SVG/CSV for the requested label kind(s); return metadata."""
    out = {}
    kinds = ("scene", "city") if kind == "both" else (kind,)
    for k in kinds:
        if k == "scene":
            labels = [manifest.records[i].scene for i in idx]
            palette = SCENE_PALETTE
        else:
            labels = [manifest.records[i].city for i in idx]
            palette = CITY_PALETTE
        stack = label_stack(ordering.order, labels, palette)
        svg_path = os.path.join(subset_dir, f"stack_{k}.svg")
        csv_path = os.path.join(subset_dir, f"stack_{k}.csv")
        atomic_write_text(svg_path, stack_svg(stack, ordering.link_dist))
        atomic_write_text(csv_path, stack_csv(stack, ordering.order))
        out[k] = {
            "run_count": stack.run_count,
            "mean_run_length": stack.mean_run_length,
            "svg": os.path.relpath(svg_path, os.path.dirname(subset_dir)),
            "csv": os.path.relpath(csv_path, os.path.dirname(subset_dir)),
        }
    return out


def run_report(
    manifest: LabeledManifest,
    features: np.ndarray,
    grouping: str,
    out_dir: str,
    *,
    method: str = "vat",
    config: ReportConfig = DEFAULT_CONFIG,
    subset: Optional[str] = None,
    k: Optional[int] = None,
    standardize: bool = False,
) -> dict:
    """Analyze each subset and emit ODI/ordering/stack/count artifacts.

    Per subset: the ordered dissimilarity image (PGM), the ordering with its
    link distances (JSON), label stacks (SVG + CSV), and a cluster-count
    report (JSON).  A summary table of counts per subset is returned and
    written to ``report.json``.  SpecVAT subsets pick k automatically unless
    ``k`` is given.  Subsets with fewer than 2 records are skipped with a
    warning.
    """
    if method not in METHODS:
        raise InputError(f"unknown method {method!r}; expected one of {METHODS}")
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] != len(manifest):
        raise InputError(
            f"feature matrix rows ({features.shape}) do not match manifest "
            f"size {len(manifest)}"
        )
    os.makedirs(out_dir, exist_ok=True)

    subsets = _subsets(manifest, grouping, subset)
    report: dict = {
        "group": grouping,
        "method": method,
        "subsets": [],
        "skipped": [],
        "summary": {},
    }
    for name, idx, stack_kind in subsets:
        if idx.size < 2:
            warnings.warn(
                f"subset {name!r} has {idx.size} record(s); skipping",
                stacklevel=2,
            )
            report["skipped"].append({"subset": name, "n": int(idx.size)})
            continue
        subset_dir = os.path.join(out_dir, name)
        os.makedirs(subset_dir, exist_ok=True)

        dissim = euclidean_dissim(features[idx], standardize=standardize)
        entry: dict = {"subset": name, "n": int(idx.size)}
        if method == "vat":
            ordering = vat_order(dissim)
            image = odi_from(dissim, ordering)
        else:
            spec_cfg = config.spec
            if k is not None:
                chosen = k
            else:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    chosen, scores = a_specvat_select_k(dissim, spec_cfg)
                entry["k_scores"] = {str(kk): v for kk, v in sorted(scores.items())}
            chosen = min(chosen, idx.size - 1)
            result = specvat(dissim, replace(spec_cfg, k=chosen))
            ordering, image = result.ordering, result.image
            entry["k"] = int(chosen)

        write_pgm(image, os.path.join(subset_dir, "odi.pgm"))
        atomic_write_text(
            os.path.join(subset_dir, "ordering.json"), ordering_to_json(ordering)
        )
        write_vatf(os.path.join(subset_dir, "dissim.vatf"), dissim)

        cce = cce_count(image, config.cce)
        atomic_write_text(os.path.join(subset_dir, "cce.json"), cce.to_json())
        entry["cluster_count"] = cce.cluster_count
        entry["otsu_threshold"] = cce.otsu_threshold
        entry["b"] = cce.b
        entry["band_width"] = cce.band_width

        entry["stacks"] = _stack_artifacts(
            stack_kind, manifest, idx, ordering, subset_dir
        )
        entry["artifacts"] = {
            "odi": f"{name}/odi.pgm",
            "ordering": f"{name}/ordering.json",
            "cce": f"{name}/cce.json",
            "dissim": f"{name}/dissim.vatf",
        }
        report["subsets"].append(entry)
        report["summary"][name] = cce.cluster_count

    atomic_write_text(
        os.path.join(out_dir, "report.json"),
        json.dumps(report, sort_keys=True, indent=2) + "\n",
    )
    return report

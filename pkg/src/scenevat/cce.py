"""Cluster count extraction from an ordered dissimilarity image.

The image is binarized with Otsu's threshold, the band of pixels directly
below the diagonal is reduced to a per-column dark count, and the number of
maximal runs above a cutoff is reported as the cluster count.  The cutoff is
half the signal maximum by default, or zero in ``zero`` mode.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateImageError, InputError
from .vat import check_image

THRESHOLD_MODES = ("half_max", "zero")


@dataclass(frozen=True)
class CceConfig:
    """band_width defaults to max(1, n // 50) when left as None."""

    band_width: Optional[int] = None
    threshold_mode: str = "half_max"
    explicit_b: Optional[int] = None

    def resolve_band(self, n: int) -> int:
        w = self.band_width if self.band_width is not None else max(1, n // 50)
        if not 1 <= w <= n - 1:
            raise InputError(f"band width {w} must satisfy 1 <= w <= n-1 (n={n})")
        return int(w)

    def __post_init__(self):
        if self.threshold_mode not in THRESHOLD_MODES:
            raise InputError(
                f"threshold_mode must be one of {THRESHOLD_MODES}, "
                f"got {self.threshold_mode!r}"
            )
        if self.band_width is not None and self.band_width < 1:
            raise InputError(f"band width must be >= 1, got {self.band_width}")


@dataclass(frozen=True)
class CceReport:
    otsu_threshold: int
    signal: np.ndarray
    b: int
    cluster_count: int
    run_spans: list  # half-open [start, stop) column intervals
    band_width: int
    min_detectable_block: int = field(default=0)

    def to_dict(self) -> dict:
        return {
            "otsu_threshold": self.otsu_threshold,
            "b": self.b,
            "cluster_count": self.cluster_count,
            "band_width": self.band_width,
            "min_detectable_block": self.min_detectable_block,
            "run_spans": [[int(a), int(b)] for a, b in self.run_spans],
            "signal": [int(v) for v in self.signal],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def otsu_threshold(img) -> int:
    """Threshold maximizing between-class variance; smallest value on ties.

    A pixel is "dark" iff its intensity is <= the returned threshold.  The
    search is exhaustive over all 256 split points and the comparison is
    done in exact integer arithmetic, so plateaus resolve deterministically.
    """
    x = check_image(img)
    hist = np.bincount(x.reshape(-1), minlength=256).astype(np.int64)
    if np.count_nonzero(hist) < 2:
        raise DegenerateImageError(
            "image has a single intensity level; no Otsu threshold exists"
        )
    counts = np.cumsum(hist)
    sums = np.cumsum(hist * np.arange(256, dtype=np.int64))
    total_n = int(counts[-1])
    total_s = int(sums[-1])

    # Between-class variance is proportional to (s0*c1 - s1*c0)^2 / (c0*c1);
    # compare candidates by cross-multiplying with Python ints (exact).
    best_t = -1
    best_num = -1
    best_den = 1
    for t in range(256):
        c0 = int(counts[t])
        c1 = total_n - c0
        if c0 == 0 or c1 == 0:
            continue
        s0 = int(sums[t])
        s1 = total_s - s0
        num = (s0 * c1 - s1 * c0) ** 2
        den = c0 * c1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return best_t


def otsu_effectiveness(img) -> float:
    """Normalized between-class variance at the Otsu threshold, in [0, 1].

    1.0 means the histogram splits into two zero-variance classes (a
    perfectly binary image).  Raises DegenerateImageError on constant images.
    """
    x = check_image(img)
    t = otsu_threshold(x)
    flat = x.reshape(-1).astype(np.float64)
    total_var = flat.var()
    dark = flat[flat <= t]
    light = flat[flat > t]
    w0 = dark.size / flat.size
    w1 = 1.0 - w0
    between = w0 * w1 * (dark.mean() - light.mean()) ** 2
    # rounding can push the ratio a few ulp past 1 on perfectly binary images
    return float(min(1.0, between / total_var))


def offdiag_signal(img, t: int, cfg: CceConfig = CceConfig()) -> np.ndarray:
    """Per-column dark-pixel count over the band just below the diagonal.

    ``signal[i]`` counts dark pixels among ``(i+1, i) .. (i+w, i)`` for
    i in [0, n-1-w]; values lie in [0, w].
    """
    x = check_image(img)
    n = x.shape[0]
    if x.shape[0] != x.shape[1]:
        raise InputError(f"expected a square image, got {x.shape}")
    w = cfg.resolve_band(n)
    dark = x <= t
    signal = np.zeros(n - w, dtype=np.int64)
    for u in range(1, w + 1):
        signal += np.diagonal(dark, offset=-u)[: n - w]
    return signal


def cce_count(img, cfg: CceConfig = CceConfig()) -> CceReport:
    """Binarize, extract the sub-diagonal signal, and count runs above b.

    ``b`` is floor(max(signal) / 2) in ``half_max`` mode, 0 in ``zero``
    mode, or ``cfg.explicit_b`` when given.  Blocks smaller than
    ``band_width + 1`` records can be missed; the report carries that
    limit as ``min_detectable_block``.
    """
    x = check_image(img)
    t = otsu_threshold(x)
    w = cfg.resolve_band(x.shape[0])
    signal = offdiag_signal(x, t, cfg)
    peak = int(signal.max(initial=0))

    if cfg.explicit_b is not None:
        b = int(cfg.explicit_b)
    elif cfg.threshold_mode == "half_max":
        b = peak // 2
    else:
        b = 0

    if peak == 0:
        warnings.warn(
            "sub-diagonal signal is identically zero; reporting 0 clusters",
            stacklevel=2,
        )
        spans: list[tuple[int, int]] = []
    else:
        spans = _runs_above(signal, b)
    return CceReport(
        otsu_threshold=t,
        signal=signal,
        b=b,
        cluster_count=len(spans),
        run_spans=spans,
        band_width=w,
        min_detectable_block=w + 1,
    )


def _runs_above(signal: np.ndarray, b: int) -> list[tuple[int, int]]:
    above = signal > b
    if not above.any():
        return []
    edges = np.flatnonzero(np.diff(above.astype(np.int8)))
    starts = [0] if above[0] else []
    starts += [int(e) + 1 for e in edges if not above[e]]
    stops = [int(e) + 1 for e in edges if above[e]]
    if above[-1]:
        stops.append(int(above.size))
    return list(zip(starts, stops))

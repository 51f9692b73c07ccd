"""Feature matrices, pairwise dissimilarities, and permutation helpers.

Feature matrices are plain float64 arrays of shape (n, d), one row per
record.  Dissimilarity matrices are square, symmetric, nonnegative float64
arrays with an exactly-zero diagonal.  Row order is the canonical record
index order that every downstream ordering permutes.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InputError

# Tile edge for the blocked pairwise kernel.  Keeps the scratch buffer a few
# MB so peak memory stays at the output matrix plus one feature copy.
DEFAULT_TILE = 1024

SYMMETRY_ATOL = 1e-12


def as_features(values) -> np.ndarray:
    """Validate and return an (n, d) float64 feature matrix.

    1-D input is treated as a single-column matrix.  Rejects empty input and
    non-finite values; the diagnostic names the first offending row.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    if x.ndim != 2:
        raise InputError(f"feature matrix must be 2-D, got {x.ndim}-D")
    n, d = x.shape
    if n < 1 or d < 1:
        raise InputError(f"feature matrix must be at least 1x1, got {n}x{d}")
    finite_rows = np.isfinite(x).all(axis=1)
    if not finite_rows.all():
        bad = int(np.flatnonzero(~finite_rows)[0])
        raise InputError(f"feature row {bad} contains a non-finite value")
    return x


def zscore(features: np.ndarray) -> np.ndarray:
    """Per-dimension standardization; constant dimensions are left unscaled."""
    x = as_features(features)
    mean = x.mean(axis=0)
    sd = x.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)
    return (x - mean) / sd


def pairwise_dissim(
    features,
    pair_fn: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
    *,
    standardize: bool = False,
    tile: int = DEFAULT_TILE,
) -> np.ndarray:
    """Full pairwise distance matrix, computed tile by tile.

    Only upper-triangle tiles are evaluated and then mirrored, so the result
    is exactly symmetric and the diagonal is exactly zero.  ``pair_fn`` is a
    pluggable metric hook ``(rows_a, rows_b) -> distances``; the default is
    Euclidean.  Output is independent of the tile size.
    """
    x = as_features(features)
    if standardize:
        x = zscore(x)
    if pair_fn is None:
        pair_fn = _euclidean_block
    if tile < 1:
        raise InputError(f"tile must be positive, got {tile}")
    n = x.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    for i0 in range(0, n, tile):
        i1 = min(i0 + tile, n)
        for j0 in range(i0, n, tile):
            j1 = min(j0 + tile, n)
            block = np.asarray(pair_fn(x[i0:i1], x[j0:j1]), dtype=np.float64)
            if block.shape != (i1 - i0, j1 - j0):
                raise InputError(
                    f"pair_fn returned shape {block.shape}, "
                    f"expected {(i1 - i0, j1 - j0)}"
                )
            if i0 == j0:
                # Keep only the tile's upper triangle and mirror it so the
                # matrix is symmetric by construction.
                block = np.triu(block)
                block = block + block.T - np.diag(np.diagonal(block))
            out[i0:i1, j0:j1] = block
            if i0 != j0:
                out[j0:j1, i0:i1] = block.T
    np.fill_diagonal(out, 0.0)
    return out


def _euclidean_block(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return cdist(a, b, metric="euclidean")


def euclidean_dissim(features, *, standardize: bool = False,
                     tile: int = DEFAULT_TILE) -> np.ndarray:
    """Euclidean distance matrix of the feature rows.

    ``standardize=True`` applies per-dimension z-scoring first (off by
    default; features are used raw).
    """
    return pairwise_dissim(features, standardize=standardize, tile=tile)


def validate_dissim(m, atol: float = SYMMETRY_ATOL) -> Optional[str]:
    """Check dissimilarity-matrix invariants.

    Returns ``None`` when the matrix passes, otherwise a message describing
    the first violated invariant and where it occurs.
    """
    x = np.asarray(m, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        return f"matrix is not square: shape {x.shape}"
    if x.shape[0] < 1:
        return "matrix is empty"
    bad = np.argwhere(~np.isfinite(x))
    if bad.size:
        i, j = bad[0]
        return f"non-finite value at ({i}, {j})"
    diag = np.diagonal(x)
    nz = np.flatnonzero(diag != 0.0)
    if nz.size:
        i = int(nz[0])
        return f"diagonal entry at ({i}, {i}) is {diag[i]!r}, expected exactly 0"
    asym = np.abs(x - x.T)
    if asym.max(initial=0.0) > atol:
        i, j = np.argwhere(asym > atol)[0]
        return (
            f"asymmetric entry at ({i}, {j}): "
            f"{x[i, j]!r} vs {x[j, i]!r} (tolerance {atol})"
        )
    neg = np.argwhere(x < 0)
    if neg.size:
        i, j = neg[0]
        return f"negative entry at ({i}, {j}): {x[i, j]!r}"
    return None


def check_dissim(m, atol: float = SYMMETRY_ATOL) -> np.ndarray:
    """Return ``m`` as a float64 array, raising InputError if invalid."""
    x = np.asarray(m, dtype=np.float64)
    problem = validate_dissim(x, atol=atol)
    if problem is not None:
        raise InputError(f"invalid dissimilarity matrix: {problem}")
    return x


def check_permutation(p, n: int) -> np.ndarray:
    """Return ``p`` as an int64 index array, raising if not a bijection on [0, n)."""
    idx = np.asarray(p, dtype=np.int64)
    if idx.ndim != 1:
        raise InputError(f"permutation must be 1-D, got {idx.ndim}-D")
    if idx.shape[0] != n:
        raise InputError(f"permutation length {idx.shape[0]} does not match size {n}")
    if not np.array_equal(np.sort(idx), np.arange(n)):
        raise InputError("permutation is not a bijection on [0, n)")
    return idx


def invert_permutation(p) -> np.ndarray:
    idx = np.asarray(p, dtype=np.int64)
    inv = np.empty_like(idx)
    inv[idx] = np.arange(idx.shape[0])
    return inv


def permute_matrix(m, p) -> np.ndarray:
    """Symmetric reordering: ``out[i][j] = m[p[i]][p[j]]``."""
    x = check_dissim(m)
    idx = check_permutation(p, x.shape[0])
    return x[np.ix_(idx, idx)]

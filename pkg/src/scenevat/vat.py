"""VAT reordering and ordered dissimilarity images.

The reordering starts at an endpoint of a furthest pair and repeatedly
appends the unordered point closest to the ordered set, which is exactly the
vertex-addition order of Prim's algorithm on the complete graph.  Rendered
as an 8-bit grayscale image, dark diagonal blocks suggest clusters.

Tie-breaks are fixed so results are deterministic: among furthest pairs the
lexicographically smallest (i, j) wins and its smaller index starts the
order; among equidistant candidates the smallest index wins.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .matrix import check_dissim, check_permutation, permute_matrix
from .vatf import atomic_write_bytes


@dataclass(frozen=True)
class VatOrdering:
    """Permutation of record indices plus the Prim link distances.

    ``link_dist[0]`` is 0; ``link_dist[i]`` for i >= 1 is the distance from
    ``order[i]`` to its nearest already-ordered point, i.e. the weight of the
    MST edge that attached it.
    """

    order: np.ndarray
    link_dist: np.ndarray

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        link = np.asarray(self.link_dist, dtype=np.float64)
        if order.shape != link.shape or order.ndim != 1:
            raise InputError("order and link_dist must be 1-D and equally long")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "link_dist", link)

    def __len__(self):
        return self.order.shape[0]


def vat_order(m) -> VatOrdering:
    """Reorder a dissimilarity matrix so similar records become neighbours."""
    d = check_dissim(m)
    n = d.shape[0]
    order = np.empty(n, dtype=np.int64)
    link = np.zeros(n, dtype=np.float64)
    if n == 1:
        order[0] = 0
        return VatOrdering(order, link)

    # First occurrence of the maximum in row-major scan order is the
    # lexicographically smallest (i, j) pair; its row index is the smaller
    # endpoint because the mirror entry (j, i) appears later.
    start = int(np.unravel_index(np.argmax(d), d.shape)[0])
    order[0] = start

    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    best = d[start].copy()
    best[start] = np.inf
    for t in range(1, n):
        nxt = int(np.argmin(best))  # first occurrence = smallest index on ties
        order[t] = nxt
        link[t] = best[nxt]
        visited[nxt] = True
        np.minimum(best, d[nxt], out=best)
        best[visited] = np.inf  # keep placed records out of the frontier
    return VatOrdering(order, link)


def odi_from(m, ordering: VatOrdering) -> np.ndarray:
    """Render the reordered matrix as an 8-bit image (0 black .. 255 white).

    Pixels are ``round(255 * d / dmax)`` with round-half-away-from-zero; a
    zero-range matrix renders all black.
    """
    d = check_dissim(m)
    if len(ordering) != d.shape[0]:
        raise InputError(
            f"ordering length {len(ordering)} does not match matrix size {d.shape[0]}"
        )
    ordered = permute_matrix(d, ordering.order)
    dmax = ordered.max()
    if dmax <= 0:
        return np.zeros(ordered.shape, dtype=np.uint8)
    # floor(x + 0.5) is round-half-away-from-zero for nonnegative x.
    return np.floor(255.0 * ordered / dmax + 0.5).astype(np.uint8)


def vat_image(m) -> tuple[VatOrdering, np.ndarray]:
    """Convenience: reorder and render in one call."""
    ordering = vat_order(m)
    return ordering, odi_from(m, ordering)


def check_image(img) -> np.ndarray:
    x = np.asarray(img)
    if x.ndim != 2 or x.size == 0:
        raise InputError(f"image must be a nonempty 2-D array, got shape {x.shape}")
    if x.dtype != np.uint8:
        if not np.issubdtype(x.dtype, np.integer):
            raise InputError(f"image must be integer-typed, got {x.dtype}")
        if x.min() < 0 or x.max() > 255:
            raise InputError("image intensities must lie in [0, 255]")
        x = x.astype(np.uint8)
    return x


def pgm_bytes(img) -> bytes:
    x = check_image(img)
    h, w = x.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return header + x.tobytes(order="C")


def write_pgm(img, path) -> None:
    """Write a binary PGM (P5, maxval 255), atomically."""
    try:
        atomic_write_bytes(path, pgm_bytes(img))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def read_pgm(path) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read PGM file {path}: {exc}") from exc
    return parse_pgm(data, name=os.fspath(path))


def parse_pgm(data: bytes, name: str = "<bytes>") -> np.ndarray:
    pos = 0
    fields = []
    if not data.startswith(b"P5"):
        raise InputError(f"{name}: not a binary PGM (missing P5 magic)")
    pos = 2
    # Header tokens may be separated by whitespace and '#' comments.
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        tok = b""
        while pos < len(data) and not data[pos : pos + 1].isspace():
            tok += data[pos : pos + 1]
            pos += 1
        if not tok:
            raise InputError(f"{name}: truncated PGM header")
        fields.append(tok)
    try:
        w, h, maxval = (int(f) for f in fields)
    except ValueError:
        raise InputError(f"{name}: malformed PGM header fields {fields}") from None
    if maxval != 255:
        raise InputError(f"{name}: unsupported PGM maxval {maxval}")
    pos += 1  # exactly one whitespace byte after maxval
    payload = data[pos:]
    if len(payload) != w * h:
        raise InputError(
            f"{name}: PGM payload is {len(payload)} bytes, expected {w * h}"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(h, w).copy()


def ordering_to_json(ordering: VatOrdering) -> str:
    return json.dumps(
        {
            "order": [int(i) for i in ordering.order],
            "link_dist": [float(v) for v in ordering.link_dist],
        }
    )


def ordering_from_json(text: str) -> VatOrdering:
    try:
        doc = json.loads(text)
        order = doc["order"]
        link = doc["link_dist"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"malformed ordering JSON: {exc}") from exc
    ordering = VatOrdering(np.asarray(order), np.asarray(link))
    check_permutation(ordering.order, len(ordering))
    return ordering

import numpy as np
import pytest

from scenevat.errors import InputError
from scenevat.vat import (
    VatOrdering,
    odi_from,
    ordering_from_json,
    ordering_to_json,
    parse_pgm,
    pgm_bytes,
    read_pgm,
    vat_image,
    vat_order,
    write_pgm,
)

from conftest import random_dissim


# --------------------------------------------------------------------------
# Independent oracles, written directly from the algorithm definitions.


def prim_oracle(d):
    """Prim vertex-addition order and link weights with the declared
    tie-breaks: start at the smaller index of the lexicographically first
    maximum-distance pair; next point is the unplaced index with minimal
    distance to the placed set, smallest index on ties."""
    n = len(d)
    if n == 1:
        return [0], [0.0]
    best_val, start = -1.0, 0
    for i in range(n):
        for j in range(n):
            if d[i][j] > best_val:
                best_val, start = d[i][j], i
    order = [start]
    link = [0.0]
    placed = {start}
    while len(order) < n:
        cand, cdist = None, None
        for u in range(n):
            if u in placed:
                continue
            du = min(d[u][v] for v in placed)
            if cdist is None or du < cdist or (du == cdist and u < cand):
                cand, cdist = u, du
        order.append(cand)
        link.append(cdist)
        placed.add(cand)
    return order, link


def kruskal_weight(d):
    n = len(d)
    edges = sorted(
        (d[i][j], i, j) for i in range(n) for j in range(i + 1, n)
    )
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total = 0.0
    for w, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            total += w
    return total


# --------------------------------------------------------------------------


def test_singleton():
    o = vat_order(np.zeros((1, 1)))
    assert o.order.tolist() == [0]
    assert o.link_dist.tolist() == [0.0]


def test_two_points():
    m = np.array([[0.0, 3.5], [3.5, 0.0]])
    o = vat_order(m)
    assert o.order.tolist() == [0, 1]
    assert o.link_dist.tolist() == [0.0, 3.5]


def test_three_points_on_a_line():
    pts = np.array([0.0, 1.0, 10.0])
    m = np.abs(pts[:, None] - pts[None, :])
    o = vat_order(m)
    assert o.order.tolist() == [0, 1, 2]
    assert o.link_dist.tolist() == [0.0, 1.0, 9.0]


def test_matches_prim_oracle_on_random_matrices():
    rng = np.random.Generator(np.random.Philox(key=21))
    for _ in range(60):
        n = int(rng.integers(2, 65))
        m = random_dissim(rng, n)
        o = vat_order(m)
        order, link = prim_oracle(m.tolist())
        assert o.order.tolist() == order
        assert np.allclose(o.link_dist, link, rtol=0, atol=0)


def test_tie_break_smallest_index():
    # three equidistant points: start must be 0 (lexicographic max pair),
    # then 1, then 2
    m = np.ones((3, 3)) - np.eye(3)
    o = vat_order(m)
    assert o.order.tolist() == [0, 1, 2]


def test_link_sum_equals_kruskal_weight():
    rng = np.random.Generator(np.random.Philox(key=22))
    for _ in range(40):
        n = int(rng.integers(2, 10))
        m = random_dissim(rng, n)
        o = vat_order(m)
        assert abs(o.link_dist.sum() - kruskal_weight(m.tolist())) <= 1e-12


def test_ordered_matrix_preserves_entry_multiset():
    rng = np.random.Generator(np.random.Philox(key=23))
    m = random_dissim(rng, 20)
    o = vat_order(m)
    ordered = m[np.ix_(o.order, o.order)]
    assert np.array_equal(np.sort(ordered.ravel()), np.sort(m.ravel()))


def test_two_blobs_become_contiguous_blocks():
    rng = np.random.Generator(np.random.Philox(key=24))
    a = rng.normal(0.0, 0.5, size=(12, 2))
    b = rng.normal(20.0, 0.5, size=(12, 2))
    f = np.vstack([a, b])
    m = np.sqrt(((f[:, None, :] - f[None, :, :]) ** 2).sum(-1))
    o = vat_order(m)
    labels = (np.asarray(o.order) >= 12).astype(int)
    # one switch between the blob labels along the ordering
    assert (np.diff(labels) != 0).sum() == 1
    ordered = m[np.ix_(o.order, o.order)]
    within_adjacent = max(
        ordered[i, i + 1] for i in range(23) if labels[i] == labels[i + 1]
    )
    between = m[:12, 12:].min()
    assert within_adjacent < between


def test_rejects_invalid_matrix():
    with pytest.raises(InputError):
        vat_order(np.array([[0.0, 1.0], [2.0, 0.0]]))


# --------------------------------------------------------------------------
# image rendering


def test_odi_two_points_scales_to_255():
    m = np.array([[0.0, 5.0], [5.0, 0.0]])
    o = vat_order(m)
    img = odi_from(m, o)
    assert img.tolist() == [[0, 255], [255, 0]]


def test_odi_zero_matrix_all_black():
    m = np.zeros((3, 3))
    img = odi_from(m, vat_order(m))
    assert img.dtype == np.uint8
    assert not img.any()


def test_odi_three_point_quantization():
    pts = np.array([0.0, 1.0, 10.0])
    m = np.abs(pts[:, None] - pts[None, :])
    img = odi_from(m, vat_order(m))
    assert img[0, 2] == 255
    assert img[0, 1] == 26  # 255 * 1/10 = 25.5 rounds away from zero


def test_odi_symmetric_zero_diagonal():
    rng = np.random.Generator(np.random.Philox(key=25))
    m = random_dissim(rng, 9)
    img = odi_from(m, vat_order(m))
    assert np.array_equal(img, img.T)
    assert not img.diagonal().any()


def test_odi_size_mismatch_rejected():
    m = random_dissim(np.random.Generator(np.random.Philox(key=26)), 4)
    bad = VatOrdering(np.arange(3), np.zeros(3))
    with pytest.raises(InputError):
        odi_from(m, bad)


# --------------------------------------------------------------------------
# PGM I/O


def test_pgm_bytes_layout():
    img = np.array([[0, 255], [255, 0]], dtype=np.uint8)
    assert pgm_bytes(img) == b"P5\n2 2\n255\n\x00\xff\xff\x00"


def test_pgm_single_zero_pixel():
    raw = pgm_bytes(np.zeros((1, 1), dtype=np.uint8))
    assert raw.endswith(b"\n\x00") and raw[-1:] == b"\x00"


def test_pgm_round_trip(tmp_path):
    rng = np.random.Generator(np.random.Philox(key=27))
    img = rng.integers(0, 256, size=(11, 11)).astype(np.uint8)
    path = tmp_path / "img.pgm"
    write_pgm(img, path)
    assert np.array_equal(read_pgm(path), img)


def test_pgm_comment_tolerant_reader():
    img = np.arange(6, dtype=np.uint8).reshape(2, 3)
    raw = b"P5\n# a comment\n3 2\n# another\n255\n" + img.tobytes()
    assert np.array_equal(parse_pgm(raw), img)


def test_pgm_rejects_wrong_maxval():
    with pytest.raises(InputError, match="maxval"):
        parse_pgm(b"P5\n1 1\n127\n\x00")


def test_pgm_rejects_short_payload():
    with pytest.raises(InputError):
        parse_pgm(b"P5\n2 2\n255\n\x00\x01")


def test_vat_image_convenience_matches_parts():
    rng = np.random.Generator(np.random.Philox(key=28))
    m = random_dissim(rng, 7)
    o, img = vat_image(m)
    assert np.array_equal(img, odi_from(m, o))


# --------------------------------------------------------------------------
# ordering JSON


def test_ordering_json_round_trip():
    o = VatOrdering(np.array([2, 0, 1]), np.array([0.0, 1.5, 2.25]))
    back = ordering_from_json(ordering_to_json(o))
    assert back.order.tolist() == [2, 0, 1]
    assert back.link_dist.tolist() == [0.0, 1.5, 2.25]


def test_ordering_json_shape():
    text = ordering_to_json(VatOrdering(np.array([0]), np.array([0.0])))
    assert text == '{"order": [0], "link_dist": [0.0]}'


def test_ordering_json_rejects_garbage():
    with pytest.raises(InputError):
        ordering_from_json("{}")
    with pytest.raises(InputError):
        ordering_from_json('{"order": [0, 0], "link_dist": [0, 0]}')

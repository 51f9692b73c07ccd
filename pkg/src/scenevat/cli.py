"""Command-line front end.

Subcommands cover the full pipeline: feature extraction (``features``),
matrix reordering (``vat``, ``specvat``), cluster counting (``cce``),
label stacks (``stack``), synthetic data (``synth``), and the end-to-end
subset analysis (``report``).

Exit codes: 0 on success, 2 on bad input, 3 on numeric failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .cce import cce_count
from .errors import InputError, NumericError
from .manifest import CITIES, SCENES, read_manifest
from .matrix import check_dissim, euclidean_dissim
from .report import (
    GROUPINGS,
    METHODS,
    features_for_manifest,
    load_config,
    run_report,
)
from .specvat import a_specvat_select_k, specvat
from .stacks import label_stack, stack_csv, stack_svg
from .synth import BlobSpec, block_dissim, gaussian_blobs
from .vat import (
    odi_from,
    ordering_from_json,
    ordering_to_json,
    read_pgm,
    vat_order,
    write_pgm,
)
from .vatf import atomic_write_text, read_vatf, write_vatf


def _add_shared(p):
    p.add_argument("--config", metavar="JSON", default=None,
                   help="JSON config with audio/specvat/cce sections")
    p.add_argument("--out", metavar="DIR", required=True,
                   help="output directory")
    p.add_argument("--threads", type=int, default=1, metavar="N")


def _load_matrix(args):
    """Resolve --features/--dissim into a validated dissimilarity matrix."""
    if args.dissim is not None:
        m = read_vatf(args.dissim)
        check_dissim(m)
        return m
    feats = read_vatf(args.features)
    return euclidean_dissim(feats, standardize=args.standardize)


def _matrix_inputs(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--features", metavar="VATF",
                   help="feature matrix, one row per record")
    g.add_argument("--dissim", metavar="VATF", help="precomputed n x n matrix")
    p.add_argument("--standardize", action="store_true",
                   help="z-score feature columns before distances")


# --------------------------------------------------------------------------
# subcommands


def cmd_features(args) -> int:
    cfg = load_config(args.config)
    manifest = read_manifest(args.manifest)
    feats = features_for_manifest(
        manifest,
        cfg.audio,
        audio_root=args.audio_root,
        cache_dir=args.cache,
        threads=args.threads,
    )
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "features.vatf")
    write_vatf(path, feats)
    print(f"{feats.shape[0]} x {feats.shape[1]} features -> {path}")
    return 0


def cmd_vat(args) -> int:
    m = _load_matrix(args)
    ordering = vat_order(m)
    image = odi_from(m, ordering)
    os.makedirs(args.out, exist_ok=True)
    write_pgm(image, os.path.join(args.out, "odi.pgm"))
    atomic_write_text(os.path.join(args.out, "ordering.json"),
                      ordering_to_json(ordering))
    print(f"ordered {len(ordering)} records -> {args.out}")
    return 0


def cmd_specvat(args) -> int:
    cfg = load_config(args.config).spec
    m = _load_matrix(args)
    n = m.shape[0]
    if args.k is not None:
        k = args.k
    else:
        k, scores = a_specvat_select_k(m, cfg)
        shown = ", ".join(f"k={kk}: {s:.4f}" for kk, s in sorted(scores.items()))
        print(f"selected k={k} ({shown})")
    if not 1 <= k <= n - 1:
        raise InputError(f"k={k} out of range for {n} records")
    result = specvat(m, replace(cfg, k=k))
    os.makedirs(args.out, exist_ok=True)
    write_pgm(result.image, os.path.join(args.out, "odi.pgm"))
    atomic_write_text(os.path.join(args.out, "ordering.json"),
                      ordering_to_json(result.ordering))
    write_vatf(os.path.join(args.out, "d_prime.vatf"), result.d_prime)
    print(f"ordered {n} records with k={k} -> {args.out}")
    return 0


def cmd_cce(args) -> int:
    cfg = load_config(args.config).cce
    if args.band_width is not None:
        cfg = replace(cfg, band_width=args.band_width)
    if args.threshold_mode is not None:
        cfg = replace(cfg, threshold_mode=args.threshold_mode)
    if args.b is not None:
        cfg = replace(cfg, explicit_b=args.b)
    image = read_pgm(args.image)
    report = cce_count(image, cfg)
    os.makedirs(args.out, exist_ok=True)
    atomic_write_text(os.path.join(args.out, "cce.json"), report.to_json())
    print(f"clusters: {report.cluster_count}")
    return 0


def cmd_stack(args) -> int:
    manifest = read_manifest(args.manifest)
    with open(args.ordering, encoding="utf-8") as fh:
        ordering = ordering_from_json(fh.read())
    if args.label == "scene":
        labels = manifest.scenes
    else:
        labels = manifest.cities
    stack = label_stack(ordering.order, labels)
    os.makedirs(args.out, exist_ok=True)
    svg = os.path.join(args.out, f"stack_{args.label}.svg")
    csv = os.path.join(args.out, f"stack_{args.label}.csv")
    atomic_write_text(svg, stack_svg(stack, ordering.link_dist))
    atomic_write_text(csv, stack_csv(stack, ordering.order))
    print(f"{stack.run_count} runs, mean length {stack.mean_run_length:.2f} "
          f"-> {svg}")
    return 0


def cmd_synth(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    if args.mode == "blobs":
        spec = BlobSpec(clusters=args.clusters, n_per=args.n_per,
                        dim=args.dim, sep=args.sep, sigma=args.sigma,
                        seed=args.seed)
        feats, labels = gaussian_blobs(spec)
        path = os.path.join(args.out, "features.vatf")
        write_vatf(path, feats)
        atomic_write_text(
            os.path.join(args.out, "labels.csv"),
            "index,label\n" + "".join(f"{i},{v}\n" for i, v in enumerate(labels)),
        )
        print(f"{feats.shape[0]} x {feats.shape[1]} blob features -> {path}")
    else:
        sizes = [int(s) for s in args.sizes.split(",") if s]
        m = block_dissim(sizes, args.within, args.between)
        path = os.path.join(args.out, "dissim.vatf")
        write_vatf(path, m)
        print(f"{m.shape[0]} x {m.shape[0]} block matrix -> {path}")
    return 0


def cmd_report(args) -> int:
    cfg = load_config(args.config)
    manifest = read_manifest(args.manifest)
    if args.features is not None:
        feats = read_vatf(args.features)
    else:
        feats = features_for_manifest(
            manifest,
            cfg.audio,
            audio_root=args.audio_root,
            cache_dir=args.cache,
            threads=args.threads,
        )
    report = run_report(
        manifest,
        feats,
        args.group,
        args.out,
        method=args.method,
        config=cfg,
        subset=args.subset,
        k=args.k,
        standardize=args.standardize,
    )
    for name in sorted(report["summary"]):
        print(f"{name}: {report['summary'][name]}")
    print(f"{len(report['subsets'])} subset report(s) -> {args.out}")
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="scenevat",
        description="Cluster-tendency analysis of labeled feature sets.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("features", help="extract features for a manifest")
    f.add_argument("--manifest", required=True, metavar="CSV")
    f.add_argument("--audio-root", default=None, metavar="DIR")
    f.add_argument("--cache", default=None, metavar="DIR")
    _add_shared(f)
    f.set_defaults(func=cmd_features)

    v = sub.add_parser("vat", help="reorder a matrix and render the image")
    _matrix_inputs(v)
    _add_shared(v)
    v.set_defaults(func=cmd_vat)

    s = sub.add_parser("specvat", help="spectral embedding before reordering")
    _matrix_inputs(s)
    s.add_argument("--k", type=int, default=None,
                   help="eigenvector count (default: automatic scan)")
    _add_shared(s)
    s.set_defaults(func=cmd_specvat)

    c = sub.add_parser("cce", help="count dark blocks in an ordered image")
    c.add_argument("--image", required=True, metavar="PGM")
    c.add_argument("--band-width", type=int, default=None)
    c.add_argument("--threshold-mode", choices=("half_max", "zero"),
                   default=None)
    c.add_argument("--b", type=int, default=None,
                   help="explicit cutoff, overrides threshold mode")
    _add_shared(c)
    c.set_defaults(func=cmd_cce)

    t = sub.add_parser("stack", help="label stack for an existing ordering")
    t.add_argument("--manifest", required=True, metavar="CSV")
    t.add_argument("--ordering", required=True, metavar="JSON")
    t.add_argument("--label", choices=("scene", "city"), default="scene")
    _add_shared(t)
    t.set_defaults(func=cmd_stack)

    y = sub.add_parser("synth", help="synthetic features or block matrices")
    y.add_argument("--mode", choices=("blobs", "blocks"), default="blobs")
    y.add_argument("--clusters", type=int, default=3)
    y.add_argument("--n-per", type=int, default=40)
    y.add_argument("--dim", type=int, default=8)
    y.add_argument("--sep", type=float, default=10.0)
    y.add_argument("--sigma", type=float, default=1.0)
    y.add_argument("--seed", type=int, default=0)
    y.add_argument("--sizes", default="15,15,15",
                   help="blocks mode: comma-separated block sizes")
    y.add_argument("--within", type=float, default=0.01)
    y.add_argument("--between", type=float, default=1.0)
    _add_shared(y)
    y.set_defaults(func=cmd_synth)

    r = sub.add_parser("report", help="full per-subset analysis")
    r.add_argument("--manifest", required=True, metavar="CSV")
    r.add_argument("--features", default=None, metavar="VATF",
                   help="reuse extracted features instead of reading audio")
    r.add_argument("--audio-root", default=None, metavar="DIR")
    r.add_argument("--cache", default=None, metavar="DIR")
    r.add_argument("--group", choices=GROUPINGS, default="by_scene")
    r.add_argument("--subset", default=None,
                   help="scene or city name for single_subset "
                        f"(scenes: {', '.join(SCENES)}; "
                        f"cities: {', '.join(CITIES)})")
    r.add_argument("--method", choices=METHODS, default="vat")
    r.add_argument("--k", type=int, default=None)
    r.add_argument("--standardize", action="store_true")
    _add_shared(r)
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

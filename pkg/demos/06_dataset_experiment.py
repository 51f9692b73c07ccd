"""Dataset-scale experiment: per-city and all-data cluster counts.

Scans a directory of acoustic-scene recordings whose filenames follow the
scene-city-location-segment-device.wav convention, featurizes every clip
(cached, threaded), and reports cluster counts per city plus the all-data
count.  On the full ten-scene six-city corpus, per-city counts have landed
in roughly the 6-18 range and the all-data count runs severalfold above the
ten scene labels; numbers outside those bands are worth a look but are not
errors, since the counts depend on recording conditions and parameters.

This is the one script here that needs real data: point --root at the
extracted development set (tens of GB; the run is feature-extraction bound
on first pass, then cached).
"""

import argparse
import json
import os

from scenevat.manifest import parse_dcase_filename, parse_manifest
from scenevat.report import features_for_manifest, load_config, run_report


def scan_manifest(root):
    rows = ["path,scene,city"]
    for dirpath, _, names in os.walk(root):
        for name in sorted(names):
            if not name.lower().endswith(".wav"):
                continue
            try:
                scene, city = parse_dcase_filename(name)
            except Exception:
                continue
            rows.append(f"{os.path.join(dirpath, name)},{scene},{city}")
    return parse_manifest("\n".join(rows) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--root", required=True, help="directory of .wav files")
    ap.add_argument("--out", default="demo_out/dataset")
    ap.add_argument("--cache", default="demo_out/feature_cache")
    ap.add_argument("--config", default=None)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()

    cfg = load_config(args.config)
    manifest = scan_manifest(args.root)
    print(f"{len(manifest)} recordings under {args.root}")
    feats = features_for_manifest(manifest, cfg.audio, cache_dir=args.cache,
                                  threads=args.threads)

    by_city = run_report(manifest, feats, "by_city",
                         os.path.join(args.out, "by_city"), config=cfg)
    all_data = run_report(manifest, feats, "all",
                          os.path.join(args.out, "all"), config=cfg)

    print("\nper-city cluster counts:")
    for city, count in sorted(by_city["summary"].items()):
        flag = "" if 6 <= count <= 18 else "   <- outside the usual 6-18 band"
        print(f"  {city}: {count}{flag}")
    total = all_data["summary"]["all"]
    print(f"\nall-data cluster count: {total} "
          f"({total / 10:.1f}x the ten scene labels)")
    print(json.dumps({"by_city": by_city["summary"], "all": total}))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Sweep the BIRCH threshold for one preset on calibration seeds.

The seeds default to 101..105 so they never overlap the acceptance graphs
(seeds 1..5). Prints mean F1/ARI/k per threshold.
"""
import argparse
import json
import statistics
import subprocess
import tempfile
from pathlib import Path


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bin", default="build/tools/infrared")
    ap.add_argument("--preset", default="5k")
    ap.add_argument("--nodes", type=int, default=5000)
    ap.add_argument("--seeds", default="101,102,103,104,105")
    ap.add_argument("--thresholds", default="0.4,0.5,0.6,0.7,0.8,0.9,1.0,1.1,1.2")
    args = ap.parse_args()

    seeds = [int(s) for s in args.seeds.split(",")]
    thresholds = [float(t) for t in args.thresholds.split(",")]
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for seed in seeds:
            subprocess.run([args.bin, "generate", "--nodes", str(args.nodes), "--seed", str(seed),
                            "--out", str(tmp / f"g{seed}")], check=True, capture_output=True)
        print("threshold,mean_f1,mean_ari,min_ari,mean_k")
        for t in thresholds:
            f1, ar, ks = [], [], []
            for seed in seeds:
                m = tmp / "m.json"
                subprocess.run([args.bin, "partition", "--input", str(tmp / f"g{seed}.tsv"),
                                "--truth", str(tmp / f"g{seed}_truth.tsv"), "--out", str(tmp / "p.tsv"),
                                "--metrics", str(m), "--preset", args.preset, "--threshold", str(t)],
                               check=True, capture_output=True)
                j = json.loads(m.read_text())
                f1.append(j["f1"]); ar.append(j["ari"]); ks.append(j["k_pred"])
            print(f"{t},{statistics.mean(f1):.4f},{statistics.mean(ar):.4f},{min(ar):.4f},{statistics.mean(ks):.1f}",
                  flush=True)


if __name__ == "__main__":
    main()

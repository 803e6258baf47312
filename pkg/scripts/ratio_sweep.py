"""Deterministic and randomized ratios across generator kinds and type counts."""

import argparse
import sys

from rightsize.harness import KINDS, GeneratorSpec, batch_ratio


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--per-cell", type=int, default=20, help="instances per (kind, d) pair")
    parser.add_argument("--max-d", type=int, default=3)
    parser.add_argument("--T", type=int, default=24)
    parser.add_argument("--rand-trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print("kind,d,instances,max_det_ratio,mean_det_ratio,mean_rand_ratio")
    for kind in KINDS[:3]:
        for d in range(1, args.max_d + 1):
            specs = [
                GeneratorSpec(kind=kind, d=d, T=args.T, cost_seed=args.seed + i, load_seed=args.seed + 1000 + i)
                for i in range(args.per_cell)
            ]
            rows = [r for r in batch_ratio(specs, rand_trials=args.rand_trials, seed=args.seed).rows if r.det_ratio]
            if not rows:
                continue
            det = [float(r.det_ratio) for r in rows]
            rand = [float(r.rand_mean_ratio) for r in rows if r.rand_mean_ratio is not None]
            mean_rand = f"{sum(rand) / len(rand):.4f}" if rand else ""
            print(f"{kind},{d},{len(rows)},{max(det):.4f},{sum(det) / len(det):.4f},{mean_rand}")
            sys.stdout.flush()


if __name__ == "__main__":
    main()

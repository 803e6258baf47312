"""Sweep the adversary scale N and compare each duel ratio with its bracket."""

import argparse
import time

from rightsize.adversary import AdversaryConfig, run_duel


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--d", type=int, default=1)
    parser.add_argument("--N", type=int, nargs="+", default=None, help="scales to try (default 6d..10*6d step 6d)")
    parser.add_argument("--alg", choices=("det", "rand"), default="det")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    scales = args.N or list(range(6 * args.d, 60 * args.d + 1, 6 * args.d))
    print("N,ratio,lower,upper,inside,slots,jobs,seconds")
    for N in scales:
        cfg = AdversaryConfig(args.d, N)
        start = time.perf_counter()
        result = run_duel(cfg, args.alg, seed=args.seed)
        elapsed = time.perf_counter() - start
        lo, hi = cfg.lower_bound(), cfg.upper_bound()
        inside = lo <= result.ratio <= hi
        print(
            f"{N},{float(result.ratio):.6f},{float(lo):.6f},{float(hi):.6f},"
            f"{int(inside)},{result.T_used},{len(result.jobs)},{elapsed:.2f}"
        )


if __name__ == "__main__":
    main()

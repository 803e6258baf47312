"""Write the seeded experiment artifacts (ratio CSV, duel traces, block log)."""

import argparse

from rightsize.harness import write_artifacts


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="artifacts")
    parser.add_argument("--seed", type=int, default=2024)
    args = parser.parse_args()
    for path in write_artifacts(args.out, seed=args.seed):
        print(path)


if __name__ == "__main__":
    main()

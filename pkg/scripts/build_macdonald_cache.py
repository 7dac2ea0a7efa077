"""Precompute modified Macdonald / (q,t)-Kostka tables for n = 1..N into the on-disk cache."""

import argparse
import time

from hlrvkit.macdonald import default_cache_dir, macdonald_table


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=5)
    parser.add_argument("--cache-dir", default=None,
                        help="target directory (default: $HLRVKIT_CACHE_DIR)")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    cache_dir = args.cache_dir or default_cache_dir()
    if cache_dir is None:
        parser.error("no cache directory: pass --cache-dir or set HLRVKIT_CACHE_DIR")
    for n in range(1, args.max_n + 1):
        start = time.perf_counter()
        table = macdonald_table(n, cache_dir, jobs=args.jobs)
        print(f"n={n}: {len(table)} partitions in {time.perf_counter() - start:.2f} s")


if __name__ == "__main__":
    main()

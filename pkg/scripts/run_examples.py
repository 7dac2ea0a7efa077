"""Print HLRV grids, specializations, motive sums and cell decompositions for the worked examples."""

import argparse

from hlrvkit.charvar import CharVarSpec, cell_decomposition, cross_check_epoly, hlrv, motive_sum, specialize
from hlrvkit.cli import factored

EXAMPLES = [
    (0, "1,1;1,1;1,1;1,1", "rank-2 four-punctured sphere"),
    (0, "1,1,1;1,1,1;1,1,1", "rank-3 pair of pants"),
    (1, "1", "punctured torus, n=1"),
    (1, "2", "punctured torus, n=2"),
    (1, "1,1", "genus one, two punctures"),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cache-dir", default=None, help="Macdonald cache directory")
    args = parser.parse_args()
    for g, mu, label in EXAMPLES:
        spec = CharVarSpec.parse(g, mu)
        res = hlrv(spec, cache_dir=args.cache_dir)
        print(f"== {label}: g={g}, mu={mu}, d={res.d}")
        print(f"   H(z,w)  = {factored(res.value)}")
        print(f"   H(-z,w) = {factored(res.value_neg)}")
        print(f"   E(q)    = {specialize(res.grid, 'E')}")
        print(f"   motive  = {motive_sum(res.grid)}")
        if spec.very_generic:
            dec = cell_decomposition(spec)
            check = cross_check_epoly(spec, hlrv_result=res, cells=dec)
            print(f"   cells   = {len(dec.cells)}: {dec.summary(unicode=True)}  (f = {dec.f})")
            print(f"   cross-check: {check}")


if __name__ == "__main__":
    main()

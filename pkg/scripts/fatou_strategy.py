"""Fidelity collapse of equator-straddling pairs under s = 0, plus the band histogram."""
import numpy as np

from _common import parser, write_csv
from chaosdisc.protocol import fatou_band_ensemble, fatou_straddle_ensemble, strategy_a_run


def main():
    ap = parser(__doc__)
    ap.add_argument("--n-max", type=int, default=60)
    args = ap.parse_args()
    rows = []
    for d, prec in ((1e-1, "standard"), (1e-1, "extended"), (1e-4, "standard"), (1e-4, "extended")):
        r = strategy_a_run(fatou_straddle_ensemble(d, 1000), args.n_max, precision=prec)
        below = np.flatnonzero(r.mean_fidelity < 1e-3)
        print(f"delta {d:g} {prec}: mean F < 1e-3 from n = {below[0] if len(below) else None}")
        rows += [(d, prec, n, f) for n, f in enumerate(r.mean_fidelity)]
    write_csv(args.out / "fatou_straddle.csv", ["delta", "precision", "n", "mean_fidelity"], rows)
    band = strategy_a_run(fatou_band_ensemble(0.1, 2000, seed=8), args.n_max, snapshots=(args.n_max,))
    h = band.histograms[args.n_max]
    print(f"band: orthogonal fraction {band.orthogonal_fraction(args.n_max):.3f}, "
          f"straddling {band.straddle.mean():.3f}")
    write_csv(args.out / "fatou_band_histogram.csv", ["lo", "hi", "count"],
              zip(band.bin_edges[:-1], band.bin_edges[1:], h))


if __name__ == "__main__":
    main()

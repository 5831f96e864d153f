"""Resolution heat map on the unit disk for several separations."""
import numpy as np

from _common import parser, write_csv
from chaosdisc.protocol import resolution_heatmap


def main():
    ap = parser(__doc__)
    ap.add_argument("--resolution", type=int, default=101)
    ap.add_argument("--delta", type=float, nargs="+", default=[1e-1, 1e-4, 1e-8])
    ap.add_argument("--threshold", type=float, default=1e-2)
    args = ap.parse_args()
    for d in args.delta:
        g = resolution_heatmap(d, resolution=args.resolution, threshold=args.threshold)
        ok = g.counts[g.inside]
        ok = ok[ok >= 0]
        fp = g.counts[g.cell_of(g.fixed_point)]
        print(f"delta {d:g}: mean {ok.mean():.1f}, range [{ok.min()}, {ok.max()}], at z = 1: {fp}")
        X, Y = np.meshgrid(g.x, g.y)
        write_csv(args.out / f"heatmap_{d:g}.csv", ["x", "y", "count"],
                  zip(X.ravel(), Y.ravel(), g.counts.ravel()))


if __name__ == "__main__":
    main()

"""Box-counting dimension of the Julia set along s = i t."""
from _common import parser, write_csv
from chaosdisc.dynamics import MapParams
from chaosdisc.fractal import box_dimension, julia_raster


def main():
    ap = parser(__doc__)
    ap.add_argument("--resolution", type=int, default=1024)
    ap.add_argument("--t", type=float, nargs="+", default=[0.0, 0.25, 0.5, 0.75, 0.99, 1.0])
    ap.add_argument("--pgm", action="store_true", help="also dump each raster")
    args = ap.parse_args()
    rows = []
    for t in args.t:
        r = julia_raster(MapParams(1j * t), resolution=args.resolution)
        d = box_dimension(r)
        rows.append((t, args.resolution, d.dimension, d.r2, r.fraction))
        print(f"s = {t}i: D = {d.dimension:.4f}  R^2 = {d.r2:.5f}  marked = {r.fraction:.4f}")
        if args.pgm:
            path = args.out / f"julia_t{t:g}_{args.resolution}.pgm"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(r.to_pgm())
    write_csv(args.out / f"julia_dimensions_{args.resolution}.csv",
              ["t", "resolution", "dimension", "r2", "marked_fraction"], rows)


if __name__ == "__main__":
    main()

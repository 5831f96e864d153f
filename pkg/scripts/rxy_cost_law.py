"""Critical iteration of r_xy against the number of resolved digits p (delta = 10^-p)."""
import numpy as np

from _common import parser, write_csv
from chaosdisc.bloch import SIGMA_X
from chaosdisc.dynamics import MapParams
from chaosdisc.ensemble import EnsembleSpec, critical_iteration, rxy_vs_iteration


def main():
    ap = parser(__doc__)
    ap.add_argument("--size", type=int, default=10_000)
    ap.add_argument("--digits", type=int, nargs="+", default=list(range(1, 9)))
    ap.add_argument("--n-max", type=int, default=100)
    args = ap.parse_args()
    s = MapParams(1j)
    curves, crit = [], []
    for p in args.digits:
        spec = EnsembleSpec(size=args.size, delta=10.0**-p, sampling="uniform", seed=p)
        r = rxy_vs_iteration(spec, SIGMA_X, s, args.n_max).r
        curves.append(r)
        crit.append(critical_iteration(r, 0.05, 10))
        print(f"p = {p}: critical n = {crit[-1]}")
    x, y = np.array(args.digits, float), np.array(crit, float)
    slope, icpt = np.polyfit(x, y, 1)
    r2 = 1 - np.sum((y - slope * x - icpt) ** 2) / np.sum((y - y.mean()) ** 2)
    print(f"n_c = {slope:.3f} p + {icpt:.3f}  (R^2 = {r2:.4f})")
    write_csv(args.out / "rxy_cost_law.csv", ["digits", "critical_iteration"], zip(args.digits, crit))
    write_csv(args.out / "rxy_curves.csv", ["n"] + [f"p{p}" for p in args.digits],
              [[n, *(c[n] for c in curves)] for n in range(args.n_max + 1)])


if __name__ == "__main__":
    main()

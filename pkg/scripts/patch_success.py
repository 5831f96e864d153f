"""Critical iteration and success budget for pairs inside the polar cap theta <= theta_max."""
import math

from _common import parser, write_csv
from chaosdisc.protocol import patch_success_optimization


def main():
    ap = parser(__doc__)
    ap.add_argument("--theta-max", type=float, default=math.pi / 10)
    ap.add_argument("--delta", type=float, nargs="+", default=[1e-1, 1e-4, 1e-8])
    args = ap.parse_args()
    rows = []
    for d in args.delta:
        r = patch_success_optimization(args.theta_max, d)
        rows.append((d, r.critical_iteration, r.min_success, r.cumulative_bound, r.mean_cumulative_success))
        print(f"delta {d:g}: n_c = {r.critical_iteration}, min p = {r.min_success:.5f}, "
              f"bound {r.cumulative_bound:.3g}, mean orbit product {r.mean_cumulative_success:.3g}")
    write_csv(args.out / "patch_success.csv",
              ["delta", "critical_iteration", "min_success", "bound", "mean_orbit_success"], rows)


if __name__ == "__main__":
    main()

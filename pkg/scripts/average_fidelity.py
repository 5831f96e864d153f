"""Ensemble-average fidelity against iteration under s = i."""
from _common import parser, write_csv
from chaosdisc.bloch import SIGMA_X
from chaosdisc.dynamics import MapParams
from chaosdisc.ensemble import (EnsembleSpec, average_fidelity_vs_iteration, critical_iteration,
                                rxy_vs_iteration, sample_ensemble)


def main():
    ap = parser(__doc__)
    ap.add_argument("--delta", type=float, nargs="+", default=[1e-1, 1e-4, 1e-8])
    ap.add_argument("--n-max", type=int, default=100)
    args = ap.parse_args()
    s = MapParams(1j)
    rows = []
    for d in args.delta:
        ens = sample_ensemble(EnsembleSpec(size=10_000, delta=d, sampling="grid"))
        nc = critical_iteration(rxy_vs_iteration(ens, SIGMA_X, s, args.n_max).r, 0.05, 10)
        mean, std = average_fidelity_vs_iteration(ens, s, args.n_max)
        print(f"delta {d:g}: n_c = {nc}, mean F after n_c in [{mean[nc:].min():.3f}, {mean[nc:].max():.3f}]")
        rows += [(d, n, m, e) for n, (m, e) in enumerate(zip(mean, std))]
    write_csv(args.out / "average_fidelity.csv", ["delta", "n", "mean", "std"], rows)


if __name__ == "__main__":
    main()

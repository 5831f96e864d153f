"""Separation iteration of equator pairs against working precision."""
from _common import parser, write_csv
from chaosdisc.protocol import machine_precision_probe


def main():
    ap = parser(__doc__)
    ap.add_argument("--digits", type=int, nargs=2, default=[4, 18], metavar=("LO", "HI"))
    args = ap.parse_args()
    rows = machine_precision_probe(range(args.digits[0], args.digits[1] + 1))
    table = {}
    for r in rows:
        table.setdefault(r.digits, {})[r.precision] = r.critical_iteration
    for p, v in table.items():
        print(f"p = {p:2d}: standard {v.get('standard')}, extended {v.get('extended')}")
    write_csv(args.out / "precision_probe.csv", ["digits", "precision", "critical_iteration"],
              [(r.digits, r.precision, "" if r.critical_iteration is None else r.critical_iteration) for r in rows])


if __name__ == "__main__":
    main()

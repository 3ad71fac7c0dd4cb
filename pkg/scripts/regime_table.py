#!/usr/bin/env python3
"""Tabulate the photon-number kept fraction at alpha = c n^(-1/4) (ln m)^(1/4).

The fraction of cat-input samples carrying exactly n photons controls the
cost of the rejection reduction to single-photon sampling; at this scaling
it stays inverse-polynomial in m (leading order exp(-n|alpha|^4/6)).

Usage: python scripts/regime_table.py [c]
"""

import sys

from permkit.bosonic import amplitude_regime_check


def main() -> None:
    c = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
    print(f"{'n':>5} {'m':>7} {'alpha':>9} {'fraction':>12} {'exp(-n a^4/6)':>14} {'1/m':>10}")
    for n in (4, 9, 16, 25, 36):
        for m in (10, 100, 1000):
            rep = amplitude_regime_check(n, m, c)
            if not rep.defined:
                print(f"{n:>5} {m:>7} {'-':>9} {'undefined':>12}")
                continue
            print(
                f"{n:>5} {m:>7} {rep.alpha:>9.4f} {rep.fraction:>12.6f} "
                f"{rep.leading_order:>14.6f} {1.0 / m:>10.6f}"
            )


if __name__ == "__main__":
    main()

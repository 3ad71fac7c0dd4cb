#!/usr/bin/env python3
"""Exact Dixon's identity from doubly-repeated permanents of the 3x3 cyclic
sign matrix: for p = (2n, 2n, 2n),

    p! [z^p] 1/Det(I - Diag(z) A)  =  p! [z^p] (Az)^p
                                   =  p! * sum_k (-1)^k C(2n,k)^3
                                   =  p! * (-1)^n (3n)!/(n!)^3.

Prints all four exact big integers per n.
"""

import math

from permkit.combinatorics import factorial_product
from permkit.identities import DIXON_MATRIX, _inverse_det_eye_minus_za, _monomial_power_table
from permkit.series import RATIONAL

N_MAX = 4


def main() -> None:
    caps = (2 * N_MAX,) * 3
    inv = _inverse_det_eye_minus_za(DIXON_MATRIX, RATIONAL, caps)
    mono = _monomial_power_table(DIXON_MATRIX, RATIONAL, caps)
    strides = ((2 * N_MAX + 1) ** 2, 2 * N_MAX + 1, 1)
    for n in range(1, N_MAX + 1):
        p = (2 * n,) * 3
        pf = factorial_product(p)
        idx = sum(e * s for e, s in zip(p, strides))
        from_det = pf * inv.coefficient(p)
        from_monomial = pf * mono[idx].coefficient(p)
        binom = pf * sum((-1) ** k * math.comb(2 * n, k) ** 3 for k in range(2 * n + 1))
        closed = pf * (-1) ** n * math.factorial(3 * n) // math.factorial(n) ** 3
        print(f"n={n}  p={p}")
        print(f"  det-series route : {from_det}")
        print(f"  monomial route   : {from_monomial}")
        print(f"  binomial cubes   : {binom}")
        print(f"  closed form      : {closed}")
        assert from_det == from_monomial == binom == closed


if __name__ == "__main__":
    main()

"""Regenerate the Mittag-Leffler reference table used by the test suite.

Sums the defining power series in arbitrary precision with mpmath (at least
60 digits, more when the terms grow large before they decay), so the table
is independent of the double-precision evaluation paths in
``fracwave.specfun``.

Usage:
    python tools/ml_oracle.py > tests/fixtures/ml_table.txt
"""
from __future__ import annotations

import itertools

import mpmath as mp


def ml_series(a, b, z):
    # the largest term is roughly exp(|z|**(1/a)); carry that many extra digits
    extra = int(abs(z) ** (1.0 / a) / 2.302585) + 10
    with mp.workdps(60 + extra):
        a, b, z = mp.mpf(a), mp.mpf(b), mp.mpc(z)
        tol = mp.mpf(10) ** -(55 + extra)
        total = mp.mpc(0)
        n = quiet = 0
        while True:
            term = z**n / mp.gamma(a * n + b)
            total += term
            if n > 20 and abs(term) < tol:
                quiet += 1
                if quiet > 10:
                    break
            else:
                quiet = 0
            n += 1
    return total


SERIES_ZS = [-1, -0.5, 0.25, 1, 0.7j, complex(-0.6, 0.6), complex(0.3, -0.9)]

# large negative arguments exercise the integral representation (0 < a < 1, b < 1 + a)
INTEGRAL_CASES = [
    (0.3, 1.0, -6), (0.3, 1.0, -9),
    (0.5, 1.0, -6), (0.5, 1.0, -20), (0.5, 0.7, -12),
    (0.8, 1.0, -6), (0.8, 1.0, -20), (0.8, 1.0, -60),
    (0.8, 1.3, -8), (0.8, 1.3, -40),
]


def rows():
    for a, b in itertools.product((0.3, 0.5, 0.8, 1.0), (0.5, 1.0, 1.5)):
        for z in SERIES_ZS:
            yield a, b, complex(z)
    for a, b, z in INTEGRAL_CASES:
        yield a, b, complex(z)


def main():
    print("# a b z_re z_im E_re E_im")
    for a, b, z in rows():
        e = ml_series(a, b, z)
        cols = [repr(a), repr(b), repr(z.real), repr(z.imag),
                mp.nstr(e.real, 15, strip_zeros=False), mp.nstr(e.imag, 15, strip_zeros=False)]
        print(" ".join(cols))


if __name__ == "__main__":
    main()

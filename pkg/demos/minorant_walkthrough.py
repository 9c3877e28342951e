"""Sym^M minorants of interval indicators.

Finds the best degree-4 minorant of the indicator of [-1, -0.1], checks it on
a fresh grid, and walks the right endpoint across -(1 + sqrt 7)/6 to watch the
LP turn infeasible.

    python demos/minorant_walkthrough.py
"""

import math

import numpy as np

from heckescope.chebyshev import IntervalUnion, st_measure, u_series
from heckescope.minorize import MinorizationCert, minorize, verify_cert

I = IntervalUnion.from_pairs([(-1, -0.1)])
cert = minorize(I, 4)
check = verify_cert(cert)
print("b =", np.round(cert.b, 5))
print(f"b0 = {cert.b0:.5f}, mu_ST(I) = {st_measure(I):.5f}, fresh-grid margin = {check.margin:.2e}")

# a coarse picture of the minorant against the indicator
for t in np.linspace(-1, 1, 11):
    m = float(u_series(cert.b, t))
    print(f"t={t:+.1f}  1_I={I.indicator(t):.0f}  minorant={m:+.4f}")

B0 = (1 + math.sqrt(7)) / 6
print(f"\nright endpoint sweep around -B0 = {-B0:.5f}")
for right in np.linspace(-B0 - 0.04, -B0 + 0.04, 9):
    res = minorize(IntervalUnion.from_pairs([(-1, right)]), 4)
    b0 = res.b0 if isinstance(res, MinorizationCert) else 0.0
    print(f"  [-1, {right:+.4f}]  b0 = {b0:.5f}")

"""How often does ell divide tau(p^2)?

For q = 3 the expected density is 1/(ell - 1) when ell = 1 mod 3 and
1/(ell + 1) when ell = 2 mod 3, with 3/8 at ell = 3.  Small primes such as 7
can misbehave badly.  This compares counts to 10^6 with those values.

    python demos/congruence_survey.py
"""

from heckescope.density import estimate_density
from heckescope.eigenform import build_form
from heckescope.primes import primes_in_interval

x = 10 ** 6
table = build_form("delta", x)
print(f"{'ell':>4} {'count':>6} {'ratio':>9} {'expected':>9} {'dev':>8}  flag")
for ell in primes_in_interval(1, 60):
    e = estimate_density(table, 2, ell, x)
    exp = "-" if e.expected is None else f"{float(e.expected):.5f}"
    dev = e.deviation()
    dev = "-" if dev is None else f"{dev:+.1f}"
    print(f"{ell:>4} {e.count:>6} {e.ratio:>9.5f} {exp:>9} {dev:>8}  {e.flag()}")

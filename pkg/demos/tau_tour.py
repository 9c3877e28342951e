"""A short tour of Ramanujan's tau function.

Builds the Delta table, looks at a few prime powers, checks the Deligne bound
and factors tau(p) over a short interval.

    python demos/tau_tour.py
"""

from heckescope.eigenform import build_form, coeff_at_prime_power, normalized_lambda
from heckescope.primes import largest_prime_factor

table = build_form("delta", 10_000)
print("tau(1..10):", list(table.coeffs[:10]))

# the Hecke recurrence gives tau(p^m) from tau(p) alone
for m in range(5):
    print(f"tau(2^{m}) = {coeff_at_prime_power(table, 2, m).value}")

# normalized values live in [-1, 1]
ps, cs = table.prime_coeffs(60)
for p, c in zip(ps, cs):
    lam = float(normalized_lambda(table, p))
    rep = largest_prime_factor(c)
    print(f"p={p:3d}  tau(p)={c:>12d}  lambda={lam:+.4f}  P(tau(p))={rep.lpf}")

"""The height/width bookkeeping, three ways.

An operator y(x) h^m d^d has height d (worst derivative order) and
width m (best h power). Commutators cancel the top derivative order
(height drops by one) while h powers add (width grows), and that pair of
facts is the entire mechanism behind uniform-in-h observable errors.

This demo shows the mechanism symbolically (exact rational term
rewriting), statistically (randomized lemma verification), and
numerically (norm-growth slopes of the discrete difference matrices).

Run: python demos/height_width_lemmas.py
"""

import numpy as np

from semitrotter import (
    Grid,
    build_diag,
    build_Dk,
    commutator,
    discrete_height_estimate,
    grade_n_commutator,
    height,
    kinetic_symbol,
    observable_symbol,
    potential_symbol,
    sym_commutator,
    to_string,
    verify_height_width,
    width,
)
from semitrotter.expr import parse_expr

a, b = kinetic_symbol(), potential_symbol()
print(f"A = {to_string(a)}            ht {height(a)}, wd {width(a)}")
print(f"B = {to_string(b)}       ht {height(b)}, wd {width(b)}")

c = sym_commutator(a, b)
print(f"\n[A, B] = {to_string(c)}")
print(f"  ht {height(c)} <= ht(A)+ht(B)-1 = {height(a)+height(b)-1}")
print(f"  wd {width(c)} >= wd(A)+wd(B) = {width(a)+width(b)}")

obs = observable_symbol(1)
w1 = sym_commutator(c, obs)
print(f"\n[[A,B], O_1] = {to_string(w1)}")
print(f"  ht {height(w1)} <= wd {width(w1)}  (the uniformity certificate)")

deep = sym_commutator(grade_n_commutator(("B", "A", "A")), w1)
print(f"\none layer deeper: ht {height(deep)} <= wd {width(deep)}")

report = verify_height_width(trials=500, seed=42)
print(f"\nrandomized verifier: {report.checks} checks, {report.failures} failures")

print("\ndiscrete heights from norm growth over N = 16..128:")
sizes = (16, 32, 64, 128)
for k in (1, 2, 3):
    slope = discrete_height_estimate(lambda n, k=k: build_Dk(Grid(-np.pi, np.pi, n), k), sizes)
    print(f"  D_{k}: {slope:.3f}  (height {k})")
cos = parse_expr("cos(x)")
slope = discrete_height_estimate(
    lambda n: commutator(build_Dk(Grid(-np.pi, np.pi, n), 2), build_diag(Grid(-np.pi, np.pi, n), cos)),
    sizes,
)
print(f"  [D_2, diag(cos x)]: {slope:.3f}  (height <= 1: one derivative cancelled)")

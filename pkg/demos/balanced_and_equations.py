"""Balanced forms from a kernel computation versus Frobenius solutions.

For every admissible exponent tuple at weight 12 and depth 2 the script
builds the balanced form, the normalized differential equation with those
indicial roots, and checks that the two descriptions agree.

Run with:  python3 demos/balanced_and_equations.py
"""

from qmode.balanced import admissible_tuples, balanced_report, mde_from_exponents
from qmode.mde import apply_operator, frobenius_leading, indicial_polynomial

for t in admissible_tuples(12, 2):
    rep = balanced_report(t, 10)
    K = mde_from_exponents(t)
    lam0 = t.lambdas[0]
    print(t)
    print("  form      ", rep.form)
    print("  observed  ", rep.observed, " kernel dimension", rep.kernel_dimension)
    print("  operator  ", K)
    print("  indicial  ", indicial_polynomial(K), "roots", indicial_polynomial(K).exponents())
    print("  K f = 0   ", apply_operator(K, rep.form).is_zero())
    print("  Frobenius ", frobenius_leading(K, lam0, 20) == rep.form.expand(lam0 + 20))

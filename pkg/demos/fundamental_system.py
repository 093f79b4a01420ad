"""A fundamental system with a log-type solution, and its Wronskian.

The depth-1 equation at weight 6 has indicial roots 1 and 0.  Besides the
extremal form f_6 it has a solution z f_6 + (series), where z stands for the
variable of the upper half plane and u for 1/(2 pi i).

Run with:  python3 demos/fundamental_system.py
"""

from qmode.extremal import master_equation
from qmode.forms import delta
from qmode.mde import frobenius_fundamental, wronskian
from qmode.series import ZUSeries

K = master_equation(1, 6)
fs = frobenius_fundamental(K, 8)
for e, d, f in zip(fs.exponents, fs.degrees, fs):
    print("exponent %d, z-degree %d" % (e, d))
    for (i, j), s in sorted(f.parts.items(), reverse=True):
        print("   z^%d u^%d * (%s)" % (i, j, s.to_text(terms=5)))

W = wronskian(fs, 6, 1)
quotient = W / ZUSeries.lift(delta(W.truncation).expand(W.truncation))
print("Wronskian / Delta:", {k: s.to_text(terms=3) for k, s in quotient.parts.items()})

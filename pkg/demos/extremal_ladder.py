"""Walk the depth-1 and depth-3 ladders of extremal quasimodular forms.

Run with:  python3 demos/extremal_ladder.py
"""

from qmode.extremal import (
    BASE_WEIGHT,
    STEP,
    composition_scalar,
    denominator_primes,
    extremal_form,
    kdown,
    kup,
    ladder,
)

for depth in (1, 3):
    print("depth %d" % depth)
    for w in range(BASE_WEIGHT[depth], 31, 2):
        entry = ladder(depth).entry(w)
        f = entry.form
        primes = sorted(denominator_primes(f, 20))
        print("  w=%2d  %-14s  %s   denominator primes %s"
              % (w, entry.provenance, f.expand(f.valuation() + 3).to_text(), primes))

# K^down undoes K^up up to an explicit scalar
w = 12
f = extremal_form(w, 1)
back = kdown(1, w + STEP[1], kup(1, w, f))
print("K^down K^up f_12 = %s * f_12: %s" % (composition_scalar(1, w), back == f.scale(composition_scalar(1, w))))

"""Extremal quasimodular forms of depth 1 to 4.

The normalized extremal form f_w of depth r vanishes at infinity to order
dim QM_w^r - 1.  On the base residue class (w = 0 mod 6, 4, 6, 12 for
r = 1..4) the forms are produced by a raising operator K^up from an initial
form; the remaining weights come from short lifts applied to a ladder entry.
A lowering operator K^down (division by a power of Delta) gives composition
identities K^down K^up = const * id that certify the operator tables.

All operators act on exact ``QuasiForm`` polynomials, so nothing is lost to
truncation; expansions are only taken to read off leading coefficients.
"""

import hashlib
import json
import threading
from fractions import Fraction
from importlib import resources
from math import gcd, prod

from .errors import DataIntegrityError, OutOfRange, ValuationMismatch
from .forms import ModularForm, dim_qm_direct
from .mde import MDEOperator
from .quasi import QuasiForm, iterated_serre
from .series import parse_rational

__all__ = [
    "LadderEntry",
    "ExtremalLadder",
    "BASE_WEIGHT",
    "STEP",
    "extremal_base",
    "extremal_valuation",
    "kup",
    "kdown",
    "lift",
    "extremal_form",
    "ladder",
    "recursion_scalar",
    "kdown_scalar",
    "composition_scalar",
    "lift_scalar",
    "denominator_primes",
    "check_kaneko_koike",
    "load_depth4_data",
]

_F = Fraction

BASE_WEIGHT = {1: 6, 2: 4, 3: 6, 4: 12}
STEP = {1: 6, 2: 4, 3: 6, 4: 12}
DELTA_POWER = {1: 1, 2: 1, 3: 2, 4: 5}

DEPTH4_SHA256 = "7fed87f4b0a4f1d48009523a2ea21091835f45f0a10f4e6241a09e6d1144d853"

E2 = QuasiForm.e2()
E4 = QuasiForm.e4()
E6 = QuasiForm.e6()
DELTA = QuasiForm.delta()


def _check_depth(depth):
    if depth not in BASE_WEIGHT:
        raise OutOfRange("extremal forms are available for depths 1 to 4, not %r" % (depth,))


def extremal_valuation(w, depth):
    return dim_qm_direct(w, depth) - 1


# ---------------------------------------------------------------------------
# depth-4 tables


_data_lock = threading.Lock()
_data = {}


def _poly(coeffs):
    return [parse_rational(c) for c in coeffs]


def _peval(cs, w):
    acc = _F(0)
    for c in reversed(cs):
        acc = acc * w + c
    return acc


def load_depth4_data():
    """The depth-4 operator tables, checked against their recorded digest."""
    with _data_lock:
        if "d4" in _data:
            return _data["d4"]
        raw = resources.files("qmode").joinpath("data/depth4.json").read_bytes()
        digest = hashlib.sha256(raw).hexdigest()
        if digest != DEPTH4_SHA256:
            raise DataIntegrityError("depth-4 table digest %s does not match" % digest)
        obj = json.loads(raw)
        d4 = {
            "p": [_poly(p) for p in obj["p"]],
            "C": {int(k): [(t["e4"], t["e6"], _poly(t["w"])) for t in v] for k, v in obj["C"].items()},
            "lifts": [
                {"terms": [(t["order"], t["e4"], t["e6"], _poly(t["w"])) for t in l["terms"]],
                 "leading": l["leading"]}
                for l in obj["lifts"]
            ],
        }
        _data["d4"] = d4
        return d4


def _factor_value(spec, w):
    """int * prod (a w + b)^e over num / prod over den."""
    n, d = spec["int"]
    out = _F(n, d)
    for a, b, e in spec["num"]:
        out *= (a * w + b) ** e
    for a, b, e in spec["den"]:
        out /= _F(a * w + b) ** e
    return out


# ---------------------------------------------------------------------------
# operators as lists of (order of derivative, coefficient form)


def _apply(f, k0, terms):
    derivs = [f]
    out = None
    for j, coeff in sorted(terms, key=lambda t: t[0]):
        while len(derivs) <= j:
            derivs.append(iterated_serre(derivs[-1], k0 + 2 * (len(derivs) - 1), 1))
        term = coeff * derivs[j]
        out = term if out is None else out + term
    return out


def _const(c):
    return QuasiForm.constant(c)


def _kup_terms(depth, w):
    if depth == 1:
        return [(1, E4), (0, E6.scale(_F(-(w + 1), 12)))]
    if depth == 2:
        return [(0, E4.scale(_F(w * (w + 1), 36))), (2, _const(-1))]
    if depth == 3:
        return [
            (3, _const(48 * (7 * w * w + 42 * w + 60))),
            (1, E4.scale(-(15 * w ** 4 + 96 * w ** 3 + 151 * w * w - 30 * w - 116))),
            (0, E6.scale(_F(-(w + 1) * (9 * w ** 4 + 45 * w ** 3 + 40 * w * w + 24 * w + 144), 6))),
        ]
    p = [_peval(pk, w) for pk in load_depth4_data()["p"]]
    return [
        (4, E4.scale(-p[0])),
        (3, E6.scale(_F((w + 4) ** 4, 12) * p[1])),
        (2, (E4 * E4).scale(p[2] / 720)),
        (1, (E4 * E6).scale(p[3] / 8640)),
        (0, (E4 ** 3).scale(_F(w + 1, 25920) * p[4]) + DELTA.scale(_F((w + 1) * (w + 4) ** 4, 15) * p[5])),
    ]


def _kdown_terms(depth, w):
    """The numerator L_w of K^down = L_w / (c Delta^k); returns (terms, c)."""
    if depth == 1:
        return [(1, E4), (0, E6.scale(_F(w - 1, 12)))], 1
    if depth == 2:
        return [(2, E4), (1, E6.scale(_F(w - 1, 6))), (0, (E4 * E4).scale(_F((w - 2) ** 2, 144)))], 1
    if depth == 3:
        E43 = E4 ** 3
        E62 = E6 * E6
        t3 = (E43.scale(9 * w * w - 54 * w + 84) + E62.scale(7 * w * w - 42 * w + 60)).scale(864)
        t2 = (E4 * E4 * E6).scale(3456 * (w - 3) ** 2 * (w - 1))
        t1 = (E4 * (E62.scale(39 * w ** 4 - 336 * w ** 3 + 1099 * w * w - 1626 * w + 924)
                    + E43.scale(3 * (3 * w ** 4 - 48 * w ** 3 + 231 * w * w - 450 * w + 316)))).scale(6)
        t0 = (E6 * (E43.scale(3 * (3 * w ** 3 - 24 * w * w + 64 * w - 56))
                    - E62.scale(w ** 3 - 24 * w + 48))).scale((w - 3) ** 2)
        return [(3, t3), (2, t2), (1, t1), (0, t0)], 864
    C = load_depth4_data()["C"]
    terms = []
    for j, key in zip((4, 3, 2, 1, 0), (40, 42, 44, 46, 48)):
        poly = {(0, a, b): _peval(cs, w) for a, b, cs in C[key]}
        terms.append((j, QuasiForm(key, poly)))
    return terms, 1


def _check_valuation(form, expected, what, depth, w):
    s = form.expand(expected + 1)
    v = s.valuation
    if v != expected:
        raise ValuationMismatch("%s at depth %d, weight %d gives valuation %s instead of %d"
                                % (what, depth, w, v if v <= expected else "> %d" % expected, expected),
                                depth=depth, weight=w)


def kup(depth, w, f):
    """Raising operator: extremal of weight w to (unnormalized) extremal of weight w + step."""
    _check_depth(depth)
    out = _apply(f, w - depth, _kup_terms(depth, w))
    _check_valuation(out, extremal_valuation(w + STEP[depth], depth), "K^up", depth, w)
    return out


def kdown(depth, w, f):
    """Lowering operator: divides exactly by the appropriate power of Delta."""
    _check_depth(depth)
    terms, c = _kdown_terms(depth, w)
    num = _apply(f, w - depth, terms)
    return num.divide_by_delta(DELTA_POWER[depth]).scale(_F(1, c))


# ---------------------------------------------------------------------------
# scalars stated alongside the recursions


def recursion_scalar(depth, w):
    """The factor s with f_(w+step) = s * K^up f_w."""
    if depth == 1:
        return _F(w + 6, 72 * (w + 1) * (w + 5))
    if depth == 2:
        # from K^down_(w+4) f_(w+4) = ((w+4)/4)^2 f_w and the composition constant;
        # writing w^2 for (w+4)^2 here would be off by ((w+4)/w)^2
        return _F(3 * (w + 4) ** 2, 16 * (w + 1) * (w + 2) ** 2 * (w + 3))
    if depth == 3:
        return _F((w + 6) ** 3, 4 * 3 ** 7 * (w + 1) * (w + 2) ** 3 * (w + 4) ** 3 * (w + 5))
    num = 5 ** 5 * (w + 12) ** 4 * prod((5 * w + 12 * k) ** 4 for k in range(1, 5))
    den = (2 ** 44 * 3 ** 23 * (w + 1) * (w + 2) ** 5 * (w + 3) ** 5 * (w + 4) ** 5 * (w + 5) * (w + 6) ** 4
           * (w + 7) * (w + 8) ** 5 * (w + 9) ** 5 * (w + 10) ** 5 * (w + 11))
    return _F(num, den)


def kdown_scalar(depth, w):
    """The factor s with K^down f_w = s * f_(w-step)."""
    if depth == 1:
        return _F(w, 6)
    if depth == 2:
        return _F(w, 4) ** 2
    if depth == 3:
        return 16 * (w - 3) ** 2 * _F(w, 3) ** 3
    return _F(5 ** 4, 2 ** 4) * w ** 4 * prod((5 * w - 12 * k) ** 4 for k in range(1, 5))


def composition_scalar(depth, w):
    """The factor s with K^down_(w+step) K^up_w f_w = s * f_w."""
    if depth == 1:
        return _F(12 * (w + 1) * (w + 5))
    if depth == 2:
        return _F((w + 1) * (w + 2) ** 2 * (w + 3), 3)
    if depth == 3:
        return _F(5184 * (w + 1) * (w + 2) ** 3 * (w + 3) ** 2 * (w + 4) ** 3 * (w + 5))
    return _F(2 ** 40 * 3 ** 23, 5) * ((w + 1) * (w + 2) ** 5 * (w + 3) ** 5 * (w + 4) ** 5 * (w + 5) * (w + 6) ** 4
                                       * (w + 7) * (w + 8) ** 5 * (w + 9) ** 5 * (w + 10) ** 5 * (w + 11))


# ---------------------------------------------------------------------------
# lifts to the other residue classes


def _lift_terms(depth, w, k):
    if depth == 1:
        if k == 1:
            return [(1, _const(1))]
        if k == 2:
            return [(0, E4)]
    elif depth == 2:
        if k == 1:
            return [(1, _const(1))]
    elif depth == 3:
        if k == 1:
            return [(1, _const(1))]
        if k == 2:
            return [(0, E4.scale(_F((w + 1) * (3 * w + 1), 48))), (2, _const(-1))]
    elif depth == 4 and 1 <= k <= 5:
        out = []
        for j, a, b, cs in load_depth4_data()["lifts"][k - 1]["terms"]:
            out.append((j, QuasiForm(4 * a + 6 * b, {(0, a, b): _peval(cs, w)})))
        return out
    raise OutOfRange("no lift by %d at depth %d" % (2 * k, depth))


def lift_scalar(depth, w, k):
    """The factor s with f_(w+2k) = s * L_k f_w (L_k the k-th lift operator)."""
    if depth == 1:
        return _F(12, w + 1) if k == 1 else _F(1)
    if depth == 2:
        return _F(6, w + 1)
    if depth == 3:
        return _F(4, w + 1) if k == 1 else _F(2 * (w + 3) ** 2, 27 * (w + 1) * (w + 2) ** 3)
    return 1 / _factor_value(load_depth4_data()["lifts"][k - 1]["leading"], w)


def lift(depth, w, f, k):
    """Unnormalized extremal form of weight w + 2k from the ladder form f of weight w."""
    _check_depth(depth)
    out = _apply(f, w - depth, _lift_terms(depth, w, k))
    _check_valuation(out, extremal_valuation(w + 2 * k, depth), "lift by %d" % (2 * k), depth, w)
    return out


# ---------------------------------------------------------------------------
# initial forms and the ladder


def master_equation(depth, w):
    """The normalized operator of order depth + 1 annihilating f_w on the base class."""
    _check_depth(depth)
    if w % STEP[depth]:
        raise OutOfRange("the depth-%d equation needs w divisible by %d" % (depth, STEP[depth]))
    e4, e6 = ModularForm.e4(), ModularForm.e6()
    if depth == 1:
        lower = {4: e4.scale(-_F(w * w - 1, 144))}
    elif depth == 2:
        lower = {4: e4.scale(-_F(3 * w * w - 4, 144)),
                 6: e6.scale(-_F((w + 1) * (w - 2) ** 2, 864))}
    elif depth == 3:
        lower = {4: e4.scale(-_F(3 * w * w - 5, 72)),
                 6: e6.scale(-_F(w ** 3 - 3 * w * w + 5, 216)),
                 8: (e4 * e4).scale(-_F((w + 1) * (w - 3) ** 3, 6912))}
    else:
        lower = {4: e4.scale(-_F(5 * (w * w - 2), 72)),
                 6: e6.scale(-_F(5 * (w ** 3 - 3 * w * w + 6), 432)),
                 8: (e4 * e4).scale(-_F(15 * w ** 4 - 120 * w ** 3 + 280 * w * w - 496, 20736)),
                 10: (e4 * e6).scale(-_F((w - 4) ** 4 * (w + 1), 62208))}
    return MDEOperator.normalized(w, depth, lower)


def extremal_base(depth):
    _check_depth(depth)
    if depth == 1:
        return (E2 * E4 - E6).scale(_F(1, 720))
    if depth == 2:
        return (E4 - E2 * E2).scale(_F(1, 288))
    if depth == 3:
        return ((E2 ** 3).scale(5) - (E2 * E4).scale(3) - E6.scale(2)).scale(_F(1, 51840))
    poly = {(0, 3, 0): 13025, (0, 0, 2): -12796, (1, 1, 1): 3852, (2, 2, 0): -2706,
            (3, 0, 1): 27500, (4, 1, 0): -28875}
    return QuasiForm(12, poly).scale(_F(1, 7449432883200))


class LadderEntry:
    """A normalized extremal form with how it was obtained.

    ``provenance`` is "init", "kup-recursion" or "residue-lift"; ``source`` is
    the weight it was derived from; ``raw_leading`` is the leading coefficient
    of the operator output before normalization and ``stated_scalar`` the
    factor given with the recursion or lift (their product should be 1).
    """

    __slots__ = ("weight", "depth", "form", "provenance", "source", "raw_leading", "stated_scalar")

    def __init__(self, weight, depth, form, provenance, source=None, raw_leading=_F(1), stated_scalar=_F(1)):
        self.weight = weight
        self.depth = depth
        self.form = form
        self.provenance = provenance
        self.source = source
        self.raw_leading = raw_leading
        self.stated_scalar = stated_scalar

    def to_json(self):
        return {"weight": self.weight, "depth": self.depth, "provenance": self.provenance,
                "source": self.source, "raw_leading": str(self.raw_leading),
                "stated_scalar": str(self.stated_scalar)}


class ExtremalLadder:
    """Memoized base-class forms of one depth; other weights are lifted from them."""

    def __init__(self, depth):
        _check_depth(depth)
        self.depth = depth
        self._lock = threading.Lock()
        base = BASE_WEIGHT[depth]
        self._entries = {base: LadderEntry(base, depth, extremal_base(depth), "init")}
        self._lifted = {}

    def base_entry(self, w):
        r = self.depth
        base, step = BASE_WEIGHT[r], STEP[r]
        if w < base or (w - base) % step:
            raise OutOfRange("weight %d is not on the depth-%d ladder" % (w, r))
        with self._lock:
            top = max(self._entries)
            while top < w:
                f = self._entries[top].form
                raw = kup(r, top, f)
                lead = raw.leading_coefficient(extremal_valuation(top + step, r) + 1)
                self._entries[top + step] = LadderEntry(
                    top + step, r, raw.scale(1 / lead), "kup-recursion", top, lead, recursion_scalar(r, top))
                top += step
            return self._entries[w]

    def entry(self, w):
        r = self.depth
        if w % 2:
            raise OutOfRange("weight must be even")
        base, step = BASE_WEIGHT[r], STEP[r]
        if w < base:
            raise OutOfRange("weight %d is below the depth-%d base weight %d" % (w, r, base))
        src = base + (w - base) // step * step
        if src == w:
            return self.base_entry(w)
        with self._lock:
            if w in self._lifted:
                return self._lifted[w]
        k = (w - src) // 2
        f = self.base_entry(src).form
        raw = lift(r, src, f, k)
        lead = raw.leading_coefficient(extremal_valuation(w, r) + 1)
        out = LadderEntry(w, r, raw.scale(1 / lead), "residue-lift", src, lead, lift_scalar(r, src, k))
        with self._lock:
            self._lifted.setdefault(w, out)
            return self._lifted[w]


_ladders = {}
_ladders_lock = threading.Lock()


def ladder(depth):
    _check_depth(depth)
    with _ladders_lock:
        if depth not in _ladders:
            _ladders[depth] = ExtremalLadder(depth)
        return _ladders[depth]


def extremal_form(w, depth, order=None):
    """The normalized extremal form of weight w and the given depth.

    ``order`` is accepted for symmetry with the other constructors; the form
    is exact, and when ``order`` is given its expansion to that order is
    computed (and cached) eagerly.
    """
    f = ladder(depth).entry(w).form
    if order is not None:
        f.expand(order)
    return f


# ---------------------------------------------------------------------------
# denominators


def _prime_factors(n):
    from sympy import factorint

    return set(factorint(n))


def denominator_primes(f, upto):
    """Primes dividing a denominator among the first ``upto`` coefficients.

    The coefficients counted start at the valuation, so the vanishing initial
    block does not use up the budget.  ``f`` may be a QuasiForm, a
    ModularForm or a QSeries.
    """
    if hasattr(f, "valuation") and not isinstance(f.valuation, int):
        v = f.valuation(upto + 1)
        series = f.expand(v + upto)
    elif hasattr(f, "expand"):
        series = f.expand(upto)
        v = series.valuation
        series = f.expand(v + upto)
    else:
        series = f
        v = series.valuation
    den = 1
    for n in range(v, min(v + upto, series.truncation)):
        c = series[n]
        d = c.denominator
        den = den * d // gcd(den, d)
    return _prime_factors(den) if den > 1 else set()


def check_kaneko_koike(depth, max_weight, upto):
    """Per-weight denominator primes of the normalized extremal forms up to max_weight."""
    _check_depth(depth)
    report = []
    for w in range(BASE_WEIGHT[depth], max_weight + 1, 2):
        primes = sorted(denominator_primes(extremal_form(w, depth), upto))
        report.append({"weight": w, "primes": primes, "pass": all(p < w for p in primes)})
    return report

"""Quasimodular forms as polynomials in E2, E4, E6.

A quasimodular form of weight w is stored exactly as an isobaric polynomial
sum c * E2^a E4^b E6^c (weight 2a + 4b + 6c = w).  Its depth is the top power
of E2 and the coefficient of E2^l is the modular form h_l.  Derivatives are
taken symbolically with Ramanujan's identities

    E2' = (E2^2 - E4)/12,  E4' = (E2 E4 - E6)/3,  E6' = (E2 E6 - E4^2)/2,

so the Serre derivative, and with it the differential operators built on it,
never lose precision.  q-expansions are produced on demand.
"""

from collections import namedtuple
from fractions import Fraction
from math import comb

import numpy as np

from . import linalg
from .errors import InsufficientTruncation, NonHolomorphic, NotQuasimodular, UndeterminedOrder
from .forms import ModularForm, e2_series, monomial_expansion
from .series import QSeries, ZUSeries, as_fraction, format_rational, parse_rational

__all__ = [
    "QuasiForm",
    "GComponents",
    "MonodromyPair",
    "serre_derivative",
    "decompose_e2",
    "g_components",
    "vanishing_orders",
    "rho_matrices",
    "quasivector",
    "qm_basis",
]


def _add_into(out, key, c):
    v = out.get(key, Fraction(0)) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class QuasiForm:
    """Isobaric polynomial in E2, E4, E6 with rational coefficients."""

    __slots__ = ("weight", "poly", "_expansions")

    def __init__(self, weight, poly=None):
        clean = {}
        for key, c in (poly or {}).items():
            a, b, cc = key
            if 2 * a + 4 * b + 6 * cc != weight:
                raise ValueError("E2^%d E4^%d E6^%d does not have weight %d" % (a, b, cc, weight))
            c = as_fraction(c)
            if c:
                _add_into(clean, (a, b, cc), c)
        self.weight = weight
        self.poly = clean
        self._expansions = {}

    # construction

    @classmethod
    def zero(cls, weight):
        return cls(weight, {})

    @classmethod
    def constant(cls, c):
        return cls(0, {(0, 0, 0): c})

    @classmethod
    def e2(cls):
        return cls(2, {(1, 0, 0): 1})

    @classmethod
    def e4(cls):
        return cls(4, {(0, 1, 0): 1})

    @classmethod
    def e6(cls):
        return cls(6, {(0, 0, 1): 1})

    @classmethod
    def delta(cls):
        return cls(12, {(0, 3, 0): Fraction(1, 1728), (0, 0, 2): Fraction(-1, 1728)})

    @classmethod
    def from_modular(cls, form):
        if form.monomials is None:
            raise ValueError("modular form has no E4/E6 representation")
        return cls(form.weight, {(0, a, b): c for (a, b), c in form.monomials.items()})

    @classmethod
    def from_components(cls, weight, components):
        """Assemble sum E2^l h_l from modular forms h_0, h_1, ..."""
        poly = {}
        for l, h in enumerate(components):
            if h is None:
                continue
            if h.weight != weight - 2 * l and not h.is_zero():
                raise ValueError("h_%d has weight %d, expected %d" % (l, h.weight, weight - 2 * l))
            if h.monomials is None:
                raise ValueError("components need an E4/E6 representation")
            for (a, b), c in h.monomials.items():
                _add_into(poly, (l, a, b), c)
        return cls(weight, poly)

    # structure

    @property
    def depth(self):
        return max((a for a, _, _ in self.poly), default=0)

    def is_zero(self):
        return not self.poly

    def component(self, l):
        return ModularForm(self.weight - 2 * l, {(b, c): x for (a, b, c), x in self.poly.items() if a == l})

    @property
    def components(self):
        return [self.component(l) for l in range(self.depth + 1)]

    def expand(self, order):
        s = self._expansions.get(order)
        if s is None:
            s = QSeries.zero(order)
            for (a, b, c), x in sorted(self.poly.items()):
                s = s + monomial_expansion(a, b, c, order).scale(x)
            self._expansions[order] = s
        return s

    def valuation(self, order=60):
        s = self.expand(order)
        if s.is_zero():
            raise UndeterminedOrder("form vanishes to order %d" % order)
        return s.valuation

    def leading_coefficient(self, order=60):
        s = self.expand(order)
        if s.is_zero():
            raise UndeterminedOrder("form vanishes to order %d" % order)
        return s.leading_coefficient()

    def normalized(self, order=60):
        """(f / a, a) where a is the leading q-coefficient of f."""
        lead = self.leading_coefficient(order)
        return self.scale(1 / lead), lead

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, QuasiForm):
            return other
        if isinstance(other, ModularForm):
            return QuasiForm.from_modular(other)
        if isinstance(other, (int, Fraction)):
            return QuasiForm.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.weight != self.weight:
            raise ValueError("cannot add forms of weights %d and %d" % (self.weight, other.weight))
        out = dict(self.poly)
        for k, c in other.poly.items():
            _add_into(out, k, c)
        return QuasiForm(self.weight, out)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_fraction(c)
        return QuasiForm(self.weight, {k: v * c for k, v in self.poly.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for (a1, b1, c1), x in self.poly.items():
            for (a2, b2, c2), y in other.poly.items():
                _add_into(out, (a1 + a2, b1 + b2, c1 + c2), x * y)
        return QuasiForm(self.weight + other.weight, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = QuasiForm.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self):
        """q d/dq via Ramanujan's identities."""
        out = {}
        for (a, b, c), x in self.poly.items():
            if a:
                f = x * a / 12
                _add_into(out, (a + 1, b, c), f)
                _add_into(out, (a - 1, b + 1, c), -f)
            if b:
                f = x * b / 3
                _add_into(out, (a + 1, b, c), f)
                _add_into(out, (a, b - 1, c + 1), -f)
            if c:
                f = x * c / 2
                _add_into(out, (a + 1, b, c), f)
                _add_into(out, (a, b + 2, c - 1), -f)
        return QuasiForm(self.weight + 2, out)

    def serre(self, k):
        """f' - (k/12) E2 f."""
        out = self.derivative()
        if k:
            out = out - QuasiForm.e2() * self.scale(Fraction(k, 12))
        return out

    def divide_by_delta(self, k=1):
        """Exact quotient by Delta^k; NonHolomorphic if some h_l is not divisible."""
        poly = dict(self.poly)
        for _ in range(k):
            quotient = {}
            rest = dict(poly)
            # divide by E6^2 - E4^3 as a polynomial in E6 over Q[E2, E4]
            while True:
                top = [key for key in rest if key[2] >= 2]
                if not top:
                    break
                key = max(top, key=lambda t: (t[2], t))
                a, b, c = key
                x = rest.pop(key)
                _add_into(quotient, (a, b, c - 2), x)
                _add_into(rest, (a, b + 3, c - 2), x)
            if rest:
                raise NonHolomorphic("form is not divisible by Delta^%d" % k,
                                     remainder={"%d,%d,%d" % t: format_rational(v) for t, v in rest.items()})
            poly = {t: -1728 * v for t, v in quotient.items()}
        return QuasiForm(self.weight - 12 * k, poly)

    def __eq__(self, other):
        if isinstance(other, QuasiForm):
            if self.is_zero() and other.is_zero():
                return True
            return self.weight == other.weight and self.poly == other.poly
        return NotImplemented

    def __hash__(self):
        return hash((self.weight, frozenset(self.poly.items())))

    # serialization

    def to_json(self, order=None):
        out = {
            "weight": self.weight,
            "depth": self.depth,
            "polynomial": {"%d,%d,%d" % k: format_rational(v) for k, v in sorted(self.poly.items(), reverse=True)},
        }
        if order is not None:
            out["components"] = [h.expand(order).to_json() for h in self.components]
            out["expansion"] = self.expand(order).to_json()
        return out

    @classmethod
    def from_json(cls, obj):
        poly = {}
        for k, v in obj["polynomial"].items():
            a, b, c = (int(t) for t in k.split(","))
            poly[(a, b, c)] = parse_rational(v)
        return cls(obj["weight"], poly)

    def __repr__(self):
        if not self.poly:
            return "QuasiForm(%d, 0)" % self.weight
        terms = []
        for (a, b, c), x in sorted(self.poly.items(), reverse=True):
            mono = "*".join(s if e == 1 else "%s^%d" % (s, e) for s, e in (("E2", a), ("E4", b), ("E6", c)) if e)
            terms.append(format_rational(x) + ("*" + mono if mono else ""))
        return "QuasiForm(%d, %s)" % (self.weight, " + ".join(terms))


def qm_basis(w, r):
    """Monomials E2^k E4^a E6^b spanning QM_w^r: k ascending, then E4-power descending."""
    out = []
    for k in range(r + 1):
        m = w - 2 * k
        if m < 0:
            break
        for a in range(m // 4, -1, -1):
            if (m - 4 * a) % 6 == 0:
                out.append((k, a, (m - 4 * a) // 6))
    return out


def serre_derivative(f, weight_parameter):
    """f' - (weight_parameter/12) E2 f for QuasiForm, QSeries or ZUSeries."""
    k = weight_parameter
    if isinstance(f, QuasiForm):
        return f.serre(k)
    if isinstance(f, ModularForm):
        return QuasiForm.from_modular(f).serre(k)
    if isinstance(f, QSeries):
        d = f.qderive()
        if k:
            d = d - (e2_series(f.truncation) * f).scale(Fraction(k, 12))
        return d
    if isinstance(f, ZUSeries):
        d = f.qderive()
        if k:
            d = d - (f * e2_series(f.truncation)).scale(Fraction(k, 12))
        return d
    raise TypeError("cannot take the Serre derivative of %r" % (f,))


def iterated_serre(f, weight_parameter, times):
    """partial^times with the convention partial^(j+1)_k = partial_(k+2j) partial^j_k."""
    out = f
    for j in range(times):
        out = serre_derivative(out, weight_parameter + 2 * j)
    return out


def decompose_e2(f, w, r):
    """Write a q-series as sum E2^l h_l with h_l in M_(w-2l), l <= r."""
    basis = qm_basis(w, r)
    n = f.truncation
    cols = [monomial_expansion(a, b, c, n) for a, b, c in basis]
    rows = [[col[k] for col in cols] for k in range(n)]
    rhs = [f[k] for k in range(n)]
    red, pivots = linalg.rref(rows, len(basis)) if basis else ([], [])
    if len(pivots) < len(basis):
        raise InsufficientTruncation(
            "%d coefficients do not separate the %d basis monomials of weight %d, depth %d"
            % (n, len(basis), w, r))
    x = linalg.solve(rows, rhs) if basis else []
    if x is None or (not basis and any(rhs)):
        raise NotQuasimodular("series is not in QM_%d^%d to order %d" % (w, r, n))
    return QuasiForm(w, {m: c for m, c in zip(basis, x)})


# ---------------------------------------------------------------------------
# the forms g_l


class GComponents:
    """g_l = (12u)^l G_l with exact quasimodular forms G_l."""

    __slots__ = ("forms", "normalization")

    def __init__(self, forms, normalization):
        self.forms = list(forms)
        self.normalization = normalization

    def __len__(self):
        return len(self.forms)

    def series(self, order):
        """The g_l as ZUSeries (u-degree l, z-degree 0)."""
        out = []
        for l, G in enumerate(self.forms):
            s = G.expand(order).scale(Fraction(12) ** l)
            out.append(ZUSeries({(0, l): s}, order))
        return out

    def rational_series(self, order):
        return [G.expand(order) for G in self.forms]


def g_components(f, r=None):
    """The forms g_0, ..., g_s attached to f.

    binom(n, l) g_l = (12u)^l sum_m binom(l+m, m) E2^m h_(l+m), where n is the
    depth s of f, or the given r >= s (the normalization that makes the
    quasimodular vector of length r+1 transform by rho).
    """
    if isinstance(f, ModularForm):
        f = QuasiForm.from_modular(f)
    s = f.depth
    n = s if r is None else r
    if n < s:
        raise ValueError("normalization %d below the depth %d" % (n, s))
    h = f.components
    e2 = QuasiForm.e2()
    forms = []
    for l in range(s + 1):
        acc = QuasiForm.zero(f.weight - 2 * l)
        for m in range(s - l + 1):
            term = QuasiForm.from_modular(h[l + m]) * e2 ** m
            acc = acc + term.scale(comb(l + m, m))
        forms.append(acc.scale(Fraction(1, comb(n, l))))
    return GComponents(forms, n)


def vanishing_orders(g, order=60):
    """q-valuations of g_0, ..., g_s."""
    out = []
    for l, s in enumerate(g.rational_series(order)):
        if s.is_zero():
            raise UndeterminedOrder("g_%d vanishes to order %d" % (l, order), index=l)
        out.append(s.valuation)
    return tuple(out)


MonodromyPair = namedtuple("MonodromyPair", "rhoS rhoT")


def rho_matrices(r):
    """rho(S): anti-diagonal with entries (-1)^i in row i; rho(T): lower Pascal matrix."""
    if r < 0:
        raise ValueError("r must be non-negative")
    S = np.zeros((r + 1, r + 1), dtype=np.int64)
    T = np.zeros((r + 1, r + 1), dtype=np.int64)
    for i in range(r + 1):
        S[i, r - i] = (-1) ** i
        for j in range(i + 1):
            T[i, j] = comb(i, j)
    return MonodromyPair(S, T)


def quasivector(f, r, order):
    """f_k = sum_(l <= min(k, s)) binom(k, l) z^(k-l) g_l for k = 0..r."""
    if isinstance(f, ModularForm):
        f = QuasiForm.from_modular(f)
    if r < f.depth:
        raise ValueError("r = %d is below the depth %d" % (r, f.depth))
    g = g_components(f, r).series(order)
    out = []
    for k in range(r + 1):
        parts = {}
        for l in range(min(k, len(g) - 1) + 1):
            c = comb(k, l)
            for (_, j), s in g[l].parts.items():
                key = (k - l, j)
                t = s.scale(c)
                parts[key] = parts[key] + t if key in parts else t
        out.append(ZUSeries(parts, order))
    return out

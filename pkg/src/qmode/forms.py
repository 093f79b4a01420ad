"""Bernoulli numbers, Eisenstein series, the discriminant and bases of M_w.

Modular forms for the full modular group are polynomials in E4 and E6.  A
``ModularForm`` may carry that polynomial (``monomials``, keyed by the pair
of exponents of E4 and E6), a q-expansion, or both.
"""

import threading
from collections import namedtuple
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import InsufficientTruncation
from .series import QSeries, as_fraction, format_rational, parse_rational

__all__ = [
    "ModularMonomial",
    "ModularForm",
    "bernoulli",
    "divisor_sums",
    "eisenstein",
    "delta",
    "modular_basis",
    "dim_modular",
    "dim_qm",
    "dim_qm_direct",
    "e2_series",
    "e4_series",
    "e6_series",
    "monomial_expansion",
]


# ---------------------------------------------------------------------------
# Bernoulli numbers and divisor sums

_bern_lock = threading.Lock()
_bern = [Fraction(1)]  # B_0, B_1, ... with B_1 = -1/2


def _bernoulli_upto(n):
    with _bern_lock:
        for m in range(len(_bern), n + 1):
            # sum_{k=0}^{m} binom(m+1, k) B_k = 0
            s = sum((comb(m + 1, k) * _bern[k] for k in range(m)), Fraction(0))
            _bern.append(-s / (m + 1))
        return tuple(_bern[:n + 1])


def bernoulli(n):
    """The Bernoulli number B_n for even n >= 2."""
    if not isinstance(n, int) or n < 2 or n % 2:
        raise ValueError("bernoulli(n) needs an even integer n >= 2, got %r" % (n,))
    return _bernoulli_upto(n)[n]


_sigma_lock = threading.Lock()
_sigma_cache = {}


def divisor_sums(k, n):
    """Tuple (sigma_k(0), ..., sigma_k(n-1)) with sigma_k(0) = 0, by sieve."""
    with _sigma_lock:
        cached = _sigma_cache.get(k)
        if cached is not None and len(cached) >= n:
            return cached[:n]
        size = max(n, 2 * len(cached) if cached else 0, 16)
        s = [0] * size
        for d in range(1, size):
            p = d ** k
            for m in range(d, size, d):
                s[m] += p
        _sigma_cache[k] = tuple(s)
        return _sigma_cache[k][:n]


# ---------------------------------------------------------------------------
# q-expansions


@lru_cache(maxsize=None)
def _eisenstein_series(k, order):
    c = -Fraction(4 * k) / bernoulli(2 * k)
    sig = divisor_sums(2 * k - 1, order)
    cs = [Fraction(1)] + [c * sig[n] for n in range(1, order)]
    return QSeries(cs, 0, order)


def e2_series(order):
    return _eisenstein_series(1, order)


def e4_series(order):
    return _eisenstein_series(2, order)


def e6_series(order):
    return _eisenstein_series(3, order)


@lru_cache(maxsize=4096)
def monomial_expansion(a, b, c, order):
    """Expansion of E2^a E4^b E6^c to O(q^order)."""
    if a == b == c == 0:
        return QSeries.one(order)
    if a:
        return e2_series(order) * monomial_expansion(a - 1, b, c, order)
    if b:
        return e4_series(order) * monomial_expansion(0, b - 1, c, order)
    return e6_series(order) * monomial_expansion(0, 0, c - 1, order)


# ---------------------------------------------------------------------------

ModularMonomial = namedtuple("ModularMonomial", "e4_power e6_power")
ModularMonomial.weight = property(lambda m: 4 * m.e4_power + 6 * m.e6_power)


def modular_basis(w):
    """Monomials E4^a E6^b of weight w, by descending power of E4."""
    if w < 0 or w % 2:
        return []
    return [ModularMonomial(a, (w - 4 * a) // 6) for a in range(w // 4, -1, -1) if (w - 4 * a) % 6 == 0]


def dim_modular(w):
    """dim M_w; zero for negative, odd or w = 2."""
    if w < 0 or w % 2 or w == 2:
        return 0
    return w // 12 + (0 if w % 12 == 2 else 1)


def dim_qm(w, r):
    """Closed formula for the dimension of E2^0 M_w + ... + E2^r M_(w-2r).

    This is the published closed form, evaluated verbatim.  It agrees with
    the direct sum ``dim_qm_direct`` except for small weights relative to
    the depth (w <= 2r - 10); callers that need the true dimension in that
    range should use ``dim_qm_direct``.
    """
    if w % 2:
        raise ValueError("weight must be even")
    if r < 0:
        raise ValueError("depth must be non-negative")
    a = (r + 1) // 6
    return (w * (r + 1) // 12 - a * (r - 3 * a - 1) + r // 6 + 1
            - (1 if (w * (r + 1)) % 12 == 2 else 0))


def dim_qm_direct(w, r):
    """sum_{k=0}^{r} dim M_(w-2k)."""
    return sum(dim_modular(w - 2 * k) for k in range(r + 1))


# ---------------------------------------------------------------------------


def _monomial_key(k):
    if isinstance(k, str):
        a, b = k.split(",")
        return int(a), int(b)
    return int(k[0]), int(k[1])


class ModularForm:
    """A modular form of a given weight.

    ``monomials`` maps (a, b) to the coefficient of E4^a E6^b.  When only an
    expansion is known, ``expand`` can return at most that much of it.
    """

    __slots__ = ("weight", "monomials", "_expansion")

    def __init__(self, weight, monomials=None, expansion=None):
        self.weight = weight
        if monomials is not None:
            clean = {}
            for k, c in monomials.items():
                a, b = _monomial_key(k)
                if 4 * a + 6 * b != weight:
                    raise ValueError("monomial E4^%d E6^%d has weight %d, not %d"
                                     % (a, b, 4 * a + 6 * b, weight))
                c = as_fraction(c)
                if c:
                    clean[(a, b)] = clean.get((a, b), Fraction(0)) + c
            monomials = {k: v for k, v in clean.items() if v}
        if monomials is None and expansion is None:
            raise ValueError("a modular form needs monomials or an expansion")
        self.monomials = monomials
        self._expansion = expansion

    @property
    def monomial_representation(self):
        return self.monomials

    @property
    def expansion(self):
        return self._expansion

    @classmethod
    def zero(cls, weight):
        return cls(weight, {})

    @classmethod
    def constant(cls, c):
        return cls(0, {(0, 0): c})

    @classmethod
    def e4(cls):
        return cls(4, {(1, 0): 1})

    @classmethod
    def e6(cls):
        return cls(6, {(0, 1): 1})

    @classmethod
    def delta(cls):
        return cls(12, {(3, 0): Fraction(1, 1728), (0, 2): Fraction(-1, 1728)})

    @classmethod
    def eisenstein_monomial(cls, weight):
        """E4, E6, E4^2, E4 E6 for weights 4, 6, 8, 10; 1 for weight 0."""
        table = {0: (0, 0), 4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1)}
        if weight not in table:
            raise ValueError("no single Eisenstein monomial of weight %d" % weight)
        return cls(weight, {table[weight]: 1})

    def is_zero(self):
        if self.monomials is not None:
            return not self.monomials
        return self._expansion.is_zero()

    def expand(self, order):
        if self.monomials is not None:
            out = QSeries.zero(order)
            for (a, b), c in self.monomials.items():
                out = out + monomial_expansion(0, a, b, order).scale(c)
            return out
        if self._expansion.truncation < order:
            raise InsufficientTruncation("form known only below q^%d" % self._expansion.truncation)
        return self._expansion.truncate(order)

    def value_at_infinity(self):
        if self.monomials is not None:
            return sum(self.monomials.values(), Fraction(0))
        return self._expansion[0]

    def _require_monomials(self, other=None):
        if self.monomials is None or (other is not None and other.monomials is None):
            raise ValueError("operation needs the E4/E6 representation")

    def __add__(self, other):
        if not isinstance(other, ModularForm):
            return NotImplemented
        if other.weight != self.weight:
            raise ValueError("cannot add forms of weights %d and %d" % (self.weight, other.weight))
        self._require_monomials(other)
        out = dict(self.monomials)
        for k, c in other.monomials.items():
            out[k] = out.get(k, Fraction(0)) + c
        return ModularForm(self.weight, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_fraction(c)
        if self.monomials is None:
            return ModularForm(self.weight, expansion=self._expansion.scale(c))
        return ModularForm(self.weight, {k: v * c for k, v in self.monomials.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ModularForm):
            return NotImplemented
        self._require_monomials(other)
        out = {}
        for (a1, b1), c1 in self.monomials.items():
            for (a2, b2), c2 in other.monomials.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return ModularForm(self.weight + other.weight, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = ModularForm.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, ModularForm):
            return NotImplemented
        if self.monomials is not None and other.monomials is not None:
            return self.weight == other.weight and self.monomials == other.monomials
        return self.weight == other.weight and self._expansion == other._expansion

    def __hash__(self):
        return hash((self.weight, frozenset((self.monomials or {}).items())))

    def to_json(self, order=None):
        out = {"weight": self.weight}
        if self.monomials is not None:
            out["monomials"] = {"%d,%d" % k: format_rational(c) for k, c in sorted(self.monomials.items(), reverse=True)}
        if order is not None:
            out.update(self.expand(order).to_json())
        return out

    @classmethod
    def from_json(cls, obj):
        if "monomials" in obj:
            return cls(obj["weight"], {_monomial_key(k): parse_rational(v) for k, v in obj["monomials"].items()})
        return cls(obj["weight"], expansion=QSeries.from_json(obj))

    def __repr__(self):
        if self.monomials is None:
            return "ModularForm(%d, %r)" % (self.weight, self._expansion)
        if not self.monomials:
            return "ModularForm(%d, 0)" % self.weight
        terms = []
        for (a, b), c in sorted(self.monomials.items(), reverse=True):
            mono = "*".join(s if e == 1 else "%s^%d" % (s, e) for s, e in (("E4", a), ("E6", b)) if e)
            terms.append(format_rational(c) + ("*" + mono if mono else ""))
        return "ModularForm(%d, %s)" % (self.weight, " + ".join(terms))


def eisenstein(k, order):
    """E_2k = 1 - (4k / B_2k) sum sigma_(2k-1)(n) q^n, to O(q^order).

    k = 1 gives the quasimodular E2.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError("eisenstein(k) needs an integer k >= 1")
    series = _eisenstein_series(k, order)
    monomials = {2: {(1, 0): 1}, 3: {(0, 1): 1}}.get(k)
    if monomials is not None:
        return ModularForm(2 * k, monomials, expansion=series)
    return ModularForm(2 * k, expansion=series)


def delta(order):
    """(E4^3 - E6^2) / 1728 to O(q^order)."""
    form = ModularForm.delta()
    return ModularForm(12, form.monomials, expansion=form.expand(order))

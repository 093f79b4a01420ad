"""Truncated power series in q with exact rational coefficients.

``QSeries`` stores the coefficients of q^valuation, ..., q^(truncation-1);
everything from q^truncation on is unknown.  ``ZUSeries`` extends the scalars
to polynomials in two formal symbols z and u, where u stands for 1/(2 pi i).
The derivative used throughout is q d/dq, so on the z-extension it acts by
d/dz(z^m) = m z^(m-1) times u.

Truncation is propagated pessimistically: no operation ever reads a
coefficient past the truncation of its inputs.
"""

from fractions import Fraction
from math import comb, lcm

from .errors import InsufficientTruncation, NonHolomorphic, NonUnitLeading

__all__ = [
    "QSeries",
    "ZUPoly",
    "ZUSeries",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "series_add",
    "series_mul",
    "series_div",
    "series_qderive",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

# below this length schoolbook convolution beats packing into one big integer
KRONECKER_THRESHOLD = 24


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not supported")
    return Fraction(x)


def format_rational(x):
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def parse_rational(s):
    if not isinstance(s, str):
        raise TypeError("rational must be given as a string, got %r" % (s,))
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        p, q = int(p), int(q)
        if q <= 0:
            raise ValueError("denominator must be positive in %r" % s)
        return Fraction(p, q)
    return Fraction(int(s))


# ---------------------------------------------------------------------------
# integer convolution kernels


def convolve_naive(a, b, n):
    """First n coefficients of the product of two coefficient lists."""
    out = [0] * n
    lb = len(b)
    for i, x in enumerate(a):
        if i >= n:
            break
        if not x:
            continue
        for j in range(min(lb, n - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return out


def _pack(values, nbytes):
    """Pack non-negative ints as little-endian digits of width 8*nbytes."""
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in values), "little")


def convolve_kronecker(a, b, n):
    """Integer convolution by Kronecker substitution.

    Signed digits are handled by adding a constant offset to every digit of
    the product, which makes all digits non-negative and lets them be read
    straight from the byte string.
    """
    a = list(a[:n])
    b = list(b[:n])
    if not a or not b:
        return [0] * n
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * n
    bound = ma * mb * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    bits = 8 * nbytes

    def pack_signed(v):
        pos = _pack([x if x > 0 else 0 for x in v], nbytes)
        neg = _pack([-x if x < 0 else 0 for x in v], nbytes)
        return pos - neg

    slots = len(a) + len(b) - 1
    half = 1 << (bits - 1)
    offset = half * (((1 << (bits * slots)) - 1) // ((1 << bits) - 1))
    prod = pack_signed(a) * pack_signed(b) + offset
    raw = prod.to_bytes(nbytes * slots, "little")
    out = []
    for i in range(min(n, slots)):
        out.append(int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half)
    out.extend([0] * (n - len(out)))
    return out


def convolve(a, b, n):
    if min(len(a), len(b), n) < KRONECKER_THRESHOLD:
        return convolve_naive(a, b, n)
    return convolve_kronecker(a, b, n)


def _lift(coeffs):
    """Write rational coefficients as (integers, common denominator)."""
    den = 1
    for c in coeffs:
        if c.denominator != 1:
            den = lcm(den, c.denominator)
    if den == 1:
        return [c.numerator for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


# ---------------------------------------------------------------------------


class QSeries:
    """q^valuation * (c_0 + c_1 q + ...) + O(q^truncation)."""

    __slots__ = ("valuation", "coeffs", "truncation")

    def __init__(self, coeffs=(), valuation=0, truncation=None):
        cs = [as_fraction(c) for c in coeffs]
        if truncation is None:
            truncation = valuation + len(cs)
        if valuation < 0:
            raise ValueError("q-series must have non-negative valuation")
        if truncation < valuation:
            # everything known is below the truncation, i.e. nothing
            cs = []
            valuation = truncation
        width = truncation - valuation
        if len(cs) > width:
            cs = cs[:width]
        elif len(cs) < width:
            cs.extend([_ZERO] * (width - len(cs)))
        k = 0
        while k < len(cs) and not cs[k]:
            k += 1
        self.valuation = valuation + k
        self.coeffs = tuple(cs[k:])
        self.truncation = truncation

    # construction helpers

    @classmethod
    def _raw(cls, coeffs, valuation, truncation):
        # trusted constructor: coeffs are Fractions of the right length
        obj = cls.__new__(cls)
        k = 0
        while k < len(coeffs) and not coeffs[k]:
            k += 1
        obj.valuation = valuation + k
        obj.coeffs = tuple(coeffs[k:])
        obj.truncation = truncation
        return obj

    @classmethod
    def zero(cls, truncation):
        return cls((), truncation, truncation)

    @classmethod
    def one(cls, truncation):
        return cls.constant(1, truncation)

    @classmethod
    def constant(cls, c, truncation):
        return cls.monomial(0, c, truncation)

    @classmethod
    def monomial(cls, n, c, truncation):
        if n >= truncation:
            return cls.zero(truncation)
        return cls([c], n, truncation)

    @classmethod
    def from_dict(cls, terms, truncation):
        """Build from a mapping exponent -> coefficient."""
        cs = [_ZERO] * truncation
        for n, c in terms.items():
            if 0 <= n < truncation:
                cs[n] = as_fraction(c)
        return cls(cs, 0, truncation)

    # access

    def __getitem__(self, n):
        if n >= self.truncation:
            raise InsufficientTruncation(
                "coefficient of q^%d requested, series known below q^%d" % (n, self.truncation))
        if n < self.valuation:
            return _ZERO
        return self.coeffs[n - self.valuation]

    coefficient = __getitem__

    def coefficient_list(self, upto=None):
        """Coefficients of q^0 ... q^(upto-1)."""
        if upto is None:
            upto = self.truncation
        return [self[n] for n in range(upto)]

    def is_zero(self):
        return not self.coeffs

    def leading_coefficient(self):
        if not self.coeffs:
            raise InsufficientTruncation("series vanishes to its truncation order %d" % self.truncation)
        return self.coeffs[0]

    def terms(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.valuation + i, c

    def truncate(self, n):
        if n >= self.truncation:
            return self
        return QSeries._raw(self.coeffs[:max(0, n - self.valuation)], min(self.valuation, n), n)

    def shift(self, k):
        """Multiply by q^k (k may be negative if the result stays holomorphic)."""
        if self.valuation + k < 0:
            if self.is_zero() and self.truncation + k >= 0:
                return QSeries.zero(self.truncation + k)
            raise NonHolomorphic("shift by q^%d leaves negative valuation" % k)
        return QSeries._raw(self.coeffs, self.valuation + k, self.truncation + k)

    # arithmetic

    def __neg__(self):
        return QSeries._raw(tuple(-c for c in self.coeffs), self.valuation, self.truncation)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, self.truncation)
        if not isinstance(other, QSeries):
            return NotImplemented
        return series_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, self.truncation)
        if not isinstance(other, QSeries):
            return NotImplemented
        return series_add(self, -other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def scale(self, c):
        c = as_fraction(c)
        if not c:
            return QSeries.zero(self.truncation)
        return QSeries._raw(tuple(x * c for x in self.coeffs), self.valuation, self.truncation)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, QSeries):
            return series_mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of a series by zero")
            return self.scale(1 / as_fraction(other))
        if isinstance(other, QSeries):
            return series_div(self, other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        if k == 0:
            return QSeries.one(self.truncation)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def qderive(self):
        return series_qderive(self)

    # comparison

    def __eq__(self, other):
        if isinstance(other, QSeries):
            return (self.valuation == other.valuation and self.truncation == other.truncation
                    and self.coeffs == other.coeffs)
        return NotImplemented

    def __hash__(self):
        return hash((self.valuation, self.truncation, self.coeffs))

    def agrees_with(self, other, upto=None):
        """True when both series have equal coefficients below a common order."""
        n = min(self.truncation, other.truncation)
        if upto is not None:
            if upto > n:
                raise InsufficientTruncation("cannot compare to q^%d, known only below q^%d" % (upto, n))
            n = upto
        return all(self[k] == other[k] for k in range(n))

    # serialization

    def to_json(self):
        return {
            "valuation": self.valuation,
            "truncation": self.truncation,
            "coefficients": [format_rational(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        v = obj["valuation"]
        n = obj["truncation"]
        cs = [parse_rational(c) for c in obj["coefficients"]]
        if len(cs) != n - v:
            raise ValueError("expected %d coefficients, got %d" % (n - v, len(cs)))
        if cs and not cs[0]:
            raise ValueError("leading stored coefficient must be nonzero")
        return cls(cs, v, n)

    def to_text(self, terms=None):
        parts = []
        for n, c in self.terms():
            if terms is not None and len(parts) >= terms:
                break
            parts.append(_monomial_text(c, n))
        if not parts:
            body = "0"
        else:
            body = parts[0]
            for p in parts[1:]:
                body += " - " + p[1:] if p.startswith("-") else " + " + p
        return body + " + O(q^%d)" % self.truncation

    def __repr__(self):
        return "QSeries(%s)" % self.to_text(terms=8)


def _monomial_text(c, n):
    if n == 0:
        return format_rational(c)
    q = "q" if n == 1 else "q^%d" % n
    if c == 1:
        return q
    if c == -1:
        return "-" + q
    return format_rational(c) + q


def series_add(a, b):
    """Coefficientwise sum; works for QSeries and ZUSeries alike."""
    if isinstance(a, ZUSeries) or isinstance(b, ZUSeries):
        return ZUSeries.lift(a) + ZUSeries.lift(b)
    n = min(a.truncation, b.truncation)
    v = min(a.valuation, b.valuation, n)
    out = [_ZERO] * (n - v)
    for src in (a, b):
        off = src.valuation - v
        for i, c in enumerate(src.coeffs):
            j = off + i
            if j >= len(out):
                break
            out[j] += c
    return QSeries._raw(out, v, n)


def series_mul(a, b):
    """Cauchy product with truncation min(a.N + b.v, b.N + a.v)."""
    if isinstance(a, ZUSeries) or isinstance(b, ZUSeries):
        return ZUSeries.lift(a) * ZUSeries.lift(b)
    n = min(a.truncation + b.valuation, b.truncation + a.valuation)
    v = a.valuation + b.valuation
    if a.is_zero() or b.is_zero() or v >= n:
        return QSeries.zero(n)
    width = n - v
    ia, da = _lift(a.coeffs[:width])
    ib, db = _lift(b.coeffs[:width])
    prod = convolve(ia, ib, width)
    den = da * db
    if den == 1:
        out = [Fraction(c) for c in prod]
    else:
        out = [Fraction(c, den) for c in prod]
    return QSeries._raw(out, v, n)


def series_div(a, b):
    """Exact quotient a/b.

    The quotient is known to order va - vb + min(a.N - va, b.N - vb).  A
    quotient with a negative power of q raises NonHolomorphic.
    """
    if isinstance(a, ZUSeries) or isinstance(b, ZUSeries):
        return ZUSeries.lift(a).divide(ZUSeries.lift(b))
    if b.is_zero():
        raise ZeroDivisionError("divisor vanishes to its truncation order %d" % b.truncation)
    va, vb = a.valuation, b.valuation
    n = va - vb + min(a.truncation - va, b.truncation - vb)
    if a.is_zero():
        if n < 0:
            raise InsufficientTruncation("dividend not known far enough to divide by q^%d" % vb)
        return QSeries.zero(n)
    if va < vb:
        raise NonHolomorphic("quotient has valuation %d" % (va - vb))
    width = n - (va - vb)
    bs = b.coeffs
    inv = 1 / bs[0]
    out = []
    acoef = a.coeffs
    for k in range(width):
        s = acoef[k] if k < len(acoef) else _ZERO
        for j in range(1, min(k, len(bs) - 1) + 1):
            s -= bs[j] * out[k - j]
        out.append(s * inv)
    return QSeries._raw(out, va - vb, n)


def series_qderive(a):
    """q d/dq, extended to z-polynomial coefficients via d(z^m) = m u z^(m-1)."""
    if isinstance(a, ZUSeries):
        return a.qderive()
    out = [c * (a.valuation + i) for i, c in enumerate(a.coeffs)]
    return QSeries._raw(out, a.valuation, a.truncation)


# ---------------------------------------------------------------------------
# z,u extension


class ZUPoly:
    """Polynomial in z and u with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = as_fraction(c)
                if c:
                    i, j = k
                    if i < 0 or j < 0:
                        raise ValueError("negative degree in ZUPoly")
                    clean[(i, j)] = c
        self.terms = clean

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    def is_zero(self):
        return not self.terms

    def is_rational(self):
        return not self.terms or set(self.terms) == {(0, 0)}

    def rational(self):
        if not self.is_rational():
            raise ValueError("%r is not a rational constant" % (self,))
        return self.terms.get((0, 0), _ZERO)

    def zdegree(self):
        return max((i for i, _ in self.terms), default=-1)

    def udegree(self):
        return max((j for _, j in self.terms), default=-1)

    def __add__(self, other):
        other = _as_zupoly(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, _ZERO) + c
        return ZUPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ZUPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_zupoly(other))

    def __rsub__(self, other):
        return _as_zupoly(other) - self

    def __mul__(self, other):
        other = _as_zupoly(other)
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, _ZERO) + c1 * c2
        return ZUPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ZUPoly.constant(other)
        if isinstance(other, ZUPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_json(self):
        return [{"z": i, "u": j, "value": format_rational(c)} for (i, j), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, items):
        return cls({(it["z"], it["u"]): parse_rational(it["value"]) for it in items})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "".join(s if e == 1 else "%s^%d" % (s, e) for s, e in (("z", i), ("u", j)) if e)
            parts.append(format_rational(c) + ("*" + mono if mono else ""))
        return " + ".join(parts)


def _as_zupoly(x):
    if isinstance(x, ZUPoly):
        return x
    return ZUPoly.constant(as_fraction(x))


class ZUSeries:
    """Sum of z^i u^j * S_ij(q) over finitely many (i, j), sharing one truncation."""

    __slots__ = ("parts", "truncation")

    def __init__(self, parts, truncation):
        clean = {}
        for k, s in parts.items():
            if not isinstance(s, QSeries):
                raise TypeError("ZUSeries parts must be QSeries")
            if s.truncation < truncation:
                raise InsufficientTruncation("part %r known only below q^%d" % (k, s.truncation))
            s = s.truncate(truncation)
            if not s.is_zero():
                clean[k] = s
        self.parts = clean
        self.truncation = truncation

    @classmethod
    def lift(cls, x, truncation=None):
        """Embed a QSeries (or pass through a ZUSeries)."""
        if isinstance(x, ZUSeries):
            return x
        if isinstance(x, QSeries):
            return cls({(0, 0): x}, x.truncation)
        raise TypeError("cannot lift %r to a ZUSeries" % (x,))

    @classmethod
    def zero(cls, truncation):
        return cls({}, truncation)

    @classmethod
    def monomial(cls, zdeg, udeg, series):
        return cls({(zdeg, udeg): series}, series.truncation)

    @property
    def valuation(self):
        return min((s.valuation for s in self.parts.values()), default=self.truncation)

    def is_zero(self):
        return not self.parts

    def zdegree(self):
        return max((i for i, _ in self.parts), default=-1)

    def udegree(self):
        return max((j for _, j in self.parts), default=-1)

    def part(self, i, j):
        return self.parts.get((i, j), QSeries.zero(self.truncation))

    def z_component(self, i):
        """The coefficient of z^i as a series in q with u-polynomial coefficients."""
        return ZUSeries({(0, j): s for (k, j), s in self.parts.items() if k == i}, self.truncation)

    def coefficient(self, n):
        if n >= self.truncation:
            raise InsufficientTruncation("coefficient of q^%d beyond truncation %d" % (n, self.truncation))
        return ZUPoly({k: s[n] for k, s in self.parts.items()})

    __getitem__ = coefficient

    def is_qseries(self):
        return set(self.parts) <= {(0, 0)}

    def to_qseries(self):
        if not self.is_qseries():
            raise ValueError("series carries z or u")
        return self.part(0, 0)

    def leading_coefficient(self):
        if self.is_zero():
            raise InsufficientTruncation("series vanishes to its truncation order %d" % self.truncation)
        return self.coefficient(self.valuation)

    def truncate(self, n):
        n = min(n, self.truncation)
        return ZUSeries({k: s.truncate(n) for k, s in self.parts.items()}, n)

    # arithmetic

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, self.truncation)
        other = ZUSeries.lift(other)
        n = min(self.truncation, other.truncation)
        out = {}
        for src in (self, other):
            for k, s in src.parts.items():
                out[k] = series_add(out[k], s) if k in out else s.truncate(n)
        return ZUSeries(out, n)

    __radd__ = __add__

    def __neg__(self):
        return ZUSeries({k: -s for k, s in self.parts.items()}, self.truncation)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, self.truncation)
        return self + (-ZUSeries.lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if isinstance(c, ZUPoly):
            out = ZUSeries.zero(self.truncation)
            for (i, j), x in c.terms.items():
                out = out + ZUSeries({(a + i, b + j): s.scale(x) for (a, b), s in self.parts.items()},
                                     self.truncation)
            return out
        c = as_fraction(c)
        return ZUSeries({k: s.scale(c) for k, s in self.parts.items()}, self.truncation)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ZUPoly)):
            return self.scale(other)
        if not isinstance(other, (QSeries, ZUSeries)):
            return NotImplemented
        other = ZUSeries.lift(other)
        n = min(self.truncation + other.valuation, other.truncation + self.valuation)
        out = {}
        for (i1, j1), s1 in self.parts.items():
            for (i2, j2), s2 in other.parts.items():
                k = (i1 + i2, j1 + j2)
                p = series_mul(s1, s2).truncate(n)
                out[k] = series_add(out[k], p) if k in out else p
        return ZUSeries(out, n)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ZUPoly)):
            return self.scale(other)
        if isinstance(other, QSeries):
            return self.__mul__(other)
        return NotImplemented

    def divide(self, other):
        """Exact quotient by a series whose leading coefficient is a nonzero rational."""
        other = ZUSeries.lift(other)
        if other.is_zero():
            raise ZeroDivisionError("divisor vanishes to its truncation order %d" % other.truncation)
        lead = other.leading_coefficient()
        if not lead.is_rational():
            raise NonUnitLeading("leading coefficient %r of the divisor is not a rational unit" % (lead,))
        if other.is_qseries():
            b = other.to_qseries()
            parts = {k: series_div(s, b) for k, s in self.parts.items()}
            va, vb = self.valuation, b.valuation
            n = va - vb + min(self.truncation - va, b.truncation - vb)
            if self.is_zero() and n < 0:
                raise InsufficientTruncation("dividend not known far enough")
            return ZUSeries(parts, max(n, 0))
        va, vb = self.valuation, other.valuation
        n = va - vb + min(self.truncation - va, other.truncation - vb)
        if self.is_zero():
            return ZUSeries.zero(n)
        if va < vb:
            raise NonHolomorphic("quotient has valuation %d" % (va - vb))
        inv = 1 / lead.rational()
        bcoef = [other.coefficient(vb + j) for j in range(n - (va - vb))]
        out = []
        for k in range(n - (va - vb)):
            s = self.coefficient(va + k) if va + k < self.truncation else ZUPoly()
            for j in range(1, k + 1):
                if not bcoef[j].is_zero():
                    s = s - bcoef[j] * out[k - j]
            out.append(s * inv)
        parts = {}
        for k, c in enumerate(out):
            for key, x in c.terms.items():
                parts.setdefault(key, {})[va - vb + k] = x
        return ZUSeries({key: QSeries.from_dict(d, n) for key, d in parts.items()}, n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_fraction(other))
        return self.divide(other)

    def qderive(self):
        out = {}
        for (i, j), s in self.parts.items():
            d = series_qderive(s)
            out[(i, j)] = series_add(out[(i, j)], d) if (i, j) in out else d
            if i:
                k = (i - 1, j + 1)
                t = s.scale(i)
                out[k] = series_add(out[k], t) if k in out else t
        return ZUSeries(out, self.truncation)

    def shift_z(self, t=1):
        """Substitute z -> z + t in the polynomial part."""
        out = {}
        for (i, j), s in self.parts.items():
            for k in range(i + 1):
                c = comb(i, k) * t ** (i - k)
                if c:
                    p = s.scale(c)
                    out[(k, j)] = series_add(out[(k, j)], p) if (k, j) in out else p
        return ZUSeries(out, self.truncation)

    def substitute_u(self, value):
        """Replace u by a rational number (used only for diagnostics)."""
        out = {}
        value = as_fraction(value)
        for (i, j), s in self.parts.items():
            p = s.scale(value ** j)
            out[(i, 0)] = series_add(out[(i, 0)], p) if (i, 0) in out else p
        return ZUSeries(out, self.truncation)

    # comparison

    def __eq__(self, other):
        if isinstance(other, QSeries):
            other = ZUSeries.lift(other)
        if isinstance(other, ZUSeries):
            return self.truncation == other.truncation and self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash((self.truncation, frozenset(self.parts.items())))

    def agrees_with(self, other, upto=None):
        other = ZUSeries.lift(other)
        n = min(self.truncation, other.truncation)
        if upto is not None:
            if upto > n:
                raise InsufficientTruncation("cannot compare to q^%d, known only below q^%d" % (upto, n))
            n = upto
        return all(self.coefficient(k) == other.coefficient(k) for k in range(n))

    # serialization

    def to_json(self):
        v = self.valuation
        return {
            "valuation": v,
            "truncation": self.truncation,
            "coefficients": [self.coefficient(n).to_json() for n in range(v, self.truncation)],
        }

    @classmethod
    def from_json(cls, obj):
        v = obj["valuation"]
        n = obj["truncation"]
        rows = obj["coefficients"]
        if len(rows) != n - v:
            raise ValueError("expected %d coefficients, got %d" % (n - v, len(rows)))
        parts = {}
        for k, row in enumerate(rows):
            for key, x in ZUPoly.from_json(row).terms.items():
                parts.setdefault(key, {})[v + k] = x
        out = cls({key: QSeries.from_dict(d, n) for key, d in parts.items()}, n)
        if out.valuation != v:
            raise ValueError("leading stored coefficient must be nonzero")
        return out

    def __repr__(self):
        if not self.parts:
            return "ZUSeries(0 + O(q^%d))" % self.truncation
        items = []
        for (i, j), s in sorted(self.parts.items()):
            mono = "".join(x if e == 1 else "%s^%d" % (x, e) for x, e in (("z", i), ("u", j)) if e)
            items.append("%s*(%s)" % (mono or "1", s.to_text(terms=4)))
        return "ZUSeries(" + " + ".join(items) + ")"


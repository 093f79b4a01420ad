"""Modular differential operators, indicial polynomials and Frobenius solutions.

An operator of depth bound r acts on forms of weight w by

    K f = B_m d^(r+1) f + B_(m+2) d^r f + ... + B_(m+2r+2) f,

where d^j is the j-fold Serre derivative starting at weight parameter w - r
(d^(j+1) = d_(w-r+2j) d^j).  Substituting f = q^e gives
K q^e = q^e sum_n c_n(e) q^n with polynomials c_n in e; c_0 is the indicial
polynomial.  Solutions with logarithmic behaviour are represented with the
formal symbol z (and u = 1/(2 pi i)), using K(z^m S) = sum_j binom(m, j)
z^(m-j) u^j K^(j) S where K^(j) is the j-th derivative with respect to e.
"""

from fractions import Fraction
from math import comb, lcm

from . import linalg
from .errors import NotARoot, Obstruction, Resonance, SchemaError, UnsupportedExponents
from .forms import ModularForm, e2_series
from .quasi import QuasiForm, iterated_serre
from .series import QSeries, ZUSeries, as_fraction, format_rational, parse_rational

__all__ = [
    "MDEOperator",
    "Polynomial",
    "IndicialPolynomial",
    "FundamentalSystem",
    "apply_operator",
    "indicial_polynomial",
    "characteristic_series",
    "frobenius_leading",
    "frobenius_fundamental",
    "wronskian",
]


# ---------------------------------------------------------------------------
# univariate polynomials over Q (coefficients listed from the constant term up)


def _trim(cs):
    cs = list(cs)
    while cs and not cs[-1]:
        cs.pop()
    return cs


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pscale(a, c):
    return _trim([x * c for x in a]) if c else []


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _peval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _pderiv(a):
    return _trim([i * a[i] for i in range(1, len(a))])


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(_trim(as_fraction(c) for c in coeffs))

    @classmethod
    def from_roots(cls, roots):
        out = [Fraction(1)]
        for r in roots:
            out = _pmul(out, [-as_fraction(r), Fraction(1)])
        return cls(out)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        return _peval(self.coeffs, as_fraction(x))

    def derivative(self):
        return Polynomial(_pderiv(self.coeffs))

    def __add__(self, other):
        return Polynomial(_padd(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return Polynomial(_padd(self.coeffs, _pscale(other.coeffs, -1)))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(_pmul(self.coeffs, other.coeffs))
        return Polynomial(_pscale(self.coeffs, as_fraction(other)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def integer_roots(self):
        """Integer roots with multiplicity, in decreasing order."""
        if not self.coeffs:
            raise ValueError("the zero polynomial has every number as a root")
        p = self
        # clear denominators; an integer root divides the lowest nonzero coefficient
        out = []
        k = 0
        while k < len(p.coeffs) and not p.coeffs[k]:
            k += 1
        out.extend([0] * k)
        rest = Polynomial(p.coeffs[k:])
        if rest.degree > 0:
            c0 = rest.coeffs[0]
            den = 1
            for c in rest.coeffs:
                den = lcm(den, c.denominator)
            n0 = abs(int(c0 * den))
            cands = set()
            d = 1
            while d * d <= n0:
                if n0 % d == 0:
                    cands.update((d, -d, n0 // d, -(n0 // d)))
                d += 1
            for x in sorted(cands):
                while rest.degree > 0 and rest(x) == 0:
                    out.append(x)
                    rest = Polynomial(_deflate(rest.coeffs, x))
        return sorted(out, reverse=True)

    def to_json(self):
        return [format_rational(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c:
                terms.append("%s%s" % (format_rational(c), "" if i == 0 else ("*x" if i == 1 else "*x^%d" % i)))
        return "Polynomial(%s)" % (" + ".join(terms) or "0")


def _deflate(cs, x):
    """Divide by (t - x), assuming x is a root."""
    n = len(cs) - 1
    out = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * x + cs[i]
        out[i - 1] = acc
    return out


class IndicialPolynomial(Polynomial):
    """p_B(x) = sum_l B_(m+2l)(i infinity) q_(r+1-l)(x, w)."""

    def exponents(self):
        roots = self.integer_roots()
        if len(roots) != self.degree:
            raise UnsupportedExponents("indicial polynomial %r has non-integer roots" % (self,))
        return tuple(roots)


# ---------------------------------------------------------------------------


class MDEOperator:
    """K_B = sum_l B_(m+2l) d^(r+1-l), d the Serre derivative from weight w - r."""

    __slots__ = ("weight", "depth_bound", "coefficients", "base_weight")

    def __init__(self, weight, depth_bound, coefficients, base_weight=None):
        r = depth_bound
        coefficients = list(coefficients)
        if len(coefficients) != r + 2:
            raise ValueError("an operator of order %d needs %d coefficients" % (r + 1, r + 2))
        if base_weight is None:
            base_weight = coefficients[0].weight
        for l, B in enumerate(coefficients):
            if B.weight != base_weight + 2 * l and not B.is_zero():
                raise ValueError("coefficient %d has weight %d, expected %d" % (l, B.weight, base_weight + 2 * l))
            if B.monomials is None:
                raise ValueError("operator coefficients need an E4/E6 representation")
        self.weight = weight
        self.depth_bound = r
        self.coefficients = tuple(
            B if B.weight == base_weight + 2 * l else ModularForm.zero(base_weight + 2 * l)
            for l, B in enumerate(coefficients))
        self.base_weight = base_weight

    @classmethod
    def normalized(cls, weight, depth_bound, lower):
        """d^(r+1) + sum_(l>=1) B_(2l) d^(r+1-l) with B_(2l) given by ``lower`` (weight -> form)."""
        coeffs = [ModularForm.constant(1)]
        for l in range(1, depth_bound + 2):
            coeffs.append(lower.get(2 * l, ModularForm.zero(2 * l)))
        return cls(weight, depth_bound, coeffs, 0)

    @property
    def order(self):
        return self.depth_bound + 1

    @property
    def weight_parameter(self):
        return self.weight - self.depth_bound

    def is_normalized(self):
        return self.base_weight == 0 and self.coefficients[0].value_at_infinity() == 1

    def apply(self, f):
        return apply_operator(self, f)

    def __eq__(self, other):
        if not isinstance(other, MDEOperator):
            return NotImplemented
        return (self.weight, self.depth_bound, self.base_weight, self.coefficients) == (
            other.weight, other.depth_bound, other.base_weight, other.coefficients)

    def __hash__(self):
        return hash((self.weight, self.depth_bound, self.base_weight, self.coefficients))

    def to_json(self):
        return {
            "weight": self.weight,
            "depth_bound": self.depth_bound,
            "coeffs": [{"weight": B.weight,
                        "monomials": {"%d,%d" % k: format_rational(c) for k, c in sorted(B.monomials.items(), reverse=True)}}
                       for B in self.coefficients],
            "normalized": self.is_normalized(),
        }

    @classmethod
    def from_json(cls, obj):
        try:
            w = obj["weight"]
            r = obj["depth_bound"]
            raw = obj["coeffs"]
        except (KeyError, TypeError) as exc:
            raise SchemaError("operator description lacks field %s" % exc, field=str(exc))
        coeffs = []
        for i, c in enumerate(raw):
            try:
                mon = {}
                for k, v in c["monomials"].items():
                    a, b = k.split(",")
                    mon[(int(a), int(b))] = parse_rational(v)
                coeffs.append(ModularForm(c["weight"], mon))
            except (KeyError, ValueError, TypeError) as exc:
                raise SchemaError("bad coefficient %d: %s" % (i, exc), field="coeffs[%d]" % i)
        try:
            K = cls(w, r, coeffs)
        except ValueError as exc:
            raise SchemaError(str(exc), field="coeffs")
        if obj.get("normalized") and K.coefficients[0].value_at_infinity() != 1:
            raise SchemaError("normalized operator needs a leading coefficient equal to 1 at infinity",
                              field="coeffs[0]")
        return K

    def __repr__(self):
        return "MDEOperator(weight=%d, r=%d, B=%r)" % (self.weight, self.depth_bound, list(self.coefficients))


def apply_operator(K, f):
    """sum_l B_(m+2l) d^(r+1-l) f for QuasiForm, QSeries or ZUSeries."""
    r = K.depth_bound
    k0 = K.weight_parameter
    derivs = [f]
    for j in range(r + 1):
        derivs.append(iterated_serre(derivs[-1], k0 + 2 * j, 1))
    if isinstance(f, QuasiForm):
        out = QuasiForm.zero(f.weight + K.base_weight + 2 * r + 2)
        for l, B in enumerate(K.coefficients):
            if not B.is_zero():
                out = out + QuasiForm.from_modular(B) * derivs[r + 1 - l]
        return out
    n = f.truncation
    out = None
    for l, B in enumerate(K.coefficients):
        if B.is_zero():
            continue
        term = derivs[r + 1 - l] * B.expand(n)
        out = term if out is None else out + term
    if out is None:
        return f * 0
    return out


def _q_poly(x_shift_list):
    out = [Fraction(1)]
    for s in x_shift_list:
        out = _pmul(out, [-s, Fraction(1)])
    return out


def indicial_polynomial(K):
    """p_B(x) = sum_l B_(m+2l)(i inf) prod_(i<r+1-l) (x - (w - r + 2i)/12)."""
    r = K.depth_bound
    k0 = K.weight_parameter
    out = []
    for l, B in enumerate(K.coefficients):
        c = B.value_at_infinity()
        if c:
            shifts = [Fraction(k0 + 2 * i, 12) for i in range(r + 1 - l)]
            out = _padd(out, _pscale(_q_poly(shifts), c))
    return IndicialPolynomial(out)


def characteristic_series(K, order):
    """Polynomials c_0(e), ..., c_(order-1)(e) with K q^e = q^e sum c_n(e) q^n."""
    r = K.depth_bound
    k0 = K.weight_parameter
    e2 = e2_series(order)
    # series with polynomial-in-e coefficients, list indexed by q-power
    cur = [[Fraction(1)]] + [[] for _ in range(order - 1)]
    derivs = [cur]
    for j in range(r + 1):
        k = k0 + 2 * j
        prev = derivs[-1]
        nxt = []
        for n in range(order):
            # (e + n) G_n - k/12 sum E2_i G_(n-i)
            acc = _pmul([Fraction(n), Fraction(1)], prev[n])
            if k:
                conv = []
                for i in range(n + 1):
                    if e2[i] and prev[n - i]:
                        conv = _padd(conv, _pscale(prev[n - i], e2[i]))
                acc = _padd(acc, _pscale(conv, Fraction(-k, 12)))
            nxt.append(acc)
        derivs.append(nxt)
    out = [[] for _ in range(order)]
    for l, B in enumerate(K.coefficients):
        if B.is_zero():
            continue
        b = B.expand(order)
        d = derivs[r + 1 - l]
        for n in range(order):
            acc = out[n]
            for i in range(n + 1):
                if b[i] and d[n - i]:
                    acc = _padd(acc, _pscale(d[n - i], b[i]))
            out[n] = acc
    return [tuple(c) for c in out]


def frobenius_leading(K, lam0, order):
    """Normalized solution q^lam0 (1 + ...) known to O(q^(lam0+order))."""
    p = indicial_polynomial(K)
    if p(lam0) != 0:
        raise NotARoot("%s is not a root of the indicial polynomial" % lam0)
    lam0 = int(lam0)
    for root in p.integer_roots():
        if root > lam0:
            raise Resonance("indicial root %d exceeds %d by an integer; use the fundamental system"
                            % (root, lam0), root=root)
    cs = characteristic_series(K, order)
    a = [Fraction(1)]
    for n in range(1, order):
        s = Fraction(0)
        for j in range(1, n + 1):
            if cs[j]:
                s += _peval(cs[j], lam0 + n - j) * a[n - j]
        a.append(-s / p(lam0 + n))
    return QSeries(a, lam0, lam0 + order)


# ---------------------------------------------------------------------------
# fundamental systems


class FundamentalSystem:
    """Solutions f_0, ..., f_r with z-degree of f_l at most l."""

    __slots__ = ("solutions", "exponents", "degrees", "valuations")

    def __init__(self, solutions, exponents, degrees):
        self.solutions = list(solutions)
        self.exponents = tuple(exponents)
        self.degrees = tuple(degrees)
        self.valuations = tuple(s.valuation for s in self.solutions)

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]

    def to_json(self):
        return {
            "exponents": list(self.exponents),
            "z_degrees": list(self.degrees),
            "solutions": [s.to_json() for s in self.solutions],
        }


def _vadd(acc, vec, c):
    if not c:
        return
    for k, x in vec.items():
        v = acc.get(k, Fraction(0)) + x * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def frobenius_fundamental(K, order):
    """r+1 independent solutions, built from the largest exponent downward.

    A solution of z-degree d is sum_m z^m u^(d-m) t_m(q).  Its coefficients
    obey, for every p and N,

        sum_j binom(p+j, j) sum_e t_(p+j)(e) c^(j)_(N-e)(e) = 0,

    with c^(j) the j-th derivative in e.  At each indicial root the leading
    unknown is free and the equation becomes a constraint on the others.
    All constraints are solved at once for degree r; a solution of lower
    degree d is one with t_m = 0 for m > d.
    """
    r = K.depth_bound
    p = indicial_polynomial(K)
    roots = p.integer_roots()
    if len(roots) != p.degree or p.degree != r + 1:
        raise UnsupportedExponents("indicial roots are not all integers: %r" % (p,))
    if min(roots) < 0:
        raise UnsupportedExponents("negative indicial root %d" % min(roots))
    emax = max(roots)
    total = emax + order
    cs = characteristic_series(K, total)
    # derivatives in e of each c_n
    dcs = []
    for c in cs:
        ds = [list(c)]
        for _ in range(r + 1):
            ds.append(_pderiv(ds[-1]))
        dcs.append(ds)
    resonant = sorted(set(roots))

    def weight(j, e, n):
        return _peval(dcs[n][j], e) if dcs[n][j] else Fraction(0)

    # symbolic phase up to the largest root
    params = []
    index = {}
    for e in resonant:
        for m in range(r + 1):
            index[(m, e)] = len(params)
            params.append((m, e))
    t = [[None] * (emax + 1) for _ in range(r + 1)]
    constraints = []
    for N in range(emax + 1):
        for pp in range(r, -1, -1):
            rest = {}
            for j in range(r - pp + 1):
                b = comb(pp + j, j)
                for e in range(N + 1):
                    if j == 0 and e == N:
                        continue
                    c = weight(j, e, N - e)
                    if c:
                        _vadd(rest, t[pp + j][e], b * c)
            lead = p(N)
            if lead:
                vec = {}
                _vadd(vec, rest, -1 / lead)
                t[pp][N] = vec
            else:
                t[pp][N] = {index[(pp, N)]: Fraction(1)}
                if rest:
                    constraints.append(rest)
    ncols = len(params)
    rows = [[row.get(i, Fraction(0)) for i in range(ncols)] for row in constraints]
    col_order = sorted(range(ncols), key=lambda i: (-params[i][1], params[i][0]))

    chosen = []
    degrees = []
    for _ in range(r + 1):
        found = None
        for d in range(r + 1):
            extra = [[Fraction(1) if (i == k) else Fraction(0) for i in range(ncols)]
                     for k in range(ncols) if params[k][0] > d]
            space = linalg.nullspace(rows + extra, ncols)
            if not space:
                continue
            if chosen:
                red, piv = linalg.rref(chosen, ncols, col_order)
                reduced = []
                for v in space:
                    v = list(v)
                    for row, pc in zip(red, piv):
                        if v[pc]:
                            f = v[pc]
                            v = [x - f * y for x, y in zip(v, row)]
                    if any(v):
                        reduced.append(v)
                space = reduced
            if space:
                cand, _ = linalg.rref(space, ncols, col_order)
                found = (cand[0], d)
                break
        if found is None:
            raise Obstruction("only %d independent solutions of polynomial type in z" % len(chosen))
        chosen.append(found[0])
        degrees.append(found[1])

    solutions = []
    for vec, d in zip(chosen, degrees):
        coeffs = _frobenius_numeric(vec, params, index, r, total, p, dcs, d)
        parts = {}
        for m in range(d + 1):
            s = QSeries(coeffs[m], 0, total)
            if not s.is_zero():
                parts[(m, d - m)] = s
        sol = ZUSeries(parts, total)
        top = sol.part(d, 0)
        sol = sol.scale(1 / top.leading_coefficient())
        solutions.append(sol)
    return FundamentalSystem(solutions, roots, degrees)


def _frobenius_numeric(vec, params, index, r, total, p, dcs, d):
    """Coefficients t_m(e), e < total, for fixed values of the free parameters."""
    t = [[Fraction(0)] * total for _ in range(r + 1)]
    for N in range(total):
        for pp in range(d, -1, -1):
            rest = Fraction(0)
            for j in range(d - pp + 1):
                b = comb(pp + j, j)
                for e in range(N + 1):
                    if j == 0 and e == N:
                        continue
                    x = t[pp + j][e]
                    if x:
                        poly = dcs[N - e][j]
                        if poly:
                            rest += b * _peval(poly, e) * x
            lead = p(N)
            if lead:
                t[pp][N] = -rest / lead
            else:
                if rest:
                    raise Obstruction("constraint at q^%d, z^%d not met" % (N, pp))
                t[pp][N] = vec[index[(pp, N)]]
    return t


# ---------------------------------------------------------------------------


def wronskian(system, w, r):
    """det of the matrix with rows d^i F, i = 0..r, d the Serre derivative from w - r."""
    funcs = [ZUSeries.lift(f) for f in system]
    if len(funcs) != r + 1:
        raise ValueError("a Wronskian of depth %d needs %d functions" % (r, r + 1))
    rows = [funcs]
    for i in range(r):
        k = w - r + 2 * i
        rows.append([iterated_serre(f, k, 1) for f in rows[-1]])
    memo = {}

    def det(i, cols):
        if i == len(rows):
            n = min(f.truncation for f in funcs)
            return ZUSeries.lift(QSeries.one(n))
        key = (i, cols)
        if key in memo:
            return memo[key]
        acc = None
        for pos, c in enumerate(cols):
            minor = det(i + 1, cols[:pos] + cols[pos + 1:])
            term = rows[i][c] * minor
            if pos % 2:
                term = -term
            acc = term if acc is None else acc + term
        memo[key] = acc
        return acc

    return det(0, tuple(range(r + 1)))


def solution_residuals(K, system):
    """K applied to each member of a fundamental system."""
    return [apply_operator(K, f) for f in system]


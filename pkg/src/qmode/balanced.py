"""Balanced quasimodular forms and the differential equations they satisfy.

A form f of weight w and depth <= r is balanced with exponents
lambda_0 >= ... >= lambda_r when each g_l (see ``quasi.g_components``) vanishes
to order lambda_l and the exponents add up to dim QM_w^r - 1.  Such forms
come out of the kernel of the linear map Phi that reads off the first
lambda_l coefficients of every g_l.
"""

from fractions import Fraction
from itertools import combinations
from math import prod

from . import linalg
from .errors import InvalidExponents, OutOfRange, UnsupportedExponents
from .forms import ModularForm, dim_modular, dim_qm_direct
from .mde import MDEOperator, Polynomial, _q_poly
from .quasi import QuasiForm, g_components, qm_basis, iterated_serre

__all__ = [
    "ExponentTuple",
    "BalancedReport",
    "ResidueEquationSpec",
    "admissible_tuples",
    "mde_from_exponents",
    "balanced_form",
    "balanced_report",
    "delta_power_operator",
    "delta_power_polynomials",
    "residue_equation",
    "residue_spec",
    "lift4",
]


def _esym(values, k):
    return sum((prod(c) for c in combinations(values, k)), Fraction(0))


class ExponentTuple:
    """lambda_0 >= ... >= lambda_r with lambda_l < dim QM_(w-2l)^(r-l) and sum dim QM_w^r - 1."""

    __slots__ = ("weight", "depth", "lambdas")

    def __init__(self, weight, depth, lambdas, check=True):
        lambdas = tuple(int(x) for x in lambdas)
        self.weight = weight
        self.depth = depth
        self.lambdas = lambdas
        if check:
            self.validate()

    def validate(self):
        w, r, lam = self.weight, self.depth, self.lambdas
        if w % 2:
            raise InvalidExponents("weight %d is odd" % w)
        if len(lam) != r + 1:
            raise InvalidExponents("depth %d needs %d exponents, got %d" % (r, r + 1, len(lam)))
        if any(x < 0 for x in lam):
            raise InvalidExponents("exponents must be non-negative: %r" % (lam,))
        if any(lam[i] < lam[i + 1] for i in range(r)):
            raise InvalidExponents("exponents must be non-increasing: %r" % (lam,))
        for l, x in enumerate(lam):
            bound = dim_qm_direct(w - 2 * l, r - l)
            if x >= bound:
                raise InvalidExponents("lambda_%d = %d is not below dim QM_%d^%d = %d"
                                       % (l, x, w - 2 * l, r - l, bound), index=l)
        total = dim_qm_direct(w, r) - 1
        if sum(lam) != total:
            raise InvalidExponents("exponents add up to %d, expected %d" % (sum(lam), total))

    def __iter__(self):
        return iter(self.lambdas)

    def __len__(self):
        return len(self.lambdas)

    def __getitem__(self, i):
        return self.lambdas[i]

    def __eq__(self, other):
        if isinstance(other, ExponentTuple):
            return (self.weight, self.depth, self.lambdas) == (other.weight, other.depth, other.lambdas)
        return NotImplemented

    def __hash__(self):
        return hash((self.weight, self.depth, self.lambdas))

    def sigma(self, k):
        """k-th elementary symmetric function of the exponents."""
        return _esym(self.lambdas, k)

    def is_degenerate(self):
        return len(set(self.lambdas)) == 1

    def to_json(self):
        return {"weight": self.weight, "depth": self.depth, "exponents": list(self.lambdas)}

    def __repr__(self):
        return "ExponentTuple(w=%d, r=%d, %r)" % (self.weight, self.depth, self.lambdas)


def admissible_tuples(w, r):
    """All exponent tuples for weight w and depth r, lexicographically decreasing."""
    total = dim_qm_direct(w, r) - 1
    bounds = [dim_qm_direct(w - 2 * l, r - l) - 1 for l in range(r + 1)]
    out = []

    def rec(l, prefix, remaining, cap):
        if l == r + 1:
            if remaining == 0:
                out.append(ExponentTuple(w, r, prefix, check=False))
            return
        hi = min(cap, bounds[l], remaining)
        for x in range(hi, -1, -1):
            # the rest can contribute at most x each
            if x * (r - l) < remaining - x:
                break
            rec(l + 1, prefix + (x,), remaining - x, x)

    if total >= 0:
        rec(0, (), total, total)
    return out


# ---------------------------------------------------------------------------
# the equation with prescribed exponents

_EISENSTEIN_MONOMIAL = {4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1)}


def mde_from_exponents(t):
    """d^(r+1) + a_4 E_4 d^(r-1) + ... + a_(2r+2) E_(2r+2) with indicial roots t."""
    w, r = t.weight, t.depth
    if r >= 5:
        raise UnsupportedExponents("no normalized equation of this shape exists for depth %d" % r)
    if (w * (r + 1)) % 12:
        raise InvalidExponents("w(r+1) = %d is not divisible by 12" % (w * (r + 1)))
    k0 = w - r
    target = list(Polynomial.from_roots(t.lambdas).coeffs)
    base = _q_poly([Fraction(k0 + 2 * i, 12) for i in range(r + 1)])
    # unknown a_(2l), l = 2..r+1, multiplies q_(r+1-l)
    cols = []
    for l in range(2, r + 2):
        cols.append(_q_poly([Fraction(k0 + 2 * i, 12) for i in range(r + 1 - l)]))
    rows = []
    rhs = []
    for deg in range(r + 2):
        rows.append([c[deg] if deg < len(c) else Fraction(0) for c in cols])
        b = base[deg] if deg < len(base) else Fraction(0)
        rhs.append((target[deg] if deg < len(target) else Fraction(0)) - b)
    if cols:
        a = linalg.solve(rows, rhs)
    else:
        a = [] if not any(rhs) else None
    if a is None:
        raise InvalidExponents("no operator of this shape has indicial roots %r" % (t.lambdas,))
    lower = {}
    for l, x in zip(range(2, r + 2), a):
        lower[2 * l] = ModularForm(2 * l, {_EISENSTEIN_MONOMIAL[2 * l]: x})
    return MDEOperator.normalized(w, r, lower)


# ---------------------------------------------------------------------------
# the kernel construction


class BalancedReport:
    __slots__ = ("exponents", "form", "requested", "observed", "kernel_dimension", "kernel_basis")

    def __init__(self, exponents, form, observed, kernel_basis):
        self.exponents = exponents
        self.form = form
        self.requested = exponents.lambdas
        self.observed = observed
        self.kernel_dimension = len(kernel_basis)
        self.kernel_basis = kernel_basis

    def to_json(self):
        return {
            "exponents": self.exponents.to_json(),
            "requested": list(self.requested),
            "observed": [x if x is not None else "zero" for x in self.observed],
            "kernel_dimension": self.kernel_dimension,
        }


def _phi_matrix(t, basis):
    r = t.depth
    columns = []
    for key in basis:
        f = QuasiForm(t.weight, {key: 1})
        G = g_components(f, r).forms
        col = []
        for l, lam in enumerate(t.lambdas):
            if lam == 0:
                continue
            if l < len(G):
                s = G[l].expand(lam)
                col.extend(s[n] for n in range(lam))
            else:
                col.extend([Fraction(0)] * lam)
        columns.append(col)
    nrows = sum(t.lambdas)
    return [[columns[j][i] for j in range(len(basis))] for i in range(nrows)]


def _kernel(t):
    basis = qm_basis(t.weight, t.depth)
    rows = _phi_matrix(t, basis)
    space = linalg.nullspace(rows, len(basis))
    if not space:
        raise RuntimeError("kernel of Phi is zero for %r" % (t,))
    red, _ = linalg.rref(space, len(basis))
    return basis, red


def _observed_orders(form, r, order):
    out = []
    for G in g_components(form, r).forms:
        s = G.expand(order)
        out.append(None if s.is_zero() else s.valuation)
    out.extend([None] * (r + 1 - len(out)))
    return tuple(out)


def balanced_report(t, order=None):
    if order is None:
        order = t.lambdas[0] + 1
    if order <= t.lambdas[0]:
        raise OutOfRange("order %d must exceed lambda_0 = %d" % (order, t.lambdas[0]))
    basis, red = _kernel(t)
    vec = red[0]
    form = QuasiForm(t.weight, {k: c for k, c in zip(basis, vec)})
    form = form.scale(1 / form.leading_coefficient(max(order, t.lambdas[0] + 1)))
    kernel_forms = [QuasiForm(t.weight, {k: c for k, c in zip(basis, v)}) for v in red]
    return BalancedReport(t, form, _observed_orders(form, t.depth, order), kernel_forms)


def balanced_form(t, order=None):
    """The canonical kernel element of Phi, scaled to leading coefficient 1."""
    return balanced_report(t, order).form


# ---------------------------------------------------------------------------
# the degenerate case lambda_0 = ... = lambda_r


def delta_power_polynomials(r):
    """Q_0, ..., Q_(r+1) with d^k Delta^(w/12) = Delta^(w/12) Q_k."""
    Q = [QuasiForm.constant(1)]
    e2 = QuasiForm.e2()
    for k in range(1, r + 2):
        prev = Q[-1]
        Q.append((e2 * prev).scale(Fraction(r + 1 - k, 12)) + prev.serre(k - 1))
    return Q


def delta_power_operator(w, r):
    """Normalized operator of depth bound r annihilating Delta^(w/12)."""
    if w % 12:
        raise OutOfRange("weight %d is not a multiple of 12" % w)
    Q = delta_power_polynomials(r)
    unknowns = []
    for j in range(2, r + 2):
        for m in _modular_monomials(2 * j):
            unknowns.append((j, m))
    target = Q[r + 1]
    keys = set(target.poly)
    products = []
    for j, m in unknowns:
        p = QuasiForm(2 * j, {(0,) + m: 1}) * Q[r + 1 - j]
        products.append(p)
        keys.update(p.poly)
    keys = sorted(keys)
    rows = [[p.poly.get(k, Fraction(0)) for p in products] for k in keys]
    rhs = [-target.poly.get(k, Fraction(0)) for k in keys]
    x = linalg.solve(rows, rhs) if unknowns else ([] if not any(rhs) else None)
    if x is None:
        raise RuntimeError("no modular coefficients cancel Q_%d" % (r + 1))
    lower = {}
    for (j, m), c in zip(unknowns, x):
        form = lower.get(2 * j, ModularForm.zero(2 * j))
        lower[2 * j] = form + ModularForm(2 * j, {m: c})
    return MDEOperator.normalized(w, r, lower)


def _modular_monomials(w):
    return [(a, (w - 4 * a) // 6) for a in range(w // 4, -1, -1) if (w - 4 * a) % 6 == 0]


# ---------------------------------------------------------------------------
# equations for every residue class of the weight


def _mf(weight, terms):
    return ModularForm(weight, terms)


_F = Fraction


class ResidueEquationSpec:
    """One of the residue-class equations of depth 0..3.

    ``modulus`` is 12 for depth 0, 6 for depths 1 and 3, and 4 for depth 2;
    ``residue`` is the class of the weight.  C2 and C4 default to the same
    product as C0; ``overrides`` can replace any named coefficient, which the
    validation harness uses when probing alternatives.
    """

    __slots__ = ("depth", "residue", "overrides")

    MODULI = {0: 12, 1: 6, 2: 4, 3: 6}

    def __init__(self, depth, residue, overrides=None):
        if depth not in self.MODULI:
            raise OutOfRange("residue equations exist for depths 0 to 3, not %r" % (depth,))
        if residue % 2 or not 0 <= residue < self.MODULI[depth]:
            raise OutOfRange("residue %r is not an even class modulo %d" % (residue, self.MODULI[depth]))
        self.depth = depth
        self.residue = residue
        self.overrides = dict(overrides or {})

    @property
    def modulus(self):
        return self.MODULI[self.depth]

    def __repr__(self):
        return "ResidueEquationSpec(depth=%d, residue=%d mod %d)" % (self.depth, self.residue, self.modulus)

    def exponents(self, w, lam):
        """Full exponent tuple from the argument accepted by ``residue_equation``."""
        r = self.depth
        if isinstance(lam, ExponentTuple):
            lam = lam.lambdas
        if r == 0:
            return (dim_modular(w) - 1,)
        if r == 1:
            if not isinstance(lam, int):
                lam = tuple(lam)
                return lam
            return (lam, (w - self.residue) // 6 - lam)
        return tuple(lam)

    def check(self, w, lam):
        r, a = self.depth, self.residue
        if w % self.modulus != a:
            raise OutOfRange("weight %d is not %d mod %d" % (w, a, self.modulus))
        if r == 0:
            if w < {0: 12, 2: 14, 4: 4, 6: 6, 8: 8, 10: 10}[a]:
                raise OutOfRange("weight %d has no form of this class" % w)
            return
        lams = self.exponents(w, lam)
        if len(lams) != r + 1 or any(x < 0 for x in lams):
            raise OutOfRange("need %d non-negative exponents, got %r" % (r + 1, lams))
        if any(lams[i] < lams[i + 1] for i in range(r)):
            raise OutOfRange("exponents must be non-increasing: %r" % (lams,))
        if r == 1:
            if not (w - a) <= 12 * lams[0] <= 2 * (w - a):
                raise OutOfRange("lambda = %d outside [(w-a)/12, (w-a)/6] for w = %d" % (lams[0], w))
        elif r == 2:
            if sum(lams) != (w - a) // 4:
                raise OutOfRange("exponents must add up to %d" % ((w - a) // 4))
        else:
            if sum(lams) != w // 3:
                raise OutOfRange("exponents must add up to %d" % (w // 3))
            if len(set(lams)) == 1:
                raise OutOfRange("exponents must not all be equal")

    def coefficients(self, w, lam):
        """Named rational coefficients of the equation at (w, lambda)."""
        r, a = self.depth, self.residue
        lams = self.exponents(w, lam)
        if r <= 1:
            return dict(self.overrides)
        s2 = _esym(lams, 2)
        s3 = _esym(lams, 3)
        out = {}
        if r == 2:
            c = _F(w - a - 2, 12)
            out["A"] = _F(4 - 3 * (w - a) ** 2, 144) + s2
            out["B"] = -prod(x - c for x in lams)
        else:
            c = _F(w - 3, 12)
            cprod = prod(x - c for x in lams)
            out["A0"] = _F(-w * w, 24) + s2 + _F(5, 72)
            out["B0"] = _F(-w ** 3, 216) + _F(w * w, 72) + _F(w - 2, 6) * s2 - s3 - _F(5, 216)
            out["C0"] = cprod
            out["A2"] = _F(-(w - 2) ** 2, 24) + s2 + _F(5, 72)
            out["B2"] = _F(-(w - 2) ** 3, 216) + _F(w - 2, 6) * s2 - s3
            out["C2"] = cprod
            out["D2"] = (_F(16, 3) * (w - 2) ** 3 - 16 * (w - 2) ** 2 + _F(80, 3)
                         - 192 * (w - 4) * s2 + 1152 * s3)
            out["A4"] = _F(-(w - 1) ** 2, 24) + _F(1, 36) + s2
            out["B4"] = -_F(2 * w ** 3 - 9 * w * w + 12 * w - 3, 432) - s3 + _F(w - 2, 6) * s2
            out["C4"] = cprod
            out["D4"] = _F(4, 3) * (2 * w ** 3 - 9 * w * w + 12 * w - 3) - 96 * (w - 2) * s2 + 576 * s3
        out.update(self.overrides)
        return out

    def operator(self, w, lam):
        self.check(w, lam)
        r, a = self.depth, self.residue
        cf = self.coefficients(w, lam)
        E4 = {(1, 0): 1}
        if r == 0:
            table = {
                0: [(0, {(0, 0): 1}), (2, {})],
                2: [(10, {(1, 1): 1}), (12, {(3, 0): _F(1, 2), (0, 2): _F(2, 3)})],
                4: [(4, E4), (6, {(0, 1): _F(1, 3)})],
                6: [(6, {(0, 1): 1}), (8, {(2, 0): _F(1, 2)})],
                8: [(4, E4), (6, {(0, 1): _F(2, 3)})],
                10: [(10, {(1, 1): 1}), (12, {(3, 0): _F(1, 2), (0, 2): _F(1, 3)})],
            }[a]
            return MDEOperator(w, 0, [_mf(k, m) for k, m in table])
        if r == 1:
            x = 12 * self.exponents(w, lam)[0] - w
            if a == 0:
                c = _F((x - 1) * (x + 1), 144)
                B = [(0, {(0, 0): 1}), (2, {}), (4, {(1, 0): -c})]
            elif a == 2:
                c = _F((x + 1) * (x + 3), 144)
                B = [(4, E4), (6, {(0, 1): _F(1, 3)}), (8, {(2, 0): -c})]
            else:
                c = _F((x + 3) * (x + 5), 144) - _F(1, 18)
                # 384 Delta = (384/1728)(E4^3 - E6^2)
                d = _F(384, 1728)
                B = [(8, {(2, 0): 1}), (10, {(1, 1): _F(2, 3)}), (12, {(3, 0): -c - d, (0, 2): d})]
            return MDEOperator(w, 1, [_mf(k, m) for k, m in B])
        if r == 2:
            A, Bc = cf["A"], cf["B"]
            if a == 0:
                B = [(0, {(0, 0): 1}), (2, {}), (4, {(1, 0): A}), (6, {(0, 1): Bc})]
            else:
                B = [(6, {(0, 1): 1}), (8, {(2, 0): _F(1, 2)}), (10, {(1, 1): A}),
                     (12, {(3, 0): A / 2, (0, 2): (3 * Bc - A) / 3})]
            return MDEOperator(w, 2, [_mf(k, m) for k, m in B])
        if a == 0:
            B = [(0, {(0, 0): 1}), (2, {}), (4, {(1, 0): cf["A0"]}), (6, {(0, 1): cf["B0"]}),
                 (8, {(2, 0): cf["C0"]})]
        else:
            lead = _F(2, 3) if a == 2 else _F(1, 3)
            A, Bc, C, D = (cf["A%d" % a], cf["B%d" % a], cf["C%d" % a], cf["D%d" % a])
            dd = D / 1728
            B = [(4, E4), (6, {(0, 1): lead}), (8, {(2, 0): A}), (10, {(1, 1): Bc}),
                 (12, {(3, 0): C + dd, (0, 2): -dd})]
        return MDEOperator(w, 3, [_mf(k, m) for k, m in B])


def residue_spec(depth, w):
    """The residue-class equation data whose class contains w."""
    return ResidueEquationSpec(depth, w % ResidueEquationSpec.MODULI[depth])


def residue_equation(spec, w, lam=None):
    """The (generally non-normalized) residue-class operator at weight w."""
    return spec.operator(w, lam)


def table1_form(w):
    """The form listed for depth 0 and weight w."""
    a = w % 12
    head = {0: {}, 2: {(0, 2, 1): 1}, 4: {(0, 1, 0): 1}, 6: {(0, 0, 1): 1},
            8: {(0, 2, 0): 1}, 10: {(0, 1, 1): 1}}[a]
    base = QuasiForm(a + (12 if a == 2 else 0), head) if head else QuasiForm.constant(1)
    n = (w - base.weight) // 12
    if n < 0:
        raise OutOfRange("weight %d has no form of class %d" % (w, a))
    return base * QuasiForm.delta() ** n


def lift4(g, w, lam):
    """d^2 g - (lam - (w+5)/12)(lam - (w+7)/12) E4 g, from weight w-4 to w."""
    if g.weight != w - 4:
        raise OutOfRange("input has weight %d, expected %d" % (g.weight, w - 4))
    c = (lam - _F(w + 5, 12)) * (lam - _F(w + 7, 12))
    return iterated_serre(g, w - 7, 2) - (QuasiForm.e4() * g).scale(c)


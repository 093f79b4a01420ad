"""Exact arithmetic for quasimodular forms and modular differential equations."""

from .balanced import (
    ExponentTuple,
    ResidueEquationSpec,
    admissible_tuples,
    balanced_form,
    balanced_report,
    delta_power_operator,
    lift4,
    mde_from_exponents,
    residue_equation,
    residue_spec,
)
from .errors import QModeError
from .extremal import (
    check_kaneko_koike,
    denominator_primes,
    extremal_base,
    extremal_form,
    kdown,
    kup,
    master_equation,
)
from .forms import (
    ModularForm,
    ModularMonomial,
    bernoulli,
    delta,
    dim_modular,
    dim_qm,
    dim_qm_direct,
    eisenstein,
    modular_basis,
)
from .mde import (
    FundamentalSystem,
    IndicialPolynomial,
    MDEOperator,
    apply_operator,
    frobenius_fundamental,
    frobenius_leading,
    indicial_polynomial,
    wronskian,
)
from .quasi import (
    GComponents,
    MonodromyPair,
    QuasiForm,
    decompose_e2,
    g_components,
    qm_basis,
    quasivector,
    rho_matrices,
    serre_derivative,
    vanishing_orders,
)
from .series import QSeries, ZUPoly, ZUSeries, series_add, series_div, series_mul, series_qderive

__version__ = "0.1.0"

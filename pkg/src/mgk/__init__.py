"""Multiple gamma functions G_n, their q-analogues G_n(z;q), and the exact
rational coefficient structures behind their expansions."""

from .errors import DomainError, NonDecayingIntegrandError, ParameterError, PoleError
from .exact import (
    CoeffBundle,
    LaurentInK,
    Poly,
    SymbolicConstantCombo,
    bernoulli_number,
    bernoulli_poly,
    binomial_poly,
    f_n_symbolic,
    g_polynomials,
    higher_stirling_coeffs,
    p_poly,
    phi_jr,
    phi_n,
    q_poly,
    stirling_first,
)
from .multigamma import (
    cross_method_residuals,
    kinkelin_constant,
    log_gn,
    log_gn_euler_maclaurin,
    log_gn_higher_stirling,
    log_gn_method,
    log_gn_weierstrass,
    vigneras_property_check,
)
from .numerics import EvalResult, PanelScheme, compensated_sum, periodic_bernoulli_integral, series_sum
from .qgamma import (
    QContext,
    c_j_q,
    classical_limit_sweep,
    log_qgamma_moak,
    log_qgamma_product,
    log_qgn,
    log_qgn_euler_maclaurin,
    log_qgn_product,
    m_poly,
    m_tilde_poly,
    q_number,
    t_r,
)
from .zeta import (
    c_constant,
    euler_gamma,
    hurwitz_zeta,
    polylog,
    riemann_zeta_deriv,
    zeta_deriv_neg,
    zeta_deriv_neg_product,
    zeta_deriv_table,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NonDecayingIntegrandError",
    "ParameterError",
    "PoleError",
    "CoeffBundle",
    "LaurentInK",
    "Poly",
    "SymbolicConstantCombo",
    "bernoulli_number",
    "bernoulli_poly",
    "binomial_poly",
    "f_n_symbolic",
    "g_polynomials",
    "higher_stirling_coeffs",
    "p_poly",
    "phi_jr",
    "phi_n",
    "q_poly",
    "stirling_first",
    "cross_method_residuals",
    "kinkelin_constant",
    "log_gn",
    "log_gn_euler_maclaurin",
    "log_gn_higher_stirling",
    "log_gn_method",
    "log_gn_weierstrass",
    "vigneras_property_check",
    "EvalResult",
    "PanelScheme",
    "compensated_sum",
    "periodic_bernoulli_integral",
    "series_sum",
    "QContext",
    "c_j_q",
    "classical_limit_sweep",
    "log_qgamma_moak",
    "log_qgamma_product",
    "log_qgn",
    "log_qgn_euler_maclaurin",
    "log_qgn_product",
    "m_poly",
    "m_tilde_poly",
    "q_number",
    "t_r",
    "c_constant",
    "euler_gamma",
    "hurwitz_zeta",
    "polylog",
    "riemann_zeta_deriv",
    "zeta_deriv_neg",
    "zeta_deriv_neg_product",
    "zeta_deriv_table",
]

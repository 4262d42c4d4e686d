"""Jets of solutions of ``u^(n) = f(u)`` and fractional-power expansions of ``f``.

Read forward, a solution's Taylor jet at a zero of order ``m`` fixes the
expansion of ``f`` in powers of ``(u/a)^(1/m)``; read backward, that expansion
(or samples of ``f``) fixes ``m``, ``a`` and the rest of the jet.
"""

from .analysis import (
    DerivativeBundle,
    FlatnessCheck,
    GapProbe,
    HolderEstimate,
    RemainderReport,
    flatness_inequality_check,
    gap_bound_check,
    holder_estimate,
    holder_exponent_for_jet,
    taylor_remainder_check,
)
from .forward import (
    CompositionLedger,
    NonPositiveLeadingError,
    ResidualReport,
    SolutionJet,
    divisor,
    forward_map,
    ledger,
    residual_check,
)
from .puiseux import DiffReport, FunctionHandle, PuiseuxSeries, compare, leading_exponent, to_callable
from .recovery import (
    NoAdmissibleOrder,
    NonIntegerOrder,
    ProbeConfig,
    RecoveryReport,
    crosscheck_uniqueness,
    detect_order,
    recover_jet_numeric,
    recover_jet_symbolic,
)
from .series import EXACT, FLOAT, TaylorPoly, binomial_series, compose, mth_root_normalized, revert

__version__ = "0.1.0"

__all__ = [
    "CompositionLedger",
    "DerivativeBundle",
    "DiffReport",
    "EXACT",
    "FLOAT",
    "FlatnessCheck",
    "FunctionHandle",
    "GapProbe",
    "HolderEstimate",
    "NoAdmissibleOrder",
    "NonIntegerOrder",
    "NonPositiveLeadingError",
    "ProbeConfig",
    "PuiseuxSeries",
    "RecoveryReport",
    "RemainderReport",
    "ResidualReport",
    "SolutionJet",
    "TaylorPoly",
    "binomial_series",
    "compare",
    "compose",
    "crosscheck_uniqueness",
    "detect_order",
    "divisor",
    "flatness_inequality_check",
    "forward_map",
    "gap_bound_check",
    "holder_estimate",
    "holder_exponent_for_jet",
    "leading_exponent",
    "ledger",
    "mth_root_normalized",
    "recover_jet_numeric",
    "recover_jet_symbolic",
    "residual_check",
    "revert",
    "taylor_remainder_check",
    "to_callable",
]

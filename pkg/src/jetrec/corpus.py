"""Built-in right-hand sides, derivative bundles and test jets."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .analysis import DerivativeBundle, exp_bundle, expflat_bundle, sin_bundle
from .forward import SolutionJet
from .puiseux import FunctionHandle


def _ex1(u):
    return 6 * np.cbrt(np.asarray(u, dtype=float))


def _ex4(u):
    return 12 * np.sqrt(np.asarray(u, dtype=float))


def _flat(s):
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(s > 0, s * np.log(s) ** 2, 0.0)
    return out if out.ndim else float(out)


# name -> (handle, default n, description)
BUILTIN_FUNCTIONS = {
    "ex1": (FunctionHandle(_ex1, 1.0, "6u^(1/3)"), 2, "u'' = 6 u^(1/3), solved by u = t^3"),
    "ex4": (FunctionHandle(_ex4, 1.0, "12u^(1/2)"), 2, "u'' = 12 u^(1/2), solved by u = t^4"),
    "flat": (FunctionHandle(_flat, 1.0, "s(ln s)^2"), 1, "u' = u (ln u)^2, solved by the flat u = exp(-1/t)"),
}

BUILTIN_BUNDLES = {
    "expflat": expflat_bundle,
    "exp": exp_bundle,
    "sin": sin_bundle,
}

# jets whose forward series make up the numeric test corpus
CORPUS_JETS = {
    "ex1": SolutionJet(2, 3, [1]),
    "ex4": SolutionJet(2, 4, [1]),
    "generic": SolutionJet(1, 3, [1, 1]),
    "m2": SolutionJet(2, 2, [1, 1]),
}


def builtin_function(name: str) -> FunctionHandle:
    try:
        return BUILTIN_FUNCTIONS[name][0]
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_FUNCTIONS)}") from None


def builtin_bundle(name: str) -> DerivativeBundle:
    try:
        return BUILTIN_BUNDLES[name]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_BUNDLES)}") from None


def perturbed(jet: SolutionJet, k: int = 1, delta=Fraction(1)) -> SolutionJet:
    """``jet`` with ``a_{m+k}`` shifted by ``delta``."""
    cs = jet.padded(max(len(jet.coeffs), k + 1))
    cs[k] += delta
    return SolutionJet(jet.n, jet.m, cs, jet.field)


def jet_pair_probes() -> dict:
    """Each corpus jet against a copy with ``a_{m+1}`` raised by 1."""
    return {name: (jet, perturbed(jet)) for name, jet in CORPUS_JETS.items()}

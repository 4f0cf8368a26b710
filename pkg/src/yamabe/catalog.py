"""Worked examples, frozen as ready-to-certify configurations.

Each entry records the closed-form profiles, the frame data, and a finite
certification interval on which the residual grid check is run (profiles
with a singular endpoint get an interval bounded away from it; the grid
itself additionally clips a 1% margin off both ends).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .geometry import SignatureSpec, TranslationDirection
from .profiles import Interval, Profile
from .soliton import WarpedSolitonSpec

__all__ = ["CatalogEntry", "catalog", "build_example", "portrait_defaults",
           "example5_spec"]


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    title: str
    kind: str                                   # "soliton" or "portrait"
    certify_interval: Optional[tuple[float, float]]
    build: Optional[Callable[[], WarpedSolitonSpec]]
    notes: str = ""


def _example2() -> WarpedSolitonSpec:
    dom = Interval(0.0, math.inf)
    sig = SignatureSpec.euclidean(5)
    return WarpedSolitonSpec(
        sig=sig,
        direction=TranslationDirection((1.0, 0.0, 0.0, 0.0, 0.0), sig),
        d=1, rho=0.0, lambda_f=0.0,
        phi=Profile.from_expression("sqrt(xi/20)", dom),
        f=Profile.from_expression("sqrt(20/xi)", dom),
        h=Profile.from_expression("20*ln(xi)", dom),
        domain=dom, label="example-2")


def _example3() -> WarpedSolitonSpec:
    dom = Interval(0.0, 10.0 * math.pi)
    sig = SignatureSpec.euclidean(4)
    return WarpedSolitonSpec(
        sig=sig,
        direction=TranslationDirection((1.0, 0.0, 0.0, 0.0), sig),
        d=2, rho=0.0, lambda_f=0.0,
        phi=Profile.from_expression("sqrt(tan(xi/20))", dom),
        f=Profile.from_expression("1/sqrt(tan(xi/20))", dom),
        h=Profile.from_expression("20*ln(sin(xi/20))", dom),
        domain=dom, label="example-3")


def _example4() -> WarpedSolitonSpec:
    dom = Interval(-0.5 * math.pi, 0.5 * math.pi)
    sig = SignatureSpec((-1, 1, 1, 1))
    return WarpedSolitonSpec(
        sig=sig,
        direction=TranslationDirection((0.0, 1.0, 1.0, 1.0), sig),
        d=3, rho=0.0, lambda_f=0.0,
        phi=Profile.from_expression("sec(xi)", dom),
        f=Profile.from_expression("sqrt(2*sec(xi)*exp(xi))", dom),
        h=Profile.constant(0.0, dom),
        domain=dom, label="example-4")


def example5_spec(k: float = 0.2, k1: float = 1.0, *,
                  n: int = 4, d: int = 2) -> WarpedSolitonSpec:
    """Lightlike steady soliton phi = f = e^(k xi), h = -k1 e^(-2k xi)/(2k)
    on a Lorentzian base with xi = x1 + x2.

    The catalog certifies k = 0.2; the completeness probe uses a smaller
    rate so the exponentials stay in range over long affine parameter.
    """
    dom = Interval(-math.inf, math.inf)
    sig = SignatureSpec((-1,) + (1,) * (n - 1))
    alpha = (1.0, 1.0) + (0.0,) * (n - 2)
    grow = Profile.from_expression(f"exp({k!r}*xi)", dom)
    return WarpedSolitonSpec(
        sig=sig, direction=TranslationDirection(alpha, sig),
        d=d, rho=0.0, lambda_f=0.0,
        phi=grow, f=grow,
        h=Profile.from_expression(f"{-k1 / (2.0 * k)!r}*exp({-2.0 * k!r}*xi)",
                                  dom),
        domain=dom, label=f"example-5(k={k:g})")


def portrait_defaults() -> dict:
    """Initial data and ODE parameters for the phase-portrait example
    (R^3 base, hyperbolic 3-fiber with scalar curvature -6)."""
    return {
        "initials": [(0.5, 0.0), (1.0, 0.0), (1.5, 0.0),
                     (1.0, 0.5), (1.0, -0.5), (2.0, 0.0)],
        "xi_span": (-1.0, 1.0),
        "k1": 1.0, "k2": 1.0, "lambda_f": -6.0, "alpha_norm": 1.0,
    }


def catalog() -> dict[str, CatalogEntry]:
    return {
        "example-1": CatalogEntry(
            "example-1", "phase portrait of the profile equation",
            "portrait", None, None,
            notes="R^3 x H^3 parameters; see portrait_defaults()"),
        "example-2": CatalogEntry(
            "example-2", "phi = sqrt(xi/20), f = sqrt(20/xi), h = 20 ln xi",
            "soliton", (0.0, 40.0), _example2,
            notes="steady, Euclidean base, xi > 0"),
        "example-3": CatalogEntry(
            "example-3", "phi^2 = tan(xi/20), h = 20 ln sin(xi/20)",
            "soliton", (0.0, 10.0 * math.pi), _example3,
            notes="steady, Euclidean base, periodic branch"),
        "example-4": CatalogEntry(
            "example-4", "phi = sec xi, f = sqrt(2 sec xi e^xi), h const",
            "soliton", (-1.45, 1.45), _example4,
            notes="trivial potential, Lorentzian base, spacelike direction"),
        "example-5": CatalogEntry(
            "example-5", "phi = f = e^(xi/5), lightlike direction",
            "soliton", (-10.0, 10.0), example5_spec,
            notes="steady, Lorentzian base, xi = x1 + x2 lightlike"),
    }


def build_example(key: str) -> WarpedSolitonSpec:
    entry = catalog().get(key)
    if entry is None or entry.build is None:
        raise KeyError(f"no buildable catalog entry named {key!r}")
    return entry.build()

"""Profiles: scalar functions of the invariance variable with two derivatives.

A profile carries an open domain and three callables (value, d1, d2). The
expression constructor differentiates symbolically; the callable constructor
falls back to central differences when derivatives are not supplied, which is
why numeric-callback specs certify against a looser default tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from . import expressions
from .errors import DomainError, PositivityError
from .numerics import central_d1, central_d2

__all__ = ["Interval", "Profile", "grid_points", "DEFAULT_GRID_MARGIN"]

DEFAULT_GRID_MARGIN = 0.01  # fraction of interval length clipped at each end


@dataclass(frozen=True)
class Interval:
    """Open interval; endpoints may be +-inf."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty interval ({self.lo!r}, {self.hi!r})")

    def contains(self, xi: float) -> bool:
        return self.lo < xi < self.hi

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def clipped(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def as_tuple(self) -> tuple[float, float]:
        return (self.lo, self.hi)


def grid_points(interval: Interval, count: int,
                margin: float = DEFAULT_GRID_MARGIN) -> list[float]:
    """Uniform grid on the margin-clipped interval; needs finite endpoints."""
    if not interval.finite:
        raise DomainError(
            "grid evaluation needs a finite interval; pass an explicit one "
            f"for {interval.as_tuple()!r}")
    a, b = interval.lo, interval.hi
    pad = margin * (b - a)
    a, b = a + pad, b - pad
    if count < 2:
        return [0.5 * (a + b)]
    step = (b - a) / (count - 1)
    return [a + i * step for i in range(count)]


class Profile:
    """value/d1/d2 of one scalar profile, plus its declared open domain."""

    def __init__(self, value: Callable[[float], float],
                 d1: Optional[Callable[[float], float]] = None,
                 d2: Optional[Callable[[float], float]] = None,
                 domain: Interval | tuple[float, float] = (-math.inf, math.inf),
                 *, source: Optional[str] = None,
                 analytic_derivatives: bool = True):
        if not isinstance(domain, Interval):
            domain = Interval(*domain)
        self.domain = domain
        self.source = source
        self._value = value
        if d1 is None:
            d1 = lambda xi: central_d1(value, xi)
            analytic_derivatives = False
        if d2 is None:
            d2 = lambda xi: central_d2(value, xi)
            analytic_derivatives = False
        self._d1 = d1
        self._d2 = d2
        self.analytic_derivatives = analytic_derivatives

    def _check(self, xi: float) -> None:
        if not self.domain.contains(xi):
            raise DomainError(
                f"xi={xi!r} outside declared domain {self.domain.as_tuple()!r}")

    def value(self, xi: float) -> float:
        self._check(xi)
        return self._value(xi)

    def d1(self, xi: float) -> float:
        self._check(xi)
        return self._d1(xi)

    def d2(self, xi: float) -> float:
        self._check(xi)
        return self._d2(xi)

    __call__ = value

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_expression(cls, text: str,
                        domain: Interval | tuple[float, float] = (-math.inf, math.inf)
                        ) -> "Profile":
        ast = expressions.parse_expression(text)
        d1_ast = expressions.differentiate(ast)
        d2_ast = expressions.differentiate(d1_ast)
        return cls(expressions.compile_callable(ast),
                   expressions.compile_callable(d1_ast),
                   expressions.compile_callable(d2_ast),
                   domain, source=text, analytic_derivatives=True)

    @classmethod
    def from_callable(cls, value: Callable[[float], float],
                      domain: Interval | tuple[float, float],
                      d1: Optional[Callable[[float], float]] = None,
                      d2: Optional[Callable[[float], float]] = None) -> "Profile":
        return cls(value, d1, d2, domain,
                   analytic_derivatives=(d1 is not None and d2 is not None))

    @classmethod
    def constant(cls, c: float,
                 domain: Interval | tuple[float, float] = (-math.inf, math.inf)
                 ) -> "Profile":
        zero = lambda xi: 0.0
        return cls(lambda xi: c, zero, zero, domain,
                   source=repr(float(c)), analytic_derivatives=True)

    # -- wrappers (used by invariance checks and families) ----------------

    def shifted(self, c: float) -> "Profile":
        """Profile + c; derivatives are shared, so residuals that depend only
        on derivatives are bitwise unchanged."""
        return Profile(lambda xi: self._value(xi) + c, self._d1, self._d2,
                       self.domain,
                       analytic_derivatives=self.analytic_derivatives)

    def scaled(self, c: float) -> "Profile":
        return Profile(lambda xi: c * self._value(xi),
                       lambda xi: c * self._d1(xi),
                       lambda xi: c * self._d2(xi),
                       self.domain,
                       analytic_derivatives=self.analytic_derivatives)

    def plus(self, other: "Profile") -> "Profile":
        dom = self.domain.clipped(other.domain)
        return Profile(lambda xi: self._value(xi) + other._value(xi),
                       lambda xi: self._d1(xi) + other._d1(xi),
                       lambda xi: self._d2(xi) + other._d2(xi),
                       dom,
                       analytic_derivatives=(self.analytic_derivatives
                                             and other.analytic_derivatives))

    def require_positive(self, interval: Interval, samples: int = 64,
                         name: str = "profile") -> None:
        """Sampled positivity check on the margin-clipped interval."""
        for xi in grid_points(interval, samples):
            if not self._value(xi) > 0.0:
                raise PositivityError(
                    f"{name} must stay positive; {name}({xi!r}) = "
                    f"{self._value(xi)!r}")

    def __repr__(self) -> str:
        src = f" source={self.source!r}" if self.source else ""
        return (f"Profile(domain={self.domain.as_tuple()!r},"
                f" analytic={self.analytic_derivatives}{src})")

"""Real branches of the Lambert W function.

Halley iteration on w*exp(w) = x. Initial guesses: a truncated branch-point
series in p = sqrt(2*(e*x + 1)) near x = -1/e, log asymptotics for large |x|
or x -> 0- on the lower branch, and w0 = x/(1+x)-style guesses elsewhere.
Iterates until the Halley step falls below a few ulps of w.
"""

from __future__ import annotations

import math

from .errors import BranchDomainError

__all__ = ["lambert_w", "BRANCH_POINT"]

BRANCH_POINT = -math.exp(-1.0)  # -1/e, where the two real branches meet


def _branch_point_series(x: float, sign: float) -> float:
    # w = -1 + p - p^2/3 + 11 p^3/72 - ..., p = +-sqrt(2(ex+1))
    p = sign * math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
    return -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0


def _initial_principal(x: float) -> float:
    if x < -0.32:
        return _branch_point_series(x, +1.0)
    if x < 1.0:
        # series W ~ x(1 - x + 1.5x^2) padded into a rational guess
        return x / (1.0 + x) if x > -0.25 else x
    lx = math.log(x)
    if x < 3.0:
        return 0.5 * lx + 0.6
    llx = math.log(lx)
    return lx - llx + llx / lx


def _initial_lower(x: float) -> float:
    if x < -0.27:
        return _branch_point_series(x, -1.0)
    lx = math.log(-x)
    llx = math.log(-lx)
    return lx - llx  # w ~ ln(-x) - ln(-ln(-x)) as x -> 0-


def lambert_w(x: float, branch: str = "principal") -> float:
    """Real Lambert W. branch: 'principal' (W >= -1) or 'lower' (W <= -1)."""
    x = float(x)
    if math.isnan(x):
        raise BranchDomainError("Lambert W argument is NaN")
    if branch == "principal":
        if x < BRANCH_POINT:
            if x > BRANCH_POINT - 1e-15 * abs(BRANCH_POINT):
                return -1.0
            raise BranchDomainError(
                f"principal branch needs x >= -1/e; got {x!r}")
        if x == 0.0:
            return 0.0
        w = _initial_principal(x)
    elif branch == "lower":
        if x < BRANCH_POINT or x >= 0.0:
            if BRANCH_POINT - 1e-15 * abs(BRANCH_POINT) < x < BRANCH_POINT:
                return -1.0
            raise BranchDomainError(
                f"lower branch needs -1/e <= x < 0; got {x!r}")
        w = _initial_lower(x)
    else:
        raise BranchDomainError(f"unknown branch {branch!r}")

    # Convergence is judged on the step size in w, not on the residual
    # w*e^w - x: near w = -1 and in the tail of the lower branch the map is
    # so flat that a machine-small residual still leaves a large error in w.
    prev = math.inf
    for _ in range(80):
        ew = math.exp(w)
        resid = w * ew - x
        if resid == 0.0:
            return w
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * resid / (2.0 * wp1)
        if denom == 0.0 or not math.isfinite(denom):
            break
        step = resid / denom
        w -= step
        astep = abs(step)
        if astep <= 4e-16 * max(1.0, abs(w)):
            return w
        if astep >= prev and astep <= 1e-8 * max(1.0, abs(w)):
            # stagnated at the conditioning floor (branch point); w is as
            # accurate as double precision permits
            return w
        prev = min(prev, astep)
    raise BranchDomainError(
        f"Halley iteration failed to converge for x={x!r} on {branch} branch")

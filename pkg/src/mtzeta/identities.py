"""Exact and numeric verification of the algebraic identities.

The partial-fraction identity is checked over exact rationals (arbitrary
precision, zero tolerance); the functional equations, the mixed functional
equation family and the displayed polygamma/Herglotz identity are checked
numerically through the evaluation engines.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import mpfun as mp
from .errors import DomainError
from .theta_eval import (
    DEFAULT_CONFIG,
    EvalConfig,
    ThetaArgs,
    evaluate,
    herglotz_series,
    polygamma_series,
)

Rational = Fraction  # arbitrary-size exact rationals


@dataclass(frozen=True)
class IdentityResult:
    name: str
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def as_row(self) -> dict:
        return {
            "name": self.name,
            "lhs": {"re": self.lhs.real, "im": self.lhs.imag},
            "rhs": {"re": self.rhs.real, "im": self.rhs.imag},
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def partial_fraction_residual(r: int, t: int, n: Rational, y: Rational) -> Rational:
    """Exact rational LHS - RHS of the partial-fraction split of
    1/(n^r (n+y)^t); must be identically zero for r, t >= 0, r+t >= 1."""
    if r < 0 or t < 0 or r + t < 1:
        raise DomainError("need integers r, t >= 0 with r + t >= 1")
    n = Fraction(n)
    y = Fraction(y)
    if n <= 0 or y <= 0:
        raise DomainError("n and y must be positive")
    lhs = Fraction(1) / (n**r * (n + y) ** t)
    rhs = Fraction(0)
    sgn_r = mp.neg_one_pow(r)
    for j in range(t):
        rhs += sgn_r * mp.binom(j + r - 1, j) * Fraction(1) / (y ** (j + r) * (n + y) ** (t - j))
    for i in range(r):
        rhs += (
            mp.binom(i + t - 1, i)
            * mp.neg_one_pow(i)
            * Fraction(1)
            / (n ** (r - i) * y ** (t + i))
        )
    return lhs - rhs


def func_eq_residuals(args: ThetaArgs, cfg: EvalConfig = DEFAULT_CONFIG) -> list[IdentityResult]:
    """Residuals of the splitting and inversion functional equations at args."""
    r, s, t, x = args.r, args.s, args.t, args.x
    th = evaluate(args, cfg).value
    split_rhs = (
        evaluate(ThetaArgs(r - 1, s, t + 1, x), cfg).value
        + x * evaluate(ThetaArgs(r, s - 1, t + 1, x), cfg).value
    )
    inv_rhs = x ** (-t) * evaluate(ThetaArgs(s, r, t, 1.0 / x), cfg).value
    return [
        IdentityResult(
            name="split",
            lhs=th,
            rhs=split_rhs,
            residual=abs(th - split_rhs),
            tolerance=1e-8,
        ),
        IdentityResult(
            name="inversion",
            lhs=th,
            rhs=inv_rhs,
            residual=abs(th - inv_rhs),
            tolerance=1e-8,
        ),
    ]


def mixed_F(r: int, t: int, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """The mixed-functional-equation combination F(x) (diagonal second
    argument), satisfying F(x) = x^{-t} F(1/x)."""
    if r < 0 or t < 0 or r + t < 1:
        raise DomainError("need integers r, t >= 0 with r + t >= 1")
    if 2 * r + t <= 2:
        raise DomainError(f"series diverge for 2r+t <= 2 (got r={r}, t={t})")
    if not x > 0:
        raise DomainError("x must be positive")
    total = mp.CompensatedSum()
    for j in range(t - 1):
        cj = mp.binom(j + r - 1, j)
        if not cj:
            continue
        total.add(
            mp.neg_one_pow(r)
            * cj
            * mp.neg_one_pow(t - j)
            / mp.ffact(t - j - 1)
            * x ** (-(j + r))
            * polygamma_series(t - j - 1, complex(2 * r + j), x, cfg)
        )
    for i in range(r - 1):
        total.add(
            mp.neg_one_pow(i)
            * x ** (-(t + i))
            * mp.binom(i + t - 1, i)
            * mp.zeta(complex(r + t + i))
            * mp.zeta(complex(r - i))
        )
    cb = mp.binom(r + t - 2, t - 1)
    if cb:
        total.add(
            -mp.neg_one_pow(r)
            * x ** (-(r + t - 1))
            * cb
            * herglotz_series(complex(2 * r + t - 1), x, cfg)
        )
    return total.value


def mixed_func_eq_residual(r: int, t: int, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|F(x) - x^{-t} F(1/x)| for the mixed functional equation."""
    return abs(mixed_F(r, t, x, cfg) - x ** (-t) * mixed_F(r, t, 1.0 / x, cfg))


def new_identity_residual(x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Residual of the displayed identity
    -sum psi'(mx+1)/m^2 + sum psi'(m/x+1)/m^2
    + (2/x) sum (gamma+psi(mx+1))/m^3 = zeta(2)^2."""
    if not x > 0:
        raise DomainError("x must be positive")
    lhs = (
        -polygamma_series(1, 2.0 + 0.0j, x, cfg)
        + polygamma_series(1, 2.0 + 0.0j, 1.0 / x, cfg)
        + 2.0 / x * herglotz_series(3.0 + 0.0j, x, cfg)
    )
    return abs(lhs - mp.zeta(2.0 + 0.0j) ** 2)

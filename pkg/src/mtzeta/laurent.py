"""Closed-form Laurent expansions, special values, residues.

Everything here is assembled symbol-by-symbol from printed closed forms
(factorials, binomials, zeta, Gamma, harmonic numbers, gamma, gamma_1,
psi'), never by numerical differentiation; the harness provides the
independent numerical side.

Covered surfaces:

* third-variable expansions around t = 1-r-ell for integer r (four cases
  each for r <= 0 and r >= 1, dispatched by ``classify_case``);
* the third-variable expansion around t = 2-r-s for non-integer r, s with
  r+s a natural number;
* second-variable expansions around s = 1-t (simple pole for r >= 2,
  double pole for r = 1);
* diagonal special values Theta(-j,-j,-j,x) in both limiting senses;
* the diagonal singularity census (pole at 2/3 and at 1/2-j) with residues.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

from . import mpfun as mp
from .errors import DomainError, EvaluationError, PoleError
from .theta_eval import (
    EvalConfig,
    DEFAULT_CONFIG,
    herglotz_series,
    polygamma_series,
    polygamma_reduced_series,
    psi_minus_log_series,
)

_MAX_WEIGHT = 60  # largest r+ell for which (r+ell-1)! is allowed


class TheoremBranch(str, Enum):
    R_NONPOS = "RnonPos"
    R_POS_INT = "RposInt"
    SUM2 = "Sum2"


class CaseId(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    NA = "NA"


@dataclass(frozen=True)
class CaseTag:
    theorem: TheoremBranch
    case_id: CaseId


@dataclass(frozen=True)
class LaurentSeries:
    """Finite Laurent expansion sum_k coeffs[k] (z - center)^k + O(z-center)."""

    variable: str  # 't' or 's'
    center: complex
    coeffs: dict[int, complex]
    remainder_order: int = 1

    def __post_init__(self):
        if self.variable not in ("t", "s"):
            raise DomainError("variable must be 't' or 's'")
        for order, c in self.coeffs.items():
            if order < -2 or order > 0:
                raise DomainError(f"unexpected Laurent order {order}")
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise EvaluationError(f"non-finite Laurent coefficient at {order}")

    def coeff(self, order: int) -> complex:
        return self.coeffs.get(order, 0.0 + 0.0j)

    def __call__(self, z: complex) -> complex:
        d = complex(z) - self.center
        return sum(c * d**k for k, c in self.coeffs.items())


@dataclass(frozen=True)
class DiagSingularity:
    location: complex
    residue: complex
    order: int = 1


# ---------------------------------------------------------------------------
# case dispatch for the third-variable theorems


def _as_int(z: complex, what: str) -> int:
    z = complex(z)
    if not mp.is_near_int(z):
        raise DomainError(f"{what} must be an integer, got {z}")
    return round(z.real)


def classify_case(r: int, s: complex, ell: int) -> CaseTag:
    """Case dispatch for the expansions around t = 1 - r - ell."""
    r = int(r)
    ell = int(ell)
    if ell < 0 or ell < 1 - r:
        raise DomainError(f"need ell >= max(0, 1-r); got r={r}, ell={ell}")
    s = complex(s)
    s_int = mp.is_near_int(s)
    si = round(s.real) if s_int else None
    if r <= 0:
        branch = TheoremBranch.R_NONPOS
        if not s_int:
            return CaseTag(branch, CaseId.I)
        if si > r + ell:
            return CaseTag(branch, CaseId.II if si == ell + 1 else CaseId.I)
        return CaseTag(branch, CaseId.IV if si >= 1 else CaseId.III)
    branch = TheoremBranch.R_POS_INT
    if not s_int:
        return CaseTag(branch, CaseId.I)
    if si > r + ell:
        return CaseTag(branch, CaseId.I)
    if si <= 0:
        return CaseTag(branch, CaseId.II)
    return CaseTag(branch, CaseId.IV if si == ell + 1 else CaseId.III)


def _zeta_checked(arg: complex) -> complex:
    try:
        return mp.zeta(complex(arg))
    except PoleError as exc:
        raise EvaluationError(
            f"zeta pole at {arg} inside a closed form; case dispatch bug"
        ) from exc


def _klf_t_nonpos(r: int, s: complex, ell: int, x: float, tag: CaseTag) -> dict[int, complex]:
    g = mp.euler_gamma()
    log_x = math.log(x)
    w = r + ell  # >= 1
    fw = mp.ffact(w - 1)
    fr = mp.ffact(-r)

    def xpow(e: complex) -> complex:
        return cmath.exp(complex(e) * log_x)

    if tag.case_id == CaseId.I:
        c0 = mp.neg_one_pow(r - 1) * fw / mp.ffact(ell) * x**ell * fr * _zeta_checked(s - ell)
        for k in range(w):
            c0 += (
                fw
                * _zeta_checked(complex(r - k))
                / (mp.ffact(k) * mp.ffact(w - k - 1))
                * x ** (w - 1 - k)
                * _zeta_checked(s - r - ell + k + 1)
            )
        return {0: c0}

    if tag.case_id == CaseId.II:
        lead = mp.neg_one_pow(r - 1) * fr * x**ell * fw / mp.ffact(ell)
        c0 = lead * (g - log_x + mp.harmonic(ell) - mp.harmonic(w - 1))
        for k in range(w):
            c0 += (
                mp.binom(w - 1, k)
                * _zeta_checked(complex(r - k))
                * x ** (w - 1 - k)
                * _zeta_checked(complex(k - r + 2))
            )
        return {-1: lead, 0: c0}

    si = round(s.real)
    if tag.case_id == CaseId.III:
        assert si <= 0 and w - si >= 0, "Case III needs s in Z\\N with s <= r+ell"
        zs = _zeta_checked(complex(si - ell))
        c0 = mp.neg_one_pow(r - 1) * x**ell * fr * fw / mp.ffact(ell) * zs
        for k in range(w):
            c0 += (
                _zeta_checked(complex(r - k))
                * fw
                / (mp.ffact(k) * mp.ffact(w - k - 1))
                * x ** (w - 1 - k)
                * _zeta_checked(complex(si + 1 - r - ell + k))
            )
        c0 += (
            mp.neg_one_pow(si - 1)
            * xpow(si - 1)
            * fw
            * mp.ffact(-si)
            / mp.ffact(w - si)
            * zs
        )
        return {0: c0}

    # Case IV: s natural, s <= r + ell
    assert 1 <= si <= w
    zs = _zeta_checked(complex(si - ell))
    lead = x ** (si - 1) * fw / (mp.ffact(w - si) * mp.ffact(si - 1))
    c0 = lead * (g - mp.harmonic(w - 1) + mp.harmonic(si - 1) - log_x) * zs
    c0 -= mp.neg_one_pow(r) * x**ell * fr * fw / mp.ffact(ell) * zs
    for k in range(w):
        if k == w - si:
            continue
        c0 += (
            fw
            * _zeta_checked(complex(r - k))
            / (mp.ffact(w - k - 1) * mp.ffact(k))
            * x ** (w - 1 - k)
            * _zeta_checked(complex(si - r - ell + k + 1))
        )
    return {-1: lead * zs, 0: c0}


def _klf_t_pos(r: int, s: complex, ell: int, x: float, tag: CaseTag) -> dict[int, complex]:
    g = mp.euler_gamma()
    log_x = math.log(x)
    w = r + ell
    fw = mp.ffact(w - 1)

    def ksum(skip: tuple[int, ...]) -> complex:
        acc = mp.CompensatedSum()
        for k in range(w):
            if k in skip:
                continue
            acc.add(
                mp.binom(w - 1, k)
                * x ** (w - 1 - k)
                * _zeta_checked(complex(r - k))
                * _zeta_checked(s + 1 + k - ell - r)
            )
        return acc.value

    if tag.case_id in (CaseId.I, CaseId.II):
        zs = _zeta_checked(s - ell)
        lead = mp.binom(w - 1, ell) * x**ell * zs
        c0 = lead * (g + mp.harmonic(r - 1) - mp.harmonic(w - 1)) + ksum((r - 1,))
        if tag.case_id == CaseId.II:
            si = round(s.real)
            assert si <= 0
            c0 += (
                mp.neg_one_pow(si - 1)
                * fw
                * mp.ffact(-si)
                / mp.ffact(w - si)
                * cmath.exp((si - 1) * log_x)
                * zs
            )
        return {-1: lead, 0: c0}

    if tag.case_id == CaseId.III:
        si = round(s.real)
        assert 1 <= si <= w and si != ell + 1
        zs = _zeta_checked(complex(si - ell))
        p1 = mp.binom(w - 1, ell) * x**ell * zs
        p2 = mp.binom(w - 1, si - 1) * x ** (si - 1) * zs
        c0 = p1 * (g + mp.harmonic(r - 1) - mp.harmonic(w - 1))
        c0 += p2 * (g + mp.harmonic(si - 1) - mp.harmonic(w - 1) - log_x)
        c0 += ksum((r - 1, w - si))
        return {-1: p1 + p2, 0: c0}

    # Case IV: s = ell + 1, double pole
    q = mp.binom(w - 1, ell) * float(x**ell)
    c2 = 2.0 * q
    c1 = q * (
        2.0 * g + mp.harmonic(ell) + mp.harmonic(r - 1) - 2.0 * mp.harmonic(w - 1) - log_x
    )
    c0 = (
        q
        / 3.0
        * (
            -math.pi**2
            + 3.0
            * (g + mp.harmonic(ell) - mp.harmonic(w - 1) - log_x)
            * (g + mp.harmonic(r - 1) - mp.harmonic(w - 1))
            + 3.0 * mp.polygamma(1, complex(w)).real
        )
    )
    acc = mp.CompensatedSum()
    for k in range(w):
        if k == r - 1:
            continue
        acc.add(
            mp.binom(w - 1, k)
            * x ** (w - 1 - k)
            * _zeta_checked(complex(r - k))
            * _zeta_checked(complex(k - r + 2))
        )
    return {-2: c2, -1: c1, 0: c0 + acc.value}


def klf_t(r: int, s: complex, ell: int, x: float) -> LaurentSeries:
    """Laurent expansion of Theta(r,s,t,x) around t = 1 - r - ell for
    integer r, per the four-case dispatch of ``classify_case``."""
    r = _as_int(r, "r")
    ell = _as_int(ell, "ell")
    if not x > 0:
        raise DomainError("x must be positive")
    if r + ell > _MAX_WEIGHT:
        raise DomainError(f"r + ell must not exceed {_MAX_WEIGHT}")
    tag = classify_case(r, s, ell)
    s = complex(s)
    if tag.theorem is TheoremBranch.R_NONPOS:
        coeffs = _klf_t_nonpos(r, s, ell, x, tag)
    else:
        coeffs = _klf_t_pos(r, s, ell, x, tag)
    return LaurentSeries(variable="t", center=complex(1 - r - ell), coeffs=coeffs)


def klf_t_sum(r: complex, s: complex, x: float) -> LaurentSeries:
    """Expansion of Theta(r,s,t,x) around t = 2-r-s for non-integer r, s
    with r+s a natural number >= 2 (no singular part)."""
    r, s = complex(r), complex(s)
    if mp.is_near_int(r) or mp.is_near_int(s):
        raise DomainError("klf_t_sum needs non-integer r and s")
    if not mp.is_near_int(r + s):
        raise DomainError("klf_t_sum needs r + s to be an integer")
    n = round((r + s).real)
    if n < 2:
        raise DomainError("klf_t_sum needs r + s >= 2")
    if not x > 0:
        raise DomainError("x must be positive")
    log_x = math.log(x)
    c0 = (
        mp.neg_one_pow(n)
        * cmath.exp((s - 1.0) * log_x)
        * mp.ffact(n - 2)
        * mp.gamma(1.0 - r)
        * mp.gamma(1.0 - s)
    )
    for k in range(n - 1):
        c0 += (
            mp.binom(n - 2, k)
            * x ** (n - 2 - k)
            * _zeta_checked(r - k)
            * _zeta_checked(k - r + 2.0)
        )
    return LaurentSeries(variable="t", center=complex(2) - r - s, coeffs={0: c0})


# ---------------------------------------------------------------------------
# second-variable expansions around s = 1 - t


def klf_s(r: int, t: int, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> LaurentSeries:
    """Laurent expansion of Theta(r,s,t,x) in s around s = 1-t:
    simple pole with residue x^{-t} zeta(r) for r >= 2 (t >= 0), double
    pole for r = 1 (t >= 1)."""
    r = _as_int(r, "r")
    t = _as_int(t, "t")
    if not x > 0:
        raise DomainError("x must be positive")
    g = mp.euler_gamma()
    log_x = math.log(x)
    xmt = x ** (-t)

    if r >= 2 and t >= 0:
        zr = mp.zeta(complex(r))
        c1 = xmt * zr
        c0 = mp.CompensatedSum()
        c0.add(g * zr * xmt)
        for j in range(0, t - 1):
            c0.add(
                mp.neg_one_pow(r)
                * mp.binom(j + r - 1, j)
                * mp.neg_one_pow(t - j)
                / mp.ffact(t - j - 1)
                * x ** (-(j + r))
                * polygamma_series(t - j - 1, complex(r + j - t + 1), x, cfg)
            )
        for i in range(1, r - 1):
            c0.add(
                mp.neg_one_pow(i)
                * x ** (-(t + i))
                * mp.binom(i + t - 1, i)
                * mp.zeta(complex(i + 1))
                * mp.zeta(complex(r - i))
            )
        cb = mp.binom(r + t - 2, t - 1)
        if cb:
            c0.add(
                -mp.neg_one_pow(r)
                * x ** (-(r + t - 1))
                * cb
                * herglotz_series(complex(r), x, cfg)
            )
        return LaurentSeries(variable="s", center=complex(1 - t), coeffs={-1: c1, 0: c0.value})

    if r == 1 and t >= 1:
        h = mp.harmonic(t - 1)
        c2 = complex(xmt)
        c1 = xmt * (g + log_x + h)
        c0 = mp.CompensatedSum()
        c0.add(xmt * (g * (g + log_x + h) + mp.stieltjes().gamma1))
        for j in range(0, t - 1):
            c0.add(
                -mp.neg_one_pow(t - j)
                * x ** (-(j + 1))
                / mp.ffact(t - j - 1)
                * polygamma_reduced_series(t - j - 1, complex(j - t + 2), x, cfg)
            )
        c0.add(t * mp.zeta(2.0 + 0.0j) * x ** (-(t + 1)))
        c0.add(xmt * psi_minus_log_series(1.0 + 0.0j, x, cfg))
        return LaurentSeries(
            variable="s", center=complex(1 - t), coeffs={-2: c2, -1: c1, 0: c0.value}
        )

    raise DomainError(f"klf_s needs r >= 2 with t >= 0, or r = 1 with t >= 1; got {r}, {t}")


# ---------------------------------------------------------------------------
# diagonal special values and singularities


def diag_special_value(j: int, x: float) -> complex:
    """Theta(-j,-j,-j,x) in the diagonal limiting sense: 0 for odd j, the
    zeta-product closed form for even j."""
    if j < 0:
        raise DomainError("j must be >= 0")
    if not x > 0:
        raise DomainError("x must be positive")
    if j % 2 == 1:
        return 0.0 + 0.0j
    acc = mp.CompensatedSum()
    acc.add(
        -(mp.ffact(j) ** 2)
        / (2.0 * mp.ffact(2 * j + 1))
        * (x ** (2 * j + 1) + x ** (-j - 1))
        * mp.zeta(complex(-3 * j - 1))
    )
    for k in range(j + 1):
        acc.add(
            mp.binom(j, k)
            * x ** (j - k)
            * mp.zeta(complex(-j - k))
            * mp.zeta(complex(-2 * j + k))
        )
    return acc.value


def diag_special_value_L2(j: int, x: float) -> complex:
    """Theta(-j,-j,-j,x) in the third-variable limiting sense, realized as
    the constant term of the expansion around t = -j with ell = 1 + 2j."""
    if j < 0:
        raise DomainError("j must be >= 0")
    series = klf_t(-j, complex(-j), 1 + 2 * j, x)
    if series.coeffs.keys() - {0}:
        raise EvaluationError("diagonal L2 point unexpectedly has a singular part")
    return series.coeff(0)


def diag_singularities(j_max: int, x: float) -> list[DiagSingularity]:
    """All poles of s |-> Theta(s,s,s,x): s = 2/3, and s = 1/2 - j for
    0 <= j <= j_max, each simple, with closed-form residues."""
    if j_max < 0:
        raise DomainError("j_max must be >= 0")
    if not x > 0:
        raise DomainError("x must be positive")
    out = [
        DiagSingularity(
            location=2.0 / 3.0 + 0.0j,
            residue=mp.gamma(1.0 / 3.0) ** 3 / (2.0 * math.sqrt(3.0) * math.pi * x ** (1.0 / 3.0)),
        )
    ]
    for j in range(j_max + 1):
        out.append(
            DiagSingularity(
                location=0.5 - j + 0.0j,
                residue=mp.neg_one_pow(j)
                * 2.0 ** (-4 * j - 1)
                * mp.binom(2 * j, j)
                * (x ** (2 * j) + x ** (-0.5 - j))
                * mp.zeta(complex((1.0 - 6.0 * j) / 2.0)),
            )
        )
    return out

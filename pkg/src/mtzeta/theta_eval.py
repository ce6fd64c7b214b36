"""Evaluation engines for Theta(r,s,t,x) = sum n^{-r} m^{-s} (n+mx)^{-t}.

Three independent routes are provided:

* ``theta_direct``      -- the double series inside its convergence region,
                           Euler-Maclaurin tail corrections on the inner sum
                           and a closed asymptotic tail on the outer sum;
* ``theta_continued_t`` -- the regularized Mellin-type integral plus closed
                           correction terms, giving analytic continuation in
                           the third variable (with the log-modified variant
                           for positive-integer first argument);
* ``theta_psi_series``  -- the evaluation through digamma/polygamma series
                           for non-negative integer (r, t).

The Herglotz-type sum sum_m (gamma + psi(mx+1))/m^a and its polygamma
relatives are exposed as standalone primitives; they are accelerated by
splitting off the Bernoulli asymptotics of psi so the slow log part is
summed in closed form through zeta and zeta'.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import mpfun as mp
from .errors import (
    ConvergenceError,
    DomainError,
    OutsideRegionError,
    QuadratureError,
    SingularPointError,
)

POLE_RADIUS = 1e-9  # below this, closed correction terms are meaningless

# ---------------------------------------------------------------------------
# parameter containers


@dataclass(frozen=True)
class ThetaArgs:
    r: complex
    s: complex
    t: complex
    x: float

    def __post_init__(self):
        object.__setattr__(self, "r", complex(self.r))
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "t", complex(self.t))
        object.__setattr__(self, "x", float(self.x))
        if not (self.x > 0.0 and math.isfinite(self.x)):
            raise DomainError(f"x must be positive and finite, got {self.x}")
        for name in ("r", "s", "t"):
            v = getattr(self, name)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise DomainError(f"{name} must be finite, got {v}")


@dataclass(frozen=True)
class EvalConfig:
    direct_terms: int = 48
    em_order: int = 8
    quad_points: int = 40
    M: int | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if self.direct_terms < 16:
            raise DomainError("direct_terms must be >= 16")
        if self.M is not None and self.M < 0:
            raise DomainError("M must be >= 0")
        if not (0.0 < self.tol <= 1e-3):
            raise DomainError("tol must lie in (0, 1e-3]")
        if self.em_order < 1 or self.quad_points < 8:
            raise DomainError("em_order >= 1 and quad_points >= 8 required")


DEFAULT_CONFIG = EvalConfig()


class RegionD:
    """Absolute-convergence region Re(r+t)>1, Re(s+t)>1, Re(r+s+t)>2."""

    @staticmethod
    def margin(r: complex, s: complex, t: complex) -> float:
        return min(
            (r + t).real - 1.0,
            (s + t).real - 1.0,
            (r + s + t).real - 2.0,
        )

    @staticmethod
    def contains(r: complex, s: complex, t: complex) -> bool:
        return RegionD.margin(r, s, t) > 0.0


@dataclass(frozen=True)
class EvalOutcome:
    value: complex
    err_est: float
    method: str
    warnings: tuple[str, ...] = field(default_factory=tuple)


# ---------------------------------------------------------------------------
# quadrature rules


@lru_cache(maxsize=8)
def _gl_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    xs, ws = np.polynomial.legendre.leggauss(n)
    return xs, ws


def _geom_edges(a: float, b: float) -> list[float]:
    """Panel edges a, a+1, a+2, a+4, ... doubling up to b."""
    edges = [a]
    step = 1.0
    while edges[-1] < b:
        edges.append(min(edges[-1] + step, b))
        step *= 2.0
    return edges


def _panel_quad(f, a: float, b: float, n: int) -> complex:
    xs, ws = _gl_nodes(n)
    acc = 0.0 + 0.0j
    for lo, hi in zip(_geom_edges(a, b)[:-1], _geom_edges(a, b)[1:]):
        yy = 0.5 * (hi - lo) * xs + 0.5 * (hi + lo)
        acc += 0.5 * (hi - lo) * complex(np.dot(ws, f(yy)))
    return acc


# ---------------------------------------------------------------------------
# vectorized polylog on the ray, Li_s(e^{-y}) over y-grids


def _cpow(y: np.ndarray, p: complex) -> np.ndarray:
    return np.exp(p * np.log(y))


def _polylog_series_grid(s: complex, y: np.ndarray) -> np.ndarray:
    acc = np.zeros(y.shape, complex)
    ymin = float(y.min())
    for u in range(1, 601):
        term = np.exp(-u * y) * (u ** (-complex(s)))
        acc += term
        tmax = float(np.abs(term).max())
        if tmax < 1e-18 * max(1.0, float(np.abs(acc).max())) and u * ymin > abs(s.real) + 4.0:
            break
    return acc


def _polylog_expansion_grid(s: complex, y: np.ndarray) -> np.ndarray:
    coeffs, special_k = mp.li_expansion_coeffs(complex(s))
    acc = np.zeros(y.shape, complex)
    for c in reversed(coeffs):
        acc = acc * y + c
    if special_k >= 0:
        a = special_k + 1
        acc += (
            mp.neg_one_pow(a - 1)
            * (mp.harmonic(a - 1) - np.log(y))
            * y ** (a - 1)
            / mp.ffact(a - 1)
        )
    else:
        acc += mp.gamma(1.0 - complex(s)) * _cpow(y, complex(s) - 1.0)
    return acc


def polylog_grid(s: complex, y: np.ndarray) -> np.ndarray:
    out = np.empty(y.shape, complex)
    small = y < mp.LOG2
    if small.any():
        out[small] = _polylog_expansion_grid(s, y[small])
    big = ~small
    if big.any():
        out[big] = _polylog_series_grid(s, y[big])
    return out


# ---------------------------------------------------------------------------
# the regularized small-y remainder of Li_r

_RM_SWITCH = 5.0  # literal difference above, convergent tail series below


def _ce_order(r: complex) -> int | None:
    """Positive integer order if r is (numerically) a natural number."""
    rn = round(r.real)
    if rn >= 1 and abs(r - rn) < POLE_RADIUS:
        return rn
    return None


@lru_cache(maxsize=128)
def _rm_coeff_arrays(r: complex, m_reg: int) -> tuple[np.ndarray, np.ndarray]:
    """(subtracted-polynomial coeffs c_0..c_M, tail coeffs c_{M+1}..c_K) for
    Li_r(e^{-y}) - [leading term] - sum_{k<=M} c_k y^k with c_k = (-1)^k
    zeta(r-k)/k!.  The k = r-1 slot is zeroed for natural r (its place is
    taken by the (H_{r-1} - log y) term)."""
    rn = _ce_order(r)
    k_reflect_cap = int(165 + min(0.0, r.real))
    coeffs: list[complex] = []
    kfac = 1.0
    peak = 0.0
    small_run = 0  # trivial zeros of zeta give exact-0 coefficients, so a
    # single small term must not stop the series
    for k in range(min(260, k_reflect_cap)):
        if k > 0:
            kfac *= k
        if rn is not None and k == rn - 1:
            coeffs.append(0.0 + 0.0j)
            continue
        c = mp.neg_one_pow(k) * mp.zeta(complex(r) - k) / kfac
        coeffs.append(c)
        mag = abs(c) * _RM_SWITCH**k
        peak = max(peak, mag)
        if k > m_reg + 4 and mag < 1e-19 * max(1.0, peak):
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
    arr = np.array(coeffs, complex)
    return arr[: m_reg + 1], arr[m_reg + 1 :]


class _RMEvaluator:
    """Evaluates R_M(y) = Li_r(e^{-y}) minus its singular/polynomial prefix,
    stably on both sides of y ~ 5 (tail series below, literal difference
    above, where the constituents no longer cancel catastrophically)."""

    def __init__(self, r: complex, m_reg: int):
        self.r = complex(r)
        self.m_reg = m_reg
        self.rn = _ce_order(r)
        self.lit_coeffs, self.tail_coeffs = _rm_coeff_arrays(self.r, m_reg)
        self.gamma_1mr = None if self.rn is not None else mp.gamma(1.0 - self.r)

    def _tail(self, y: np.ndarray) -> np.ndarray:
        acc = np.zeros(y.shape, complex)
        for c in self.tail_coeffs[::-1]:
            acc = acc * y + c
        return acc * y ** (self.m_reg + 1)

    def _literal(self, y: np.ndarray) -> np.ndarray:
        val = _polylog_series_grid(self.r, y)
        if self.rn is not None:
            a = self.rn
            val -= (
                mp.neg_one_pow(a - 1)
                * (mp.harmonic(a - 1) - np.log(y))
                * y ** (a - 1)
                / mp.ffact(a - 1)
            )
        else:
            val -= self.gamma_1mr * _cpow(y, self.r - 1.0)
        poly = np.zeros(y.shape, complex)
        for c in self.lit_coeffs[::-1]:
            poly = poly * y + c
        return val - poly

    def values(self, y: np.ndarray) -> np.ndarray:
        out = np.empty(y.shape, complex)
        lo = y < _RM_SWITCH
        if lo.any():
            out[lo] = self._tail(y[lo])
        if (~lo).any():
            out[~lo] = self._literal(y[~lo])
        return out


# ---------------------------------------------------------------------------
# continued evaluation in the third variable


def _auto_m(r: complex, s: complex, t: complex) -> int:
    m = int(math.ceil(max(0.0, -t.real - min(1.0, s.real)))) + 2
    rn = _ce_order(r)
    if rn is not None:
        m = max(m, rn - 1)
    return m


def _pole_candidates(r: complex, s: complex, m_reg: int) -> list[complex]:
    cands = [2.0 - r - s]
    for k in range(m_reg + 1):
        cands.append(1.0 - s - k)
    for j in range(m_reg + 9):
        cands.append(1.0 - r - j)
    return cands


def _check_poles(t: complex, r: complex, s: complex, m_reg: int) -> None:
    for cand in _pole_candidates(r, s, m_reg):
        if abs(t - cand) < POLE_RADIUS:
            raise SingularPointError(
                f"t={t} lies within {POLE_RADIUS} of the correction-term pole "
                f"at t={cand}; use the laurent module for expansions there"
            )


def _small_y_integrand(
    rm: _RMEvaluator, s: complex, t: complex, x: float, tau: np.ndarray
) -> np.ndarray:
    """Integrand of int_0^1 y^{t-1} Li_s(e^{-xy}) R_M(y) dy after y = e^{-tau}
    (so the value here is e^{-t tau} Li_s(e^{-x e^{-tau}}) R_M(e^{-tau})).

    Exponentials are folded together so no factor overflows even when Re(t)
    is very negative: R_M(y) = y^{M+1} H(y) with bounded H, and the singular
    part of Li_s contributes (xy)^{s-1} which is folded likewise."""
    y = np.exp(-tau)
    hy = np.zeros(tau.shape, complex)
    for c in rm.tail_coeffs[::-1]:
        hy = hy * y + c
    m1 = rm.m_reg + 1
    out = np.empty(tau.shape, complex)

    z = x * y  # polylog argument
    big = z >= mp.LOG2
    if big.any():
        out[big] = (
            np.exp(-(t + m1) * tau[big])
            * hy[big]
            * _polylog_series_grid(s, z[big])
        )
    small = ~big
    if small.any():
        ts, ys, zs = tau[small], y[small], z[small]
        coeffs, special_k = mp.li_expansion_coeffs(complex(s))
        poly = np.zeros(ts.shape, complex)
        for c in reversed(coeffs):
            poly = poly * zs + c
        val = np.exp(-(t + m1) * ts) * poly
        if special_k >= 0:
            a = special_k + 1
            val += (
                mp.neg_one_pow(a - 1)
                / mp.ffact(a - 1)
                * x ** (a - 1)
                * (mp.harmonic(a - 1) - math.log(x) + ts)
                * np.exp(-(t + m1 + a - 1.0) * ts)
            )
        else:
            val += (
                mp.gamma(1.0 - complex(s))
                * cmath.exp((complex(s) - 1.0) * math.log(x))
                * np.exp(-(t + m1 + complex(s) - 1.0) * ts)
            )
        out[small] = hy[small] * val
    return out


def _continued_integral(
    rm: _RMEvaluator, s: complex, t: complex, x: float, cfg: EvalConfig, eta: float
) -> tuple[complex, float]:
    """integral_0^inf y^{t-1} Li_s(e^{-xy}) R_M(y) dy, split at y = 1."""
    tol = cfg.tol
    xs, ws = _gl_nodes(cfg.quad_points)

    # (0, 1] in tau = -log y: decay rate eta = Re(t) + M + min(1, Re s)
    tau_max = min(max(45.0, 42.0 / eta), 400.0)
    part1 = 0.0 + 0.0j
    edges = _geom_edges(0.0, tau_max)
    for lo, hi in zip(edges[:-1], edges[1:]):
        tt = 0.5 * (hi - lo) * xs + 0.5 * (hi + lo)
        part1 += 0.5 * (hi - lo) * complex(
            np.dot(ws, _small_y_integrand(rm, s, t, x, tt))
        )

    # [1, Y]: geometric Gauss-Legendre panels against the e^{-xy} decay;
    # extend until a whole panel contributes below tolerance
    rho = max(0.0, t.real - 1.0) + max(float(rm.m_reg), max(0.0, rm.r.real - 1.0)) + 1.0
    y_est = max(8.0, -math.log(tol * 1e-3) / x)
    for _ in range(4):
        y_est = (-math.log(tol * 1e-3) + rho * math.log(y_est)) / x
    y_cap = max(4.0 * y_est, 200.0 / x)
    part2 = 0.0 + 0.0j
    last_mag = math.inf
    lo, width = 1.0, 1.0
    while lo < y_cap:
        hi = min(lo + width, y_cap)
        yy = 0.5 * (hi - lo) * xs + 0.5 * (hi + lo)
        ff = _cpow(yy, t - 1.0) * polylog_grid(s, x * yy) * rm.values(yy)
        contrib = 0.5 * (hi - lo) * complex(np.dot(ws, ff))
        part2 += contrib
        last_mag = abs(contrib)
        if last_mag < tol * 1e-2 and hi >= y_est:
            break
        lo, width = hi, 2.0 * width
    if last_mag > tol * 1e-2:
        raise QuadratureError(
            f"integrand not decayed by y={y_cap:.1f} (last panel {last_mag:.2e})"
        )
    err = 1e-13 * (1.0 + abs(part1) + abs(part2)) + last_mag
    return part1 + part2, err


def _continued_impl(
    r: complex, s: complex, t: complex, x: float, cfg: EvalConfig, m_reg: int | None = None
) -> tuple[complex, float]:
    if m_reg is None:
        m_reg = cfg.M if cfg.M is not None else _auto_m(r, s, t)
    rn = _ce_order(r)
    if rn is not None and m_reg < rn - 1:
        raise DomainError(f"regularization order M={m_reg} must be >= r-1 = {rn - 1}")
    eta = t.real + m_reg + min(1.0, s.real)
    if eta < 0.5:
        raise DomainError(
            f"integrand bound fails: Re(t)+M+min(1,Re(s)) = {eta:.3f} must exceed 0.5"
        )
    if t.real < -20.0:
        raise DomainError("continuation restricted to Re(t) >= -20")
    _check_poles(t, r, s, m_reg)

    rm = _RMEvaluator(r, m_reg)
    integral, quad_err = _continued_integral(rm, s, t, x, cfg, eta)
    value = integral * mp.rgamma(t)

    log_x = math.log(x)
    corr = mp.CompensatedSum()
    kfac = 1.0
    for k in range(m_reg + 1):
        if k > 0:
            kfac *= k
        if rn is not None and k == rn - 1:
            continue
        corr.add(
            mp.neg_one_pow(k)
            / kfac
            * mp.zeta(r - k)
            * mp.poch(t, k)
            * cmath.exp(-(t + k) * log_x)
            * mp.zeta(t + k + s)
        )
    if rn is None:
        corr.add(
            mp.gamma(1.0 - r)
            * mp.gamma_ratio(t, r - 1.0)
            * cmath.exp(-(t + r - 1.0) * log_x)
            * mp.zeta(t + s + r - 1.0)
        )
    else:
        hr = mp.harmonic(rn - 1)
        corr.add(
            -mp.neg_one_pow(rn)
            * mp.poch(t, rn - 1)
            / mp.ffact(rn - 1)
            * cmath.exp(-(t + rn - 1.0) * log_x)
            * (
                mp.zeta(t + s + rn - 1.0) * (hr - mp.digamma(t + rn - 1.0) + log_x)
                - mp.zeta_deriv(t + s + rn - 1.0)
            )
        )
    value += corr.value
    err = quad_err * abs(mp.rgamma(t)) + 1e-14 * abs(corr.value)
    return mp.ensure_finite(value, "theta_continued_t"), err


def theta_continued_t(args: ThetaArgs, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Theta(r,s,t,x) by the regularized-integral continuation in t."""
    return _continued_impl(args.r, args.s, args.t, args.x, cfg)[0]


# --- diagonal specialization ------------------------------------------------


def _diag_limit_value(j: int, x: float) -> complex:
    """lim_{s->-j} Theta(s,s,s,x): 0 for odd j; the zeta-product closed form
    for even j (the two 0*inf pairs of the correction sum resolve to the
    binomial-weighted term below)."""
    if j % 2 == 1:
        return 0.0 + 0.0j
    val = mp.CompensatedSum()
    pref = -(mp.ffact(j) ** 2) / (2.0 * mp.ffact(2 * j + 1))
    val.add(pref * (x ** (2 * j + 1) + x ** (-j - 1)) * mp.zeta(-3 * j - 1))
    for k in range(j + 1):
        val.add(
            mp.binom(j, k) * x ** (j - k) * mp.zeta(complex(-j - k)) * mp.zeta(complex(-2 * j + k))
        )
    return val.value


def diag_pole_locations(j_max: int) -> list[float]:
    return [2.0 / 3.0] + [0.5 - j for j in range(j_max + 1)]


def theta_diag_continued(s: complex, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Theta(s,s,s,x) continued to the strip Re(s) >= -M/2 + eps."""
    s = complex(s)
    if not x > 0:
        raise DomainError("x must be positive")
    j_hi = int(math.ceil(0.5 - s.real)) + 2
    for pole in diag_pole_locations(max(0, j_hi)):
        if abs(s - pole) < POLE_RADIUS:
            raise SingularPointError(
                f"s={s} is within {POLE_RADIUS} of the diagonal pole at {pole}"
            )
    if abs(s.imag) < POLE_RADIUS and s.real <= 0.5:
        jr = round(s.real)
        if jr <= 0 and abs(s.real - jr) < POLE_RADIUS:
            return _diag_limit_value(-jr, x)
    m_reg = cfg.M if cfg.M is not None else max(0, int(math.ceil(-2.0 * s.real))) + 4
    return _continued_impl(s, s, s, x, cfg, m_reg=m_reg)[0]


# ---------------------------------------------------------------------------
# direct double-series engine

_EM_J_CAP = 12


def _em_deriv_poly_coeffs(r: complex, t: complex, j_max: int, a: float):
    """For h(u) = u^{-r} (u+c)^{-t}, h^(k)(u) = h(u) P_k(1/u, 1/(u+c)).
    Returns, for each odd k = 1, 3, .., 2*j_max-1, the coefficients of P_k
    as a polynomial in b = 1/(u+c) after substituting a = 1/u."""
    polys = []
    cur = {(0, 0): 1.0 + 0.0j}
    for order in range(1, 2 * j_max):
        nxt: dict[tuple[int, int], complex] = {}

        def bump(key, val):
            nxt[key] = nxt.get(key, 0.0 + 0.0j) + val

        for (i, jb), co in cur.items():
            if i:
                bump((i + 1, jb), -i * co)
            if jb:
                bump((i, jb + 1), -jb * co)
            bump((i + 1, jb), -r * co)
            bump((i, jb + 1), -t * co)
        cur = nxt
        if order % 2 == 1:
            deg = max(jb for (_, jb) in cur)
            cb = np.zeros(deg + 1, complex)
            for (i, jb), co in cur.items():
                cb[jb] += co * a**i
            polys.append(cb)
    return polys


def _inner_sums(r: complex, t: complex, x: float, n_cut: int, m_count: int, cfg: EvalConfig):
    """S(m) = sum_n n^{-r} (n+mx)^{-t} for m = 1..m_count, each with an
    Euler-Maclaurin tail from n = n_cut; returns (values, err_est)."""
    c = x * np.arange(1, m_count + 1, dtype=float)
    n = np.arange(1, n_cut, dtype=float)
    direct = _cpow(n[None, :], -r) * np.exp(-t * np.log(n[None, :] + c[:, None]))
    s_vals = direct.sum(axis=1)

    # integral_{n_cut}^inf u^{-r}(u+c)^{-t} du; u = n_cut e^{tau} gives
    # n_cut^{1-r-t} integral_0^inf e^{-(r+t-1) tau} (n_cut + c e^{-tau})^{-t}
    # ... with v = e^{-tau}; decay rate Re(r+t-1) >= the region margin
    decay = (r + t).real - 1.0
    tau_max = min(max(45.0, 42.0 / decay), 1000.0)
    xs, ws = _gl_nodes(cfg.quad_points)
    integ = np.zeros(m_count, complex)
    edges = _geom_edges(0.0, tau_max)
    for lo, hi in zip(edges[:-1], edges[1:]):
        tt = 0.5 * (hi - lo) * xs + 0.5 * (hi + lo)
        base = n_cut + np.outer(c, np.exp(-tt))  # (m, k)
        f = np.exp(-t * np.log(base)) * np.exp(-(r + t - 1.0) * tt)[None, :]
        integ += 0.5 * (hi - lo) * (f @ ws)
    s_vals += n_cut ** (1.0 - complex(r)) * integ

    h_at = n_cut ** (-complex(r)) * np.exp(-t * np.log(n_cut + c))
    s_vals += 0.5 * h_at
    b = 1.0 / (n_cut + c)
    jmax = min(cfg.em_order, _EM_J_CAP)
    polys = _em_deriv_poly_coeffs(r, t, jmax, 1.0 / n_cut)
    last = np.zeros(m_count)
    for j in range(1, jmax + 1):
        cb = polys[j - 1]
        pk = np.zeros(m_count, complex)
        for coef in cb[::-1]:
            pk = pk * b + coef
        term = mp.bernoulli(2 * j) / mp.ffact(2 * j) * h_at * pk
        s_vals -= term
        last = np.abs(term)
    err = float(last.sum()) + 1e-14 * float(np.abs(s_vals).sum())
    return s_vals, err


def _outer_tail(
    r: complex, s: complex, t: complex, x: float, n_cut: int, tol: float
) -> tuple[complex, float]:
    """sum_{m >= n_cut} m^{-s} S(mx) through the large-argument expansion of
    the inner sum (the same closed coefficients as the continuation engine)."""
    rn = _ce_order(r)
    log_x = math.log(x)
    total = mp.CompensatedSum()
    if rn is None:
        lead = (
            mp.gamma(1.0 - r)
            * mp.gamma_ratio(t, r - 1.0)
            * cmath.exp((1.0 - t - r) * log_x)
            * mp.zeta_tail(s + t + r - 1.0, n_cut)
        )
        total.add(lead)
    else:
        d = mp.neg_one_pow(rn - 1) * mp.poch(t, rn - 1) / mp.ffact(rn - 1)
        zt = mp.zeta_tail(s + t + rn - 1.0, n_cut)
        zlt = mp.zeta_log_tail(s + t + rn - 1.0, n_cut)
        total.add(
            d
            * cmath.exp((1.0 - t - rn) * log_x)
            * (
                (mp.harmonic(rn - 1) - mp.digamma(t + rn - 1.0) + log_x) * zt
                + zlt
            )
        )
    kfac = 1.0
    trunc = tol
    small_run = 0
    for k in range(0, 41):
        if k > 0:
            kfac *= k
        if rn is not None and k == rn - 1:
            continue
        term = (
            mp.neg_one_pow(k)
            / kfac
            * mp.zeta(r - k)
            * mp.poch(t, k)
            * cmath.exp(-(t + k) * log_x)
            * mp.zeta_tail(s + t + k, n_cut)
        )
        total.add(term)
        trunc = abs(term)
        if trunc < tol * 0.05:
            small_run += 1
            if small_run >= 2:
                break
        else:
            small_run = 0
    else:
        raise ConvergenceError(
            f"outer-tail expansion did not reach tol={tol:.1e} within 40 terms "
            f"(increase direct_terms or x too small)"
        )
    return total.value, trunc


def _direct_impl(args: ThetaArgs, cfg: EvalConfig) -> tuple[complex, float]:
    r, s, t, x = args.r, args.s, args.t, args.x
    margin = RegionD.margin(r, s, t)
    if margin < 0.05:
        raise OutsideRegionError(
            f"(r,s,t) outside the convergence region (margin {margin:.3f} < 0.05)"
        )
    n_cut = max(cfg.direct_terms, 16, int(math.ceil(6.0 / x)))
    s_vals, inner_err = _inner_sums(r, t, x, n_cut, n_cut - 1, cfg)
    m = np.arange(1, n_cut, dtype=float)
    main = mp.CompensatedSum()
    weighted = _cpow(m, -s) * s_vals
    for term in weighted:
        main.add(complex(term))
    tail, tail_err = _outer_tail(r, s, t, x, n_cut, cfg.tol)
    value = main.value + tail
    err = inner_err + tail_err
    if err > max(cfg.tol, 1e-12):
        raise ConvergenceError(
            f"direct-engine error estimate {err:.2e} exceeds tol={cfg.tol:.1e}"
        )
    return mp.ensure_finite(value, "theta_direct"), err


def theta_direct(args: ThetaArgs, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Theta(r,s,t,x) by accelerated double summation inside the region."""
    return _direct_impl(args, cfg)[0]


# ---------------------------------------------------------------------------
# Herglotz-type and polygamma series primitives

_SERIES_Q = 8
_SERIES_LIFT = 12.0


def _m_split(x: float) -> int:
    return int(math.ceil(_SERIES_LIFT / x)) + 1


def herglotz_series(a: complex, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """sum_{m>=1} (gamma + psi(m x + 1))/m^a for Re(a) > 1.

    psi(mx+1) = log(mx) + 1/(2mx) - sum_q B_2q/(2q (mx)^2q) + ... ; below the
    split point the exact psi is used, above it each asymptotic piece is
    summed in closed form through tail zeta values (the log part via the
    log-weighted tail, i.e. the -zeta'(a) + log(x) zeta(a) mechanism)."""
    a = complex(a)
    if a.real <= 1.0 + 1e-9:
        raise DomainError(f"herglotz_series needs Re(a) > 1, got {a}")
    if not x > 0:
        raise DomainError("x must be positive")
    g = mp.euler_gamma()
    log_x = math.log(x)
    m0 = _m_split(x)
    total = mp.CompensatedSum()
    for m in range(1, m0):
        total.add((g + mp.digamma(complex(m * x + 1.0))) * cmath.exp(-a * math.log(m)))
    total.add((g + log_x) * mp.zeta_tail(a, m0))
    total.add(mp.zeta_log_tail(a, m0))
    total.add(mp.zeta_tail(a + 1.0, m0) / (2.0 * x))
    for q in range(1, _SERIES_Q + 1):
        total.add(-mp.bernoulli(2 * q) / (2 * q * x ** (2 * q)) * mp.zeta_tail(a + 2 * q, m0))
    return mp.ensure_finite(total.value, "herglotz_series")


def polygamma_series(k: int, b: complex, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """sum_{m>=1} psi^(k)(m x + 1)/m^b for k >= 1, Re(b) + k > 1."""
    b = complex(b)
    if k < 1:
        raise DomainError("polygamma_series needs k >= 1")
    if b.real + k <= 1.0 + 1e-9:
        raise DomainError(f"polygamma_series needs Re(b)+k > 1, got b={b}, k={k}")
    if not x > 0:
        raise DomainError("x must be positive")
    sign = mp.neg_one_pow(k - 1)
    m0 = _m_split(x)
    total = mp.CompensatedSum()
    for m in range(1, m0):
        total.add(mp.polygamma(k, complex(m * x + 1.0)) * cmath.exp(-b * math.log(m)))
    total.add(sign * mp.ffact(k - 1) / x**k * mp.zeta_tail(b + k, m0))
    total.add(-sign * mp.ffact(k) / (2.0 * x ** (k + 1)) * mp.zeta_tail(b + k + 1.0, m0))
    for q in range(1, _SERIES_Q + 1):
        total.add(
            sign
            * mp.bernoulli(2 * q)
            * mp.ffact(2 * q + k - 1)
            / (mp.ffact(2 * q) * x ** (2 * q + k))
            * mp.zeta_tail(b + 2 * q + k, m0)
        )
    return mp.ensure_finite(total.value, "polygamma_series")


def psi_minus_log_series(c: complex, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """sum_{m>=1} (psi(m x) - log(m x))/m^c for Re(c) > 0."""
    c = complex(c)
    if c.real <= 1e-9:
        raise DomainError(f"psi_minus_log_series needs Re(c) > 0, got {c}")
    if not x > 0:
        raise DomainError("x must be positive")
    m0 = _m_split(x)
    total = mp.CompensatedSum()
    for m in range(1, m0):
        y = m * x
        total.add((mp.digamma(complex(y)) - math.log(y)) * cmath.exp(-c * math.log(m)))
    total.add(-mp.zeta_tail(c + 1.0, m0) / (2.0 * x))
    for q in range(1, _SERIES_Q + 1):
        total.add(-mp.bernoulli(2 * q) / (2 * q * x ** (2 * q)) * mp.zeta_tail(c + 2 * q, m0))
    return mp.ensure_finite(total.value, "psi_minus_log_series")


def polygamma_reduced_series(
    k: int, c: complex, x: float, cfg: EvalConfig = DEFAULT_CONFIG
) -> complex:
    """sum_{m>=1} (psi^(k)(m x) - (-1)^{k-1} (k-1)! (m x)^{-k})/m^c,
    convergent for Re(c) + k > 0 (the leading asymptotic term is removed)."""
    c = complex(c)
    if k < 1:
        raise DomainError("polygamma_reduced_series needs k >= 1")
    if c.real + k <= 1e-9:
        raise DomainError(f"needs Re(c)+k > 0, got c={c}, k={k}")
    if not x > 0:
        raise DomainError("x must be positive")
    sign = mp.neg_one_pow(k - 1)
    m0 = _m_split(x)
    total = mp.CompensatedSum()
    for m in range(1, m0):
        y = m * x
        total.add(
            (mp.polygamma(k, complex(y)) - sign * mp.ffact(k - 1) / y**k)
            * cmath.exp(-c * math.log(m))
        )
    total.add(sign * mp.ffact(k) / (2.0 * x ** (k + 1)) * mp.zeta_tail(c + k + 1.0, m0))
    for q in range(1, _SERIES_Q + 1):
        total.add(
            sign
            * mp.bernoulli(2 * q)
            * mp.ffact(2 * q + k - 1)
            / (mp.ffact(2 * q) * x ** (2 * q + k))
            * mp.zeta_tail(c + 2 * q + k, m0)
        )
    return mp.ensure_finite(total.value, "polygamma_reduced_series")


# ---------------------------------------------------------------------------
# psi-series engine for non-negative integer (r, t)


def _psi_series_impl(r: int, s: complex, t: int, x: float, cfg: EvalConfig) -> complex:
    s = complex(s)
    log_x = math.log(x)
    total = mp.CompensatedSum()
    for i in range(0, r - 1):
        total.add(
            mp.neg_one_pow(i)
            * cmath.exp(-(t + i) * log_x)
            * mp.binom(i + t - 1, i)
            * mp.zeta(s + t + i)
            * mp.zeta(complex(r - i))
        )
    cb = mp.binom(r + t - 2, t - 1)
    if cb:
        total.add(
            -mp.neg_one_pow(r)
            * cmath.exp(-(r + t - 1.0) * log_x)
            * cb
            * herglotz_series(r + s + t - 1.0, x, cfg)
        )
    for j in range(0, t - 1):
        cj = mp.binom(j + r - 1, j)
        if not cj:
            continue
        total.add(
            mp.neg_one_pow(r)
            * cj
            * mp.neg_one_pow(t - j)
            / mp.ffact(t - j - 1)
            * cmath.exp(-(j + r) * log_x)
            * polygamma_series(t - j - 1, r + s + j, x, cfg)
        )
    return total.value


def _psi_series_r1_rearranged(s: complex, t: int, x: float, cfg: EvalConfig) -> complex:
    """Theta(1,s,t,x) written through zeta(s+t), zeta'(s+t) and the reduced
    series, convergent down to Re(s+t) > 0 (robust near the s = 1-t pole)."""
    s = complex(s)
    g = mp.euler_gamma()
    log_x = math.log(x)
    xt = cmath.exp(-t * log_x)
    total = mp.CompensatedSum()
    total.add(xt * (g + log_x + mp.harmonic(t - 1)) * mp.zeta(s + t))
    total.add(-xt * mp.zeta_deriv(s + t))
    total.add(t * mp.zeta(s + t + 1.0) * cmath.exp(-(t + 1.0) * log_x))
    total.add(xt * psi_minus_log_series(s + t, x, cfg))
    for j in range(0, t - 1):
        k = t - j - 1
        total.add(
            -mp.neg_one_pow(t - j)
            / mp.ffact(t - j - 1)
            * cmath.exp(-(j + 1.0) * log_x)
            * polygamma_reduced_series(k, s + j + 1.0, x, cfg)
        )
    return total.value


def theta_psi_series(
    r: int, s: complex, t: int, x: float, cfg: EvalConfig = DEFAULT_CONFIG
) -> complex:
    """Theta(r,s,t,x) via the partial-fraction series evaluation, for
    r, t non-negative integers with r + t >= 1 and Re(s) > 2 - r - t."""
    if r < 0 or t < 0 or r + t < 1:
        raise DomainError("theta_psi_series needs integers r,t >= 0 with r+t >= 1")
    s = complex(s)
    if s.real <= 2.0 - r - t + 1e-9:
        raise DomainError(f"theta_psi_series needs Re(s) > {2 - r - t}, got {s}")
    if r == 1 and (s + t).real < 1.5:
        value = _psi_series_r1_rearranged(s, t, x, cfg)
    else:
        value = _psi_series_impl(r, s, t, x, cfg)
    return mp.ensure_finite(value, "theta_psi_series")


# ---------------------------------------------------------------------------
# dispatcher used by the CLI and the verification harness


def evaluate(args: ThetaArgs, cfg: EvalConfig = DEFAULT_CONFIG, method: str = "auto") -> EvalOutcome:
    warnings: list[str] = []
    if method == "auto":
        method = "direct" if RegionD.margin(args.r, args.s, args.t) >= 0.05 else "integral"
        warnings.append(f"auto-selected method '{method}'")
    if method == "direct":
        value, err = _direct_impl(args, cfg)
    elif method == "integral":
        value, err = _continued_impl(args.r, args.s, args.t, args.x, cfg)
    elif method == "psi":
        rr, tt = args.r, args.t
        if not (mp.is_near_int(rr, 1e-12) and mp.is_near_int(tt, 1e-12)):
            raise DomainError("psi method needs integer r and t")
        value = theta_psi_series(round(rr.real), args.s, round(tt.real), args.x, cfg)
        err = 10.0 * cfg.tol
    elif method == "diag":
        if abs(args.r - args.s) > 1e-12 or abs(args.r - args.t) > 1e-12:
            raise DomainError("diag method needs r = s = t")
        value = theta_diag_continued(args.r, args.x, cfg)
        err = 10.0 * cfg.tol
    else:
        raise DomainError(f"unknown method {method!r}")
    return EvalOutcome(value=value, err_est=err, method=method, warnings=tuple(warnings))

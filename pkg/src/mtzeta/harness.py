"""Cross-validation machinery: numerical Laurent fitting and check suites.

``laurent_fit`` extracts Laurent coefficients of a function from samples at
small real offsets off the expansion center (two-sided by default, which
separates even and odd orders and roughly squares the attainable accuracy);
it is the numerical oracle set against every closed-form expansion.

``run_suite`` executes a fixed, data-driven catalog of identity checks and
returns a structured report.  Catalog entries are data (suite, name, runner),
so new checks append without touching the runner; two runs with the same
configuration produce identical result tables.
"""

from __future__ import annotations

import datetime as _dt
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import laurent as la
from . import mpfun as mp
from .errors import DomainError, IllConditionedError, UnknownSuiteError
from .identities import (
    IdentityResult,
    func_eq_residuals,
    mixed_func_eq_residual,
    new_identity_residual,
    partial_fraction_residual,
)
from .theta_eval import (
    DEFAULT_CONFIG,
    EvalConfig,
    ThetaArgs,
    theta_continued_t,
    theta_diag_continued,
    theta_direct,
    theta_psi_series,
)

DEFAULT_OFFSETS = tuple(4e-2 * 0.75**k for k in range(8))


@dataclass(frozen=True)
class LaurentFit:
    center: complex
    fitted: dict[int, complex]
    offsets_used: tuple[float, ...]
    est_error: float


def _poly_solve(xs: np.ndarray, ys: np.ndarray, n_orders: int, scale: float) -> np.ndarray:
    a = np.vander(xs / scale, n_orders, increasing=True)
    coef, res, rank, _ = np.linalg.lstsq(a, ys, rcond=None)
    if rank < n_orders:
        raise IllConditionedError("Laurent-fit system is rank deficient")
    return coef / scale ** np.arange(n_orders)


def laurent_fit(
    f,
    center: complex,
    min_order: int,
    offsets=None,
    two_sided: bool = True,
) -> LaurentFit:
    """Fit Laurent coefficients of orders min_order..0 of f around center.

    f is sampled at center + eps (and center - eps unless two_sided=False)
    for the positive real offsets; the over-determined Vandermonde system is
    solved for a few orders beyond 0 to absorb the regular remainder, and
    est_error is a jackknife estimate (refit without the largest offset).
    One-sided mode is for functions only evaluable on one side of center
    (e.g. at the edge of a convergence half-plane)."""
    if min_order not in (-2, -1, 0):
        raise DomainError("min_order must be -2, -1 or 0")
    offsets = tuple(float(e) for e in (DEFAULT_OFFSETS if offsets is None else offsets))
    if any(e2 >= e1 for e1, e2 in zip(offsets, offsets[1:])):
        raise DomainError("offsets must be strictly decreasing")
    if offsets[-1] <= 1e-4:
        raise DomainError("offsets must stay above 1e-4 (cancellation floor)")
    n_fit = 1 - min_order
    if len(offsets) < n_fit + 1:
        raise DomainError("need at least (orders fitted) + 1 offsets")
    eps = np.array(offsets)
    center = complex(center)

    def solve(e: np.ndarray) -> dict[int, complex]:
        fp = np.array([f(center + ee) for ee in e], complex)
        if two_sided:
            fm = np.array([f(center - ee) for ee in e], complex)
            even = 0.5 * (fp + fm) * e**2  # c_-2 + c_0 e^2 + c_2 e^4 + ...
            odd = 0.5 * (fp - fm) * e  # c_-1 + c_1 e^2 + c_3 e^4 + ...
            n_orders = len(e) - 2
            ce = _poly_solve(e**2, even, n_orders, float(e[0]) ** 2)
            co = _poly_solve(e**2, odd, n_orders, float(e[0]) ** 2)
            full = {-2: ce[0], 0: ce[1], -1: co[0]}
        else:
            g = np.array([f(center + ee) for ee in e], complex) * e ** (-min_order)
            n_orders = len(e) - 1
            coef = _poly_solve(e, g, n_orders, float(e[0]))
            full = {min_order + k: coef[k] for k in range(n_orders)}
        return {k: v for k, v in full.items() if min_order <= k <= 0}

    fit_all = solve(eps)
    fit_jack = solve(eps[1:])
    est = max(abs(fit_all[k] - fit_jack.get(k, fit_all[k])) for k in fit_all)
    return LaurentFit(
        center=center,
        fitted=fit_all,
        offsets_used=offsets,
        est_error=float(est),
    )


# ---------------------------------------------------------------------------
# verification report


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    results: tuple[IdentityResult, ...]
    started: float
    finished: float
    config: EvalConfig

    @property
    def n_pass(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def n_fail(self) -> int:
        return len(self.results) - self.n_pass

    def all_passed(self) -> bool:
        return self.n_fail == 0

    def table(self) -> str:
        lines = [f"{'suite':14s} {'check':42s} {'residual':>12s} {'tol':>9s} pass"]
        for r in self.results:
            suite, _, name = r.name.partition("/")
            lines.append(
                f"{suite:14s} {name:42s} {r.residual:12.3e} {r.tolerance:9.1e} "
                f"{'ok' if r.passed else 'FAIL'}"
            )
        lines.append(f"passed {self.n_pass}/{len(self.results)}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "started": _dt.datetime.fromtimestamp(
                self.started, _dt.timezone.utc
            ).isoformat(),
            "finished": _dt.datetime.fromtimestamp(
                self.finished, _dt.timezone.utc
            ).isoformat(),
            "config": {
                "direct_terms": self.config.direct_terms,
                "em_order": self.config.em_order,
                "quad_points": self.config.quad_points,
                "M": self.config.M,
                "tol": self.config.tol,
            },
            "n_pass": self.n_pass,
            "n_fail": self.n_fail,
            "results": [r.as_row() for r in self.results],
        }


# ---------------------------------------------------------------------------
# the check catalog (data, not code)

SUITE_NAMES = (
    "functional",
    "partial-fraction",
    "mixed",
    "klf-t",
    "klf-s",
    "special-values",
    "residues",
)

_FUNCTIONAL_X = (0.3, 1.0, 2.7)
_FUNCTIONAL_POINTS = 50
_FUNCTIONAL_SEED = 20240811

_PRINTED_L1 = {
    0: lambda x: (1 + 6 * x + x * x) / (24 * x),
    2: lambda x: (-1 + 2 * x**4 - x**8) / (14400 * x**3),
    4: lambda x: (1 - x**6 - x**8 + x**14) / (15120 * x**5),
    6: lambda x: (
        -174611 + 83611 * x**8 + 182000 * x**10 + 83611 * x**12 - 174611 * x**20
    )
    / (158558400 * x**7),
}
_PRINTED_L2 = {
    0: lambda x: (2 + 6 * x + 2 * x * x) / (24 * x),
    2: lambda x: (-2 + 2 * x**4 - 2 * x**8) / (14400 * x**3),
    4: lambda x: (2 - x**6 - x**8 + 2 * x**14) / (15120 * x**5),
    6: lambda x: (
        -349222 + 83611 * x**8 + 182000 * x**10 + 83611 * x**12 - 349222 * x**20
    )
    / (158558400 * x**7),
}
_SV_X = (0.5, 1.0, 2.0)

# (r, s, ell): spans all four cases of both third-variable theorems
KLF_T_CATALOG = (
    (-2, 5.0, 3),
    (-1, 2.5, 2),
    (0, 2.5, 1),
    (-3, 7.0, 4),
    (-2, 4.0, 3),
    (0, 2.0, 1),
    (-1, -2.0, 3),
    (-2, -1.0, 4),
    (-2, 1.0, 4),
    (-1, 2.0, 4),
    (2, 3.7, 1),
    (1, 4.0, 2),
    (3, 0.5, 0),
    (2, -2.0, 1),
    (1, 0.0, 2),
    (2, 2.0, 2),
    (3, 1.0, 1),
    (2, 3.0, 2),
    (1, 1.0, 0),
    (2, 2.0, 1),
)
KLF_T_SUM_CATALOG = ((0.5, 1.5), (2.5, 0.5))
KLF_T_X = 1.3

KLF_S_CATALOG = ((2, 1), (3, 0), (1, 2))
KLF_S_X = (1.0, 2.0)


def _in_region_points() -> list[tuple[complex, complex, complex]]:
    rng = random.Random(_FUNCTIONAL_SEED)
    pts = []
    while len(pts) < _FUNCTIONAL_POINTS:
        a = rng.uniform(0.3, 2.2)
        b = rng.uniform(0.3, 2.2)
        c = rng.uniform(0.3, 2.2)
        if min(a + c - 1.0, b + c - 1.0, a + b + c - 2.0) < 0.35:
            continue
        im = rng.uniform(-0.3, 0.3)
        pts.append((complex(a, im), complex(b, -im), complex(c, im / 2.0)))
    return pts


def _result(name: str, lhs: complex, rhs: complex, tol: float) -> IdentityResult:
    lhs, rhs = complex(lhs), complex(rhs)
    return IdentityResult(name=name, lhs=lhs, rhs=rhs, residual=abs(lhs - rhs), tolerance=tol)


def _checks_functional(cfg: EvalConfig) -> list[IdentityResult]:
    out = []
    pts = _in_region_points()
    for x in _FUNCTIONAL_X:
        worst = {"split": None, "inversion": None}
        for (r, s, t) in pts:
            for res in func_eq_residuals(ThetaArgs(r, s, t, x), cfg):
                w = worst[res.name]
                if w is None or res.residual > w.residual:
                    worst[res.name] = res
        for eq in ("split", "inversion"):
            w = worst[eq]
            out.append(
                IdentityResult(
                    name=f"functional/{eq}-worst-of-{len(pts)}-x{x}",
                    lhs=w.lhs,
                    rhs=w.rhs,
                    residual=w.residual,
                    tolerance=1e-8,
                )
            )
    return out


def _checks_partial_fraction(cfg: EvalConfig) -> list[IdentityResult]:
    rng = random.Random(_FUNCTIONAL_SEED + 1)
    out = []
    for w in range(1, 13):
        worst = 0.0
        for r in range(0, w + 1):
            t = w - r
            for _ in range(25):
                n = Fraction(rng.randint(1, 500), rng.randint(1, 500))
                y = Fraction(rng.randint(1, 500), rng.randint(1, 500))
                resid = partial_fraction_residual(r, t, n, y)
                worst = max(worst, abs(float(resid)))
                if resid != 0:
                    worst = max(worst, 1.0)  # exactness violated
        out.append(
            IdentityResult(
                name=f"partial-fraction/weight-{w}-exact",
                lhs=0.0,
                rhs=worst,
                residual=worst,
                tolerance=0.0,
            )
        )
    return out


def _checks_mixed(cfg: EvalConfig) -> list[IdentityResult]:
    out = []
    for r in (1, 2, 3):
        for t in (1, 2, 3):
            if r + t < 2:
                continue
            worst = max(mixed_func_eq_residual(r, t, x, cfg) for x in (0.5, 0.8, 2.0, 3.7))
            out.append(
                IdentityResult(
                    name=f"mixed/func-eq-r{r}-t{t}",
                    lhs=worst,
                    rhs=0.0,
                    residual=worst,
                    tolerance=1e-9,
                )
            )
    for x in (0.5, 1.0, 2.0):
        res = new_identity_residual(x, cfg)
        out.append(
            IdentityResult(
                name=f"mixed/new-identity-x{x}",
                lhs=res,
                rhs=0.0,
                residual=res,
                tolerance=1e-9,
            )
        )
    for t in (0.0, 0.5):
        for x in (1.0, 2.0):
            lhs = theta_direct(ThetaArgs(2, 2, t, x), cfg)
            rhs = (
                theta_direct(ThetaArgs(0, 2, t + 2, x), cfg)
                + 2 * x * theta_direct(ThetaArgs(1, 1, t + 2, x), cfg)
                + x * x * theta_direct(ThetaArgs(2, 0, t + 2, x), cfg)
            )
            out.append(_result(f"mixed/remark-split-t{t}-x{x}", lhs, rhs, 1e-8))
    return out


def _fit_vs_series(
    name: str,
    f,
    series: la.LaurentSeries,
    cfg: EvalConfig,
    tol_singular: float = 1e-6,
    tol_const: float = 1e-5,
    two_sided: bool = True,
) -> list[IdentityResult]:
    mo = min(series.coeffs.keys())
    fit = laurent_fit(f, series.center, mo if mo < 0 else -1, two_sided=two_sided)
    out = []
    for k in sorted(series.coeffs):
        tol = tol_const if k == 0 else tol_singular
        out.append(_result(f"{name}-c{k}", fit.fitted.get(k, 0.0), series.coeff(k), tol))
    # orders absent from the closed form must fit to ~zero as well
    for k in fit.fitted:
        if k not in series.coeffs and k < 0:
            out.append(_result(f"{name}-c{k}", fit.fitted[k], 0.0, tol_singular))
    return out


def _checks_klf_t(cfg: EvalConfig) -> list[IdentityResult]:
    out = []
    x = KLF_T_X
    for (r, s, ell) in KLF_T_CATALOG:
        series = la.klf_t(r, s, ell, x)
        tag = la.classify_case(r, s, ell)

        def f(t, r=r, s=s):
            return theta_continued_t(ThetaArgs(r, s, t, x), cfg)

        label = f"klf-t/r{r}-s{s}-l{ell}-{tag.theorem.value}-{tag.case_id.value}"
        out.extend(_fit_vs_series(label, f, series, cfg))
    for (r, s) in KLF_T_SUM_CATALOG:
        series = la.klf_t_sum(r, s, x)

        def f(t, r=r, s=s):
            return theta_continued_t(ThetaArgs(r, s, t, x), cfg)

        out.extend(_fit_vs_series(f"klf-t/sum-r{r}-s{s}", f, series, cfg))
    return out


def _checks_klf_s(cfg: EvalConfig) -> list[IdentityResult]:
    out = []
    g = mp.euler_gamma()
    series = la.klf_s(1, 1, 1.0, cfg)
    out.append(_result("klf-s/closed-1-1-c-2", series.coeff(-2), 1.0, 1e-10))
    out.append(_result("klf-s/closed-1-1-c-1", series.coeff(-1), g, 1e-10))
    out.append(
        _result("klf-s/closed-1-1-c0", series.coeff(0), (6 * g * g + math.pi**2) / 12.0, 1e-10)
    )
    for (r, t) in KLF_S_CATALOG:
        for x in KLF_S_X:
            series = la.klf_s(r, t, x, cfg)

            def f(s, r=r, t=t, x=x):
                return theta_psi_series(r, s, t, x, cfg)

            # Theta(r, s, t, x) through the psi-series engine only converges
            # for Re(s) > 2 - r - t, so r = 1 pins the fit to one side
            out.extend(
                _fit_vs_series(
                    f"klf-s/r{r}-t{t}-x{x}",
                    f,
                    series,
                    cfg,
                    tol_singular=1e-5,
                    tol_const=1e-5,
                    two_sided=(r >= 2),
                )
            )
    return out


def _checks_special_values(cfg: EvalConfig) -> list[IdentityResult]:
    out = []
    for j, printed in _PRINTED_L1.items():
        for x in _SV_X:
            out.append(
                _result(
                    f"special-values/L1-j{j}-x{x}",
                    la.diag_special_value(j, x),
                    printed(x),
                    1e-12,
                )
            )
    for j, printed in _PRINTED_L2.items():
        for x in _SV_X:
            out.append(
                _result(
                    f"special-values/L2-j{j}-x{x}",
                    la.diag_special_value_L2(j, x),
                    printed(x),
                    1e-12,
                )
            )
    for j in (1, 3, 5, 7, 9):
        worst = max(abs(la.diag_special_value(j, x)) for x in _SV_X)
        out.append(
            IdentityResult(
                name=f"special-values/L1-zero-j{j}",
                lhs=worst,
                rhs=0.0,
                residual=worst,
                tolerance=1e-12,
            )
        )
    for j in (2, 4, 6):
        lhs = mp.ffact(j) / mp.ffact(2 * j + 1) * mp.zeta(complex(-3 * j - 1))
        rhs = sum(
            mp.zeta(complex(-i - j)) * mp.zeta(complex(i - 2 * j))
            / (mp.ffact(i) * mp.ffact(j - i))
            for i in range(j + 1)
        )
        out.append(_result(f"special-values/romik-recursion-j{j}", lhs, rhs, 1e-12))
        out.append(
            _result(f"special-values/L1-zero-at-1-j{j}", la.diag_special_value(j, 1.0), 0.0, 1e-12)
        )
    # extrapolation of the diagonal engine onto the closed L1 values
    for j in (0, 2, 4, 6):
        for x in _SV_X:
            fit = laurent_fit(
                lambda s, x=x: theta_diag_continued(s, x, cfg),
                complex(-j),
                -1,
                offsets=(2e-2, 1.4e-2, 1e-2, 7e-3, 5e-3, 3.5e-3, 2.5e-3),
            )
            out.append(
                _result(
                    f"special-values/L1-extrapolated-j{j}-x{x}",
                    fit.fitted[0],
                    la.diag_special_value(j, x),
                    1e-5,
                )
            )
    out.append(
        _result(
            "special-values/mordell-1-1-1",
            theta_direct(ThetaArgs(1, 1, 1, 1.0), cfg),
            2.0 * mp.zeta(3.0 + 0.0j),
            1e-9,
        )
    )
    out.append(
        _result(
            "special-values/mordell-2-2-2",
            theta_direct(ThetaArgs(2, 2, 2, 1.0), cfg),
            math.pi**6 / 2835.0,
            1e-9,
        )
    )
    return out


def _checks_residues(cfg: EvalConfig) -> list[IdentityResult]:
    out = []
    sing1 = la.diag_singularities(3, 1.0)
    out.append(
        _result(
            "residues/pole-2/3-closed-x1",
            sing1[0].residue,
            mp.gamma(1.0 / 3.0) ** 3 / (2.0 * math.pi * math.sqrt(3.0)),
            1e-12,
        )
    )
    for x in (1.0, 2.0):
        sing = la.diag_singularities(3, x)
        for entry in sing:
            fit = laurent_fit(
                lambda s, x=x: theta_diag_continued(s, x, cfg),
                entry.location,
                -1,
                offsets=(2e-2, 1.4e-2, 1e-2, 7e-3, 5e-3, 3.5e-3, 2.5e-3),
            )
            loc = f"{entry.location.real:+.3f}"
            out.append(
                _result(f"residues/pole{loc}-x{x}", fit.fitted[-1], entry.residue, 1e-5)
            )
    return out


_CATALOG = {
    "functional": _checks_functional,
    "partial-fraction": _checks_partial_fraction,
    "mixed": _checks_mixed,
    "klf-t": _checks_klf_t,
    "klf-s": _checks_klf_s,
    "special-values": _checks_special_values,
    "residues": _checks_residues,
}


def run_suite(name: str, cfg: EvalConfig = DEFAULT_CONFIG) -> VerificationReport:
    """Execute a named check suite (or "all") and return the report."""
    if name != "all" and name not in _CATALOG:
        raise UnknownSuiteError(
            f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or 'all'"
        )
    started = time.time()
    results: list[IdentityResult] = []
    suites = SUITE_NAMES if name == "all" else (name,)
    for suite in suites:
        results.extend(_CATALOG[suite](cfg))
    return VerificationReport(
        suite=name,
        results=tuple(results),
        started=started,
        finished=time.time(),
        config=cfg,
    )

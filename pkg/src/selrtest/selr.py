"""Sieve empirical likelihood ratio statistics and their calibration.

Three statistics are provided: a goodness-of-fit statistic for the
estimating-equation constraints, a statistic against a simple null on the
coefficient functions, and a statistic against a composite null that pins
only some coefficients.  Each is a sum of local empirical-likelihood terms
over the observed index points inside the testing interval.  Calibration
is by a rescaled chi-squared law with fractional degrees of freedom
proportional to |Omega| / h, or by a null-simulation bootstrap.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import gamma as gamma_dist

from . import streams
from .errors import (
    ConfigError,
    DegenerateTestWarning,
    EmptyWindow,
    Infeasible,
    MaxIterations,
    NumericalError,
    ReplicateFailureWarning,
    SingularDesign,
)
from .estfun import EstimatingFunction
from .kernels import Kernel, kernel_constants
from .local_el import (
    Dataset,
    LocalParameter,
    _design,
    fit_local,
    fit_local_constrained,
    lls_init,
    local_weights,
    solve_lagrange,
)

__all__ = [
    "CoefFn",
    "zero_coef",
    "const_coef",
    "ParametricFamily",
    "Hypothesis",
    "TestCalibration",
    "TestResult",
    "BandwidthSelection",
    "sel_entropy",
    "sel_full",
    "selr_gof",
    "selr_simple",
    "selr_composite",
    "selr_test",
    "asymptotic_pvalue",
    "bootstrap_null",
    "select_bandwidth",
    "bias_correct",
]


@dataclass(frozen=True)
class CoefFn:
    """A coefficient function u -> a(u) together with its derivative."""

    value: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]


def zero_coef() -> CoefFn:
    return CoefFn(lambda u: np.zeros_like(u), lambda u: np.zeros_like(u))


def const_coef(c: float) -> CoefFn:
    return CoefFn(lambda u: np.full_like(u, float(c)), lambda u: np.zeros_like(u))


@dataclass(frozen=True)
class ParametricFamily:
    """Map (u, theta) -> (n, p) coefficient matrix, smooth in theta."""

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    theta_dim: int


@dataclass(frozen=True)
class Hypothesis:
    kind: str
    a0: tuple[CoefFn, ...] | None = None
    a10: tuple[CoefFn, ...] | None = None
    fixed_idx: tuple[int, ...] | None = None
    family: ParametricFamily | None = None
    theta_init: tuple[float, ...] | None = None
    omega: tuple[float, float] | None = None
    no_estimated_coefficients: bool = False

    def __post_init__(self):
        if self.omega is not None:
            lo, hi = self.omega
            if not lo < hi:
                raise ConfigError("omega must be a nondegenerate interval")
        if self.kind == "composite_null":
            if not self.a10 or not self.fixed_idx:
                raise ConfigError("composite_null needs a10 and fixed_idx")
            if len(self.a10) != len(self.fixed_idx):
                raise ConfigError("a10 must match fixed_idx in length")

    @classmethod
    def goodness_of_fit(cls, omega=None, no_estimated_coefficients=False):
        return cls(
            "goodness_of_fit",
            omega=omega,
            no_estimated_coefficients=no_estimated_coefficients,
        )

    @classmethod
    def simple(cls, a0: Sequence[CoefFn], omega=None):
        return cls("simple_null", a0=tuple(a0), omega=omega)

    @classmethod
    def composite(cls, a10: Sequence[CoefFn], fixed_idx, omega=None):
        return cls(
            "composite_null",
            a10=tuple(a10),
            fixed_idx=tuple(int(i) for i in fixed_idx),
            omega=omega,
        )

    @classmethod
    def parametric(cls, family: ParametricFamily, theta_init, omega=None):
        return cls(
            "parametric_null",
            family=family,
            theta_init=tuple(float(t) for t in theta_init),
            omega=omega,
        )


@dataclass(frozen=True)
class TestCalibration:
    r_K: float
    df: float
    omega_len: float
    h: float
    kind: str
    k0_factor_note: str = ""


@dataclass
class TestResult:
    statistic: float
    scaled: float
    df: float
    p_asymptotic: float
    calibration: TestCalibration
    kernel: str
    h: float
    hypothesis: str
    r_K: float
    c_K: float
    p_bootstrap: float | None = None
    B: int | None = None
    n_infeasible_points: int = 0
    n_clamped: int = 0
    per_point: list | None = None

    def to_dict(self) -> dict:
        def _num(v):
            if v is None:
                return None
            v = float(v)
            return v if np.isfinite(v) else None

        return {
            "hypothesis": self.hypothesis,
            "kernel": self.kernel,
            "h": self.h,
            "statistic": _num(self.statistic),
            "scaled": _num(self.scaled),
            "df": _num(self.df),
            "r_K": _num(self.r_K),
            "c_K": _num(self.c_K),
            "p_asymptotic": _num(self.p_asymptotic),
            "p_bootstrap": _num(self.p_bootstrap),
            "B": self.B,
            "n_skipped": self.n_infeasible_points,
            "per_point": self.per_point or [],
        }


# ---------------------------------------------------------------------------
# evaluation-point machinery


def _resolve_omega(data: Dataset, omega) -> tuple[float, float]:
    if omega is None:
        return float(data.u.min()), float(data.u.max())
    return float(omega[0]), float(omega[1])


def _eval_points(data: Dataset, omega) -> np.ndarray:
    lo, hi = omega
    idx = np.nonzero((data.u >= lo) & (data.u <= hi))[0]
    if len(idx) == 0:
        raise ConfigError("no observation inside the testing interval")
    return idx


def _window(data: Dataset, kernel: Kernel, h: float, u0: float):
    """Active indices, normalized weights and local design of one window."""
    raw = np.atleast_1d(kernel((data.u - u0) / h))
    total = raw.sum()
    if total <= 0:
        raise EmptyWindow(f"no observation within [{u0 - h}, {u0 + h}]")
    active = np.nonzero(raw > 0)[0]
    wa = raw[active] / total
    z = _design(data, active, u0, h)
    return active, wa, z


def _null_term(data, kernel, h, u0, g, beta0_vec):
    """sum_i w_i log(1 + alpha' G_i) at the fixed parameter beta0."""
    active, wa, z = _window(data, kernel, h, u0)
    resid = data.y[active] - z @ beta0_vec
    gvals = g.batch(resid)
    moments = (gvals[:, :, None] * z[:, None, :]).reshape(len(active), -1)
    alpha = solve_lagrange(moments, wa)
    return float(wa @ np.log1p(moments @ alpha))


def sel_entropy(data: Dataset, kernel: Kernel, h: float, omega=None) -> float:
    """Saturated-model term: double sum of w log w over all windows."""
    omega = _resolve_omega(data, omega)
    total = 0.0
    for j in _eval_points(data, omega):
        _, wa, _ = _window(data, kernel, h, data.u[j])
        total += float(np.sum(wa * np.log(wa)))
    return total


def _full_fits(data, kernel, h, g, omega, eval_idx=None):
    """Unconstrained local fits at each evaluation point, warm-started in
    sorted order; returns {j: LocalELFit or None}."""
    if eval_idx is None:
        eval_idx = _eval_points(data, omega)
    order = eval_idx[np.argsort(data.u[eval_idx])]
    fits: dict[int, object] = {}
    prev = None
    for j in order:
        u0 = float(data.u[j])
        fit = None
        # warm start from the neighboring window, falling back to the local
        # least-squares start when the carried parameter is infeasible here
        for init in ([prev, None] if prev is not None else [None]):
            try:
                fit = fit_local(data, kernel, h, u0, g, init=init)
                break
            except (Infeasible, MaxIterations, SingularDesign, EmptyWindow):
                continue
        fits[j] = fit
        if fit is not None:
            prev = fit.beta
    return fits


def sel_full(data: Dataset, kernel: Kernel, h: float, g: EstimatingFunction, omega=None) -> float:
    """Sum of maximized local log-EL values over the evaluation points."""
    omega = _resolve_omega(data, omega)
    fits = _full_fits(data, kernel, h, g, omega)
    return float(sum(f.logel for f in fits.values() if f is not None))


def _calibration(kind, k0, p, p1, omega_len, h, kernel, retained_frac, no_est=False):
    consts = kernel_constants(kernel)
    if kind == "goodness_of_fit":
        factor = k0 if no_est else k0 - 1
        note = "k0" if no_est else "k0-1"
        dof = factor * p * omega_len * consts.c_K / h
    elif kind in ("simple_null", "parametric_null"):
        dof = p * omega_len * consts.c_K / h
        note = "p"
    elif kind == "composite_null":
        dof = p1 * omega_len * consts.c_K / h
        note = "p1"
    else:
        raise ConfigError(f"unknown hypothesis kind {kind!r}")
    dof *= retained_frac
    return TestCalibration(
        r_K=consts.r_K, df=dof, omega_len=omega_len, h=h, kind=kind, k0_factor_note=note
    ), consts


def asymptotic_pvalue(stat: float, cal: TestCalibration) -> float:
    """Upper chi-squared tail (gamma(df/2, 2)) of the rescaled statistic."""
    if cal.df <= 0:
        warnings.warn(
            "zero degrees of freedom: asymptotic p-value undefined",
            DegenerateTestWarning,
            stacklevel=2,
        )
        return float("nan")
    return float(gamma_dist.sf(cal.r_K * stat, a=cal.df / 2.0, scale=2.0))


def _result(stat, cal, consts, kernel, h, kind, n_skipped, n_clamped, per_point):
    scaled = cal.r_K * stat
    return TestResult(
        statistic=stat,
        scaled=scaled,
        df=cal.df,
        p_asymptotic=asymptotic_pvalue(stat, cal) if cal.df > 0 else float("nan"),
        calibration=cal,
        kernel=kernel.family,
        h=h,
        hypothesis=kind,
        r_K=cal.r_K,
        c_K=consts.c_K,
        n_infeasible_points=n_skipped,
        n_clamped=n_clamped,
        per_point=per_point,
    )


def selr_gof(
    data: Dataset,
    kernel: Kernel,
    h: float,
    g: EstimatingFunction,
    spec: Hypothesis,
    diagnostics: bool = False,
) -> TestResult:
    """Goodness-of-fit statistic for the estimating-equation constraints."""
    omega = _resolve_omega(data, spec.omega)
    eval_idx = _eval_points(data, omega)
    fits = _full_fits(data, kernel, h, g, omega, eval_idx)
    per_point = []
    stat = 0.0
    n_skipped = n_clamped = 0
    for j in eval_idx:
        fit = fits[j]
        if fit is None:
            n_skipped += 1
            per_point.append({"u0": float(data.u[j]), "contribution": None, "status": "skipped"})
            continue
        contrib = fit.entropy - fit.logel
        if contrib < 0:
            n_clamped += 1
        stat += contrib
        per_point.append({"u0": float(data.u[j]), "contribution": contrib, "status": fit.status})
    retained = 1.0 - n_skipped / len(eval_idx)
    cal, consts = _calibration(
        "goodness_of_fit",
        g.k0,
        data.p,
        None,
        omega[1] - omega[0],
        h,
        kernel,
        retained,
        no_est=spec.no_estimated_coefficients,
    )
    if cal.df <= 0:
        warnings.warn(
            "goodness-of-fit with a single constraint is degenerate (df = 0)",
            DegenerateTestWarning,
            stacklevel=2,
        )
    res = _result(stat, cal, consts, kernel, h, "goodness_of_fit", n_skipped, n_clamped,
                  per_point if diagnostics else None)
    return res


def _transform_simple(data: Dataset, a0: Sequence[CoefFn]) -> Dataset:
    """Shift the response so the simple null becomes `all coefficients zero`."""
    if len(a0) != data.p:
        raise ConfigError(f"a0 must supply {data.p} coefficient functions")
    shift = np.zeros(data.n)
    for k, fn in enumerate(a0):
        shift += np.asarray(fn.value(data.u), dtype=float) * data.x[:, k]
    return Dataset(data.u, data.x, data.y - shift)


def selr_simple(
    data: Dataset,
    kernel: Kernel,
    h: float,
    g: EstimatingFunction,
    spec: Hypothesis,
    include_full_term: bool | None = None,
    diagnostics: bool = False,
) -> TestResult:
    """Likelihood-ratio statistic against a simple null A = A0.

    The data are first shifted so the null becomes A* = 0 and the local
    linear fit is unbiased under it.  With a single constraint (k0 = 1)
    the unconstrained-fit term is asymptotically negligible and omitted
    unless ``include_full_term`` forces it back in.
    """
    if spec.a0 is None:
        raise ConfigError("simple_null needs coefficient functions a0")
    star = _transform_simple(data, spec.a0)
    omega = _resolve_omega(star, spec.omega)
    eval_idx = _eval_points(star, omega)
    if include_full_term is None:
        include_full_term = g.k0 > 1
    beta0 = np.zeros(2 * star.p)

    null_terms: dict[int, float | None] = {}
    for j in eval_idx:
        try:
            null_terms[j] = _null_term(star, kernel, h, float(star.u[j]), g, beta0)
        except (Infeasible, MaxIterations, EmptyWindow):
            null_terms[j] = None

    full_terms: dict[int, float | None] = {}
    if include_full_term:
        fits = _full_fits(star, kernel, h, g, omega, eval_idx)
        for j in eval_idx:
            f = fits[j]
            full_terms[j] = None if f is None else f.entropy - f.logel
    else:
        full_terms = {j: 0.0 for j in eval_idx}

    per_point = []
    stat = 0.0
    n_skipped = n_clamped = 0
    for j in eval_idx:
        nt, ft = null_terms[j], full_terms[j]
        if nt is None or ft is None:
            n_skipped += 1
            per_point.append({"u0": float(star.u[j]), "contribution": None, "status": "skipped"})
            continue
        contrib = nt - ft
        if contrib < 0:
            n_clamped += 1
        stat += contrib
        per_point.append({"u0": float(star.u[j]), "contribution": contrib, "status": "converged"})
    retained = 1.0 - n_skipped / len(eval_idx)
    cal, consts = _calibration(
        "simple_null", g.k0, star.p, None, omega[1] - omega[0], h, kernel, retained
    )
    return _result(stat, cal, consts, kernel, h, "simple_null", n_skipped, n_clamped,
                   per_point if diagnostics else None)


def selr_composite(
    data: Dataset,
    kernel: Kernel,
    h: float,
    g: EstimatingFunction,
    spec: Hypothesis,
    diagnostics: bool = False,
) -> TestResult:
    """Likelihood-ratio statistic against a composite null pinning A1 = A10."""
    if spec.a10 is None or spec.fixed_idx is None:
        raise ConfigError("composite_null needs a10 and fixed_idx")
    omega = _resolve_omega(data, spec.omega)
    eval_idx = _eval_points(data, omega)
    fixed_idx = np.asarray(spec.fixed_idx)
    p1 = len(fixed_idx)
    if not 1 <= p1 < data.p:
        raise ConfigError("composite null needs 1 <= p1 < p pinned coefficients")

    fits = _full_fits(data, kernel, h, g, omega, eval_idx)
    per_point = []
    stat = 0.0
    n_skipped = n_clamped = 0
    for j in eval_idx:
        u0 = float(data.u[j])
        full = fits[j]
        constrained = None
        if full is not None:
            uarr = np.array([u0])
            fixed_value = np.array([fn.value(uarr)[0] for fn in spec.a10])
            fixed_slope = np.array([fn.deriv(uarr)[0] for fn in spec.a10])
            try:
                constrained = fit_local_constrained(
                    data, kernel, h, u0, g, fixed_value, fixed_slope, fixed_idx,
                    init=full.beta,
                )
            except (Infeasible, MaxIterations, SingularDesign, EmptyWindow):
                constrained = None
        if full is None or constrained is None:
            n_skipped += 1
            per_point.append({"u0": u0, "contribution": None, "status": "skipped"})
            continue
        contrib = full.logel - constrained.logel
        if contrib < 0:
            n_clamped += 1
        stat += contrib
        per_point.append({"u0": u0, "contribution": contrib, "status": full.status})
    retained = 1.0 - n_skipped / len(eval_idx)
    cal, consts = _calibration(
        "composite_null", g.k0, data.p, p1, omega[1] - omega[0], h, kernel, retained
    )
    return _result(stat, cal, consts, kernel, h, "composite_null", n_skipped, n_clamped,
                   per_point if diagnostics else None)


def bias_correct(
    data: Dataset, family: ParametricFamily, theta_init
) -> tuple[np.ndarray, Dataset]:
    """Fit the parametric null by nonlinear least squares and shift it out.

    Returns the root-n-consistent estimate theta_hat and the transformed
    dataset whose null is `all coefficients zero`.
    """
    theta_init = np.atleast_1d(np.asarray(theta_init, dtype=float))
    if len(theta_init) != family.theta_dim:
        raise ConfigError("theta_init has wrong dimension")

    def fitted(theta):
        coefs = np.asarray(family.fn(data.u, theta), dtype=float)
        if coefs.ndim == 1:
            coefs = coefs[:, None]
        return np.sum(coefs * data.x, axis=1)

    res = least_squares(lambda th: data.y - fitted(th), theta_init, xtol=1e-12, ftol=1e-12)
    if not res.success:
        raise NumericalError(f"parametric null fit failed: {res.message}")
    theta_hat = res.x
    return theta_hat, Dataset(data.u, data.x, data.y - fitted(theta_hat))


def selr_test(
    data: Dataset,
    kernel: Kernel,
    h: float,
    g: EstimatingFunction,
    spec: Hypothesis,
    include_full_term: bool | None = None,
    diagnostics: bool = False,
) -> TestResult:
    """Dispatch on the hypothesis kind; parametric nulls are bias-corrected
    and reduced to a simple zero null."""
    if spec.kind == "goodness_of_fit":
        return selr_gof(data, kernel, h, g, spec, diagnostics=diagnostics)
    if spec.kind == "simple_null":
        return selr_simple(data, kernel, h, g, spec,
                           include_full_term=include_full_term, diagnostics=diagnostics)
    if spec.kind == "composite_null":
        return selr_composite(data, kernel, h, g, spec, diagnostics=diagnostics)
    if spec.kind == "parametric_null":
        _, star = bias_correct(data, spec.family, spec.theta_init)
        zero_spec = Hypothesis.simple([zero_coef()] * star.p, omega=spec.omega)
        res = selr_simple(star, kernel, h, g, zero_spec,
                          include_full_term=include_full_term, diagnostics=diagnostics)
        res.hypothesis = "parametric_null"
        return res
    raise ConfigError(f"unknown hypothesis kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# bootstrap calibration


def _null_fitted_values(data: Dataset, kernel: Kernel, h: float, spec: Hypothesis) -> np.ndarray:
    """Regression function fixed under the null, used to generate replicates."""
    if spec.kind == "simple_null":
        shift = np.zeros(data.n)
        for k, fn in enumerate(spec.a0):
            shift += np.asarray(fn.value(data.u), dtype=float) * data.x[:, k]
        return shift
    if spec.kind == "parametric_null":
        theta_hat, _ = bias_correct(data, spec.family, spec.theta_init)
        coefs = np.asarray(spec.family.fn(data.u, theta_hat), dtype=float)
        if coefs.ndim == 1:
            coefs = coefs[:, None]
        return np.sum(coefs * data.x, axis=1)
    if spec.kind == "composite_null":
        fixed_idx = np.asarray(spec.fixed_idx)
        pinned = np.zeros(data.n)
        for fn, k in zip(spec.a10, fixed_idx):
            pinned += np.asarray(fn.value(data.u), dtype=float) * data.x[:, k]
        free_mask = np.ones(data.p, dtype=bool)
        free_mask[fixed_idx] = False
        reduced = Dataset(data.u, data.x[:, free_mask], data.y - pinned)
        return pinned + _local_linear_fitted(reduced, kernel, h)
    # goodness_of_fit: nuisance coefficients fixed at their local linear fit
    return _local_linear_fitted(data, kernel, h)


def _local_linear_fitted(data: Dataset, kernel: Kernel, h: float) -> np.ndarray:
    fitted = np.empty(data.n)
    for i in range(data.n):
        beta = lls_init(data, kernel, h, float(data.u[i]))
        fitted[i] = data.x[i] @ beta.a
    return fitted


def _sigma2_hat(data: Dataset, kernel: Kernel, h: float, resid: np.ndarray) -> np.ndarray:
    """Kernel estimate of the conditional variance of the null residuals."""
    sigma2 = np.empty(data.n)
    sq = resid**2
    for i in range(data.n):
        lw = local_weights(data, kernel, h, float(data.u[i]))
        sigma2[i] = float(lw.w @ sq)
    return np.maximum(sigma2, 1e-12)


def _replicate_errors(resid, sigma2, scheme, gen):
    n = len(resid)
    if scheme == "gaussian":
        return np.sqrt(sigma2) * streams.standard_normal(gen, n)
    if scheme == "wild":
        return resid * streams.rademacher(gen, n)
    if scheme == "resample":
        return resid[gen.integers(0, n, size=n)]
    raise ConfigError(f"unknown bootstrap scheme {scheme!r}")


def bootstrap_null(
    data: Dataset,
    kernel: Kernel,
    h: float,
    g: EstimatingFunction,
    spec: Hypothesis,
    B: int,
    scheme: str = "gaussian",
    seed: int = 0,
    include_full_term: bool | None = None,
    observed: float | None = None,
) -> tuple[np.ndarray, float]:
    """Simulate the null distribution of the statistic and return a p-value.

    Replicates regenerate the response from the null regression function
    plus errors drawn per ``scheme``; p = (1 + #{replicate >= observed})
    / (#successes + 1).
    """
    if B < 1:
        raise ConfigError("need at least one bootstrap replicate")
    if observed is None:
        observed = selr_test(data, kernel, h, g, spec,
                             include_full_term=include_full_term).statistic
    m = _null_fitted_values(data, kernel, h, spec)
    resid = data.y - m
    sigma2 = _sigma2_hat(data, kernel, h, resid) if scheme == "gaussian" else None

    sample = []
    failures = 0
    for b in range(B):
        gen = streams.substream(seed, b)
        errs = _replicate_errors(resid, sigma2, scheme, gen)
        rep = Dataset(data.u, data.x, m + errs)
        try:
            sample.append(
                selr_test(rep, kernel, h, g, spec,
                          include_full_term=include_full_term).statistic
            )
        except NumericalError:
            failures += 1
    if failures > 0.05 * B:
        warnings.warn(
            f"{failures}/{B} bootstrap replicates failed",
            ReplicateFailureWarning,
            stacklevel=2,
        )
    if not sample:
        raise NumericalError("all bootstrap replicates failed")
    sample = np.asarray(sample)
    p = (1 + int(np.sum(sample >= observed))) / (len(sample) + 1)
    return sample, p


@dataclass(frozen=True)
class BandwidthSelection:
    h: float
    statistic: float
    per_h: dict
    p_bootstrap: float | None = None


def select_bandwidth(
    data: Dataset,
    kernel: Kernel,
    g: EstimatingFunction,
    spec: Hypothesis,
    h_grid: Sequence[float],
    B: int = 0,
    scheme: str = "gaussian",
    seed: int = 0,
) -> BandwidthSelection:
    """Multi-scale test: maximize the standardized statistic over a
    bandwidth grid; optional joint bootstrap calibration of the maximum."""
    h_grid = [float(h) for h in h_grid]
    if not h_grid:
        raise ConfigError("bandwidth grid is empty")

    def standardized(dset, h):
        res = selr_test(dset, kernel, h, g, spec)
        if res.df <= 0:
            raise ConfigError("bandwidth selection needs positive df")
        return (res.r_K * res.statistic - res.df) / np.sqrt(2.0 * res.df)

    per_h = {h: standardized(data, h) for h in h_grid}
    h_hat = max(per_h, key=per_h.get)
    observed = per_h[h_hat]

    p_boot = None
    if B > 0:
        h_ref = min(h_grid)
        m = _null_fitted_values(data, kernel, h_ref, spec)
        resid = data.y - m
        sigma2 = _sigma2_hat(data, kernel, h_ref, resid) if scheme == "gaussian" else None
        count = 0
        successes = 0
        for b in range(B):
            gen = streams.substream(seed, b)
            errs = _replicate_errors(resid, sigma2, scheme, gen)
            rep = Dataset(data.u, data.x, m + errs)
            try:
                rep_max = max(standardized(rep, h) for h in h_grid)
            except NumericalError:
                continue
            successes += 1
            if rep_max >= observed:
                count += 1
        if successes:
            p_boot = (1 + count) / (successes + 1)
    return BandwidthSelection(h=h_hat, statistic=observed, per_h=per_h, p_bootstrap=p_boot)

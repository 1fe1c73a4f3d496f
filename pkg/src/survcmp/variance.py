"""Variance estimation for the studentized Mann-Whitney effect.

The estimator's asymptotic variance decomposes into two terms, one per
group.  Each term integrates a covariance kernel of that group's
Kaplan-Meier process against the other group's Kaplan-Meier mass, with the
kernel normalized by averaging its four one-sided limits so that tied jump
points are weighted like mid-ranks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .survival import KaplanMeierFit, Sample, kaplan_meier

__all__ = [
    "CovKernel",
    "VarianceEstimate",
    "cov_kernel",
    "normalized_kernel_value",
    "sigma2_jk",
    "variance_estimate",
]


@dataclass(frozen=True)
class CovKernel:
    """Covariance kernel of one group's Kaplan-Meier process.

    The kernel is Gamma(u, v) = S(u) S(v) H(min(u, v)) where H cumulates
    dN(u) / ((1 - dN(u)/Y(u)) Y(u)^2) over the event times.  An event time
    with dN == Y (the curve drops to zero) contributes nothing to H; its
    variance contribution is carried entirely by the vanishing S factors.

    ``h_values`` holds the running sums of H at ``fit.counting.event_times``.
    """

    fit: KaplanMeierFit
    h_values: np.ndarray

    def __post_init__(self):
        self.h_values.setflags(write=False)

    def h(self, t):
        """H(t), right-continuous."""
        idx = np.searchsorted(self.fit.counting.event_times, t, side="right")
        padded = np.concatenate(([0.0], self.h_values))
        out = padded[idx]
        return float(out) if np.isscalar(t) else out

    def h_left(self, t):
        """H(t-)."""
        idx = np.searchsorted(self.fit.counting.event_times, t, side="left")
        padded = np.concatenate(([0.0], self.h_values))
        out = padded[idx]
        return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class VarianceEstimate:
    """Variance of the studentized effect, sigma2 = (n1 n2 / n) (s12 + s21)."""

    sigma2: float
    sigma2_12: float
    sigma2_21: float
    n1: int
    n2: int

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))


def cov_kernel(sample_or_fit) -> CovKernel:
    """Build the covariance kernel table for one sample.

    Accepts a :class:`Sample` or an existing :class:`KaplanMeierFit`.
    """
    fit = sample_or_fit if isinstance(sample_or_fit, KaplanMeierFit) else kaplan_meier(sample_or_fit)
    cp = fit.counting
    denom = (cp.y - cp.dn) * cp.y
    with np.errstate(divide="ignore", invalid="ignore"):
        increments = np.where(denom > 0, cp.dn / np.where(denom > 0, denom, 1), 0.0)
    return CovKernel(fit=fit, h_values=np.cumsum(increments))


def normalized_kernel_value(kernel: CovKernel, u: float, v: float) -> float:
    """Four-limit average of the kernel at (u, v).

    Returns (Gamma(u,v) + Gamma(u-,v) + Gamma(u,v-) + Gamma(u-,v-)) / 4,
    where the left limits apply jointly to the survival factors and to the
    H argument: the limit of H(min(u', v)) as u' -> u- is H(u-) when
    u <= v and H(v) when u > v.
    """
    s = kernel.fit.survival
    su, su_l = s(u), s.left_limit(u)
    sv, sv_l = s(v), s.left_limit(v)

    def h_min(u_open: bool, v_open: bool) -> float:
        if u < v:
            return kernel.h_left(u) if u_open else kernel.h(u)
        if v < u:
            return kernel.h_left(v) if v_open else kernel.h(v)
        return kernel.h_left(u) if (u_open or v_open) else kernel.h(u)

    return 0.25 * (
        su * sv * h_min(False, False)
        + su_l * sv * h_min(True, False)
        + su * sv_l * h_min(False, True)
        + su_l * sv_l * h_min(True, True)
    )


def sigma2_jk(kernel_j: CovKernel, fit_k: KaplanMeierFit) -> float:
    """Double integral of the normalized kernel against fit_k's mass.

    Exact O(m^2) summation over all pairs of jump times of fit_k's
    survival curve; the two negative jump masses multiply to a positive
    weight.  Always nonnegative.
    """
    g = fit_k.survival
    u = g.jump_times
    m = u.size
    if m == 0:
        return 0.0
    w = g.deltas  # negative; sign cancels in the outer product
    s = kernel_j.fit.survival
    su = s(u)
    su_l = s.left_limit(u)
    h = kernel_j.h(u)
    h_l = kernel_j.h_left(u)

    idx = np.arange(m)
    lo = np.minimum.outer(idx, idx)
    # H at min(u, v) with the left limit taken on the open side(s)
    h_min_cc = h[lo]
    h_min_oo = h_l[lo]
    le = idx[:, None] <= idx[None, :]
    h_min_oc = np.where(le, h_l[:, None], h[None, :])  # u side open
    h_min_co = np.where(le.T, h_l[None, :], h[:, None])  # v side open

    kern = 0.25 * (
        np.outer(su, su) * h_min_cc
        + np.outer(su_l, su) * h_min_oc
        + np.outer(su, su_l) * h_min_co
        + np.outer(su_l, su_l) * h_min_oo
    )
    total = float(np.outer(w, w).ravel() @ kern.ravel())
    return max(total, 0.0)


def variance_estimate(s1: Sample, s2: Sample) -> VarianceEstimate:
    """Variance estimate for the studentized effect statistic.

    sigma2 = (n1 n2 / n) * (sigma2_12 + sigma2_21) where sigma2_jk
    integrates group j's normalized kernel against group k's mass.
    """
    if s1.k != s2.k:
        raise ValueError("incompatible horizons")
    f1 = kaplan_meier(s1)
    f2 = kaplan_meier(s2)
    return variance_from_fits(f1, f2)


def variance_from_fits(f1: KaplanMeierFit, f2: KaplanMeierFit) -> VarianceEstimate:
    """Variance estimate from two already-computed Kaplan-Meier fits."""
    k1 = cov_kernel(f1)
    k2 = cov_kernel(f2)
    s12 = sigma2_jk(k1, f2)
    s21 = sigma2_jk(k2, f1)
    n1, n2 = f1.n, f2.n
    n = n1 + n2
    return VarianceEstimate(
        sigma2=(n1 * n2 / n) * (s12 + s21),
        sigma2_12=s12,
        sigma2_21=s21,
        n1=n1,
        n2=n2,
    )

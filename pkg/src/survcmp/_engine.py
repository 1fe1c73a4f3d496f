"""Vectorized evaluation of studentized statistics over many resamples.

Works on a shared grid of pooled distinct times.  Per replicate and group,
event/at-risk counts are histogrammed onto the grid; Kaplan-Meier curves,
hazard-variance increments and the effect integral then come out of
row-wise cumulative products and reversed cumulative sums.  The variance
double integral collapses to a single sum via

    sigma2_jk = 1/4 * sum_s dH_j(s) * (A(s) + A_minus(s))^2

with A(s) the tail sum of S_j times the mass of S_k at or after s, and
A_minus the strict-tail analogue with left limits; this is the same
quantity the quadratic-form module computes pairwise, reassociated around
the minimum in H_j(u ^ v).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["BatchContext", "batch_context", "batch_statistics",
           "bootstrap_indices", "permutation_indices"]


@dataclass(frozen=True)
class BatchContext:
    """Pooled data prepared for batched resampling.

    ``pos`` maps each pooled observation to its slot on the grid of
    distinct times, ``events`` is the pooled indicator vector, and
    ``q`` the grid length.
    """

    pos: np.ndarray
    events: np.ndarray
    q: int
    n1: int
    n2: int

    def __post_init__(self):
        self.pos.setflags(write=False)
        self.events.setflags(write=False)


def batch_context(times: np.ndarray, events: np.ndarray, n1: int, n2: int) -> BatchContext:
    grid, pos = np.unique(np.asarray(times, dtype=float), return_inverse=True)
    return BatchContext(pos=pos.astype(np.int64), events=np.asarray(events, bool).copy(),
                        q=int(grid.size), n1=int(n1), n2=int(n2))


def bootstrap_indices(rng: np.random.Generator, r: int, n: int) -> np.ndarray:
    """r rows of n i.i.d. uniform draws from 0..n-1, with replacement."""
    return rng.integers(0, n, size=(r, n), dtype=np.int64)


def permutation_indices(rng: np.random.Generator, r: int, n: int) -> np.ndarray:
    """r independent uniform permutations of 0..n-1 (row-wise shuffles)."""
    base = np.tile(np.arange(n, dtype=np.int64), (r, 1))
    return rng.permuted(base, axis=1)


def _group_curves(pos, ev, q):
    """Counts on the grid -> (S, S left limit, dH) per row."""
    r, _ = pos.shape
    offsets = (np.arange(r, dtype=np.int64) * q)[:, None]
    flat = (pos + offsets).ravel()
    total = np.bincount(flat, minlength=r * q).reshape(r, q).astype(float)
    deaths = np.bincount(flat, weights=ev.ravel(), minlength=r * q).reshape(r, q)
    # at-risk: subjects with recorded time at or after each grid slot
    y = np.cumsum(total[:, ::-1], axis=1)[:, ::-1]
    safe_y = np.where(y > 0, y, 1.0)
    s = np.cumprod(1.0 - deaths / safe_y, axis=1)
    s_left = np.concatenate([np.ones((r, 1)), s[:, :-1]], axis=1)
    gap = (y - deaths) * y
    dh = np.where(gap > 0, deaths / np.where(gap > 0, gap, 1.0), 0.0)
    return s, s_left, dh


def _tail_sums(values):
    # tail[i] = sum over slots >= i; strict[i] = sum over slots > i
    tail = np.cumsum(values[:, ::-1], axis=1)[:, ::-1]
    strict = np.concatenate([tail[:, 1:], np.zeros((values.shape[0], 1))], axis=1)
    return tail, strict


def _sigma2_jk(sj, sj_left, dhj, mass_k):
    a_tail, _ = _tail_sums(sj * mass_k)
    prod_left = sj_left * mass_k
    _, a_strict = _tail_sums(prod_left)
    return 0.25 * np.sum(dhj * (a_tail + a_strict) ** 2, axis=1)


def batch_statistics(ctx: BatchContext, idx: np.ndarray):
    """Studentized statistics for each row of the index matrix.

    Parameters
    ----------
    ctx : BatchContext
        Prepared pooled data.
    idx : ndarray of shape (r, n1 + n2)
        Row-wise selections into the pooled sample; the first n1 columns
        form group 1 of the replicate.

    Returns
    -------
    stats : ndarray of shape (r,)
        sqrt(n1 n2 / n) (p - 1/2) / sigma per row; NaN on degenerate rows.
    valid : ndarray of bool
        False where the replicate variance vanished.
    """
    n1, n2 = ctx.n1, ctx.n2
    n = n1 + n2
    if idx.ndim != 2 or idx.shape[1] != n:
        raise ValueError("index matrix must have n1 + n2 columns")
    pos = ctx.pos[idx]
    ev = ctx.events[idx].astype(float)
    s1, s1_left, dh1 = _group_curves(pos[:, :n1], ev[:, :n1], ctx.q)
    s2, s2_left, dh2 = _group_curves(pos[:, n1:], ev[:, n1:], ctx.q)

    mass2 = s2_left - s2
    mass1 = s1_left - s1
    p = np.clip(np.sum(0.5 * (s1 + s1_left) * mass2, axis=1), 0.0, 1.0)

    sigma2 = (n1 * n2 / n) * (_sigma2_jk(s1, s1_left, dh1, mass2)
                              + _sigma2_jk(s2, s2_left, dh2, mass1))
    valid = sigma2 > 0.0
    rate = np.sqrt(n1 * n2 / n)
    with np.errstate(divide="ignore", invalid="ignore"):
        stats = rate * (p - 0.5) / np.sqrt(sigma2)
    stats = np.where(valid, stats, np.nan)
    return stats, valid

"""Correlation, bootstrap, and quantile utilities shared by the analyses.

All randomness flows through numpy's PCG64 generator with a fixed
stream-splitting rule: a procedure seeded with ``seed`` gives replicate
``i`` the child seed ``seed + i`` (offset by the replicate budget ``B``
between distinct streams of one procedure).  Parallel and serial
evaluation therefore produce identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps


@dataclass(frozen=True)
class CorrelationResult:
    coefficient: float
    p_value: float
    n: int
    kind: str

    def to_dict(self) -> dict:
        return {
            "coefficient": self.coefficient,
            "p_value": self.p_value,
            "n": self.n,
            "kind": self.kind,
        }


def correlate(x, y, kind: str = "pearson") -> CorrelationResult:
    """Correlation coefficient with a two-sided p-value.

    Pearson is the plain product-moment coefficient; Spearman is Pearson on
    average ranks; Kendall is tau-b.  Pearson/Spearman p-values come from
    the t transform t = r * sqrt((n-2)/(1-r^2)); Kendall's from the normal
    approximation.  Raises on zero variance.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    n = x.shape[0]
    if n < 3:
        raise ValueError("correlation requires n >= 3")
    if kind == "kendall":
        if np.all(x == x[0]) or np.all(y == y[0]):
            raise ValueError("zero variance input")
        tau, p = sps.kendalltau(x, y, variant="b", method="asymptotic")
        return CorrelationResult(float(tau), float(p), n, kind)
    if kind == "spearman":
        x = sps.rankdata(x)
        y = sps.rankdata(y)
    elif kind != "pearson":
        raise ValueError(f"unknown correlation kind {kind!r}")
    sx = x - x.mean()
    sy = y - y.mean()
    denom = math.sqrt(float(sx @ sx) * float(sy @ sy))
    if denom == 0.0:
        raise ValueError("zero variance input")
    r = float(sx @ sy) / denom
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = 2.0 * float(sps.t.sf(abs(t), n - 2))
    return CorrelationResult(r, p, n, kind)


@dataclass(frozen=True)
class BootstrapDistribution:
    """Means of B with-replacement resamples of one group."""

    replicate_means: np.ndarray
    group_label: str
    base_seed: int

    @property
    def standard_error(self) -> float:
        return float(np.std(self.replicate_means, ddof=1))


def bootstrap_means(values, B: int = 1000, seed: int = 0, group_label: str = "") -> BootstrapDistribution:
    """B bootstrap replicate means; replicate i uses child seed ``seed + i``."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    if n == 0:
        raise ValueError("cannot bootstrap an empty sample")
    means = np.empty(B, dtype=np.float64)
    for i in range(B):
        rng = np.random.Generator(np.random.PCG64(seed + i))
        means[i] = values[rng.integers(0, n, n)].mean()
    return BootstrapDistribution(means, group_label, seed)


@dataclass(frozen=True)
class TwoSampleTest:
    t_statistic: float
    p_value: float
    dist_a: BootstrapDistribution
    dist_b: BootstrapDistribution
    method: str = "shift-bootstrap-t"


def bootstrap_two_sample_test(a, b, B: int = 1000, seed: int = 0) -> TwoSampleTest:
    """Bootstrap-t two-sample test for a difference in means.

    The statistic is (mean(a) - mean(b)) / sqrt(se_a^2 + se_b^2) with
    standard errors taken from the bootstrap replicate distributions.  The
    null is simulated with the shift method: both samples are recentred to
    the pooled mean and resampled B times; the p-value is the two-sided
    tail fraction of |t*| >= |t|.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    dist_a = bootstrap_means(a, B, seed, "a")
    dist_b = bootstrap_means(b, B, seed + B, "b")
    se2 = dist_a.standard_error**2 + dist_b.standard_error**2
    diff = float(a.mean() - b.mean())
    if se2 == 0.0:
        # degenerate: identical constants give p=1, any difference p=0
        if diff == 0.0:
            return TwoSampleTest(0.0, 1.0, dist_a, dist_b)
        return TwoSampleTest(math.copysign(math.inf, diff), 0.0, dist_a, dist_b)
    t_obs = diff / math.sqrt(se2)
    pooled = float(np.concatenate([a, b]).mean())
    a0 = a - a.mean() + pooled
    b0 = b - b.mean() + pooled
    exceed = 0
    for i in range(B):
        rng_a = np.random.Generator(np.random.PCG64(seed + 2 * B + i))
        rng_b = np.random.Generator(np.random.PCG64(seed + 3 * B + i))
        mean_a = a0[rng_a.integers(0, a.size, a.size)].mean()
        mean_b = b0[rng_b.integers(0, b.size, b.size)].mean()
        if abs((mean_a - mean_b) / math.sqrt(se2)) >= abs(t_obs):
            exceed += 1
    return TwoSampleTest(t_obs, exceed / B, dist_a, dist_b)


def qq_points(a, b, quantiles: int = 100) -> list[tuple[float, float]]:
    """Paired empirical quantiles at levels (i - 0.5)/quantiles."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    levels = (np.arange(1, quantiles + 1) - 0.5) / quantiles
    qa = np.quantile(a, levels, method="linear")
    qb = np.quantile(b, levels, method="linear")
    return [(float(x), float(y)) for x, y in zip(qa, qb)]


def top_bottom_split(values: list[tuple[int, float]], fraction: float = 0.2):
    """Split (node, value) pairs into the top and bottom value fractions.

    Sorts descending by value with ascending node index as the tie-break;
    both slices have ceil(fraction * n) entries.
    """
    if not 0.0 < fraction <= 0.5:
        raise ValueError("fraction must lie in (0, 0.5]")
    if len(values) < 2:
        raise ValueError("need at least 2 values to split")
    ranked = sorted(values, key=lambda item: (-item[1], item[0]))
    k = math.ceil(fraction * len(ranked))
    return ranked[:k], ranked[-k:]

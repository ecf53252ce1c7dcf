"""Small-sample statistics with exact modes.

Everything here is self-contained: binomial tails are summed directly,
Clopper-Pearson bounds come from bisecting the regularized incomplete
beta function (continued-fraction evaluation), and the rank tests switch
to full exact null distributions (computed by subset-sum counting) when
the samples are small and tie-free. The two-sided binomial p-value uses
the minimum-likelihood convention: the sum of all outcome probabilities
no larger than the observed one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVariance, InsufficientData, InvalidInput

_BISECT_TOL = 1e-10
# Relative slack when comparing outcome probabilities for the minlike sum,
# so equal-probability outcomes are not dropped to roundoff.
_MINLIKE_REL_EPS = 1e-7


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_two_sided: float
    p_one_sided: float | None = None
    effect_size: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    method: str = "exact"

    def to_doc(self) -> dict:
        return {
            "statistic": self.statistic,
            "p_two_sided": self.p_two_sided,
            "p_one_sided": self.p_one_sided,
            "effect_size": self.effect_size,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "method": self.method,
        }


# --- special functions ------------------------------------------------------


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-14:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    bt = math.exp(ln_bt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def _beta_quantile(p: float, a: float, b: float) -> float:
    """Inverse of I_x(a, b) by bisection to 1e-10."""
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if regularized_incomplete_beta(a, b, mid) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < _BISECT_TOL:
            break
    return 0.5 * (lo + hi)


def _normal_sf(z: float) -> float:
    """P(Z >= z) for a standard normal."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _t_sf_two_sided(t: float, dof: float) -> float:
    """Two-sided p for Student's t."""
    x = dof / (dof + t * t)
    return regularized_incomplete_beta(0.5 * dof, 0.5, x)


def _t_quantile_975(dof: float, p_two: float = 0.05) -> float:
    """Critical |t| with two-sided tail mass p_two, by bisection."""
    lo, hi = 0.0, 1e3
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _t_sf_two_sided(mid, dof) > p_two:
            lo = mid
        else:
            hi = mid
        if hi - lo < _BISECT_TOL:
            break
    return 0.5 * (lo + hi)


# --- binomial ---------------------------------------------------------------


def _binom_pmf(k: int, n: int, p: float) -> float:
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    ln = (
        math.lgamma(n + 1)
        - math.lgamma(k + 1)
        - math.lgamma(n - k + 1)
        + k * math.log(p)
        + (n - k) * math.log1p(-p)
    )
    return math.exp(ln)


def clopper_pearson_ci(k: int, n: int, confidence: float = 0.95):
    """Exact binomial CI from beta quantiles; (0, ...) at k=0, (..., 1) at k=n."""
    if n < 1 or k < 0 or k > n:
        raise InvalidInput(f"need 0 <= k <= n with n >= 1, got k={k}, n={n}")
    if not 0.0 < confidence < 1.0:
        raise InvalidInput("confidence must be in (0, 1)")
    alpha = 1.0 - confidence
    low = 0.0 if k == 0 else _beta_quantile(alpha / 2.0, k, n - k + 1)
    high = 1.0 if k == n else _beta_quantile(1.0 - alpha / 2.0, k + 1, n - k)
    return (low, high)


def exact_binomial_test(k: int, n: int, p0: float = 0.5) -> TestResult:
    """Exact binomial test with a Clopper-Pearson 95% CI on the proportion.

    Two-sided p sums the probabilities of every outcome no more likely
    than the observed one (minlike); one-sided p is the tail away from
    the null expectation.
    """
    if n < 1 or k < 0 or k > n:
        raise InvalidInput(f"need 0 <= k <= n with n >= 1, got k={k}, n={n}")
    if not 0.0 <= p0 <= 1.0:
        raise InvalidInput("p0 must be in [0, 1]")
    pmf = np.array([_binom_pmf(i, n, p0) for i in range(n + 1)])
    observed = pmf[k]
    p_two = float(pmf[pmf <= observed * (1.0 + _MINLIKE_REL_EPS)].sum())
    if k >= n * p0:
        p_one = float(pmf[k:].sum())
    else:
        p_one = float(pmf[: k + 1].sum())
    lo, hi = clopper_pearson_ci(k, n)
    return TestResult(
        statistic=float(k),
        p_two_sided=min(1.0, p_two),
        p_one_sided=min(1.0, p_one),
        effect_size=None,
        ci_low=lo,
        ci_high=hi,
        method="exact",
    )


# --- rank helpers -----------------------------------------------------------


def _average_ranks(values) -> np.ndarray:
    """Ranks 1..n with ties sharing their average rank."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v))
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
            j += 1
        avg = 0.5 * (i + j) + 1.0
        for m in range(i, j + 1):
            ranks[order[m]] = avg
        i = j + 1
    return ranks


def _tie_sizes(values) -> list:
    _, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    return [int(c) for c in counts if c > 1]


def _signed_rank_counts(n: int) -> np.ndarray:
    """counts[s] = number of sign assignments of ranks 1..n with W+ == s."""
    m = n * (n + 1) // 2
    counts = np.zeros(m + 1, dtype=np.int64)
    counts[0] = 1
    for r in range(1, n + 1):
        nxt = counts.copy()
        nxt[r:] += counts[:-r]
        counts = nxt
    return counts


def _rank_sum_counts(n_total: int, n_pick: int) -> np.ndarray:
    """counts[s] = ways to choose n_pick of ranks 1..n_total summing to s."""
    max_sum = n_total * (n_total + 1) // 2
    counts = np.zeros((n_pick + 1, max_sum + 1), dtype=np.int64)
    counts[0, 0] = 1
    for r in range(1, n_total + 1):
        for j in range(min(n_pick, r), 0, -1):
            counts[j, r:] += counts[j - 1, :-r]
    return counts[n_pick]


def _continuity_z(stat: float, mu: float, sigma: float) -> float:
    """Normal deviate with a 0.5 continuity correction toward the mean."""
    if sigma <= 0.0:
        return 0.0
    d = stat - mu
    if d > 0.5:
        d -= 0.5
    elif d < -0.5:
        d += 0.5
    else:
        d = 0.0
    return d / sigma


# --- rank tests -------------------------------------------------------------

WILCOXON_EXACT_MAX_N = 20
MWU_EXACT_MAX_TOTAL = 16


def wilcoxon_signed_rank(paired_a, paired_b) -> TestResult:
    """Wilcoxon signed-rank test on paired samples (differences b - a).

    Zero differences are dropped (Wilcoxon's original convention). Exact
    enumeration of all sign assignments when at most 20 non-zero pairs and
    no tied |differences|; otherwise normal approximation with tie and
    continuity corrections. Effect size r = |Z| / sqrt(non-zero pairs).
    """
    a = np.asarray(paired_a, dtype=float)
    b = np.asarray(paired_b, dtype=float)
    if a.shape != b.shape:
        raise InvalidInput("paired samples must have equal lengths")
    d = b - a
    d = d[d != 0.0]
    n = len(d)
    if n < 5:
        raise InsufficientData(f"need >= 5 non-zero differences, got {n}")

    absd = np.abs(d)
    ranks = _average_ranks(absd)
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())

    mu = n * (n + 1) / 4.0
    ties = _tie_sizes(absd)
    tie_term = sum(t**3 - t for t in ties) / 48.0
    sigma = math.sqrt(n * (n + 1) * (2 * n + 1) / 24.0 - tie_term)
    z = _continuity_z(w_plus, mu, sigma)
    r_effect = abs(z) / math.sqrt(n)

    exact = n <= WILCOXON_EXACT_MAX_N and not ties
    if exact:
        counts = _signed_rank_counts(n)
        total = float(2**n)
        w_lo = int(round(min(w_plus, w_minus)))
        w_hi = int(round(max(w_plus, w_minus)))
        p_two = float(counts[: w_lo + 1].sum() + counts[w_hi:].sum()) / total
        if w_plus >= mu:
            p_one = float(counts[int(round(w_plus)) :].sum()) / total
        else:
            p_one = float(counts[: int(round(w_plus)) + 1].sum()) / total
        method = "exact"
    else:
        p_one = _normal_sf(abs(z))
        p_two = 2.0 * p_one
        method = "normal_approx"

    return TestResult(
        statistic=w_plus,
        p_two_sided=min(1.0, p_two),
        p_one_sided=min(1.0, p_one),
        effect_size=r_effect,
        method=method,
    )


def mann_whitney_u(group_a, group_b) -> TestResult:
    """Mann-Whitney U for two independent groups.

    Exact enumeration over rank assignments when the pooled size is at
    most 16 and tie-free; otherwise normal approximation with tie and
    continuity corrections. Reports the smaller U as the statistic;
    effect size r = |Z| / sqrt(n_a + n_b).
    """
    a = np.asarray(group_a, dtype=float)
    b = np.asarray(group_b, dtype=float)
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        raise InsufficientData("both groups must be nonempty")
    pooled = np.concatenate([a, b])
    ranks = _average_ranks(pooled)
    r_a = float(ranks[:na].sum())
    u_a = r_a - na * (na + 1) / 2.0
    u_b = na * nb - u_a
    mu = na * nb / 2.0
    n_total = na + nb
    ties = _tie_sizes(pooled)
    tie_term = sum(t**3 - t for t in ties) / (n_total * (n_total - 1))
    sigma2 = na * nb / 12.0 * ((n_total + 1) - tie_term)
    sigma = math.sqrt(sigma2) if sigma2 > 0 else 0.0
    z = _continuity_z(u_a, mu, sigma)
    r_effect = abs(z) / math.sqrt(n_total)

    exact = n_total <= MWU_EXACT_MAX_TOTAL and not ties
    if exact:
        counts = _rank_sum_counts(n_total, na)
        total = float(math.comb(n_total, na))
        offset = na * (na + 1) // 2
        u_of_s = np.arange(len(counts), dtype=float) - offset  # U for each rank sum
        u_lo = min(u_a, u_b)
        u_hi = max(u_a, u_b)
        p_two = float(counts[(u_of_s <= u_lo) | (u_of_s >= u_hi)].sum()) / total
        if u_a >= mu:
            p_one = float(counts[u_of_s >= u_a].sum()) / total
        else:
            p_one = float(counts[u_of_s <= u_a].sum()) / total
        method = "exact"
    else:
        p_one = _normal_sf(abs(z))
        p_two = 2.0 * p_one
        method = "normal_approx"

    return TestResult(
        statistic=min(u_a, u_b),
        p_two_sided=min(1.0, p_two),
        p_one_sided=min(1.0, p_one),
        effect_size=r_effect,
        method=method,
    )


def paired_t_test(paired_a, paired_b) -> TestResult:
    """Paired t-test on differences b - a with Cohen's d and a 95% CI of
    the mean difference."""
    a = np.asarray(paired_a, dtype=float)
    b = np.asarray(paired_b, dtype=float)
    if a.shape != b.shape:
        raise InvalidInput("paired samples must have equal lengths")
    n = len(a)
    if n < 2:
        raise InsufficientData(f"need >= 2 pairs, got {n}")
    d = b - a
    mean = float(np.mean(d))
    sd = float(np.std(d, ddof=1))
    if sd == 0.0:
        raise DegenerateVariance("paired differences have zero variance")
    se = sd / math.sqrt(n)
    t = mean / se
    dof = n - 1
    p_two = _t_sf_two_sided(t, dof)
    t_crit = _t_quantile_975(dof)
    return TestResult(
        statistic=t,
        p_two_sided=min(1.0, p_two),
        p_one_sided=min(1.0, p_two / 2.0),
        effect_size=mean / sd,
        ci_low=mean - t_crit * se,
        ci_high=mean + t_crit * se,
        method="exact",
    )

#!/usr/bin/env python3
"""The statistics toolbox on study-shaped data: exact binomial tests with
Clopper-Pearson intervals for forced-choice questions, rank tests for
paired scores, a paired t-test for head deviations, and weighted
simulator-sickness scoring.

Run:  python demos/05_study_statistics.py
"""

import numpy as np

from unwindsim import (
    SSQResponse,
    clopper_pearson_ci,
    exact_binomial_test,
    mann_whitney_u,
    paired_t_test,
    ssq_score,
    wilcoxon_signed_rank,
)

# ---------------------------------------------------------------------------
# Forced-choice questions: k of n participants picked the unwound mode.
# ---------------------------------------------------------------------------
print("forced-choice questions (n = 34):")
for label, k in (("preference", 28), ("comfort", 27), ("intuitiveness", 24)):
    r = exact_binomial_test(k, 34)
    lo, hi = r.ci_low, r.ci_high
    print(
        f"  {label:14s} {k}/34  two-sided p = {r.p_two_sided:.4f}, "
        f"one-sided p = {r.p_one_sided:.4f}, 95% CI ({lo*100:.1f}%, {hi*100:.1f}%)"
    )

# ---------------------------------------------------------------------------
# Paired scores: Wilcoxon signed-rank (exact when small and tie-free).
# ---------------------------------------------------------------------------
rng = np.random.default_rng(11)
cr_scores = np.round(rng.gamma(2.0, 9.0, size=12), 2)
ur_scores = np.round(np.maximum(cr_scores - rng.gamma(1.5, 5.0, size=12), 0.0), 2)
r = wilcoxon_signed_rank(ur_scores, cr_scores)
print(f"\nwilcoxon on paired sickness scores (n=12, synthetic):")
print(f"  W+ = {r.statistic}, p = {r.p_two_sided:.4f} ({r.method}), r = {r.effect_size:.2f}")

# ---------------------------------------------------------------------------
# Independent groups: Mann-Whitney U.
# ---------------------------------------------------------------------------
group_a = rng.normal(20.0, 8.0, size=7)
group_b = rng.normal(29.0, 8.0, size=7)
r = mann_whitney_u(group_a, group_b)
print(f"\nmann-whitney on two independent groups (7 vs 7, synthetic):")
print(f"  U = {r.statistic}, p = {r.p_two_sided:.4f} ({r.method}), r = {r.effect_size:.2f}")

# ---------------------------------------------------------------------------
# Paired t-test on mean head deviations (normally distributed metric).
# ---------------------------------------------------------------------------
d = rng.normal(0, 1, 34)
d = (d - d.mean()) / d.std(ddof=1)
deviations_delta = 4.6 + 11.0 * d  # engineered to a realistic effect
r = paired_t_test(np.zeros(34), deviations_delta)
print(f"\npaired t-test on head-deviation differences (n=34):")
print(
    f"  t(33) = {r.statistic:.2f}, p = {r.p_two_sided:.3f}, d = {r.effect_size:.2f}, "
    f"95% CI ({r.ci_low:.2f}, {r.ci_high:.2f}) deg"
)

# ---------------------------------------------------------------------------
# SSQ scoring: 16 symptoms, three overlapping weighted subscales.
# ---------------------------------------------------------------------------
mild = SSQResponse((1, 0, 1, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0))
s = ssq_score(mild)
print("\nssq for a mildly symptomatic response:")
print(f"  nausea {s.nausea:.2f}, oculomotor {s.oculomotor:.2f}, "
      f"disorientation {s.disorientation:.2f}, total {s.total:.2f}")
worst = ssq_score(SSQResponse((3,) * 16))
print(f"  (the all-severe ceiling is {worst.total:.2f})")

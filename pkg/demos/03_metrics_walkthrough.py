"""
Metrics walkthrough: from raw attack scores to effective epsilon
================================================================

An attack produces one number per evaluated record: higher should mean
"more likely a member". Everything downstream is a function of those scores
and the true labels. This demo builds tiny score sets by hand so every
metric can be checked against mental arithmetic.
"""

import math

import numpy as np

from tabmia.core import AttackResult
from tabmia.evaluation import (
    accuracy_best,
    advantage_and_privacy_gain,
    auc,
    effective_epsilon,
    metric_report,
    roc,
    tpr_at_fpr,
)

# ---------------------------------------------------------------------------
# 1. A four-record evaluation, fully enumerable.
#
# Members scored {0.9, 0.1}, non-members {0.8, 0.2}: one member is obvious,
# one is buried. Scores plus labels live in an AttackResult.
# ---------------------------------------------------------------------------

result = AttackResult(
    attack_id="walkthrough",
    scores=np.array([0.9, 0.1, 0.8, 0.2]),
    labels=np.array([1, 1, 0, 0]),
)

# The ROC enumerates every threshold rule "member iff score >= t". With four
# distinct scores that is four operating points plus the predict-nobody one:

curve = roc(result)
print("threshold  tp fp   tpr   fpr")
for t, tp, fp, tpr, fpr in zip(curve.thresholds, curve.tp, curve.fp, curve.tpr, curve.fpr):
    print(f"{t:>9.3g} {tp:>4} {fp:>2} {tpr:>5.2f} {fpr:>5.2f}")

# AUC is the probability a random member outscores a random non-member.
# Here the pairs split 2 wins / 2 losses -> 0.5, chance level, even though
# one member was perfectly identifiable:
print(f"\nauc            = {auc(result):.3f}")

# Which is why low-FPR behavior is reported separately. At FPR=0 the best
# rule is t=0.9: it catches half the members with zero false accusations.
print(f"tpr @ fpr=0    = {tpr_at_fpr(result, 0.0):.3f}")

# Advantage is max(TPR - FPR); accuracy the best 0/1 guess rate.
advantage, privacy_gain = advantage_and_privacy_gain(result)
print(f"advantage      = {advantage:.3f}   (privacy_gain = {privacy_gain:.3f})")
print(f"best accuracy  = {accuracy_best(result):.3f}")

# ---------------------------------------------------------------------------
# 2. Effective epsilon: scores as a differential-privacy witness.
#
# If the generator were eps-DP, every attack would obey TPR <= e^eps * FPR
# (+ delta). Observed (TPR, FPR) pairs therefore witness a lower bound:
# eps >= ln(TPR / FPR). A rule with TPR=0.5 at FPR=0.25 witnesses ln 2.
# ---------------------------------------------------------------------------

witness = AttackResult(
    attack_id="ln2",
    scores=np.array([1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]),
    labels=np.array([1, 1, 1, 1, 0, 0, 0, 0]),
)
print(f"\nepsilon (point)        = {effective_epsilon(witness):.6f}"
      f"   (ln 2 = {math.log(2):.6f})")

# FPR=0 would witness infinity, so the estimator floors FPR at 1/(3n) —
# perfect separation over 100 non-members caps out at ln 300:
perfect = AttackResult(
    attack_id="perfect",
    scores=np.array([1.0] * 50 + [0.0] * 100),
    labels=np.array([1] * 50 + [0] * 100),
)
print(f"epsilon at the floor   = {effective_epsilon(perfect):.6f}"
      f"   (ln 300 = {math.log(300):.6f})")

# The point estimate is optimistic on small samples. Clopper-Pearson mode
# replaces TPR and FPR with conservative 95% bounds before taking the ratio:
print(f"epsilon (clopper-pearson) = {effective_epsilon(perfect, mode='cp'):.6f}")

# And a delta slack shrinks every witness; epsilon is non-increasing in delta:
for delta in (0.0, 0.1, 0.3):
    print(f"  delta={delta:<4} -> epsilon={effective_epsilon(witness, delta=delta):.4f}")

# ---------------------------------------------------------------------------
# 3. The bundled report.
#
# metric_report computes all of the above at once; audits serialize one per
# attack instance.
# ---------------------------------------------------------------------------

report = metric_report(perfect)
print("\nmetric_report(perfect separation):")
for key, value in report.to_json_dict().items():
    print(f"  {key:<18} {value}")

"""How prior pseudo-counts shape the smoothed probabilities.

The model never estimates a raw frequency: every count is cushioned by
a class-specific pseudo-count lambda. Small lambdas trust the data;
large lambdas flatten the estimate toward the prior, which silences
rarely-observed tokens. The coin-toss example below is the two-outcome
special case of the same formulas.

    python demos/02_smoothed_counts.py
"""

from priorlearn.corpus import Document
from priorlearn.model import (
    CountModel,
    Hyperparameters,
    build_counts,
    class_prior,
    cond_prob,
    model_manifest,
    score,
)

print("-- coin toss with add-one priors --")
# two tosses observed, both tails: the classic smoothed estimate for an
# unobserved head is (1 + 0) / (1 + 1 + 2) = 1/4, never zero
coin = CountModel(n_pos=0, n_neg=2, features=frozenset(), pos_count={}, neg_count={},
                  doc_labels=(), doc_tokens=())
print(f"p(head) after 0 heads in 2 tosses = {class_prior(True, coin, Hyperparameters(1, 1))}")

print("\n-- a six-document training set --")
positives = [
    Document(1, "p1", frozenset({"grid", "search", "memo"})),
    Document(2, "p2", frozenset({"grid", "climb", "memo"})),
    Document(3, "p3", frozenset({"grid", "search", "climb", "peak"})),
]
negatives = [
    Document(4, "n1", frozenset({"grid", "recipe"})),
    Document(5, "n2", frozenset({"oven", "recipe"})),
    Document(6, "n3", frozenset({"search", "warrant"})),
]
model = build_counts(positives, negatives)
print("features are the union of positive documents only:", sorted(model.features))
print("('oven', 'recipe', 'warrant' are never counted)")
print("\nmodel manifest:")
print(model_manifest(model))

print("-- the same token under different priors --")
for lam_neg in (0.5, 1, 8, 200):
    hp = Hyperparameters(lambda_neg=lam_neg, lambda_pos=1)
    p = cond_prob("search", False, model, hp)
    print(f"  lambda_neg={lam_neg:>5}: p(search | negative) = {p:.3f}")
print("a huge lambda_neg floors every negative conditional near its prior,")
print("so noisy negative evidence stops moving the posterior.")

print("\n-- posteriors are computed on the feature intersection --")
case = {"grid", "search", "unseen-word", "another-one"}
post = score(case, model, Hyperparameters(1, 1))
print(f"case {sorted(case)}")
print(f"  p(positive) = {post.p_pos:.4f}, log odds = {post.log_odds:+.4f}")
print("tokens outside the model features changed nothing:")
print(f"  same posterior without them: {score({'grid', 'search'}, model, Hyperparameters(1, 1)).p_pos:.4f}")

"""Seeded experiments: baseline vs. learned-prior corpus ranking.

An experiment fixes a category and a list of PRNG seeds. Every direct
member of the category becomes a positive training case; an equal
number of negatives is sampled per seed from the non-members. The
baseline branch classifies the corpus under the add-one (Bayes-Laplace)
priors; the study branch first learns (lambda_neg, lambda_pos) by
multi-start grid search under every seed, aggregates the score terrain
across seeds, and classifies under the winning pair.

All randomness flows from the explicit seeds through a fixed, published
generator (numpy PCG64 driving a partial Fisher-Yates shuffle), so a
rerun with the same inputs reproduces every output byte.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping
from urllib.parse import quote

import numpy as np

from .corpus import CategoryIndex, Corpus
from .model import BAYES_LAPLACE, CountModel, Hyperparameters, build_counts, score
from .search import (
    DEFAULT_GRID,
    Cell,
    CellScore,
    Grid,
    LooEvaluator,
    MemoTable,
    MoveRecord,
    aggregate_over_seeds,
    cross_seed_mean_scores,
    default_starts,
    multi_start_search,
)

__all__ = [
    "ExperimentSpec",
    "TrainingSet",
    "RankedPredictions",
    "PriorSearchResult",
    "PRNG_NAME",
    "sample_negatives",
    "make_training_set",
    "training_model",
    "rank_corpus",
    "run_baseline",
    "learn_priors",
    "run_study",
    "export_review_list",
    "predictions_to_csv",
    "read_predictions_csv",
    "run_manifest",
]

#: Recorded in run manifests: sampling algorithm and generator identity.
PRNG_NAME = "numpy-pcg64/partial-fisher-yates"

DEFAULT_LINK_TEMPLATE = "https://en.wikipedia.org/wiki/{title}"


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything that determines an experiment's outputs.

    ``seeds[0]`` is the reporting seed: its training set backs the
    ranked classification of both branches.
    """

    corpus: Corpus
    categories: CategoryIndex
    category: str
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    grid: Grid = DEFAULT_GRID
    starts: tuple[Cell, ...] | None = None
    top_n: int = 1000

    def __post_init__(self) -> None:
        if self.category not in self.categories:
            raise ValueError(f"category {self.category!r} not in the index")
        if not self.seeds:
            raise ValueError("need at least one seed")
        if self.top_n < 1:
            raise ValueError("top_n must be >= 1")

    def start_cells(self) -> tuple[Cell, ...]:
        return self.starts if self.starts is not None else default_starts(self.grid)


@dataclass(frozen=True)
class TrainingSet:
    """Positive ids (all direct category members) and a seeded negative sample."""

    positive_ids: tuple[int, ...]
    negative_ids: tuple[int, ...]
    seed: int


@dataclass(frozen=True)
class RankedPredictions:
    """Corpus ranking, descending by log odds with ascending-id tie-break."""

    entries: tuple[tuple[int, float, float], ...]
    """(doc_id, p_pos, log_odds) triples in rank order."""

    positives_predicted: int

    def doc_ids(self) -> list[int]:
        return [doc_id for doc_id, _, _ in self.entries]

    def top_ids(self, n: int) -> list[int]:
        return [doc_id for doc_id, _, _ in self.entries[:n]]

    def __len__(self) -> int:
        return len(self.entries)


def sample_negatives(
    corpus: Corpus, categories: CategoryIndex, category: str, k: int, seed: int
) -> frozenset[int]:
    """Draw ``k`` non-member ids uniformly without replacement.

    The draw is a partial Fisher-Yates shuffle over the ascending-sorted
    non-member ids, using numpy's PCG64 stream for ``seed``; identical
    inputs always yield the identical sample.
    """
    members = categories.members(category)
    pool = np.array([doc_id for doc_id in corpus.ids() if doc_id not in members], dtype=np.int64)
    if len(pool) < k:
        raise ValueError(f"only {len(pool)} non-members available, need {k}")
    rng = np.random.default_rng(seed)
    for i in range(k):
        j = int(rng.integers(i, len(pool)))
        pool[i], pool[j] = pool[j], pool[i]
    return frozenset(int(doc_id) for doc_id in pool[:k])


def make_training_set(
    corpus: Corpus, categories: CategoryIndex, category: str, seed: int
) -> TrainingSet:
    """All direct members as positives, an equal-size seeded negative sample."""
    positives = sorted(categories.members(category))
    if not positives:
        raise ValueError(f"category {category!r} has no members")
    negatives = sorted(sample_negatives(corpus, categories, category, len(positives), seed))
    return TrainingSet(positive_ids=tuple(positives), negative_ids=tuple(negatives), seed=seed)


def training_model(corpus: Corpus, training: TrainingSet) -> CountModel:
    return build_counts(
        [corpus.get(doc_id) for doc_id in training.positive_ids],
        [corpus.get(doc_id) for doc_id in training.negative_ids],
    )


def rank_corpus(
    corpus: Corpus,
    model: CountModel,
    hp: Hyperparameters,
    exclude_ids: frozenset[int] | set[int] = frozenset(),
) -> RankedPredictions:
    """Score every corpus document outside ``exclude_ids`` and rank them."""
    scored = []
    positives = 0
    for doc in corpus:
        if doc.id in exclude_ids:
            continue
        posterior = score(doc.tokens, model, hp)
        scored.append((-posterior.log_odds, doc.id, posterior.p_pos))
        positives += posterior.p_pos > 0.5
    scored.sort()
    entries = tuple((doc_id, p_pos, -neg_lo) for neg_lo, doc_id, p_pos in scored)
    return RankedPredictions(entries=entries, positives_predicted=positives)


def run_baseline(spec: ExperimentSpec) -> RankedPredictions:
    """Rank the corpus under add-one priors, excluding the training positives."""
    training = make_training_set(spec.corpus, spec.categories, spec.category, spec.seeds[0])
    model = training_model(spec.corpus, training)
    return rank_corpus(
        spec.corpus, model, BAYES_LAPLACE, exclude_ids=frozenset(training.positive_ids)
    )


@dataclass(frozen=True)
class PriorSearchResult:
    """Learned priors plus the artifacts of the per-seed searches."""

    cell: Cell
    hyperparameters: Hyperparameters
    mean_ppv: float
    memos: tuple[MemoTable, ...]
    mean_scores: dict[Cell, CellScore] = field(repr=False)
    evaluations: int
    move_logs: tuple[tuple[MoveRecord, ...], ...]


def learn_priors(spec: ExperimentSpec) -> PriorSearchResult:
    """Multi-start search under every seed, then cross-seed aggregation.

    Each seed gets its own training set, model, and memo table; the nine
    searches of one seed share that seed's memo. The aggregate winner is
    the cell with the best mean ppv over the back-filled union of
    explored cells.
    """
    starts = spec.start_cells()
    grid_shape = (len(spec.grid), len(spec.grid))
    memos: list[MemoTable] = []
    evaluators: list[LooEvaluator] = []
    move_logs: list[tuple[MoveRecord, ...]] = []
    evaluations = 0
    for seed in spec.seeds:
        training = make_training_set(spec.corpus, spec.categories, spec.category, seed)
        evaluator = LooEvaluator(training_model(spec.corpus, training), spec.grid)
        memo = MemoTable()
        moves: list[MoveRecord] = []
        outcome = multi_start_search(
            starts, evaluator, memo=memo, grid_shape=grid_shape, move_log=moves
        )
        memos.append(memo)
        evaluators.append(evaluator)
        move_logs.append(tuple(moves))
        evaluations += outcome.evaluations
    cell, mean_ppv = aggregate_over_seeds(memos, evaluators)
    means = cross_seed_mean_scores(memos, evaluators)
    return PriorSearchResult(
        cell=cell,
        hyperparameters=spec.grid.hyperparameters(cell),
        mean_ppv=mean_ppv,
        memos=tuple(memos),
        mean_scores=means,
        evaluations=evaluations,
        move_logs=tuple(move_logs),
    )


def run_study(spec: ExperimentSpec) -> tuple[Hyperparameters, RankedPredictions]:
    """Learn priors across the spec's seeds, then rank the corpus with them.

    Classification uses the reporting seed's model (``seeds[0]``) and
    excludes its training positives, mirroring the baseline branch.
    """
    result = learn_priors(spec)
    training = make_training_set(spec.corpus, spec.categories, spec.category, spec.seeds[0])
    model = training_model(spec.corpus, training)
    ranked = rank_corpus(
        spec.corpus, model, result.hyperparameters, exclude_ids=frozenset(training.positive_ids)
    )
    return result.hyperparameters, ranked


def export_review_list(
    a: RankedPredictions,
    b: RankedPredictions,
    titles: Mapping[int, str],
    top_n: int = 1000,
    link_template: str = DEFAULT_LINK_TEMPLATE,
) -> str:
    """Merge two top-n lists into one blinded, alphabetized HTML review page.

    Titles from both lists are pooled, deduplicated, and sorted, so the
    page carries no trace of which model proposed which article, nor any
    scores.
    """
    names = sorted(
        {titles[doc_id] for doc_id in a.top_ids(top_n)}
        | {titles[doc_id] for doc_id in b.top_ids(top_n)}
    )
    lines = [
        "<!DOCTYPE html>",
        "<html><head><meta charset=\"utf-8\"><title>Review list</title></head><body>",
        "<ul>",
    ]
    for title in names:
        href = link_template.format(title=quote(title.replace(" ", "_")))
        lines.append(f'<li><a href="{href}">{_escape_html(title)}</a></li>')
    lines += ["</ul>", "</body></html>", ""]
    return "\n".join(lines)


def _escape_html(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def predictions_to_csv(ranked: RankedPredictions, titles: Mapping[int, str]) -> str:
    """CSV rendering: rank, doc_id, title, log_odds, p_pos."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rank", "doc_id", "title", "log_odds", "p_pos"])
    for rank, (doc_id, p_pos, log_odds) in enumerate(ranked.entries, start=1):
        writer.writerow([rank, doc_id, titles[doc_id], repr(log_odds), repr(p_pos)])
    return out.getvalue()


def read_predictions_csv(text: str) -> tuple[RankedPredictions, dict[int, str]]:
    """Parse a predictions CSV back into ranked entries and an id->title map."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["rank", "doc_id", "title", "log_odds", "p_pos"]:
        raise ValueError(f"unexpected predictions header: {header}")
    entries = []
    titles: dict[int, str] = {}
    positives = 0
    for row in reader:
        _, doc_id, title, log_odds, p_pos = row
        entries.append((int(doc_id), float(p_pos), float(log_odds)))
        titles[int(doc_id)] = title
        positives += float(p_pos) > 0.5
    return RankedPredictions(entries=tuple(entries), positives_predicted=positives), titles


def run_manifest(
    spec: ExperimentSpec,
    learned: Hyperparameters,
    baseline: RankedPredictions,
    study: RankedPredictions,
) -> dict:
    """Summary of one full experiment, suitable for JSON serialization."""
    return {
        "category": spec.category,
        "seeds": list(spec.seeds),
        "starts": [[cell.x, cell.y] for cell in spec.start_cells()],
        "prng": PRNG_NAME,
        "learned_lambda_neg": learned.lambda_neg,
        "learned_lambda_pos": learned.lambda_pos,
        "positives_predicted": {
            "baseline": baseline.positives_predicted,
            "study": study.positives_predicted,
        },
    }

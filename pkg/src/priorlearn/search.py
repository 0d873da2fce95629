"""Discrete hyperparameter search over the prior pseudo-count grid.

The search space is the 203x203 matrix of (lambda_neg, lambda_pos)
pairs drawn from ``DEFAULT_GRID``. Each cell is scored by leave-one-out
cross-validation over the training folds: positive predictive value,
with sensitivity as tie-breaker. A radial hill climber sweeps the 5x5
window around the current best cell, recentering on improvement and
stopping when a full sweep yields no replacement. Cell scores are
memoized write-once, so multiple starts share work and the memo table
doubles as a map of the explored score terrain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .metrics import ConfusionCounts, ppv, sensitivity
from .model import CountModel, Hyperparameters, loo_score

__all__ = [
    "Grid",
    "DEFAULT_GRID",
    "Cell",
    "CellScore",
    "MemoTable",
    "SearchOutcome",
    "MoveRecord",
    "DEFAULT_START_LAMBDAS",
    "default_starts",
    "evaluate_priors",
    "LooEvaluator",
    "radial_gradient_search",
    "multi_start_search",
    "cross_seed_mean_scores",
    "aggregate_over_seeds",
    "memo_to_csv",
    "moves_to_log",
]


@dataclass(frozen=True)
class Grid:
    """The ordered candidate values one prior pseudo-count may take."""

    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    def index_of(self, value: float) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise ValueError(f"{value} is not a grid value") from None

    def hyperparameters(self, cell: "Cell") -> Hyperparameters:
        """Map a cell to its (lambda_neg, lambda_pos) pair."""
        return Hyperparameters(lambda_neg=self.values[cell.x], lambda_pos=self.values[cell.y])


#: 0.01, 0.1, 0.5, then the naturals 1..200 -- 203 values. Jeffreys' prior
#: sits at index 2, the Bayes-Laplace baseline at index 3.
DEFAULT_GRID = Grid(values=(0.01, 0.1, 0.5) + tuple(float(v) for v in range(1, 201)))


class Cell(NamedTuple):
    """Grid coordinates: x indexes lambda_neg, y indexes lambda_pos."""

    x: int
    y: int


class CellScore(NamedTuple):
    """LOO score of a cell; tuple order gives the lexicographic comparison."""

    ppv: float
    sensitivity: float


class MoveRecord(NamedTuple):
    from_cell: Cell
    from_score: CellScore
    to_cell: Cell
    to_score: CellScore


#: The nine (lambda_neg, lambda_pos) start values for multi-start search.
DEFAULT_START_LAMBDAS: tuple[tuple[float, float], ...] = (
    (1, 1), (1, 8), (1, 15),
    (8, 1), (8, 8), (8, 15),
    (15, 1), (15, 8), (15, 15),
)


def default_starts(grid: Grid = DEFAULT_GRID) -> tuple[Cell, ...]:
    return tuple(
        Cell(grid.index_of(float(ln)), grid.index_of(float(lp)))
        for ln, lp in DEFAULT_START_LAMBDAS
    )


class MemoTable:
    """Write-once map from cells to their scores.

    Scores are deterministic, so a duplicate write is accepted only when
    it repeats the stored value; the table always ends with exactly one
    entry per evaluated cell.
    """

    def __init__(self) -> None:
        self._scores: dict[Cell, CellScore] = {}

    def __contains__(self, cell: Cell) -> bool:
        return cell in self._scores

    def __len__(self) -> int:
        return len(self._scores)

    def get(self, cell: Cell) -> CellScore:
        return self._scores[cell]

    def record(self, cell: Cell, score: CellScore) -> None:
        stored = self._scores.get(cell)
        if stored is None:
            self._scores[cell] = score
        elif stored != score:
            raise ValueError(f"cell {cell} re-recorded with a different score: {stored} != {score}")

    def cells(self) -> list[Cell]:
        return sorted(self._scores)

    def items(self) -> list[tuple[Cell, CellScore]]:
        return [(cell, self._scores[cell]) for cell in sorted(self._scores)]


@dataclass(frozen=True)
class SearchOutcome:
    best: Cell
    best_score: CellScore
    memo: MemoTable
    evaluations: int


Evaluator = Callable[[Cell], CellScore]


def evaluate_priors(cell: Cell, model: CountModel, grid: Grid = DEFAULT_GRID) -> CellScore:
    """Score one grid cell by leave-one-out classification of every fold.

    Each training case is scored with its own counts removed and
    classified positive iff its posterior log odds are positive (the
    p > 1/2 rule); the tallies against the training labels yield
    (ppv, sensitivity).

    This is the plain reference path; :class:`LooEvaluator` computes the
    same scores vectorized.
    """
    hp = grid.hyperparameters(cell)
    tp = fp = tn = fn = 0
    for fold in range(model.n_folds):
        predicted = loo_score(fold, model, hp).log_odds > 0.0
        actual = model.doc_labels[fold]
        if predicted and actual:
            tp += 1
        elif predicted:
            fp += 1
        elif actual:
            fn += 1
        else:
            tn += 1
    counts = ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)
    return CellScore(ppv=ppv(counts), sensitivity=sensitivity(counts))


class LooEvaluator:
    """Vectorized leave-one-out cell scorer for a fixed model.

    Flattens the per-fold retained token counts into arrays once, then
    scores any cell with a handful of numpy operations. Produces the
    same (ppv, sensitivity) as :func:`evaluate_priors`.
    """

    def __init__(self, model: CountModel, grid: Grid = DEFAULT_GRID):
        self.model = model
        self.grid = grid
        labels = np.array(model.doc_labels, dtype=bool)
        own = labels.astype(np.float64)  # 1 where the fold is positive
        doc_idx = []
        pos_counts = []
        neg_counts = []
        for fold, tokens in enumerate(model.doc_tokens):
            dec = 1.0 if model.doc_labels[fold] else 0.0
            for t in tokens:
                doc_idx.append(fold)
                pos_counts.append(model.pos_count.get(t, 0) - dec)
                neg_counts.append(model.neg_count.get(t, 0) - (1.0 - dec))
        self._labels = labels
        self._n_folds = len(labels)
        self._doc_idx = np.array(doc_idx, dtype=np.intp)
        self._pos_counts = np.array(pos_counts, dtype=np.float64)
        self._neg_counts = np.array(neg_counts, dtype=np.float64)
        self._n_tokens = np.bincount(self._doc_idx, minlength=self._n_folds).astype(np.float64)
        self._adj_pos = model.n_pos - own
        self._adj_neg = model.n_neg - (1.0 - own)

    def log_odds(self, cell: Cell) -> np.ndarray:
        """Per-fold LOO posterior log odds under the cell's priors."""
        hp = self.grid.hyperparameters(cell)
        lpos, lneg = hp.lambda_pos, hp.lambda_neg
        # class-prior denominators cancel between the two classes
        log_pos = np.log(lpos + self._adj_pos)
        log_neg = np.log(lneg + self._adj_neg)
        log_pos += np.bincount(
            self._doc_idx, weights=np.log(lpos + self._pos_counts), minlength=self._n_folds
        ) - self._n_tokens * np.log(lpos + self._adj_pos)
        log_neg += np.bincount(
            self._doc_idx, weights=np.log(lneg + self._neg_counts), minlength=self._n_folds
        ) - self._n_tokens * np.log(lneg + self._adj_neg)
        return log_pos - log_neg

    def __call__(self, cell: Cell) -> CellScore:
        predicted = self.log_odds(cell) > 0.0
        tp = int(np.count_nonzero(predicted & self._labels))
        fp = int(np.count_nonzero(predicted & ~self._labels))
        fn = int(np.count_nonzero(~predicted & self._labels))
        tn = self._n_folds - tp - fp - fn
        counts = ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)
        return CellScore(ppv=ppv(counts), sensitivity=sensitivity(counts))


def radial_gradient_search(
    start: Cell,
    evaluator: Evaluator,
    memo: MemoTable | None = None,
    grid_shape: tuple[int, int] = (len(DEFAULT_GRID), len(DEFAULT_GRID)),
    move_log: list[MoveRecord] | None = None,
) -> SearchOutcome:
    """Hill-climb from ``start``, sweeping a 5x5 window each cycle.

    A window cell replaces the current best iff its (ppv, sensitivity)
    is lexicographically greater; equal scores never trigger a move, so
    plateaus cannot cycle. After a sweep with a replacement the window
    recenters on the new best; a sweep without one ends the search. The
    returned best is a lexicographic local maximum over its in-bounds
    5x5 neighborhood.

    Already-memoized cells are never re-evaluated; their stored scores
    still take part in the comparisons, so sharing a memo across starts
    changes no outcome.
    """
    xmax, ymax = grid_shape
    if not (0 <= start.x < xmax and 0 <= start.y < ymax):
        raise ValueError(f"start {start} out of bounds for grid {grid_shape}")
    if memo is None:
        memo = MemoTable()
    evaluations = 0

    def lookup(cell: Cell) -> CellScore:
        nonlocal evaluations
        if cell in memo:
            return memo.get(cell)
        score = evaluator(cell)
        evaluations += 1
        memo.record(cell, score)
        return score

    best = start
    best_score = lookup(start)
    while True:
        improved = False
        cx, cy = best
        for i in range(-2, 3):
            for j in range(-2, 3):
                if i == 0 and j == 0:
                    continue
                nx, ny = cx + i, cy + j
                if not (0 <= nx < xmax and 0 <= ny < ymax):
                    continue
                neighbor = Cell(nx, ny)
                neighbor_score = lookup(neighbor)
                if neighbor_score > best_score:
                    if move_log is not None:
                        move_log.append(MoveRecord(best, best_score, neighbor, neighbor_score))
                    best, best_score = neighbor, neighbor_score
                    improved = True
        if not improved:
            return SearchOutcome(best=best, best_score=best_score, memo=memo, evaluations=evaluations)


def multi_start_search(
    starts: Sequence[Cell],
    evaluator: Evaluator,
    memo: MemoTable | None = None,
    grid_shape: tuple[int, int] = (len(DEFAULT_GRID), len(DEFAULT_GRID)),
    move_log: list[MoveRecord] | None = None,
) -> SearchOutcome:
    """Run one search per start over a shared memo; keep the best outcome.

    The shared table means a cell is evaluated at most once across all
    starts. The merged best is the lexicographic maximum over the
    per-start bests (exact score ties resolved toward the smaller cell
    coordinates).
    """
    if not starts:
        raise ValueError("starts must be nonempty")
    if memo is None:
        memo = MemoTable()
    total_evaluations = 0
    best: Cell | None = None
    best_score: CellScore | None = None
    for start in starts:
        outcome = radial_gradient_search(
            start, evaluator, memo=memo, grid_shape=grid_shape, move_log=move_log
        )
        total_evaluations += outcome.evaluations
        if (
            best_score is None
            or outcome.best_score > best_score
            or (outcome.best_score == best_score and outcome.best < best)
        ):
            best, best_score = outcome.best, outcome.best_score
    assert best is not None and best_score is not None
    return SearchOutcome(best=best, best_score=best_score, memo=memo, evaluations=total_evaluations)


def cross_seed_mean_scores(
    memos: Sequence[MemoTable], evaluators: Sequence[Evaluator]
) -> dict[Cell, CellScore]:
    """Mean (ppv, sensitivity) per explored cell, averaged over all seeds.

    The union of cells explored under any seed is back-filled: a cell
    missing from some seed's memo is evaluated under that seed (and
    recorded), so every mean covers every seed and the means are
    comparable.
    """
    if not memos:
        raise ValueError("need at least one memo table")
    if len(memos) != len(evaluators):
        raise ValueError(f"{len(memos)} memos but {len(evaluators)} evaluators")
    union: set[Cell] = set()
    for memo in memos:
        union.update(memo.cells())
    means: dict[Cell, CellScore] = {}
    for cell in sorted(union):
        ppv_sum = 0.0
        sens_sum = 0.0
        for memo, evaluator in zip(memos, evaluators):
            if cell not in memo:
                memo.record(cell, evaluator(cell))
            score = memo.get(cell)
            ppv_sum += score.ppv
            sens_sum += score.sensitivity
        means[cell] = CellScore(ppv=ppv_sum / len(memos), sensitivity=sens_sum / len(memos))
    return means


def aggregate_over_seeds(
    memos: Sequence[MemoTable], evaluators: Sequence[Evaluator]
) -> tuple[Cell, float]:
    """Pick the cell with the best cross-seed mean ppv.

    Ties break by mean sensitivity, then by ascending cell coordinates.
    Returns the winning cell and its mean ppv.
    """
    means = cross_seed_mean_scores(memos, evaluators)
    best_cell = min(means, key=lambda c: (-means[c].ppv, -means[c].sensitivity, c))
    return best_cell, means[best_cell].ppv


def memo_to_csv(scores: Mapping[Cell, CellScore] | MemoTable, grid: Grid = DEFAULT_GRID) -> str:
    """Render explored cells as CSV: the score terrain for heat-map plotting."""
    items: Iterable[tuple[Cell, CellScore]]
    items = scores.items() if isinstance(scores, MemoTable) else sorted(scores.items())
    lines = ["lambda_neg,lambda_pos,ppv,sensitivity"]
    for cell, score in items:
        lines.append(f"{grid[cell.x]!r},{grid[cell.y]!r},{score.ppv!r},{score.sensitivity!r}")
    return "\n".join(lines) + "\n"


def moves_to_log(moves: Sequence[MoveRecord]) -> str:
    """One line per accepted move: from-cell, to-cell, and their scores."""
    lines = []
    for m in moves:
        lines.append(
            f"({m.from_cell.x},{m.from_cell.y}) ppv={m.from_score.ppv!r} "
            f"sens={m.from_score.sensitivity!r} -> ({m.to_cell.x},{m.to_cell.y}) "
            f"ppv={m.to_score.ppv!r} sens={m.to_score.sensitivity!r}"
        )
    return "\n".join(lines) + ("\n" if lines else "")

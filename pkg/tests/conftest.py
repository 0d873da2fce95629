import numpy as np
import pytest

from priorlearn.corpus import Document
from priorlearn.model import build_counts


@pytest.fixture
def six_doc_model():
    """Small hand-checkable training set: 3 positives, 3 negatives."""
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
    return build_counts(positives, negatives), positives, negatives


def random_training_docs(rng: np.random.Generator, n_pos: int, n_neg: int, vocab_size: int = 60):
    """Random Boolean-feature documents with overlapping class vocabularies."""
    vocab = np.array([f"t{i:02d}" for i in range(vocab_size)])
    w_pos = np.linspace(3.0, 1.0, vocab_size)
    w_pos /= w_pos.sum()
    w_neg = np.linspace(1.0, 3.0, vocab_size)
    w_neg /= w_neg.sum()

    def draw(doc_id, weights, title):
        n_tok = int(rng.integers(4, 16))
        picks = rng.choice(vocab_size, size=n_tok, replace=False, p=weights)
        return Document(doc_id, title, frozenset(vocab[picks]))

    positives = [draw(i, w_pos, f"p{i}") for i in range(n_pos)]
    negatives = [draw(1000 + i, w_neg, f"n{i}") for i in range(n_neg)]
    return positives, negatives

"""Synthetic gold corpora with planted keyword signal.

Useful for smoke-testing the full pipeline: each emotion gets a small set of
made-up keywords that appear only in its positive documents, optionally
corrupted by label noise.  The keywords are nonsense words on purpose, so a
classifier can only find them through the learned n-gram features, never
through the shipped lexicons.
"""

from __future__ import annotations

import random
from typing import Mapping, Sequence

from .corpus import Document, LabeledDocument

DEFAULT_KEYWORDS = ("zyblor", "quexal", "vintrum", "ploxate", "drazzle")

_FILLERS = (
    "the a an this that it they we you i he she one two value line code".split()
    + "method class file run test data list item call stack trace loop".split()
    + "set get put map key index array string number object type case".split()
    + "build link page post answer question thread reply edit note step".split()
    + "use used using work works change changed add added remove removed".split()
    + "version update branch merge commit push pull open close start end".split()
)


def generate_planted_corpus(
    n_docs: int,
    plants: Mapping[str, Sequence[str]],
    *,
    positive_rate: float = 0.5,
    noise: float = 0.0,
    seed: int = 0,
    min_len: int = 8,
    max_len: int = 20,
    min_plants: int = 2,
    max_plants: int = 4,
) -> list[LabeledDocument]:
    """Build ``n_docs`` labeled documents with per-emotion keyword signal.

    ``plants`` maps each emotion name to its keyword tuple.  A document is a
    text-positive for an emotion with probability ``positive_rate``, in which
    case ``min_plants``..``max_plants`` of that emotion's keywords are spliced
    into the filler words.  Each recorded label is then flipped with
    probability ``noise``.
    """
    rng = random.Random(seed)
    docs = []
    for i in range(n_docs):
        words = [rng.choice(_FILLERS) for _ in range(rng.randint(min_len, max_len))]
        labels = {}
        for emotion, keywords in plants.items():
            text_positive = rng.random() < positive_rate
            if text_positive:
                for _ in range(rng.randint(min_plants, max_plants)):
                    words.insert(rng.randrange(len(words) + 1), rng.choice(list(keywords)))
            label = int(text_positive)
            if noise and rng.random() < noise:
                label = 1 - label
            labels[emotion] = label
        docs.append(LabeledDocument(Document(str(i + 1), " ".join(words)), labels))
    return docs

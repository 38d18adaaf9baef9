"""Sparse feature extraction: tf-idf n-grams plus lexical cue scores.

A fitted extractor turns one token stream into one sparse vector laid out as
six contiguous blocks::

    [ n-grams | emotion categories | politeness | pos sent | neg sent | uncertainty ]

The n-gram and category blocks carry tf-idf weights and are each L2-normalized
on their own; the four scalar tails are standardized with training-set
mean/stddev so the SVM sees commensurate scales.  Fitting happens once, on
training documents only; transforming never mutates the extractor.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ContractViolation, EmptyCorpus, IncompatibleModel, ParseError
from .lexicons import LexiconSet
from .textprep import (
    TokenStream,
    default_emoticons,
    ngram_occurrences,
    ngram_terms,
    strip_noise,
    tokenize,
)

EXTRACTOR_VERSION = "1"

AUX_FEATURES = ("politeness", "sentiment_pos", "sentiment_neg", "uncertainty")


@dataclass(frozen=True, eq=False)
class SparseVector:
    """Strictly increasing indices, no stored zeros, fixed dimension."""

    indices: np.ndarray
    values: np.ndarray
    dimension: int

    def __post_init__(self):
        idx, val = self.indices, self.values
        if idx.shape != val.shape or idx.ndim != 1:
            raise ContractViolation("indices and values must be parallel 1-d arrays")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.dimension:
                raise ContractViolation("feature index out of range")
            if np.any(np.diff(idx) <= 0):
                raise ContractViolation("feature indices must be strictly increasing")
            if np.any(val == 0.0):
                raise ContractViolation("explicit zeros are not stored")

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def dot(self, dense: np.ndarray) -> float:
        return float(dense[self.indices] @ self.values)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dimension)
        out[self.indices] = self.values
        return out

    def pairs(self) -> list[tuple[int, float]]:
        return [(int(i), float(v)) for i, v in zip(self.indices, self.values)]


def sparse_from_pairs(pairs: Iterable[tuple[int, float]], dimension: int) -> SparseVector:
    kept = sorted((i, v) for i, v in pairs if v != 0.0)
    idx = np.fromiter((i for i, _ in kept), dtype=np.int64, count=len(kept))
    val = np.fromiter((v for _, v in kept), dtype=np.float64, count=len(kept))
    return SparseVector(idx, val, dimension)


@dataclass(frozen=True)
class Vocabulary:
    """n-gram terms kept at fit time, with their document frequencies."""

    terms: tuple[str, ...]          # index -> term, sorted lexicographically
    df: tuple[int, ...]             # aligned document frequencies
    n_docs: int
    min_df: int
    index: Mapping[str, int] = field(repr=False, default=None)

    def __post_init__(self):
        if self.index is None:
            object.__setattr__(
                self, "index", {term: i for i, term in enumerate(self.terms)}
            )
        for term, count in zip(self.terms, self.df):
            if not self.min_df <= count <= self.n_docs:
                raise ContractViolation(
                    f"df({term!r}) = {count} outside [{self.min_df}, {self.n_docs}]"
                )

    def __len__(self) -> int:
        return len(self.terms)


def idf(df: int, n_docs: int) -> float:
    """Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.

    Strictly decreasing in df and never below 1, so ubiquitous terms keep a
    small positive weight instead of vanishing.
    """
    if not 1 <= df <= n_docs:
        raise ContractViolation(f"df must be in [1, n_docs], got df={df}, n_docs={n_docs}")
    return math.log((1 + n_docs) / (1 + df)) + 1.0


@dataclass(frozen=True)
class FittedExtractor:
    """Frozen feature space: vocabulary, lexicons, and scaling statistics."""

    vocabulary: Vocabulary
    lexicons: LexiconSet
    categories: tuple[str, ...]     # block order, sorted
    category_df: tuple[int, ...]
    aux_mean: tuple[float, ...]     # politeness, pos, neg, uncertainty
    aux_std: tuple[float, ...]
    emoticons: frozenset[str]
    version: str = EXTRACTOR_VERSION

    @property
    def dimension(self) -> int:
        return len(self.vocabulary) + len(self.categories) + len(AUX_FEATURES)

    def layout(self) -> tuple[tuple[str, int, int], ...]:
        """(block name, offset, width) triples covering the whole space."""
        v, k = len(self.vocabulary), len(self.categories)
        blocks = [("ngrams", 0, v), ("categories", v, k)]
        for slot, name in enumerate(AUX_FEATURES):
            blocks.append((name, v + k + slot, 1))
        return tuple(blocks)

    def feature_names(self) -> list[str]:
        names = list(self.vocabulary.terms)
        names.extend(f"category:{category}" for category in self.categories)
        names.extend(AUX_FEATURES)
        return names

    def vectorize(self, text: str) -> SparseVector:
        """Raw text straight to a feature vector (strip, tokenize, assemble)."""
        return assemble(tokenize(strip_noise(text), self.emoticons), self)


def fit(
    train_docs: Sequence[TokenStream],
    lexicons: LexiconSet,
    min_df: int = 2,
    emoticons: frozenset[str] | None = None,
) -> FittedExtractor:
    """Build the feature space from training documents only.

    Document frequencies count each document at most once per term; the
    auxiliary scalers are the per-feature mean/stddev over the same documents.
    ``emoticons`` should be the table the streams were tokenized with, so the
    extractor can reproduce the preprocessing later.
    """
    if not train_docs:
        raise EmptyCorpus("cannot fit an extractor on zero documents")
    if emoticons is None:
        emoticons = default_emoticons()

    df_counts: Counter[str] = Counter()
    for stream in train_docs:
        df_counts.update(ngram_terms(stream))
    n_docs = len(train_docs)
    kept = sorted(term for term, count in df_counts.items() if count >= min_df)
    vocabulary = Vocabulary(
        terms=tuple(kept),
        df=tuple(df_counts[term] for term in kept),
        n_docs=n_docs,
        min_df=min_df,
    )

    categories = tuple(sorted(lexicons.emotion_categories))
    category_df = []
    for category in categories:
        words = lexicons.emotion_categories[category]
        category_df.append(
            sum(1 for stream in train_docs if any(tok in words for tok in stream.lowered))
        )

    aux_rows = np.array([_aux_scores(stream, lexicons) for stream in train_docs])
    aux_mean = aux_rows.mean(axis=0)
    aux_std = aux_rows.std(axis=0)  # population stddev; zeros disable the feature

    return FittedExtractor(
        vocabulary=vocabulary,
        lexicons=lexicons,
        categories=categories,
        category_df=tuple(category_df),
        aux_mean=tuple(float(m) for m in aux_mean),
        aux_std=tuple(float(s) for s in aux_std),
        emoticons=emoticons,
    )


def _l2_normalized(pairs: list[tuple[int, float]]) -> list[tuple[int, float]]:
    norm = math.sqrt(sum(v * v for _, v in pairs))
    if norm == 0.0:
        return pairs
    return [(i, v / norm) for i, v in pairs]


def ngram_block(doc: TokenStream, fitted: FittedExtractor) -> SparseVector:
    """tf-idf over in-vocabulary uni/bi-grams, L2-normalized; OOV terms ignored."""
    vocab = fitted.vocabulary
    counts = Counter(ngram_occurrences(doc))
    pairs = []
    for term, tf in counts.items():
        slot = vocab.index.get(term)
        if slot is not None:
            pairs.append((slot, tf * idf(vocab.df[slot], vocab.n_docs)))
    pairs.sort()
    return sparse_from_pairs(_l2_normalized(pairs), len(vocab))


def emotion_category_block(doc: TokenStream, fitted: FittedExtractor) -> SparseVector:
    """tf-idf per emotion category, counting occurrences of its member words."""
    n_docs = fitted.vocabulary.n_docs
    token_counts = Counter(doc.lowered)
    pairs = []
    for slot, category in enumerate(fitted.categories):
        words = fitted.lexicons.emotion_categories[category]
        tf = sum(count for token, count in token_counts.items() if token in words)
        if tf and fitted.category_df[slot]:
            pairs.append((slot, tf * idf(fitted.category_df[slot], n_docs)))
    return sparse_from_pairs(_l2_normalized(pairs), len(fitted.categories))


def politeness_score(doc: TokenStream, lexicons: LexiconSet) -> float:
    """Logistic of the summed weights of matched politeness cue phrases.

    Matching is case-insensitive, longest phrase first, non-overlapping.
    No cues (or cues canceling out) gives the neutral 0.5.
    """
    tokens = doc.lowered
    cues = lexicons.politeness_cues
    max_len = max((len(phrase) for phrase in cues), default=0)
    total = 0.0
    i = 0
    while i < len(tokens):
        matched = 0
        for length in range(min(max_len, len(tokens) - i), 0, -1):
            weight = cues.get(tuple(tokens[i : i + length]))
            if weight is not None:
                total += weight
                matched = length
                break
        i += matched or 1
    return 1.0 / (1.0 + math.exp(-total))


def sentiment_scores(doc: TokenStream, lexicons: LexiconSet) -> tuple[int, int]:
    """Strongest positive and negative strengths in the document.

    Per sentiment-bearing token: take the lexicon strength, shift its
    magnitude by a booster immediately before it (floored at 1), and flip the
    sign if a negation sits within the two previous tokens.  Defaults are the
    neutral (1, -1); outputs are clamped to [1, 5] and [-5, -1].
    """
    tokens = doc.lowered
    pos, neg = 1, -1
    for i, token in enumerate(tokens):
        strength = lexicons.sentiment.get(token)
        if strength is None:
            continue
        magnitude = abs(strength)
        sign = 1 if strength > 0 else -1
        if i > 0:
            shift = lexicons.boosters.get(tokens[i - 1])
            if shift is not None:
                magnitude = max(1, magnitude + shift)
        if any(tokens[j] in lexicons.negations for j in range(max(0, i - 2), i)):
            sign = -sign
        adjusted = sign * min(magnitude, 5)
        if adjusted > 0:
            pos = max(pos, adjusted)
        else:
            neg = min(neg, adjusted)
    return pos, neg


def uncertainty_score(doc: TokenStream, lexicons: LexiconSet) -> float:
    """Mean modality weight of matched cue words; 1.0 (certain) when none match."""
    weights = [
        lexicons.modality_cues[token]
        for token in doc.lowered
        if token in lexicons.modality_cues
    ]
    if not weights:
        return 1.0
    return sum(weights) / len(weights)


def _aux_scores(doc: TokenStream, lexicons: LexiconSet) -> tuple[float, float, float, float]:
    pos, neg = sentiment_scores(doc, lexicons)
    return (
        politeness_score(doc, lexicons),
        float(pos),
        float(neg),
        uncertainty_score(doc, lexicons),
    )


def assemble(doc: TokenStream, fitted: FittedExtractor) -> SparseVector:
    """Concatenate all blocks into one vector over the full feature space."""
    v, k = len(fitted.vocabulary), len(fitted.categories)
    pairs: list[tuple[int, float]] = list(ngram_block(doc, fitted).pairs())
    pairs.extend((v + i, value) for i, value in emotion_category_block(doc, fitted).pairs())
    for slot, raw in enumerate(_aux_scores(doc, fitted.lexicons)):
        std = fitted.aux_std[slot]
        if std > 0.0:
            z = (raw - fitted.aux_mean[slot]) / std
            if z != 0.0:
                pairs.append((v + k + slot, z))
    return sparse_from_pairs(pairs, fitted.dimension)


# --- serialization ---------------------------------------------------------

def extractor_to_dict(fitted: FittedExtractor) -> dict:
    lex = fitted.lexicons
    return {
        "kind": "emoclf-extractor",
        "version": fitted.version,
        "lowercase_ngrams": True,
        "idf": "ln((1+n_docs)/(1+df))+1",
        "aux_standardized": True,
        "vocabulary": {
            "terms": list(fitted.vocabulary.terms),
            "df": list(fitted.vocabulary.df),
            "n_docs": fitted.vocabulary.n_docs,
            "min_df": fitted.vocabulary.min_df,
        },
        "categories": list(fitted.categories),
        "category_df": list(fitted.category_df),
        "aux_features": list(AUX_FEATURES),
        "aux_mean": list(fitted.aux_mean),
        "aux_std": list(fitted.aux_std),
        "emoticons": sorted(fitted.emoticons),
        "lexicons": {
            "emotion_categories": {
                category: sorted(words)
                for category, words in lex.emotion_categories.items()
            },
            "politeness": {" ".join(phrase): w for phrase, w in lex.politeness_cues.items()},
            "sentiment": dict(lex.sentiment),
            "boosters": dict(lex.boosters),
            "negations": sorted(lex.negations),
            "modality": dict(lex.modality_cues),
        },
    }


def extractor_from_dict(payload: dict) -> FittedExtractor:
    try:
        if payload.get("kind") != "emoclf-extractor":
            raise ParseError("not an extractor payload")
        version = payload["version"]
        if version != EXTRACTOR_VERSION:
            raise IncompatibleModel(
                f"extractor version {version!r} unsupported (expected {EXTRACTOR_VERSION!r})"
            )
        raw_lex = payload["lexicons"]
        lexicons = LexiconSet(
            emotion_categories={
                category: frozenset(words)
                for category, words in raw_lex["emotion_categories"].items()
            },
            politeness_cues={
                tuple(phrase.split()): float(w) for phrase, w in raw_lex["politeness"].items()
            },
            sentiment={w: int(s) for w, s in raw_lex["sentiment"].items()},
            boosters={w: int(s) for w, s in raw_lex["boosters"].items()},
            negations=frozenset(raw_lex["negations"]),
            modality_cues={w: float(s) for w, s in raw_lex["modality"].items()},
        )
        vocab_raw = payload["vocabulary"]
        vocabulary = Vocabulary(
            terms=tuple(vocab_raw["terms"]),
            df=tuple(int(c) for c in vocab_raw["df"]),
            n_docs=int(vocab_raw["n_docs"]),
            min_df=int(vocab_raw["min_df"]),
        )
        return FittedExtractor(
            vocabulary=vocabulary,
            lexicons=lexicons,
            categories=tuple(payload["categories"]),
            category_df=tuple(int(c) for c in payload["category_df"]),
            aux_mean=tuple(float(m) for m in payload["aux_mean"]),
            aux_std=tuple(float(s) for s in payload["aux_std"]),
            emoticons=frozenset(payload["emoticons"]),
            version=version,
        )
    except (IncompatibleModel, ParseError):
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed extractor payload: {exc}") from exc


def save_extractor(fitted: FittedExtractor, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(extractor_to_dict(fitted), handle, sort_keys=True, separators=(",", ":"))
        handle.write("\n")


def load_extractor(path) -> FittedExtractor:
    try:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read extractor file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"extractor file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError(f"extractor file {path} does not hold an object")
    return extractor_from_dict(payload)

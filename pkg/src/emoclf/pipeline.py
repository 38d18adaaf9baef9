"""Training protocol: stratified folds, cost grid search, evaluation, bundles.

Each emotion is an independent binary task (binary relevance).  For one
emotion the recipe is: stratified 70/30 split, k-fold cross-validation over
the cost grid on the train partition (extractor refit inside every fold so
held-out documents never leak into document frequencies), pick the cost with
the best pooled accuracy breaking ties toward the smallest value, refit the
extractor on the whole train partition, and train the final model there.

All randomness flows from one master seed; per-emotion streams are derived
from it by hashing the emotion name, so adding or removing one emotion never
changes another's model.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .corpus import LabeledDocument, stratified_split
from .errors import (
    ContractViolation,
    DegenerateClass,
    EmptyEmotionSet,
    IncompatibleModel,
    MissingLabel,
    ParseError,
    PipelineError,
    TooFewPositives,
)
from .features import (
    FittedExtractor,
    assemble,
    extractor_from_dict,
    extractor_to_dict,
    fit,
)
from .lexicons import LexiconSet, default_lexicons
from .svm import (
    L1_HINGE,
    L2_HINGE,
    LinearModel,
    SolverParams,
    TrainingMonitor,
    TrainingProblem,
    predict,
    train_dual_cd,
)
from .textprep import default_emoticons, strip_noise, tokenize

BUNDLE_FORMAT = "emoclf-bundle"
BUNDLE_VERSION = "1"

DEFAULT_C_GRID = (0.01, 0.05, 0.10, 0.20, 0.25, 0.50, 1.0, 2.0, 4.0, 8.0)

FoldEvalHook = Callable[[str, int, float, float], None]


def derive_seed(master: int, *parts) -> int:
    """Stable 63-bit seed from a master seed and a label path."""
    payload = ":".join([str(int(master)), *map(str, parts)])
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class TuningGrid:
    c_values: tuple[float, ...] = DEFAULT_C_GRID

    def __post_init__(self):
        values = self.c_values
        if not values:
            raise ContractViolation("the cost grid must be non-empty")
        if any(c <= 0 for c in values):
            raise ContractViolation("cost values must be strictly positive")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ContractViolation("cost values must be strictly increasing")


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: tuple[int, ...]    # doc index -> fold id
    seed: int


@dataclass(frozen=True)
class TrainConfig:
    """Everything a training run needs beyond the corpus itself."""

    train_fraction: float = 0.7
    folds: int = 10
    grid: TuningGrid = field(default_factory=TuningGrid)
    seed: int = 42
    min_df: int = 2
    loss: str = L2_HINGE
    eps: float = 0.1
    max_outer_iters: int = 1000
    shared_split: bool = False
    jobs: int = 1
    positive_cost: float = 1.0
    tune_metric: str = "accuracy"   # or "f1"
    lexicons: LexiconSet | None = None
    emoticons: frozenset[str] | None = None
    fold_eval_hook: FoldEvalHook | None = None
    monitor: TrainingMonitor | None = None

    def __post_init__(self):
        if self.folds < 2:
            raise ContractViolation("need at least 2 folds")
        if not 0 < self.train_fraction < 1:
            raise ContractViolation("train_fraction must be in (0, 1)")
        if self.tune_metric not in ("accuracy", "f1"):
            raise ContractViolation(f"unknown tuning metric {self.tune_metric!r}")
        if self.loss not in (L1_HINGE, L2_HINGE):
            raise ContractViolation(f"unknown loss {self.loss!r}")

    def resolved_lexicons(self) -> LexiconSet:
        return self.lexicons if self.lexicons is not None else default_lexicons()

    def resolved_emoticons(self) -> frozenset[str]:
        return self.emoticons if self.emoticons is not None else default_emoticons()


@dataclass(frozen=True)
class EmotionModel:
    emotion: str
    extractor: FittedExtractor
    model: LinearModel
    chosen_C: float
    cv_accuracy: float
    split_seed: int


@dataclass(frozen=True)
class ModelBundle:
    emotions: tuple[str, ...]
    models: Mapping[str, EmotionModel]
    master_seed: int
    config: Mapping[str, object]    # protocol snapshot for reproducibility

    def __iter__(self):
        return (self.models[emotion] for emotion in self.emotions)


@dataclass(frozen=True)
class EmotionEval:
    emotion: str
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float
    accuracy: float


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[EmotionEval, ...]

    REPORT_HEADER = "emotion,tp,fp,fn,tn,precision,recall,f1,accuracy"

    def to_csv_text(self) -> str:
        lines = [self.REPORT_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.emotion},{r.tp},{r.fp},{r.fn},{r.tn},"
                f"{r.precision!r},{r.recall!r},{r.f1!r},{r.accuracy!r}"
            )
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(self.to_csv_text())

    def table(self) -> str:
        width = max([len("Emotion")] + [len(r.emotion) for r in self.rows])
        lines = [f"{'Emotion':<{width}}  {'Prec':>5}  {'Rec':>5}  {'F1':>5}"]
        for r in self.rows:
            lines.append(
                f"{r.emotion:<{width}}  {r.precision:>5.2f}  {r.recall:>5.2f}  {r.f1:>5.2f}"
            )
        return "\n".join(lines)


def confusion_metrics(tp: int, fp: int, fn: int, tn: int) -> tuple[float, float, float, float]:
    """Precision, recall, F1, accuracy for the positive class.

    Zero-denominator conventions: precision is 0 with no predicted positives,
    recall is 0 with no actual positives, F1 is 0 when P + R is 0.
    """
    if min(tp, fp, fn, tn) < 0 or tp + fp + fn + tn == 0:
        raise ContractViolation("confusion counts must be non-negative and not all zero")
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    accuracy = (tp + tn) / (tp + fp + fn + tn)
    return precision, recall, f1, accuracy


def _metrics_row(emotion: str, tp: int, fp: int, fn: int, tn: int) -> EmotionEval:
    precision, recall, f1, accuracy = confusion_metrics(tp, fp, fn, tn)
    return EmotionEval(emotion, tp, fp, fn, tn, precision, recall, f1, accuracy)


# --- folds and cross-validation --------------------------------------------

def make_fold_plan(labels: Sequence[int], k: int, seed: int) -> FoldPlan:
    """Round-robin fold assignment per class after a seeded shuffle."""
    if k < 2:
        raise ContractViolation("need at least 2 folds")
    by_class = {1: [], 0: []}
    for index, value in enumerate(labels):
        by_class[1 if value else 0].append(index)
    for value in (1, 0):
        if len(by_class[value]) < k:
            raise TooFewPositives(value, len(by_class[value]), k)

    assignment = [0] * len(labels)
    rng = random.Random(seed)
    for value in (1, 0):
        order = list(by_class[value])
        rng.shuffle(order)
        for position, index in enumerate(order):
            assignment[index] = position % k
    return FoldPlan(k=k, assignment=tuple(assignment), seed=seed)


def _prepare_streams(docs: Sequence[LabeledDocument], emoticons: frozenset[str]):
    return [tokenize(strip_noise(d.doc.text), emoticons) for d in docs]


def _labels_for(docs: Sequence[LabeledDocument], emotion: str) -> list[int]:
    labels = []
    for d in docs:
        if emotion not in d.labels:
            raise MissingLabel(emotion)
        labels.append(d.labels[emotion])
    return labels


@dataclass
class _FoldOutcome:
    correct: int = 0
    tp: int = 0
    fp: int = 0
    fn: int = 0


def _evaluate_folds(
    streams,
    labels: Sequence[int],
    plan: FoldPlan,
    c_values: Sequence[float],
    config: TrainConfig,
    emotion: str,
) -> dict[float, _FoldOutcome]:
    """Held-out tallies per cost value, one extractor fit per fold.

    The extractor depends only on the fold's training documents, so fitting
    once per fold and reusing it across the grid is exactly equivalent to
    refitting per (fold, C).
    """
    lexicons = config.resolved_lexicons()
    emoticons = config.resolved_emoticons()
    outcomes = {c: _FoldOutcome() for c in c_values}
    for fold in range(plan.k):
        train_idx = [i for i, g in enumerate(plan.assignment) if g != fold]
        held_idx = [i for i, g in enumerate(plan.assignment) if g == fold]
        fitted = fit(
            [streams[i] for i in train_idx], lexicons, config.min_df, emoticons
        )
        rows_train = [assemble(streams[i], fitted) for i in train_idx]
        rows_held = [assemble(streams[i], fitted) for i in held_idx]
        y_train = [1 if labels[i] else -1 for i in train_idx]
        y_held = [labels[i] for i in held_idx]
        solver_seed = derive_seed(plan.seed, "solver", fold)
        for c in c_values:
            problem = TrainingProblem.from_vectors(
                rows_train, y_train, C=c, loss=config.loss,
                pos_cost=config.positive_cost,
            )
            model = train_dual_cd(
                problem,
                SolverParams(
                    eps=config.eps,
                    max_outer_iters=config.max_outer_iters,
                    seed=solver_seed,
                ),
                monitor=config.monitor,
            )
            tally = outcomes[c]
            hits = 0
            for x, gold in zip(rows_held, y_held):
                guess = predict(model, x)
                hits += guess == gold
                if guess and gold:
                    tally.tp += 1
                elif guess and not gold:
                    tally.fp += 1
                elif not guess and gold:
                    tally.fn += 1
            tally.correct += hits
            if config.fold_eval_hook is not None:
                config.fold_eval_hook(emotion, fold, c, hits / len(held_idx))
    return outcomes


def _selection_score(outcome: _FoldOutcome, metric: str) -> float:
    if metric == "f1":
        p = outcome.tp / (outcome.tp + outcome.fp) if outcome.tp + outcome.fp else 0.0
        r = outcome.tp / (outcome.tp + outcome.fn) if outcome.tp + outcome.fn else 0.0
        return 2 * p * r / (p + r) if p + r else 0.0
    return float(outcome.correct)


def select_best_cost(scores: Mapping[float, float]) -> float:
    """Highest score wins; exact ties go to the smallest cost."""
    return min(scores, key=lambda c: (-scores[c], c))


def cv_score(
    train_docs: Sequence[LabeledDocument],
    emotion: str,
    C: float,
    plan: FoldPlan,
    config: TrainConfig,
) -> float:
    """Pooled held-out accuracy of one cost value under a fixed fold plan."""
    labels = _labels_for(train_docs, emotion)
    if len(plan.assignment) != len(train_docs):
        raise ContractViolation("fold plan does not cover the training documents")
    streams = _prepare_streams(train_docs, config.resolved_emoticons())
    outcomes = _evaluate_folds(streams, labels, plan, [C], config, emotion)
    return outcomes[C].correct / len(train_docs)


def grid_search_C(
    train_docs: Sequence[LabeledDocument],
    emotion: str,
    grid: TuningGrid,
    k: int,
    seed: int,
    config: TrainConfig,
) -> tuple[float, float]:
    """Cross-validate every cost over one shared fold plan; return (C, accuracy)."""
    labels = _labels_for(train_docs, emotion)
    plan = make_fold_plan(labels, k, seed)
    streams = _prepare_streams(train_docs, config.resolved_emoticons())
    outcomes = _evaluate_folds(streams, labels, plan, grid.c_values, config, emotion)
    scores = {c: _selection_score(outcomes[c], config.tune_metric) for c in grid.c_values}
    best = select_best_cost(scores)
    return best, outcomes[best].correct / len(train_docs)


# --- per-emotion training ----------------------------------------------------

def split_seed_for(emotion: str, config: TrainConfig) -> int:
    if config.shared_split:
        return derive_seed(config.seed, "shared-split")
    return derive_seed(config.seed, "emotion", emotion, "split")


def train_emotion_model(
    gold: Sequence[LabeledDocument], emotion: str, config: TrainConfig
) -> EmotionModel:
    """Grid-search C on ``gold`` (the train partition), then train the final model."""
    labels = _labels_for(gold, emotion)
    if not any(labels) or all(labels):
        raise DegenerateClass(emotion)
    emotion_seed = derive_seed(config.seed, "emotion", emotion)

    chosen_c, cv_accuracy = grid_search_C(
        gold, emotion, config.grid, config.folds, derive_seed(emotion_seed, "grid"), config
    )

    streams = _prepare_streams(gold, config.resolved_emoticons())
    fitted = fit(streams, config.resolved_lexicons(), config.min_df,
                 config.resolved_emoticons())
    rows = [assemble(s, fitted) for s in streams]
    problem = TrainingProblem.from_vectors(
        rows,
        [1 if v else -1 for v in labels],
        C=chosen_c,
        loss=config.loss,
        pos_cost=config.positive_cost,
    )
    final_seed = derive_seed(emotion_seed, "final")
    model = train_dual_cd(
        problem,
        SolverParams(eps=config.eps, max_outer_iters=config.max_outer_iters, seed=final_seed),
        monitor=config.monitor,
    ).with_identity(emotion, fitted.version)
    return EmotionModel(
        emotion=emotion,
        extractor=fitted,
        model=model,
        chosen_C=chosen_c,
        cv_accuracy=cv_accuracy,
        split_seed=split_seed_for(emotion, config),
    )


def _config_snapshot(config: TrainConfig) -> dict:
    return {
        "train_fraction": config.train_fraction,
        "folds": config.folds,
        "grid": list(config.grid.c_values),
        "min_df": config.min_df,
        "loss": config.loss,
        "eps": config.eps,
        "max_outer_iters": config.max_outer_iters,
        "shared_split": config.shared_split,
        "positive_cost": config.positive_cost,
        "tune_metric": config.tune_metric,
    }


def _train_one(args) -> tuple[str, EmotionModel]:
    gold, emotion, stratify_by, config = args
    split = stratified_split(gold, stratify_by, config.train_fraction,
                             split_seed_for(emotion, config))
    return emotion, train_emotion_model(split.train, emotion, config)


def train_all(
    gold: Sequence[LabeledDocument],
    emotions: Sequence[str],
    config: TrainConfig,
) -> ModelBundle:
    """One independently trained binary model per emotion.

    Splits happen per emotion, or once when ``shared_split`` is set, in which
    case every emotion reuses the split stratified by the first one.  Only
    each train partition ever reaches the extractor and solver.  With
    ``jobs > 1`` emotions train in parallel processes and results are reduced
    in the input emotion order, so parallelism never changes the output.
    """
    emotions = list(emotions)
    if not emotions:
        raise EmptyEmotionSet("no emotions requested")
    if len(set(emotions)) != len(emotions):
        raise ContractViolation(f"duplicate emotion in {emotions}")
    if not gold:
        raise DegenerateClass(emotions[0], "gold corpus is empty")
    for emotion in emotions:
        if emotion not in gold[0].labels:
            raise MissingLabel(emotion)

    tasks = [
        (gold, emotion, emotions[0] if config.shared_split else emotion, config)
        for emotion in emotions
    ]
    models: dict[str, EmotionModel] = {}
    failures: dict[str, Exception] = {}

    parallel = (
        config.jobs > 1
        and len(emotions) > 1
        and config.fold_eval_hook is None
        and config.monitor is None
    )
    if parallel:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = {pool.submit(_train_one, task): task[1] for task in tasks}
            for future, emotion in futures.items():
                try:
                    _, models[emotion] = future.result()
                except Exception as exc:  # collected below, keyed by emotion
                    failures[emotion] = exc
    else:
        for task in tasks:
            try:
                _, models[task[1]] = _train_one(task)
            except Exception as exc:
                failures[task[1]] = exc

    if failures:
        raise PipelineError(failures)
    return ModelBundle(
        emotions=tuple(emotions),
        models={e: models[e] for e in emotions},
        master_seed=config.seed,
        config=_config_snapshot(config),
    )


# --- prediction and evaluation ----------------------------------------------

def classify(bundle: ModelBundle, docs) -> list[tuple[str, str, int]]:
    """(id, emotion, bit) rows, grouped by document in corpus order."""
    rows = []
    for doc in docs:
        for emotion in bundle.emotions:
            em = bundle.models[emotion]
            x = em.extractor.vectorize(doc.text)
            rows.append((doc.id, emotion, predict(em.model, x)))
    return rows


def _confusion_for(em: EmotionModel, docs: Sequence[LabeledDocument]):
    tp = fp = fn = tn = 0
    for labeled in docs:
        if em.emotion not in labeled.labels:
            raise MissingLabel(em.emotion)
        gold = labeled.labels[em.emotion]
        guess = predict(em.model, em.extractor.vectorize(labeled.doc.text))
        if guess and gold:
            tp += 1
        elif guess and not gold:
            fp += 1
        elif not guess and gold:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def evaluate(
    bundle_or_model: ModelBundle | EmotionModel,
    test_docs: Sequence[LabeledDocument],
) -> EvalReport:
    """Per-emotion confusion counts and metrics on labeled documents."""
    if isinstance(bundle_or_model, EmotionModel):
        models = [bundle_or_model]
    else:
        models = [bundle_or_model.models[e] for e in bundle_or_model.emotions]
    rows = [_metrics_row(em.emotion, *_confusion_for(em, test_docs)) for em in models]
    return EvalReport(rows=tuple(rows))


def evaluate_heldout(bundle: ModelBundle, gold: Sequence[LabeledDocument]) -> EvalReport:
    """Score every model on its own held-out test partition.

    The per-emotion splits are recomputed from the seeds recorded in the
    bundle, so this sees exactly the documents the training never touched.
    """
    fraction = float(bundle.config["train_fraction"])
    shared = bool(bundle.config.get("shared_split"))
    rows = []
    for emotion in bundle.emotions:
        em = bundle.models[emotion]
        stratify_by = bundle.emotions[0] if shared else emotion
        split = stratified_split(gold, stratify_by, fraction, em.split_seed)
        rows.append(_metrics_row(emotion, *_confusion_for(em, split.test)))
    return EvalReport(rows=tuple(rows))


# --- bundle persistence -------------------------------------------------------

def bundle_to_dict(bundle: ModelBundle) -> dict:
    payload = {
        "format": BUNDLE_FORMAT,
        "version": BUNDLE_VERSION,
        "master_seed": bundle.master_seed,
        "config": dict(bundle.config),
        "emotions": list(bundle.emotions),
        "models": {},
    }
    for emotion in bundle.emotions:
        em = bundle.models[emotion]
        payload["models"][emotion] = {
            "chosen_C": em.chosen_C,
            "cv_accuracy": em.cv_accuracy,
            "split_seed": em.split_seed,
            "loss": em.model.loss,
            "solver_seed": em.model.seed,
            "weights": [float(v) for v in em.model.w],
            "extractor": extractor_to_dict(em.extractor),
        }
    return payload


def save_bundle(bundle: ModelBundle, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(bundle_to_dict(bundle), handle, sort_keys=True, separators=(",", ":"))
        handle.write("\n")


def bundle_from_dict(payload: dict) -> ModelBundle:
    try:
        if payload.get("format") != BUNDLE_FORMAT:
            raise ParseError("not a model bundle")
        if payload["version"] != BUNDLE_VERSION:
            raise IncompatibleModel(
                f"bundle version {payload['version']!r} unsupported "
                f"(expected {BUNDLE_VERSION!r})"
            )
        emotions = tuple(payload["emotions"])
        models = {}
        for emotion in emotions:
            raw = payload["models"][emotion]
            extractor = extractor_from_dict(raw["extractor"])
            weights = np.asarray(raw["weights"], dtype=np.float64)
            if weights.ndim != 1 or weights.shape[0] != extractor.dimension + 1:
                raise IncompatibleModel(
                    f"{emotion}: weight length {weights.shape} does not match "
                    f"feature dimension {extractor.dimension} plus bias"
                )
            if not np.all(np.isfinite(weights)):
                raise IncompatibleModel(f"{emotion}: non-finite weights")
            model = LinearModel(
                w=weights,
                C=float(raw["chosen_C"]),
                loss=raw["loss"],
                emotion=emotion,
                extractor_version=extractor.version,
                seed=int(raw["solver_seed"]),
            )
            models[emotion] = EmotionModel(
                emotion=emotion,
                extractor=extractor,
                model=model,
                chosen_C=float(raw["chosen_C"]),
                cv_accuracy=float(raw["cv_accuracy"]),
                split_seed=int(raw["split_seed"]),
            )
        return ModelBundle(
            emotions=emotions,
            models=models,
            master_seed=int(payload["master_seed"]),
            config=dict(payload["config"]),
        )
    except (ParseError, IncompatibleModel):
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed bundle payload: {exc}") from exc


def load_bundle(path) -> ModelBundle:
    try:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read bundle {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"bundle {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError(f"bundle {path} does not hold an object")
    return bundle_from_dict(payload)

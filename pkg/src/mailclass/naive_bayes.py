"""Multinomial Naive Bayes over sparse count (or tf-idf) vectors.

Scores are unnormalized log-posteriors: log P(c) plus the weighted sum
of log conditional term probabilities. Conditionals use add-one
smoothing over the vocabulary; weights may be fractional, in which case
counts generalize to masses.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Optional, Sequence, Union

import numpy as np

from .errors import DataError
from .features import DocumentVector


@dataclass
class NbModel:
    classes: tuple[str, ...]  # lexicographic
    log_prior: np.ndarray  # shape (n_classes,)
    log_cond: np.ndarray  # shape (n_classes, vocab_size)
    vocab_size: int
    class_term_mass: np.ndarray  # total term mass per class, pre-smoothing


def train_nb(
    examples: Sequence[tuple[DocumentVector, str]],
    classes: Optional[Sequence[str]] = None,
) -> NbModel:
    """Estimate priors and smoothed conditionals from labeled vectors.

    P(c) is the fraction of documents in class c; P(t|c) is
    (mass(t, c) + 1) / (total mass in c + |V|). When `classes` is given,
    every declared class must have at least one example.
    """
    if not examples:
        raise DataError("cannot train on an empty example set")
    present = sorted({cls for _, cls in examples})
    if classes is None:
        class_list = tuple(present)
    else:
        class_list = tuple(sorted(classes))
        missing = sorted(set(class_list) - set(present))
        if missing:
            raise DataError(f"classes with zero training examples: {missing}")
        extra = sorted(set(present) - set(class_list))
        if extra:
            raise DataError(f"examples carry undeclared classes: {extra}")
    class_index = {c: i for i, c in enumerate(class_list)}
    dim = examples[0][0].dim
    n_classes = len(class_list)

    doc_counts = np.zeros(n_classes, dtype=np.float64)
    masses = np.zeros((n_classes, dim), dtype=np.float64)
    for vec, cls in examples:
        if vec.dim != dim:
            raise ValueError(f"dimension mismatch among examples: {vec.dim} vs {dim}")
        ci = class_index[cls]
        doc_counts[ci] += 1
        masses[ci, vec.indices] += vec.values

    log_prior = np.log(doc_counts / len(examples))
    class_mass = masses.sum(axis=1)
    # add-one smoothing: numerator mass+1, denominator class mass + |V|
    log_cond = np.log(masses + 1.0) - np.log(class_mass + dim)[:, None]
    return NbModel(classes=class_list, log_prior=log_prior, log_cond=log_cond,
                   vocab_size=dim, class_term_mass=class_mass)


def nb_log_score(model: NbModel, doc: DocumentVector) -> dict[str, float]:
    """Unnormalized log-score per class:
    log P(c) + sum_t weight(t) * log P(t|c)."""
    if doc.dim != model.vocab_size:
        raise ValueError(f"dimension mismatch: {doc.dim} vs {model.vocab_size}")
    scores = model.log_prior.copy()
    if len(doc.indices):
        scores = scores + model.log_cond[:, doc.indices] @ doc.values
    return {cls: float(s) for cls, s in zip(model.classes, scores)}


def nb_predict(model: NbModel, doc: DocumentVector) -> str:
    """Maximum a posteriori class; ties go to the lowest class index."""
    if doc.dim != model.vocab_size:
        raise ValueError(f"dimension mismatch: {doc.dim} vs {model.vocab_size}")
    scores = model.log_prior.copy()
    if len(doc.indices):
        scores = scores + model.log_cond[:, doc.indices] @ doc.values
    return model.classes[int(np.argmax(scores))]


def nb_predict_many(model: NbModel, docs: Sequence[DocumentVector]) -> list[str]:
    return [nb_predict(model, doc) for doc in docs]


# -- model dump --
# Conditionals are stored sparsely: terms with nonzero training mass per
# class, plus the per-class smoothing default for all remaining terms.

def dump_nb_model(model: NbModel, vocab_terms: Sequence[str], dest: Union[str, IO[str]]) -> None:
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8") as fh:
            dump_nb_model(model, vocab_terms, fh)
        return
    if len(vocab_terms) != model.vocab_size:
        raise ValueError("vocabulary size does not match the model")
    default_log_cond = -np.log(model.class_term_mass + model.vocab_size)
    payload = {
        "classes": list(model.classes),
        "log_prior": [float(v) for v in model.log_prior],
        "vocab": list(vocab_terms),
        "class_term_mass": [float(v) for v in model.class_term_mass],
        "default_log_cond": [float(v) for v in default_log_cond],
        "log_cond_sparse": [],
    }
    for ci in range(len(model.classes)):
        row = model.log_cond[ci]
        default = default_log_cond[ci]
        entries = {vocab_terms[j]: float(row[j])
                   for j in range(model.vocab_size)
                   if row[j] != default}
        payload["log_cond_sparse"].append(entries)
    json.dump(payload, dest, sort_keys=True)
    dest.write("\n")


def load_nb_model(source: Union[str, IO[str]]) -> tuple[NbModel, list[str]]:
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return load_nb_model(fh)
    payload = json.load(source)
    vocab = list(payload["vocab"])
    term_index = {t: i for i, t in enumerate(vocab)}
    n_classes = len(payload["classes"])
    dim = len(vocab)
    log_cond = np.tile(np.array(payload["default_log_cond"])[:, None], (1, dim))
    for ci, entries in enumerate(payload["log_cond_sparse"]):
        for term, value in entries.items():
            log_cond[ci, term_index[term]] = value
    model = NbModel(
        classes=tuple(payload["classes"]),
        log_prior=np.array(payload["log_prior"], dtype=np.float64),
        log_cond=log_cond,
        vocab_size=dim,
        class_term_mass=np.array(payload["class_term_mass"], dtype=np.float64),
    )
    return model, vocab

"""Vocabulary construction and bag-of-words vectorization."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Optional, Sequence, Union

import numpy as np

from .errors import DataError


class WeightingScheme(enum.Enum):
    RAW_COUNT = "raw"
    IDF_WEIGHTED = "idf"


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]  # index -> term, lexicographic
    term_to_index: dict[str, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.term_to_index


@dataclass(frozen=True, eq=False)
class DocumentVector:
    """Sparse non-negative vector over a vocabulary of dimension `dim`."""
    indices: np.ndarray  # int64, strictly increasing
    values: np.ndarray  # float64, > 0
    dim: int

    def as_dict(self) -> dict[int, float]:
        return {int(i): float(v) for i, v in zip(self.indices, self.values)}


def build_vocabulary(docs: Sequence[Sequence[str]]) -> Vocabulary:
    """Collect every distinct term; indices follow lexicographic order,
    so rebuilding from the same documents is deterministic."""
    terms = sorted({t for doc in docs for t in doc})
    return Vocabulary(terms=tuple(terms),
                      term_to_index={t: i for i, t in enumerate(terms)})


def compute_idf(docs: Sequence[Sequence[str]], vocab: Vocabulary) -> np.ndarray:
    """idf(t) = ln(N / df(t)), unsmoothed.

    Every vocabulary term must appear in at least one document (true by
    construction when the vocabulary was built from the same docs).
    """
    df = np.zeros(vocab.size, dtype=np.float64)
    for doc in docs:
        for term in set(doc):
            idx = vocab.term_to_index.get(term)
            if idx is not None:
                df[idx] += 1
    if np.any(df == 0):
        missing = [vocab.terms[i] for i in np.flatnonzero(df == 0)[:5]]
        raise DataError(f"vocabulary terms with zero document frequency: {missing}")
    return np.log(len(docs) / df)


def document_frequencies(docs: Sequence[Sequence[str]], vocab: Vocabulary) -> np.ndarray:
    df = np.zeros(vocab.size, dtype=np.int64)
    for doc in docs:
        for term in set(doc):
            idx = vocab.term_to_index.get(term)
            if idx is not None:
                df[idx] += 1
    return df


def vectorize(
    terms: Sequence[str],
    vocab: Vocabulary,
    scheme: WeightingScheme = WeightingScheme.RAW_COUNT,
    idf: Optional[np.ndarray] = None,
) -> DocumentVector:
    """Count in-vocabulary terms; out-of-vocabulary terms are dropped.

    RAW_COUNT gives term frequencies; IDF_WEIGHTED gives tf * idf and
    requires the idf table computed on the training documents.
    """
    if (idf is not None) != (scheme is WeightingScheme.IDF_WEIGHTED):
        raise ValueError("idf table must be supplied exactly when scheme is IDF_WEIGHTED")
    counts = Counter(vocab.term_to_index[t] for t in terms if t in vocab.term_to_index)
    indices = np.array(sorted(counts), dtype=np.int64)
    values = np.array([float(counts[i]) for i in sorted(counts)], dtype=np.float64)
    if scheme is WeightingScheme.IDF_WEIGHTED and len(indices):
        values = values * idf[indices]
        keep = values > 0  # idf 0 for terms present in every training doc
        indices, values = indices[keep], values[keep]
    return DocumentVector(indices=indices, values=values, dim=vocab.size)


def write_vocabulary(
    vocab: Vocabulary,
    df: np.ndarray,
    dest: Union[str, IO[str]],
) -> None:
    """Dump as TSV of index, term, document frequency."""
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8") as fh:
            write_vocabulary(vocab, df, fh)
        return
    for i, term in enumerate(vocab.terms):
        dest.write(f"{i}\t{term}\t{int(df[i])}\n")

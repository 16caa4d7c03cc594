"""The 16 preprocessing variants: lemma projection x POS keep-sets."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .annotation import AnnotatedDocument, PosTag

_ALL_TAGS = frozenset(PosTag)
_VN = frozenset({PosTag.VERB, PosTag.VERB_PARTICIPLE, PosTag.NOUN})


class PosFilter(enum.Enum):
    ALL = "ALL"
    VERBS_NOUNS_NO_PARTICIPLE = "VERBS_NOUNS_NO_PARTICIPLE"
    VERBS_NOUNS = "VERBS_NOUNS"
    VERBS_NOUNS_ADJ = "VERBS_NOUNS_ADJ"
    VERBS_NOUNS_ADJ_ADV = "VERBS_NOUNS_ADJ_ADV"
    VERBS_NOUNS_RELPRON = "VERBS_NOUNS_RELPRON"
    VERBS_NOUNS_CONJ = "VERBS_NOUNS_CONJ"
    VERBS_NOUNS_ADV = "VERBS_NOUNS_ADV"

    @property
    def keep_set(self) -> frozenset[PosTag]:
        return _KEEP_SETS[self]


# "Verbs and nouns" includes participles; the NO_PARTICIPLE variant is
# the one that excludes them.
_KEEP_SETS: dict[PosFilter, frozenset[PosTag]] = {
    PosFilter.ALL: _ALL_TAGS,
    PosFilter.VERBS_NOUNS_NO_PARTICIPLE: frozenset({PosTag.VERB, PosTag.NOUN}),
    PosFilter.VERBS_NOUNS: _VN,
    PosFilter.VERBS_NOUNS_ADJ: _VN | {PosTag.ADJ},
    PosFilter.VERBS_NOUNS_ADJ_ADV: _VN | {PosTag.ADJ, PosTag.ADV},
    PosFilter.VERBS_NOUNS_RELPRON: _VN | {PosTag.PRON_REL},
    PosFilter.VERBS_NOUNS_CONJ: _VN | {PosTag.CONJ},
    PosFilter.VERBS_NOUNS_ADV: _VN | {PosTag.ADV},
}


@dataclass(frozen=True)
class FilterConfig:
    lemmatize: bool
    pos_filter: PosFilter

    @property
    def slug(self) -> str:
        """Config-derived name used for report rows and artifact files."""
        return f"lemma-{'yes' if self.lemmatize else 'no'}__{self.pos_filter.value}"


def apply_filter(doc: AnnotatedDocument, config: FilterConfig) -> list[str]:
    """Project a document onto terms: drop tokens outside the keep-set,
    then take the lemma or the surface form. Order is preserved; the
    result may be empty."""
    keep = config.pos_filter.keep_set
    if config.lemmatize:
        return [t.lemma for t in doc.tokens if t.pos in keep]
    return [t.surface for t in doc.tokens if t.pos in keep]


def grid() -> list[FilterConfig]:
    """All 16 configs: the unlemmatized block of 8 filters, then the
    lemmatized block, filters in declaration order."""
    return [FilterConfig(lemmatize=lem, pos_filter=pf)
            for lem in (False, True) for pf in PosFilter]

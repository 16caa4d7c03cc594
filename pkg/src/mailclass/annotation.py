"""Tokenization and lemma/POS annotation.

Real annotations come from an external lemmatizer and tagger whose
output is consumed as a TSV file; a naive suffix-heuristic annotator is
provided as a deterministic stand-in for tests and offline runs.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import IO, Mapping, Optional, Sequence, Union

from .errors import DataError


class PosTag(enum.Enum):
    VERB = "VERB"
    VERB_PARTICIPLE = "VERB_PARTICIPLE"
    NOUN = "NOUN"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON_REL = "PRON_REL"
    CONJ = "CONJ"
    OTHER = "OTHER"


@dataclass(frozen=True)
class AnnotatedToken:
    surface: str  # lowercased
    lemma: str  # lowercased
    pos: PosTag


@dataclass(frozen=True)
class AnnotatedDocument:
    doc_id: str
    class_id: str
    tokens: tuple[AnnotatedToken, ...]


# Default mapping for Mac-Morpho-style tagsets, plus identity entries so
# files written by this package round-trip. Anything unmapped is OTHER.
DEFAULT_TAG_MAP: dict[str, PosTag] = {
    "V": PosTag.VERB,
    "VAUX": PosTag.VERB,
    "PCP": PosTag.VERB_PARTICIPLE,
    "N": PosTag.NOUN,
    "NPROP": PosTag.NOUN,
    "ADJ": PosTag.ADJ,
    "ADV": PosTag.ADV,
    "ADV-KS": PosTag.ADV,
    "ADV-KS-REL": PosTag.ADV,
    "PRO-KS-REL": PosTag.PRON_REL,
    "KC": PosTag.CONJ,
    "KS": PosTag.CONJ,
}
DEFAULT_TAG_MAP.update({tag.value: tag for tag in PosTag})

_TOKEN_RE = re.compile(r"[^\W_]+")  # maximal runs of letters and digits


def tokenize(text: str) -> list[str]:
    """Split text into lowercased tokens of letters and digits.

    Everything else (punctuation, symbols, underscores) separates
    tokens; diacritics are preserved.
    """
    return [t.lower() for t in _TOKEN_RE.findall(text)]


# -- annotation file I/O --
#
# UTF-8 TSV. A document starts with a header line "#doc <doc_id> <class_id>",
# followed by one "surface<TAB>lemma<TAB>tag" line per token; documents are
# separated by a blank line.

def read_annotations(
    source: Union[str, IO[str]],
    tag_map: Optional[Mapping[str, PosTag]] = None,
) -> tuple[list[AnnotatedDocument], list[str]]:
    """Read annotated documents from a TSV file.

    Tags are translated through tag_map (default: Mac-Morpho-style
    mapping); unmapped tags become OTHER. Token lines with the wrong
    column count are skipped with a diagnostic; a malformed document
    header is fatal.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return read_annotations(fh, tag_map)
    mapping = DEFAULT_TAG_MAP if tag_map is None else tag_map
    docs: list[AnnotatedDocument] = []
    diagnostics: list[str] = []
    header: Optional[tuple[str, str]] = None
    tokens: list[AnnotatedToken] = []

    def flush():
        nonlocal header, tokens
        if header is not None:
            docs.append(AnnotatedDocument(doc_id=header[0], class_id=header[1],
                                          tokens=tuple(tokens)))
        header = None
        tokens = []

    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            parts = line.split()
            if len(parts) != 3 or parts[0] != "#doc":
                raise DataError(f"annotation line {lineno}: bad document header: {line!r}")
            flush()
            header = (parts[1], parts[2])
            continue
        if header is None:
            raise DataError(f"annotation line {lineno}: token line before any '#doc' header")
        cols = line.split("\t")
        if len(cols) != 3:
            diagnostics.append(f"line {lineno}: expected 3 tab-separated columns, got {len(cols)}")
            continue
        surface, lemma, tag = cols
        if not surface or not lemma:
            diagnostics.append(f"line {lineno}: empty surface or lemma")
            continue
        tokens.append(AnnotatedToken(
            surface=surface.lower(),
            lemma=lemma.lower(),
            pos=mapping.get(tag, PosTag.OTHER),
        ))
    flush()
    return docs, diagnostics


def write_annotations(docs: Sequence[AnnotatedDocument], dest: Union[str, IO[str]]) -> None:
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8") as fh:
            write_annotations(docs, fh)
        return
    for i, doc in enumerate(docs):
        if i:
            dest.write("\n")
        dest.write(f"#doc {doc.doc_id} {doc.class_id}\n")
        for tok in doc.tokens:
            dest.write(f"{tok.surface}\t{tok.lemma}\t{tok.pos.value}\n")


# -- fallback annotator --

_VOWELS = set("aeiouáéíóúâêôãõà")

Lexicon = Mapping[str, tuple[str, PosTag]]


def load_lexicon(source: Union[str, IO[str]]) -> dict[str, tuple[str, PosTag]]:
    """Read a lexicon TSV of surface<TAB>lemma<TAB>tag lines."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return load_lexicon(fh)
    lexicon: dict[str, tuple[str, PosTag]] = {}
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise DataError(f"lexicon line {lineno}: expected 3 tab-separated columns")
        surface, lemma, tag = cols
        lexicon[surface.lower()] = (lemma.lower(), DEFAULT_TAG_MAP.get(tag, PosTag.OTHER))
    return lexicon


def fallback_annotate(
    tokens: Sequence[str],
    lexicon: Optional[Lexicon] = None,
    doc_id: str = "",
    class_id: str = "",
) -> AnnotatedDocument:
    """Annotate tokens with a lexicon lookup plus crude suffix rules.

    Rules, in order: exact lexicon match; "-mente" suffix is an adverb;
    a final "r" after a vowel marks an infinitive verb; anything else is
    a noun. Lemma defaults to the surface form. Deterministic, meant as
    a test stand-in for a real tagger, not a linguistic tool.
    """
    annotated = []
    for token in tokens:
        token = token.lower()
        if lexicon is not None and token in lexicon:
            lemma, pos = lexicon[token]
        elif token.endswith("mente"):
            lemma, pos = token, PosTag.ADV
        elif len(token) >= 2 and token.endswith("r") and token[-2] in _VOWELS:
            lemma, pos = token, PosTag.VERB
        else:
            lemma, pos = token, PosTag.NOUN
        annotated.append(AnnotatedToken(surface=token, lemma=lemma, pos=pos))
    return AnnotatedDocument(doc_id=doc_id, class_id=class_id, tokens=tuple(annotated))

"""Ticket ingestion, triage, and macro-core labeling.

A ticket is a threaded customer-service conversation: message 1 is the
customer question, message 2 the staff reply. Each macro (pre-written
reply template) defines one class; a ticket is labeled with a macro when
the macro's invariant core occurs verbatim in the reply message.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Sequence, Union

from .errors import DataError

AUTHOR_ROLES = ("customer", "staff")


@dataclass(frozen=True)
class EmailMessage:
    position: int  # 1-based index within the ticket
    author_role: str  # "customer" | "staff"
    subject: str
    body: str


@dataclass(frozen=True)
class Ticket:
    ticket_id: str
    messages: tuple[EmailMessage, ...]


@dataclass(frozen=True)
class Macro:
    macro_id: str
    category: str
    subject_label: str
    template: str
    core: str


@dataclass(frozen=True)
class LabeledExample:
    ticket_id: str
    class_id: str  # macro_id of the matched macro
    text: str  # subject + " " + body of message 1


@dataclass(frozen=True)
class LabeledCorpus:
    examples: tuple[LabeledExample, ...]
    classes: tuple[str, ...]  # macro ids present, sorted
    stats: dict[str, int]  # per-class example counts


@dataclass
class CorpusBuildStats:
    tickets_in: int = 0
    kept: int = 0
    labeled: int = 0
    ambiguous: int = 0
    unmatched: int = 0
    diagnostics: list[str] = field(default_factory=list)


def normalize_whitespace(text: str) -> str:
    """Collapse runs of Unicode whitespace to single spaces and trim."""
    return " ".join(text.split())


# -- ingestion --

def _parse_ticket_record(obj: dict) -> Ticket:
    if "ticket_id" not in obj:
        raise ValueError("missing field: ticket_id")
    if "messages" not in obj:
        raise ValueError("missing field: messages")
    raw_messages = obj["messages"]
    if not isinstance(raw_messages, list) or not raw_messages:
        raise ValueError("messages must be a nonempty list")
    messages = []
    for m in raw_messages:
        for key in ("position", "author_role", "subject", "body"):
            if key not in m:
                raise ValueError(f"message missing field: {key}")
        if m["author_role"] not in AUTHOR_ROLES:
            raise ValueError(f"bad author_role: {m['author_role']!r}")
        messages.append(EmailMessage(
            position=int(m["position"]),
            author_role=m["author_role"],
            subject=str(m["subject"]),
            body=str(m["body"]),
        ))
    positions = [m.position for m in messages]
    if positions != list(range(1, len(messages) + 1)):
        raise ValueError("message positions are not contiguous 1..n")
    return Ticket(ticket_id=str(obj["ticket_id"]), messages=tuple(messages))


def ingest_tickets(source: Union[str, IO[str], Iterable[str]]) -> tuple[list[Ticket], list[str]]:
    """Read tickets from a JSONL stream (one ticket object per line).

    Returns (tickets, diagnostics). Malformed lines are skipped and
    reported per line; a ticket whose first message is not from a
    customer is kept but reported.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return ingest_tickets(fh)
    tickets: list[Ticket] = []
    diagnostics: list[str] = []
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            diagnostics.append(f"line {lineno}: invalid JSON ({exc.msg})")
            continue
        try:
            ticket = _parse_ticket_record(obj)
        except ValueError as exc:
            diagnostics.append(f"line {lineno}: {exc}")
            continue
        if ticket.messages[0].author_role != "customer":
            diagnostics.append(
                f"line {lineno}: ticket {ticket.ticket_id}: first message is not from a customer"
            )
        tickets.append(ticket)
    return tickets, diagnostics


def read_macros(source: Union[str, IO[str]]) -> list[Macro]:
    """Read the macro catalog from a JSON document (a list of objects)."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return read_macros(fh)
    try:
        data = json.load(source)
    except json.JSONDecodeError as exc:
        raise DataError(f"macros file is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise DataError("macros file must contain a JSON list")
    macros = []
    for i, obj in enumerate(data):
        for key in ("macro_id", "category", "subject_label", "template", "core"):
            if key not in obj:
                raise DataError(f"macro #{i}: missing field: {key}")
        macros.append(Macro(
            macro_id=str(obj["macro_id"]),
            category=str(obj["category"]),
            subject_label=str(obj["subject_label"]),
            template=str(obj["template"]),
            core=str(obj["core"]),
        ))
    return macros


# -- triage --

def triage_tickets(tickets: Sequence[Ticket]) -> tuple[list[Ticket], int]:
    """Keep tickets with 2 or 3 messages; drop the rest.

    Returns (kept, dropped_count) with relative order preserved.
    """
    kept = [t for t in tickets if 2 <= len(t.messages) <= 3]
    return kept, len(tickets) - len(kept)


# -- macro-core validation --

@dataclass
class MacroValidationReport:
    empty_cores: list[str] = field(default_factory=list)  # macro ids
    core_not_in_template: list[str] = field(default_factory=list)  # macro ids
    substring_pairs: list[tuple[str, str]] = field(default_factory=list)  # (i, j) macro ids

    @property
    def clean(self) -> bool:
        return not (self.empty_cores or self.core_not_in_template or self.substring_pairs)


def validate_macro_cores(macros: Sequence[Macro]) -> MacroValidationReport:
    """Check that every core is nonempty, part of its own template, and
    not contained in any other macro's core or template.

    A clean report is required before labeling: an overlapping core can
    match a reply written from another macro.
    """
    report = MacroValidationReport()
    normalized = [(m, normalize_whitespace(m.core), normalize_whitespace(m.template))
                  for m in macros]
    for m, core, template in normalized:
        if not core:
            report.empty_cores.append(m.macro_id)
        elif core not in template:
            report.core_not_in_template.append(m.macro_id)
    for mi, core_i, _ in normalized:
        if not core_i:
            continue
        for mj, core_j, template_j in normalized:
            if mi.macro_id == mj.macro_id:
                continue
            if core_i in core_j or core_i in template_j:
                report.substring_pairs.append((mi.macro_id, mj.macro_id))
    return report


# -- labeling --

def label_ticket(ticket: Ticket, macros: Sequence[Macro]) -> tuple[Optional[LabeledExample], list[str]]:
    """Match macro cores against the reply (message 2) by exact substring
    containment after whitespace normalization.

    Returns (example, matched_macro_ids). The example is present only
    when exactly one macro matches; two or more matches mean ambiguity
    and produce no label.
    """
    if len(ticket.messages) < 2:
        raise DataError(f"ticket {ticket.ticket_id}: cannot label a ticket with fewer than 2 messages")
    reply = normalize_whitespace(ticket.messages[1].body)
    matched = [m.macro_id for m in macros if normalize_whitespace(m.core) and
               normalize_whitespace(m.core) in reply]
    if len(matched) != 1:
        return None, matched
    first = ticket.messages[0]
    text = (first.subject + " " + first.body).strip()
    return LabeledExample(ticket_id=ticket.ticket_id, class_id=matched[0], text=text), matched


def build_corpus(tickets: Sequence[Ticket], macros: Sequence[Macro]) -> tuple[LabeledCorpus, CorpusBuildStats]:
    """Triage tickets and label them against the macro catalog.

    Raises DataError when the macro catalog fails core validation.
    Returns the labeled corpus and pipeline stats (tickets in, kept,
    labeled, ambiguous, unmatched, diagnostics).
    """
    validation = validate_macro_cores(macros)
    if not validation.clean:
        problems = []
        if validation.empty_cores:
            problems.append(f"empty cores: {validation.empty_cores}")
        if validation.core_not_in_template:
            problems.append(f"core not in template: {validation.core_not_in_template}")
        if validation.substring_pairs:
            problems.append(f"overlapping cores: {validation.substring_pairs}")
        raise DataError("macro validation failed; " + "; ".join(problems))

    stats = CorpusBuildStats(tickets_in=len(tickets))
    seen_ids: dict[str, int] = {}
    for t in tickets:
        seen_ids[t.ticket_id] = seen_ids.get(t.ticket_id, 0) + 1
    duplicates = sorted(tid for tid, n in seen_ids.items() if n > 1)
    if duplicates:
        stats.diagnostics.append(f"duplicate ticket ids: {duplicates}")

    kept, _ = triage_tickets(tickets)
    stats.kept = len(kept)

    examples: list[LabeledExample] = []
    for ticket in kept:
        example, matched = label_ticket(ticket, macros)
        if example is not None:
            examples.append(example)
            stats.labeled += 1
        elif len(matched) >= 2:
            stats.ambiguous += 1
            stats.diagnostics.append(
                f"ticket {ticket.ticket_id}: ambiguous, cores of {sorted(matched)} all match the reply"
            )
        else:
            stats.unmatched += 1

    counts: dict[str, int] = {}
    for ex in examples:
        counts[ex.class_id] = counts.get(ex.class_id, 0) + 1
    corpus = LabeledCorpus(
        examples=tuple(examples),
        classes=tuple(sorted(counts)),
        stats=counts,
    )
    return corpus, stats


# -- labeled corpus I/O --

def write_labeled_corpus(corpus: LabeledCorpus, dest: Union[str, IO[str]]) -> None:
    """Write examples as JSONL of {ticket_id, class_id, text}."""
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8") as fh:
            write_labeled_corpus(corpus, fh)
        return
    for ex in corpus.examples:
        dest.write(json.dumps(
            {"ticket_id": ex.ticket_id, "class_id": ex.class_id, "text": ex.text},
            ensure_ascii=False,
        ) + "\n")


def read_labeled_corpus(source: Union[str, IO[str]]) -> LabeledCorpus:
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return read_labeled_corpus(fh)
    examples = []
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            examples.append(LabeledExample(
                ticket_id=str(obj["ticket_id"]),
                class_id=str(obj["class_id"]),
                text=str(obj["text"]),
            ))
        except (json.JSONDecodeError, KeyError) as exc:
            raise DataError(f"labeled corpus line {lineno}: {exc}") from exc
    counts: dict[str, int] = {}
    for ex in examples:
        counts[ex.class_id] = counts.get(ex.class_id, 0) + 1
    return LabeledCorpus(examples=tuple(examples), classes=tuple(sorted(counts)), stats=counts)

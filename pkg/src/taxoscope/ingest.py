"""Corpus loading: CSV-set / JSON ingestion, footnote attachment, unit enumeration.

The canonical input is a normalized export of the taxonomy: one CSV per
environmental objective (or a single corpus JSON), with one row per business
practice carrying the substantial-contribution text, up to five DNSH texts,
and the practice's footnotes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .constraints import EnvironmentalObjective

# CSV file name per objective (csv-set layout).
OBJECTIVE_FILES = {obj: f"{obj.value}.csv" for obj in EnvironmentalObjective}

CSV_COLUMNS = [
    "practice_id",
    "practice_name",
    "sector",
    "description",
    "sc_criteria",
    "dnsh_mitigation",
    "dnsh_adaptation",
    "dnsh_water",
    "dnsh_circular",
    "dnsh_pollution",
    "dnsh_biodiversity",
    "footnotes",
]

SC_KIND = "sc"

FOOTNOTE_SENTINEL = "\n[Footnote "


class CorpusError(ValueError):
    """Raised for malformed corpus input (schema violations, duplicates)."""


def dnsh_kind(target: EnvironmentalObjective) -> str:
    return f"dnsh_{target.value}"


def kind_order(kind: str) -> tuple:
    """Sort key: SC first, then DNSH in objective enum order."""
    if kind == SC_KIND:
        return (0, 0)
    target = kind.removeprefix("dnsh_")
    idx = [o.value for o in EnvironmentalObjective].index(target)
    return (1, idx)


@dataclass(frozen=True)
class BusinessPractice:
    id: str
    name: str
    description: str
    sector: str
    objective: EnvironmentalObjective


@dataclass(frozen=True)
class CriteriaBlock:
    """One screening-criteria text; kind is `sc` or `dnsh_<objective>`.

    `text` is the footnote-enriched text used downstream; `attached_footnotes`
    lists the (marker, text) pairs that were actually referenced and appended.
    """

    kind: str
    text: str
    attached_footnotes: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class CharacterizationUnit:
    objective: EnvironmentalObjective
    practice: BusinessPractice
    block: CriteriaBlock
    unit_id: str


@dataclass
class TaxonomyCorpus:
    # objective -> practices on that sheet
    objectives: dict[EnvironmentalObjective, list[BusinessPractice]] = field(default_factory=dict)
    # (practice_id, kind) -> block; practice ids are globally qualified by objective
    criteria: dict[tuple[str, str], CriteriaBlock] = field(default_factory=dict)
    # (objective, practice_id) -> footnotes as given in the source row
    footnotes: dict[tuple[EnvironmentalObjective, str], list[tuple[str, str]]] = field(
        default_factory=dict
    )

    def practice_blocks(self, practice: BusinessPractice) -> list[CriteriaBlock]:
        blocks = [
            block
            for (pid, _kind), block in self.criteria.items()
            if pid == self._qualified(practice.objective, practice.id)
        ]
        return sorted(blocks, key=lambda b: kind_order(b.kind))

    @staticmethod
    def _qualified(objective: EnvironmentalObjective, practice_id: str) -> str:
        return f"{objective.value}/{practice_id}"


def attach_footnotes(block_text: str, footnotes: list[tuple[str, str]]) -> str:
    """Append referenced footnotes to a criteria block.

    A footnote with marker m is referenced when `(m)` or `[m]` occurs in the
    text before any previously appended `[Footnote ...]` lines; this keeps the
    operation idempotent. Longer markers are checked first so that marker "1"
    never fires on an occurrence of "(12)".
    """
    sentinel_at = block_text.find(FOOTNOTE_SENTINEL)
    search_region = block_text if sentinel_at == -1 else block_text[:sentinel_at]
    appended_region = "" if sentinel_at == -1 else block_text[sentinel_at:]

    referenced: set[str] = set()
    for marker, _text in sorted(footnotes, key=lambda f: -len(f[0])):
        if not marker:
            continue
        if f"({marker})" in search_region or f"[{marker}]" in search_region:
            referenced.add(marker)

    result = block_text
    for marker, text in footnotes:
        if marker in referenced and f"[Footnote {marker}]" not in appended_region:
            result += f"\n[Footnote {marker}] {text}"
    return result


def referenced_footnotes(
    block_text: str, footnotes: list[tuple[str, str]]
) -> list[tuple[str, str]]:
    """The subset of footnotes that attach_footnotes would append, in list order."""
    enriched = attach_footnotes(block_text, footnotes)
    if enriched == block_text:
        return []
    appended = enriched[len(block_text):]
    out = []
    for marker, text in footnotes:
        if f"\n[Footnote {marker}] {text}" in appended:
            out.append((marker, text))
    return out


def parse_footnote_cell(cell: str) -> list[tuple[str, str]]:
    """Parse the `footnotes` CSV cell: `marker::text` entries joined by `||`."""
    cell = cell.strip()
    if not cell:
        return []
    out = []
    for entry in cell.split("||"):
        entry = entry.strip()
        if not entry:
            continue
        if "::" not in entry:
            raise CorpusError(f"malformed footnote entry (missing '::'): {entry!r}")
        marker, text = entry.split("::", 1)
        marker = marker.strip()
        if not marker:
            raise CorpusError(f"footnote entry with empty marker: {entry!r}")
        out.append((marker, text.strip()))
    return out


def _add_practice_row(
    corpus: TaxonomyCorpus,
    objective: EnvironmentalObjective,
    row: dict[str, str],
    source: str,
) -> None:
    practice_id = row["practice_id"].strip()
    if not practice_id:
        raise CorpusError(f"{source}: empty practice_id")
    sector = row["sector"].strip()
    if not sector:
        raise CorpusError(f"{source}: practice {practice_id!r} has empty sector")

    practices = corpus.objectives.setdefault(objective, [])
    if any(p.id == practice_id for p in practices):
        raise CorpusError(f"{source}: duplicate practice id {practice_id!r}")

    own_dnsh = row.get(dnsh_kind(objective), "").strip()
    if own_dnsh:
        raise CorpusError(
            f"{source}: practice {practice_id!r} has DNSH text for its own objective"
        )

    practice = BusinessPractice(
        id=practice_id,
        name=row["practice_name"].strip(),
        description=row["description"].strip(),
        sector=sector,
        objective=objective,
    )
    practices.append(practice)

    footnotes = parse_footnote_cell(row.get("footnotes", ""))
    corpus.footnotes[(objective, practice_id)] = footnotes

    qualified = TaxonomyCorpus._qualified(objective, practice_id)

    def add_block(kind: str, raw_text: str) -> None:
        raw_text = raw_text.strip()
        if not raw_text:
            return  # absent criteria cell: no block, no unit
        enriched = attach_footnotes(raw_text, footnotes)
        attached = tuple(referenced_footnotes(raw_text, footnotes))
        corpus.criteria[(qualified, kind)] = CriteriaBlock(
            kind=kind, text=enriched, attached_footnotes=attached
        )

    add_block(SC_KIND, row.get("sc_criteria", ""))
    for target in EnvironmentalObjective:
        if target is objective:
            continue
        add_block(dnsh_kind(target), row.get(dnsh_kind(target), ""))


def _load_csv_set(path: Path) -> TaxonomyCorpus:
    corpus = TaxonomyCorpus()
    csv_files = sorted(path.glob("*.csv"))
    if not csv_files:
        raise CorpusError(f"no objective files found in {path}")
    known = {name: obj for obj, name in OBJECTIVE_FILES.items()}
    for f in csv_files:
        if f.name not in known:
            raise CorpusError(f"unknown objective filename: {f.name}")

    for objective in EnvironmentalObjective:
        f = path / OBJECTIVE_FILES[objective]
        if not f.exists():
            continue
        with f.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in CSV_COLUMNS if c not in header]
            if missing:
                raise CorpusError(f"{f.name}: missing required column {missing[0]!r}")
            for row in reader:
                _add_practice_row(corpus, objective, row, source=f.name)
    return corpus


def _load_corpus_json(path: Path) -> TaxonomyCorpus:
    with path.open(encoding="utf-8") as fh:
        doc = json.load(fh)
    corpus = TaxonomyCorpus()
    by_value = {obj.value: obj for obj in EnvironmentalObjective}
    for obj_name, rows in doc.items():
        if obj_name not in by_value:
            raise CorpusError(f"unknown objective key in corpus JSON: {obj_name!r}")
        objective = by_value[obj_name]
        for row in rows:
            # criteria/footnote fields may be omitted in JSON; identity fields may not
            missing = [c for c in ("practice_id", "practice_name", "sector", "description")
                       if c not in row]
            if missing:
                raise CorpusError(
                    f"{path.name}[{obj_name}]: missing required column {missing[0]!r}"
                )
            full = {c: row.get(c, "") for c in CSV_COLUMNS}
            _add_practice_row(corpus, objective, full, source=f"{path.name}[{obj_name}]")
    return corpus


def load_corpus(path: str | Path, fmt: str = "csv-set") -> TaxonomyCorpus:
    """Load a corpus from a csv-set directory or a single corpus JSON file."""
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus path does not exist: {path}")
    if fmt == "csv-set":
        return _load_csv_set(path)
    if fmt == "corpus-json":
        return _load_corpus_json(path)
    raise CorpusError(f"unknown corpus format: {fmt!r}")


def unit_id_for(objective: EnvironmentalObjective, practice_id: str, kind: str) -> str:
    return f"{objective.value}/{practice_id}/{kind}"


def enumerate_units(corpus: TaxonomyCorpus) -> list[CharacterizationUnit]:
    """One unit per non-empty criteria block, in deterministic order:
    objective enum order, then practice id, then SC before DNSH (by target order)."""
    units: list[CharacterizationUnit] = []
    for objective in EnvironmentalObjective:
        practices = sorted(corpus.objectives.get(objective, []), key=lambda p: p.id)
        for practice in practices:
            for block in corpus.practice_blocks(practice):
                units.append(
                    CharacterizationUnit(
                        objective=objective,
                        practice=practice,
                        block=block,
                        unit_id=unit_id_for(objective, practice.id, block.kind),
                    )
                )
    return units

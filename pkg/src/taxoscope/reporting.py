"""Collation into per-objective datasets and summary tables.

All summaries share the fixed 9-category column order; failed parses carry a
zero profile, contribute nothing to any cell, and are listed separately.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .constraints import CATEGORY_ORDER, ConstraintProfile, EnvironmentalObjective
from .ingest import TaxonomyCorpus, enumerate_units
from .parsing import STATUS_FAILED, ParsedCharacterization


class ReportError(ValueError):
    pass


@dataclass
class DatasetRow:
    unit_id: str
    practice_id: str
    sector: str
    criteria_kind: str
    profile: ConstraintProfile
    parse_status: str


@dataclass
class ObjectiveDataset:
    objective: EnvironmentalObjective
    rows: list[DatasetRow] = field(default_factory=list)


@dataclass
class SummaryTable:
    """Rows of category counts keyed by a group label (sector, objective, ...)."""

    axis: str
    columns: tuple[str, ...]
    rows: dict[str, dict[str, int]]
    metadata: dict = field(default_factory=dict)

    def grand_total(self) -> int:
        return sum(sum(r.values()) for r in self.rows.values())

    def column_sums(self) -> dict[str, int]:
        return {c: sum(r[c] for r in self.rows.values()) for c in self.columns}


def collate(
    chars: list[ParsedCharacterization], corpus: TaxonomyCorpus
) -> list[ObjectiveDataset]:
    """Distribute characterizations into the six per-objective datasets.

    Row order follows unit enumeration order; every unit_id must resolve in
    the corpus.
    """
    units = {u.unit_id: u for u in enumerate_units(corpus)}
    by_unit: dict[str, ParsedCharacterization] = {}
    for c in chars:
        if c.unit_id not in units:
            raise ReportError(f"unit {c.unit_id} not present in corpus")
        by_unit[c.unit_id] = c

    datasets = {obj: ObjectiveDataset(objective=obj) for obj in EnvironmentalObjective}
    for unit_id, unit in units.items():
        c = by_unit.get(unit_id)
        if c is None:
            continue
        profile = c.profile if c.profile is not None else ConstraintProfile.zero()
        datasets[unit.objective].rows.append(
            DatasetRow(
                unit_id=unit_id,
                practice_id=unit.practice.id,
                sector=unit.practice.sector,
                criteria_kind=unit.block.kind,
                profile=profile,
                parse_status=c.parse_status,
            )
        )
    return [datasets[obj] for obj in EnvironmentalObjective]


def _countable(row: DatasetRow) -> bool:
    return row.parse_status != STATUS_FAILED


def _sum_rows(rows: list[DatasetRow]) -> dict[str, int]:
    total = ConstraintProfile.zero()
    for row in rows:
        if _countable(row):
            total = total + row.profile
    return total.as_flat_dict()


def type_distribution(datasets: list[ObjectiveDataset], metadata: dict | None = None) -> SummaryTable:
    rows = [r for ds in datasets for r in ds.rows]
    return SummaryTable(
        axis="all",
        columns=CATEGORY_ORDER,
        rows={"all": _sum_rows(rows)},
        metadata=metadata or {},
    )


def sector_summary(datasets: list[ObjectiveDataset], metadata: dict | None = None) -> SummaryTable:
    by_sector: dict[str, list[DatasetRow]] = {}
    for ds in datasets:
        for row in ds.rows:
            by_sector.setdefault(row.sector, []).append(row)
    return SummaryTable(
        axis="sector",
        columns=CATEGORY_ORDER,
        rows={sector: _sum_rows(rows) for sector, rows in sorted(by_sector.items())},
        metadata=metadata or {},
    )


def objective_summary(datasets: list[ObjectiveDataset], metadata: dict | None = None) -> SummaryTable:
    return SummaryTable(
        axis="objective",
        columns=CATEGORY_ORDER,
        rows={ds.objective.value: _sum_rows(ds.rows) for ds in datasets},
        metadata=metadata or {},
    )


def failed_units(datasets: list[ObjectiveDataset]) -> list[str]:
    return [r.unit_id for ds in datasets for r in ds.rows if r.parse_status == STATUS_FAILED]


# --- emission -------------------------------------------------------------


def _write_csv(table: SummaryTable, path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([table.axis, *table.columns])
        for label in table.rows:
            writer.writerow([label, *(table.rows[label][c] for c in table.columns)])


def read_summary_csv(path: str | Path) -> SummaryTable:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        axis, columns = header[0], tuple(header[1:])
        rows = {}
        for record in reader:
            rows[record[0]] = {c: int(v) for c, v in zip(columns, record[1:])}
    return SummaryTable(axis=axis, columns=columns, rows=rows)


def _write_json(table: SummaryTable, path: Path) -> None:
    doc = {
        "axis": table.axis,
        "columns": list(table.columns),
        "rows": table.rows,
        "metadata": table.metadata,
    }
    path.write_text(json.dumps(doc, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def _write_markdown(table: SummaryTable, path: Path) -> None:
    lines = [
        "| " + " | ".join([table.axis, *table.columns]) + " |",
        "|" + "---|" * (len(table.columns) + 1),
    ]
    for label in table.rows:
        cells = [label, *(str(table.rows[label][c]) for c in table.columns)]
        lines.append("| " + " | ".join(cells) + " |")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


TABLE_NAMES = ("type_distribution", "sector_summary", "objective_summary")


def emit_report(
    tables: dict[str, SummaryTable],
    datasets: list[ObjectiveDataset],
    out_dir: str | Path,
    formats: set[str] = frozenset({"csv", "json", "markdown"}),
    run_metadata: dict | None = None,
) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    ext = {"csv": ".csv", "json": ".json", "markdown": ".md"}
    writers = {"csv": _write_csv, "json": _write_json, "markdown": _write_markdown}

    for name, table in tables.items():
        for fmt in sorted(formats):
            if fmt not in writers:
                raise ReportError(f"unknown report format: {fmt!r}")
            path = out_dir / f"{name}{ext[fmt]}"
            try:
                writers[fmt](table, path)
            except OSError as exc:
                raise ReportError(f"cannot write {path}: {exc}") from exc
            written.append(path)

    failed = failed_units(datasets)
    failed_path = out_dir / "failed_units.json"
    failed_path.write_text(json.dumps(failed, indent=1) + "\n", encoding="utf-8")
    written.append(failed_path)

    meta = dict(run_metadata or {})
    meta["failed_units"] = failed
    meta_path = out_dir / "run_metadata.json"
    meta_path.write_text(json.dumps(meta, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    written.append(meta_path)
    return written

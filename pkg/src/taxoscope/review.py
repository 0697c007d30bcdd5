"""Plausibility-review workflow: queue building, assessment store, HTTP API.

Assessments live in an append-only JSON Lines file that doubles as the audit
log; the latest entry per (unit_id, reviewer) wins. The API serves review
items (criteria text next to the model's characterization), accepts ratings,
and reports a running summary.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import IntEnum
from fractions import Fraction
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .constraints import EnvironmentalObjective
from .ingest import TaxonomyCorpus, enumerate_units
from .parsing import ParsedCharacterization


class PlausibilityRating(IntEnum):
    IMPLAUSIBLE = 0
    SOMEWHAT_PLAUSIBLE = 1
    LARGELY_PLAUSIBLE = 2
    ENTIRELY_PLAUSIBLE = 3


RATING_LABELS = {
    PlausibilityRating.ENTIRELY_PLAUSIBLE: "entirely_plausible",
    PlausibilityRating.LARGELY_PLAUSIBLE: "largely_plausible",
    PlausibilityRating.SOMEWHAT_PLAUSIBLE: "somewhat_plausible",
    PlausibilityRating.IMPLAUSIBLE: "implausible",
}


@dataclass(frozen=True)
class PlausibilityAssessment:
    unit_id: str
    rating: PlausibilityRating
    notes: str
    reviewer: str
    assessed_at: str

    def to_json(self) -> dict:
        return {
            "unit_id": self.unit_id,
            "rating": int(self.rating),
            "notes": self.notes,
            "reviewer": self.reviewer,
            "assessed_at": self.assessed_at,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PlausibilityAssessment":
        return cls(
            unit_id=doc["unit_id"],
            rating=PlausibilityRating(doc["rating"]),
            notes=doc.get("notes", ""),
            reviewer=doc.get("reviewer", ""),
            assessed_at=doc.get("assessed_at", ""),
        )


@dataclass
class ReviewSummary:
    counts: dict[PlausibilityRating, int]
    total: int
    average_raw: Fraction | None
    average_display: str | None  # truncated to 2 decimals
    at_least_somewhat: int

    def to_json(self) -> dict:
        return {
            "counts": {RATING_LABELS[r]: self.counts[r] for r in sorted(self.counts, reverse=True)},
            "total": self.total,
            "average": self.average_display,
            "average_raw": (
                [self.average_raw.numerator, self.average_raw.denominator]
                if self.average_raw is not None
                else None
            ),
            "at_least_somewhat": self.at_least_somewhat,
        }


def _display_2dp(x: Fraction) -> str:
    # Truncated to 2 decimals: 980/357 (~2.7451) must display as 2.74.
    scaled = x * 100
    n = scaled.numerator // scaled.denominator
    return f"{n // 100}.{n % 100:02d}"


def summarize_counts(counts: dict[PlausibilityRating, int]) -> ReviewSummary:
    full = {r: counts.get(r, 0) for r in PlausibilityRating}
    total = sum(full.values())
    if total == 0:
        return ReviewSummary(counts=full, total=0, average_raw=None,
                             average_display=None, at_least_somewhat=0)
    score_sum = sum(int(r) * n for r, n in full.items())
    avg = Fraction(score_sum, total)
    return ReviewSummary(
        counts=full,
        total=total,
        average_raw=avg,
        average_display=_display_2dp(avg),
        at_least_somewhat=total - full[PlausibilityRating.IMPLAUSIBLE],
    )


class AssessmentStore:
    """Append-only JSONL store; the file itself is the audit log."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._latest: dict[tuple[str, str], PlausibilityAssessment] = {}
        self._entries: list[PlausibilityAssessment] = []
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    a = PlausibilityAssessment.from_json(json.loads(line))
                    self._entries.append(a)
                    self._latest[(a.unit_id, a.reviewer)] = a

    def record(self, a: PlausibilityAssessment) -> None:
        with self._lock:
            current = self._latest.get((a.unit_id, a.reviewer))
            if current is not None and current.rating == a.rating and current.notes == a.notes:
                return  # idempotent for identical payloads
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(a.to_json(), ensure_ascii=False))
                fh.write("\n")
                fh.flush()
            self._entries.append(a)
            self._latest[(a.unit_id, a.reviewer)] = a

    def latest(self) -> list[PlausibilityAssessment]:
        with self._lock:
            return list(self._latest.values())

    def latest_for_unit(self, unit_id: str) -> list[PlausibilityAssessment]:
        with self._lock:
            return [a for (uid, _), a in self._latest.items() if uid == unit_id]

    def audit_log(self) -> list[PlausibilityAssessment]:
        with self._lock:
            return list(self._entries)


def summarize_assessments(
    store: AssessmentStore,
    unit_ids: set[str] | None = None,
    reviewer: str | None = None,
) -> ReviewSummary:
    counts: dict[PlausibilityRating, int] = {}
    for a in store.latest():
        if unit_ids is not None and a.unit_id not in unit_ids:
            continue
        if reviewer is not None and a.reviewer != reviewer:
            continue
        counts[a.rating] = counts.get(a.rating, 0) + 1
    return summarize_counts(counts)


@dataclass
class ReviewItem:
    unit_id: str
    objective: str
    practice_id: str
    practice_name: str
    sector: str
    practice_description: str
    criteria_kind: str
    criteria_text: str
    profile: dict | None
    parse_status: str
    explanation: str

    def to_json(self, assessments: list[PlausibilityAssessment] | None = None) -> dict:
        doc = {
            "unit_id": self.unit_id,
            "objective": self.objective,
            "practice_id": self.practice_id,
            "practice_name": self.practice_name,
            "sector": self.sector,
            "practice_description": self.practice_description,
            "criteria_kind": self.criteria_kind,
            "criteria_text": self.criteria_text,
            "profile": self.profile,
            "parse_status": self.parse_status,
            "explanation": self.explanation,
        }
        if assessments is not None:
            doc["assessments"] = [a.to_json() for a in assessments]
        return doc


class ReviewError(ValueError):
    pass


def build_review_queue(
    chars: list[ParsedCharacterization],
    corpus: TaxonomyCorpus,
    objectives: list[EnvironmentalObjective],
) -> list[ReviewItem]:
    """All characterizations for the selected sheet objectives, in unit order."""
    if not objectives:
        raise ReviewError("empty objective selection")
    selected = set(objectives)
    by_unit = {c.unit_id: c for c in chars}
    items = []
    for unit in enumerate_units(corpus):
        if unit.objective not in selected:
            continue
        c = by_unit.get(unit.unit_id)
        if c is None:
            continue
        items.append(
            ReviewItem(
                unit_id=unit.unit_id,
                objective=unit.objective.value,
                practice_id=unit.practice.id,
                practice_name=unit.practice.name,
                sector=unit.practice.sector,
                practice_description=unit.practice.description,
                criteria_kind=unit.block.kind,
                criteria_text=unit.block.text,
                profile=c.profile.to_nested() if c.profile is not None else None,
                parse_status=c.parse_status,
                explanation=c.explanation,
            )
        )
    return items


class AssessmentBody(BaseModel):
    rating: int = Field(ge=0, le=3)
    notes: str = ""
    reviewer: str = Field(min_length=1)


def create_app(
    chars: list[ParsedCharacterization],
    corpus: TaxonomyCorpus,
    store: AssessmentStore,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="taxoscope review")
    all_objectives = list(EnvironmentalObjective)
    full_queue = build_review_queue(chars, corpus, all_objectives)
    items_by_id = {item.unit_id: item for item in full_queue}

    def parse_objectives(raw: str | None) -> list[EnvironmentalObjective]:
        if not raw:
            return all_objectives
        by_value = {o.value: o for o in EnvironmentalObjective}
        out = []
        for name in raw.split(","):
            name = name.strip()
            if name not in by_value:
                raise HTTPException(status_code=422, detail=f"unknown objective: {name}")
            out.append(by_value[name])
        return out

    @app.get("/api/queue")
    def get_queue(
        objectives: str | None = None,
        offset: int = Query(0, ge=0),
        limit: int = Query(50, ge=1, le=1000),
    ):
        selected = set(parse_objectives(objectives))
        queue = [item for item in full_queue
                 if EnvironmentalObjective(item.objective) in selected]
        page = queue[offset:offset + limit]
        return {
            "total": len(queue),
            "offset": offset,
            "limit": limit,
            "items": [item.to_json(store.latest_for_unit(item.unit_id)) for item in page],
        }

    @app.put("/api/items/{unit_id:path}/assessment")
    def put_assessment(unit_id: str, body: AssessmentBody):
        if unit_id not in items_by_id:
            raise HTTPException(status_code=404, detail=f"unknown unit: {unit_id}")
        assessment = PlausibilityAssessment(
            unit_id=unit_id,
            rating=PlausibilityRating(body.rating),
            notes=body.notes,
            reviewer=body.reviewer,
            assessed_at=datetime.now(timezone.utc).isoformat(),
        )
        store.record(assessment)
        return {"stored": True, "assessment": assessment.to_json()}

    @app.get("/api/items/{unit_id:path}")
    def get_item(unit_id: str):
        item = items_by_id.get(unit_id)
        if item is None:
            raise HTTPException(status_code=404, detail=f"unknown unit: {unit_id}")
        return item.to_json(store.latest_for_unit(unit_id))

    @app.get("/api/summary")
    def get_summary(objectives: str | None = None, reviewer: str | None = None):
        selected = set(parse_objectives(objectives))
        unit_ids = {
            item.unit_id
            for item in full_queue
            if EnvironmentalObjective(item.objective) in selected
        }
        return summarize_assessments(store, unit_ids=unit_ids, reviewer=reviewer).to_json()

    @app.get("/api/export", response_class=PlainTextResponse)
    def export_assessments():
        lines = [json.dumps(a.to_json(), ensure_ascii=False) for a in store.audit_log()]
        return "\n".join(lines) + ("\n" if lines else "")

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

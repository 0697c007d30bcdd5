"""Tolerant extraction of the count structure from free-text model output.

The tolerance set is closed: code fences, surrounding prose, single or double
quotes, trailing commas, `//` and `#` end-of-line comments, quoted numerals,
and missing keys (defaulted to 0, recorded as a repair). Anything else fails
loudly; a failed parse keeps the raw text and never aborts a batch.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .constraints import ConstraintProfile, Granularity, ProcessDimension
from .gateway import RawResponse

DIMENSION_LABELS = tuple(d.value for d in ProcessDimension)
GRANULARITY_LABELS = tuple(g.value for g in Granularity)

STATUS_CLEAN = "clean"
STATUS_REPAIRED = "repaired"
STATUS_FAILED = "failed"


class ParseFailure(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass
class ParsedCharacterization:
    unit_id: str
    profile: ConstraintProfile | None
    explanation: str
    parse_status: str
    repairs: list[str] = field(default_factory=list)
    failure_reason: str | None = None

    def __post_init__(self) -> None:
        if self.parse_status == STATUS_FAILED and self.profile is not None:
            raise ValueError("failed parse must not carry a profile")
        if self.parse_status != STATUS_FAILED and self.profile is None:
            raise ValueError("non-failed parse must carry a profile")
        if self.parse_status == STATUS_REPAIRED and not self.repairs:
            raise ValueError("repaired parse must list its repairs")


def _strip_code_fences(raw: str) -> str:
    return "\n".join(
        line for line in raw.splitlines() if not line.lstrip().startswith("```")
    )


def _balanced_regions(text: str) -> list[tuple[int, int]]:
    """All balanced {...} spans (outer and nested), as (start, end) offsets."""
    regions = []
    stack = []
    for i, ch in enumerate(text):
        if ch == "{":
            stack.append(i)
        elif ch == "}":
            if stack:
                start = stack.pop()
                regions.append((start, i + 1))
    return regions


def extract_candidate_block(raw: str) -> str | None:
    """The innermost balanced-brace region holding the count structure.

    Among balanced regions containing `within_activities`, the smallest one
    that also names a process dimension is chosen, so nested granularity
    sub-objects are not picked over the enclosing structure.
    """
    text = _strip_code_fences(raw)
    candidates = []
    for start, end in _balanced_regions(text):
        region = text[start:end]
        if "within_activities" not in region:
            continue
        has_dimension = any(f"{d}" in region for d in DIMENSION_LABELS)
        candidates.append((not has_dimension, end - start, region))
    if not candidates:
        return None
    candidates.sort(key=lambda c: (c[0], c[1]))
    return candidates[0][2]


_PLACEHOLDER_RE = re.compile(r"""['"]?([\w\- ]+)['"]?\s*:\s*\[""")


def _strip_comments(block: str) -> tuple[str, bool]:
    """Remove `//` and `#` end-of-line comments outside string literals."""
    out = []
    stripped_any = False
    for line in block.splitlines():
        result = []
        quote = None
        i = 0
        while i < len(line):
            ch = line[i]
            if quote:
                result.append(ch)
                if ch == quote:
                    quote = None
                i += 1
                continue
            if ch in "'\"":
                quote = ch
                result.append(ch)
                i += 1
                continue
            if ch == "#" or line[i:i + 2] == "//":
                if line[i:].strip():
                    stripped_any = True
                break
            result.append(ch)
            i += 1
        out.append("".join(result))
    return "\n".join(out), stripped_any


_TRAILING_COMMA_RE = re.compile(r",(\s*[}\]])")


def parse_profile(block: str) -> tuple[ConstraintProfile, list[str]]:
    """Tolerantly parse one candidate block into a profile.

    Raises ParseFailure for anything outside the documented tolerance set.
    """
    if not block.strip():
        raise ParseFailure("empty block")
    repairs: list[str] = []

    text, stripped = _strip_comments(block)
    if stripped:
        repairs.append("stripped comment")

    text, n_commas = _TRAILING_COMMA_RE.subn(r"\1", text)
    if n_commas:
        repairs.append("removed trailing comma")

    # Unresolved template placeholders like `'irrelevant': [no. of ...]`
    m = _PLACEHOLDER_RE.search(text)
    if m:
        raise ParseFailure(f"non-numeric slot {m.group(1).strip()}")

    try:
        doc = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError) as exc:
        raise ParseFailure(f"unparseable block: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseFailure("block is not a mapping")

    def coerce(value, slot_name: str) -> int:
        if isinstance(value, bool):
            raise ParseFailure(f"non-numeric slot {slot_name}")
        if isinstance(value, int):
            n = value
        elif isinstance(value, str) and value.strip().lstrip("-").isdigit():
            n = int(value.strip())
            repairs.append(f"unquoted numeral {slot_name}")
        else:
            raise ParseFailure(f"non-numeric slot {slot_name}")
        if n < 0:
            raise ParseFailure("negative count")
        return n

    nested: dict = {}
    for dim in DIMENSION_LABELS:
        sub = doc.get(dim)
        nested[dim] = {}
        if sub is None:
            repairs.append(f"defaulted {dim}")
            nested[dim] = {g: 0 for g in GRANULARITY_LABELS}
            continue
        if not isinstance(sub, dict):
            raise ParseFailure(f"non-numeric slot {dim}")
        for gran in GRANULARITY_LABELS:
            if gran not in sub:
                repairs.append(f"defaulted {dim}.{gran}")
                nested[dim][gran] = 0
            else:
                nested[dim][gran] = coerce(sub[gran], f"{dim}.{gran}")
        for extra in set(sub) - set(GRANULARITY_LABELS):
            repairs.append(f"ignored key {dim}.{extra}")

    if "irrelevant" in doc:
        nested["irrelevant"] = coerce(doc["irrelevant"], "irrelevant")
    else:
        repairs.append("defaulted irrelevant")
        nested["irrelevant"] = 0
    for extra in set(doc) - set(DIMENSION_LABELS) - {"irrelevant"}:
        repairs.append(f"ignored key {extra}")

    return ConstraintProfile.from_nested(nested), repairs


def parse_response(raw: RawResponse) -> ParsedCharacterization:
    """Extract + parse; the full raw text is always retained as explanation."""
    block = extract_candidate_block(raw.text)
    if block is None:
        return ParsedCharacterization(
            unit_id=raw.unit_id,
            profile=None,
            explanation=raw.text,
            parse_status=STATUS_FAILED,
            failure_reason="no candidate block",
        )
    try:
        profile, repairs = parse_profile(block)
    except ParseFailure as exc:
        return ParsedCharacterization(
            unit_id=raw.unit_id,
            profile=None,
            explanation=raw.text,
            parse_status=STATUS_FAILED,
            failure_reason=exc.reason,
        )
    return ParsedCharacterization(
        unit_id=raw.unit_id,
        profile=profile,
        explanation=raw.text,
        parse_status=STATUS_REPAIRED if repairs else STATUS_CLEAN,
        repairs=repairs,
    )


def serialize_profile(p: ConstraintProfile) -> str:
    """Canonical single-quoted block in the documented response shape."""
    nested = p.to_nested()
    lines = ["{"]
    for dim in DIMENSION_LABELS:
        lines.append(f"    '{dim}': {{")
        lines.append(f"        'within_activities': {nested[dim]['within_activities']},")
        lines.append(f"        'between_activities': {nested[dim]['between_activities']}}},")
    lines.append(f"    'irrelevant': {nested['irrelevant']}}}")
    return "\n".join(lines)


# --- characterization dataset (JSON Lines) -------------------------------


def characterization_to_json(c: ParsedCharacterization) -> dict:
    return {
        "unit_id": c.unit_id,
        "profile": c.profile.to_nested() if c.profile is not None else None,
        "parse_status": c.parse_status,
        "repairs": c.repairs,
        "failure_reason": c.failure_reason,
        "explanation": c.explanation,
    }


def characterization_from_json(doc: dict) -> ParsedCharacterization:
    profile = doc.get("profile")
    return ParsedCharacterization(
        unit_id=doc["unit_id"],
        profile=ConstraintProfile.from_nested(profile) if profile is not None else None,
        explanation=doc.get("explanation", ""),
        parse_status=doc["parse_status"],
        repairs=list(doc.get("repairs") or []),
        failure_reason=doc.get("failure_reason"),
    )


def write_dataset(path: str | Path, chars: list[ParsedCharacterization]) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for c in chars:
            fh.write(json.dumps(characterization_to_json(c), ensure_ascii=False))
            fh.write("\n")


def read_dataset(path: str | Path) -> list[ParsedCharacterization]:
    path = Path(path)
    out = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(characterization_from_json(json.loads(line)))
    return out

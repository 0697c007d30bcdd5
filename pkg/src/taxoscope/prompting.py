"""Prompt templating: structural validation and deterministic rendering."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .ingest import CharacterizationUnit

PLACEHOLDERS = ("practice_description", "criteria_text")

# Structural sections the template must declare, in order.
REQUIRED_SECTIONS = (
    "objective",
    "constraint_types",
    "examples",
    "task",
    "output_format",
    "practice",
    "criteria",
)

SECTION_PREFIX = "## SECTION: "


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    text: str
    id: str
    version: str


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    unit_id: str
    template_id: str
    template_version: str
    content_hash: str


def default_template() -> PromptTemplate:
    text = resources.files("taxoscope.data").joinpath("default_template.txt").read_text(
        encoding="utf-8"
    )
    return PromptTemplate(text=text, id="default", version="1")


def load_template(path: str | Path, template_id: str | None = None, version: str = "1") -> PromptTemplate:
    path = Path(path)
    return PromptTemplate(
        text=path.read_text(encoding="utf-8"),
        id=template_id or path.stem,
        version=version,
    )


def validate_template(t: PromptTemplate) -> list[str]:
    """Return the list of structural violations; empty means ok."""
    violations = []
    for name in PLACEHOLDERS:
        token = "{{" + name + "}}"
        n = t.text.count(token)
        if n == 0:
            violations.append(f"missing placeholder {name}")
        elif n > 1:
            violations.append(f"duplicate placeholder {name}")
    sections = [
        line[len(SECTION_PREFIX):].strip()
        for line in t.text.splitlines()
        if line.startswith(SECTION_PREFIX)
    ]
    for name in REQUIRED_SECTIONS:
        if name not in sections:
            violations.append(f"missing section {name}")
    return violations


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def render_prompt(t: PromptTemplate, unit: CharacterizationUnit) -> RenderedPrompt:
    violations = validate_template(t)
    if violations:
        raise TemplateError("invalid template: " + "; ".join(violations))
    if not unit.block.text.strip():
        raise TemplateError(f"unit {unit.unit_id} has empty criteria text")

    practice = unit.practice
    practice_description = (
        f"{practice.name} (sector: {practice.sector})\n{practice.description}"
    )
    text = t.text.replace("{{practice_description}}", practice_description)
    text = text.replace("{{criteria_text}}", unit.block.text)
    if "{{" in text and "}}" in text[text.index("{{"):]:
        raise TemplateError(f"residual placeholder after substitution in {unit.unit_id}")

    return RenderedPrompt(
        text=text,
        unit_id=unit.unit_id,
        template_id=t.id,
        template_version=t.version,
        content_hash=content_hash(text),
    )

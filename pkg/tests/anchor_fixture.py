"""Synthetic desk-scale corpus + replay cache anchored to the published totals.

21 units across all six objectives. Per-unit profiles are chosen so that the
category-wise sums come out at (624, 8, 8, 36, 96, 2, 284, 255, 323), i.e.
grand total 1636 with 1313 process-relevant constraints. The education,
entertainment, and health sectors carry all-zero profiles, and the water and
pollution objectives have no control-flow-within or temporal-within counts.
"""

from __future__ import annotations

import json
from pathlib import Path

from taxoscope.constraints import CATEGORY_ORDER, ConstraintProfile
from taxoscope.gateway import ModelSettings, cache_key
from taxoscope.ingest import CSV_COLUMNS, load_corpus, enumerate_units
from taxoscope.parsing import serialize_profile
from taxoscope.prompting import default_template, render_prompt

FIXTURE_DIR = Path(__file__).parent / "fixtures" / "anchored"

FIXTURE_SETTINGS = ModelSettings(
    model_name="fixture-model",
    temperature=0.0,
    seed=42,
    max_tokens=1024,
)

EXPECTED_CATEGORY_TOTALS = {
    "cf_within": 624,
    "cf_between": 8,
    "temporal_within": 8,
    "temporal_between": 36,
    "resource_within": 96,
    "resource_between": 2,
    "data_within": 284,
    "data_between": 255,
    "irrelevant": 323,
}
EXPECTED_TOTAL = 1636
EXPECTED_RELEVANT = 1313

# (objective, practice_id, kind) -> 9-tuple in CATEGORY_ORDER
UNIT_PROFILES: dict[tuple[str, str, str], tuple[int, ...]] = {
    ("mitigation", "energy-solar", "sc"): (200, 2, 3, 10, 30, 1, 80, 70, 100),
    ("mitigation", "energy-solar", "dnsh_water"): (50, 1, 0, 4, 10, 0, 30, 25, 40),
    ("mitigation", "energy-solar", "dnsh_pollution"): (40, 0, 1, 2, 8, 0, 20, 20, 30),
    ("mitigation", "steel-manufacture", "sc"): (120, 2, 2, 6, 20, 1, 60, 50, 60),
    ("mitigation", "steel-manufacture", "dnsh_circular"): (30, 1, 0, 2, 5, 0, 15, 15, 20),
    ("mitigation", "rail-transport", "sc"): (60, 1, 1, 3, 8, 0, 25, 20, 25),
    ("adaptation", "edu-services", "sc"): (0, 0, 0, 0, 0, 0, 0, 0, 0),
    ("adaptation", "cinema-operation", "sc"): (0, 0, 0, 0, 0, 0, 0, 0, 0),
    ("adaptation", "hospital-care", "sc"): (0, 0, 0, 0, 0, 0, 0, 0, 0),
    ("adaptation", "flood-protection", "sc"): (40, 1, 1, 4, 6, 0, 20, 18, 20),
    ("adaptation", "flood-protection", "dnsh_biodiversity"): (20, 0, 0, 1, 3, 0, 8, 8, 6),
    ("water", "water-treatment", "sc"): (0, 0, 0, 1, 1, 0, 6, 6, 4),
    ("water", "water-treatment", "dnsh_mitigation"): (0, 0, 0, 0, 0, 0, 2, 2, 1),
    ("water", "desalination", "sc"): (0, 0, 0, 1, 1, 0, 3, 4, 2),
    ("circular", "eol-reuse", "sc"): (30, 0, 0, 1, 1, 0, 5, 6, 4),
    ("circular", "eol-reuse", "dnsh_pollution"): (10, 0, 0, 0, 0, 0, 2, 2, 2),
    ("circular", "recycling-plant", "sc"): (14, 0, 0, 0, 1, 0, 3, 3, 2),
    ("pollution", "chem-cleanup", "sc"): (0, 0, 0, 1, 1, 0, 3, 3, 3),
    ("pollution", "chem-cleanup", "dnsh_water"): (0, 0, 0, 0, 0, 0, 1, 1, 1),
    ("biodiversity", "conservation", "sc"): (8, 0, 0, 0, 1, 0, 1, 1, 2),
    ("biodiversity", "conservation", "dnsh_pollution"): (2, 0, 0, 0, 0, 0, 0, 1, 1),
}

ZERO_PROFILE_SECTORS = {"Education", "Entertainment", "Human Health and Social Work"}

# practice metadata: objective -> rows
PRACTICES = {
    "mitigation": [
        {
            "practice_id": "energy-solar",
            "practice_name": "Electricity generation using solar photovoltaic technology",
            "sector": "Energy",
            "description": "Construction and operation of facilities producing electricity from solar PV.",
            "sc_criteria": "The operator obtains a grid connection permit before commissioning (1). "
            "Lifecycle greenhouse gas emissions are below 100 gCO2e/kWh.",
            "dnsh_water": "A water use and protection management plan is implemented for panel cleaning.",
            "dnsh_pollution": "Panels are designed for high durability and recyclability at end of life.",
            "footnotes": "1::Permit per the applicable national grid code.",
        },
        {
            "practice_id": "steel-manufacture",
            "practice_name": "Manufacture of iron and steel",
            "sector": "Manufacturing",
            "description": "Production of crude steel in integrated or electric-arc routes.",
            "sc_criteria": "Direct emissions of each production step stay below the assigned benchmark value.",
            "dnsh_circular": "By-products and residues are prepared for reuse where technically feasible.",
            "footnotes": "",
        },
        {
            "practice_id": "rail-transport",
            "practice_name": "Freight rail transport",
            "sector": "Transport",
            "description": "Operation of freight trains on interurban rail networks.",
            "sc_criteria": "Trains have zero direct tailpipe emissions, or bimode operation is documented per route.",
            "footnotes": "",
        },
    ],
    "adaptation": [
        {
            "practice_id": "edu-services",
            "practice_name": "Education services",
            "sector": "Education",
            "description": "Provision of primary, secondary, and tertiary education.",
            "sc_criteria": "The practice implements physical and non-physical solutions that substantially "
            "reduce the most important climate risks material to it.",
            "footnotes": "",
        },
        {
            "practice_id": "cinema-operation",
            "practice_name": "Motion picture, video and television programme activities",
            "sector": "Entertainment",
            "description": "Creative production and exhibition of audiovisual works.",
            "sc_criteria": "The practice implements solutions that substantially reduce material climate risks.",
            "footnotes": "",
        },
        {
            "practice_id": "hospital-care",
            "practice_name": "Residential care and hospital activities",
            "sector": "Human Health and Social Work",
            "description": "Provision of inpatient health and residential care services.",
            "sc_criteria": "The practice implements solutions that substantially reduce material climate risks.",
            "footnotes": "",
        },
        {
            "practice_id": "flood-protection",
            "practice_name": "Flood and drought risk prevention and protection",
            "sector": "Water supply",
            "description": "Construction and operation of flood defence and drought mitigation infrastructure.",
            "sc_criteria": "An adaptation plan is established and the implemented solution is reviewed periodically [2].",
            "dnsh_biodiversity": "An environmental impact assessment is completed prior to construction.",
            "footnotes": "2::Review at least every five years or after significant flood events.",
        },
    ],
    "water": [
        {
            "practice_id": "water-treatment",
            "practice_name": "Construction, extension and operation of waste water collection and treatment",
            "sector": "Water supply",
            "description": "Centralized waste water systems including collection and treatment.",
            "sc_criteria": "Net energy consumption of the treatment plant is measured and kept within the declared target.",
            "dnsh_mitigation": "Greenhouse gas emissions of the plant are assessed and disclosed.",
            "footnotes": "",
        },
        {
            "practice_id": "desalination",
            "practice_name": "Desalination of sea water",
            "sector": "Water supply",
            "description": "Production of drinking water from sea water.",
            "sc_criteria": "Energy use per cubic metre of produced water remains below the declared threshold.",
            "footnotes": "",
        },
    ],
    "circular": [
        {
            "practice_id": "eol-reuse",
            "practice_name": "Preparation for re-use of end-of-life products and components",
            "sector": "Manufacturing",
            "description": "Checking, cleaning, and repairing products so they can be re-used.",
            "sc_criteria": "Appropriate tools and equipment are used so recovered components meet re-use standards.",
            "dnsh_pollution": "Hazardous substances encountered during dismantling are handled per protocol.",
            "footnotes": "",
        },
        {
            "practice_id": "recycling-plant",
            "practice_name": "Material recovery from non-hazardous waste",
            "sector": "Waste management",
            "description": "Sorting and processing of separately collected non-hazardous waste.",
            "sc_criteria": "At least 50%, in terms of weight, of the processed waste is converted into secondary raw materials.",
            "footnotes": "",
        },
    ],
    "pollution": [
        {
            "practice_id": "chem-cleanup",
            "practice_name": "Remediation of contaminated sites and areas",
            "sector": "Manufacturing",
            "description": "Clean-up of contaminated soil, sites, and groundwater.",
            "sc_criteria": "Contaminant concentrations after remediation are documented below regulatory limits.",
            "dnsh_water": "Discharged water is monitored for residual contaminants.",
            "footnotes": "",
        },
    ],
    "biodiversity": [
        {
            "practice_id": "conservation",
            "practice_name": "Conservation, including restoration, of habitats and ecosystems",
            "sector": "Agriculture and Forestry",
            "description": "Management of areas for conservation and restoration outcomes.",
            "sc_criteria": "A management plan with conservation objectives is in place and monitored.",
            "dnsh_pollution": "The use of fertilisers across the practice is minimised.",
            "footnotes": "",
        },
    ],
}


def profile_for(objective: str, practice_id: str, kind: str) -> ConstraintProfile:
    values = UNIT_PROFILES[(objective, practice_id, kind)]
    return ConstraintProfile(**dict(zip(CATEGORY_ORDER, values)))


def decorate_response(block: str, style: int) -> str:
    """Wrap a serialized profile block in one of the tolerated noise styles."""
    style = style % 4
    if style == 0:
        return (
            "The criteria describe permits, thresholds, and review duties.\n"
            "Here is the characterization:\n" + block + "\nEnd of characterization."
        )
    if style == 1:
        return "Counts below.\n```json\n" + block + "\n```\n"
    if style == 2:
        lines = block.splitlines()
        lines[0] = lines[0] + "  # characterization counts"
        out = "\n".join(lines)
        return "I identified the following constraints:\n" + out
    # style 3: trailing comma + // comment
    noisy = block.replace(
        "    'irrelevant'", "    // process-irrelevant bucket\n    'irrelevant'"
    )
    noisy = noisy.rstrip("}") + ",}"
    return "Result:\n" + noisy + "\n"


def write_corpus_csvs(corpus_dir: Path) -> None:
    import csv

    corpus_dir.mkdir(parents=True, exist_ok=True)
    for objective, rows in PRACTICES.items():
        with (corpus_dir / f"{objective}.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow({c: row.get(c, "") for c in CSV_COLUMNS})


def write_cache(corpus_dir: Path, cache_dir: Path) -> list[str]:
    """Render prompts with the default template and seed the replay cache."""
    corpus = load_corpus(corpus_dir, "csv-set")
    template = default_template()
    units = enumerate_units(corpus)
    keys = []
    for i, unit in enumerate(units):
        profile = profile_for(unit.objective.value, unit.practice.id, unit.block.kind)
        text = decorate_response(serialize_profile(profile), style=i)
        prompt = render_prompt(template, unit)
        key = cache_key(prompt, FIXTURE_SETTINGS)
        path = cache_dir / key[:2] / f"{key}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = {
            "key": key,
            "prompt_hash": prompt.content_hash,
            "settings": {
                "model_name": FIXTURE_SETTINGS.model_name,
                "temperature": FIXTURE_SETTINGS.temperature,
                "seed": FIXTURE_SETTINGS.seed,
                "max_tokens": FIXTURE_SETTINGS.max_tokens,
            },
            "response_text": text,
            "retrieved_at": "2026-01-01T00:00:00+00:00",
        }
        path.write_text(json.dumps(entry, ensure_ascii=False, indent=1), encoding="utf-8")
        keys.append(key)
    return keys


def generate(root: Path = FIXTURE_DIR) -> None:
    corpus_dir = root / "corpus"
    cache_dir = root / "cache"
    write_corpus_csvs(corpus_dir)
    keys = write_cache(corpus_dir, cache_dir)
    manifest = {
        "units": len(keys),
        "expected_category_totals": EXPECTED_CATEGORY_TOTALS,
        "expected_total": EXPECTED_TOTAL,
        "expected_relevant": EXPECTED_RELEVANT,
        "settings": {
            "model_name": FIXTURE_SETTINGS.model_name,
            "temperature": FIXTURE_SETTINGS.temperature,
            "seed": FIXTURE_SETTINGS.seed,
            "max_tokens": FIXTURE_SETTINGS.max_tokens,
        },
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


def _check_totals() -> None:
    sums = {c: 0 for c in CATEGORY_ORDER}
    for values in UNIT_PROFILES.values():
        for c, v in zip(CATEGORY_ORDER, values):
            sums[c] += v
    assert sums == EXPECTED_CATEGORY_TOTALS, sums
    assert sum(sums.values()) == EXPECTED_TOTAL
    assert sum(sums.values()) - sums["irrelevant"] == EXPECTED_RELEVANT


_check_totals()


if __name__ == "__main__":
    generate()
    print(f"fixture written to {FIXTURE_DIR}")

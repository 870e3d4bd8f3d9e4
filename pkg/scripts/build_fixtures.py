"""Regenerate the shipped fixture files.

Writes fixtures/t1.json, fixtures/base_case.json (seed 7) and
fixtures/family.json (seeded instance family with enumeration-oracle optima).
Run from the repository root: python scripts/build_fixtures.py
"""
from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

from interpsched.basecase import BASE_SEED, make_base_instance
from interpsched.fileio import dumps, instance_document, scenarios_document
from interpsched.fixtures import generate_fixture_family, make_t1


def family_document(entries) -> dict:
    return {
        "schema_version": 1,
        "entries": [
            {
                "name": entry.name,
                "seed": entry.seed,
                "oracle_hash": entry.oracle_hash,
                "instance": instance_document(entry.instance),
                "scenarios": scenarios_document(entry.scenarios),
                "optimum_bits": [int(b) for b in entry.optimum_bits],
                "optimum_value": entry.optimum_value,
            }
            for entry in entries
        ],
    }


def main() -> int:
    fixtures = ROOT / "fixtures"
    fixtures.mkdir(exist_ok=True)
    (fixtures / "t1.json").write_text(dumps(instance_document(make_t1())), encoding="utf-8")
    (fixtures / "base_case.json").write_text(
        dumps(instance_document(make_base_instance(BASE_SEED))), encoding="utf-8"
    )
    entries = generate_fixture_family()
    (fixtures / "family.json").write_text(dumps(family_document(entries)), encoding="utf-8")
    print(f"wrote {len(entries)} family entries and 2 instance fixtures to {fixtures}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

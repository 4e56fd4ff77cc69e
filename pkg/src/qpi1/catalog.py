"""Fixture catalog shipped with the package."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .dsl import parse
from .relations import BoundQuiver

FIXTURES = ("f11a", "f11b", "f13", "f15", "f17a", "f17b", "f17c", "f19",
            "f19-prime", "kron", "a3line", "square", "crown")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files(__package__) / "fixtures" / name))


def fixture_text(name: str) -> str:
    return fixture_path(f"{name}.qv").read_text(encoding="utf-8")


def load_fixture(name: str) -> BoundQuiver:
    return parse(fixture_text(name), f"fixtures/{name}.qv")


def load_json_fixture(name: str) -> dict:
    return json.loads(fixture_path(name).read_text(encoding="utf-8"))


def resolve(path: str) -> Path:
    """A user path, falling back to the packaged fixtures for ``fixtures/NAME``."""
    p = Path(path)
    if p.exists():
        return p
    for candidate in (p.name, f"{p.name}.qv", f"{path}.qv"):
        q = fixture_path(Path(candidate).name)
        if q.exists():
            return q
    return p

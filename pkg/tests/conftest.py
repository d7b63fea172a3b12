from pathlib import Path

import pytest

from galois_equidist.orbits import enumerate_orbit, load_point
from galois_equidist.suites import packaged_corpus

CORPUS = packaged_corpus()
POINT_FILES = sorted(p for p in (CORPUS / "points").iterdir() if p.suffix in (".json", ".toml"))
FUNCTION_FILES = sorted((CORPUS / "functions").glob("*.json"))


def point_path(name: str) -> Path:
    for p in POINT_FILES:
        if p.stem == name:
            return p
    raise KeyError(name)


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def orbit_of():
    cache = {}

    def get(name):
        if name not in cache:
            spec = load_point(point_path(name))
            cache[name] = (spec, enumerate_orbit(spec))
        return cache[name]

    return get

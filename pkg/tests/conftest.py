from pathlib import Path

import numpy as np
import pytest

from garland_vanishing.cli_io.utils import parse_complex, parse_group, parse_representation
from garland_vanishing.core.cochains import CochainNormContext
from garland_vanishing.core.complex_core import build_complex
from garland_vanishing.core.constants import DEFAULT_GROUP_CAP
from garland_vanishing.core.group_action import close_group

FIXTURES = Path(__file__).resolve().parent.parent / "garland_vanishing" / "fixtures"


def fixture_path(kind: str, name: str | None) -> str | None:
    if name is None:
        return None
    return str(FIXTURES / kind / f"{name}.json")


def load_case(complex_name: str, group_name: str | None = None, rep_name: str | None = None):
    cx = parse_complex(fixture_path("complexes", complex_name))
    group = parse_group(fixture_path("groups", group_name), cx, DEFAULT_GROUP_CAP)
    rep = parse_representation(fixture_path("representations", rep_name), group)
    return cx, group, rep


def random_pure_complex(rng: np.random.Generator, max_vertices: int = 12, dimension: int = 2):
    """Union of random top simplexes on at most ``max_vertices`` vertices."""
    m = int(rng.integers(dimension + 2, max_vertices + 1))
    tops = {
        tuple(sorted(int(v) for v in rng.choice(m, size=dimension + 1, replace=False)))
        for _ in range(int(rng.integers(1, 2 * m)))
    }
    return build_complex([[str(v) for v in t] for t in sorted(tops)])


def random_cyclic_complex(rng: np.random.Generator, max_vertices: int = 12):
    """Random pure 2-complex on 0..m−1 closed under i ↦ i+1 mod m, with that rotation group."""
    m = int(rng.integers(4, max_vertices + 1))
    tops = set()
    for _ in range(int(rng.integers(1, 4))):
        seed = [int(v) for v in rng.choice(m, size=3, replace=False)]
        for shift in range(m):
            tops.add(tuple(sorted((v + shift) % m for v in seed)))
    cx = build_complex([[str(v) for v in t] for t in sorted(tops)], vertices=[str(i) for i in range(m)])
    group = close_group([tuple((i + 1) % m for i in range(m))], m)
    return cx, group


def betti_numbers(complex_) -> list[int]:
    """Real Betti numbers from ranks of the unoriented-sorted incidence matrices."""
    n = complex_.dimension
    ranks = []
    for k in range(n):
        low = {s: i for i, s in enumerate(complex_.simplexes(k))}
        high = complex_.simplexes(k + 1)
        m = np.zeros((len(high), len(low)))
        for r, s in enumerate(high):
            for i in range(len(s)):
                m[r, low[s[:i] + s[i + 1 :]]] = (-1) ** i
        ranks.append(int(np.linalg.matrix_rank(m)))
    padded = [0] + ranks + [0]
    return [len(complex_.simplexes(k)) - padded[k] - padded[k + 1] for k in range(n + 1)]


@pytest.fixture
def case():
    return load_case


@pytest.fixture
def path():
    return fixture_path


@pytest.fixture
def context():
    def build(complex_name, group_name=None, rep_name=None, **kwargs):
        cx, group, rep = load_case(complex_name, group_name, rep_name)
        return CochainNormContext(cx, group, rep, **kwargs)

    return build


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def betti():
    return betti_numbers


@pytest.fixture
def random_complex():
    return random_pure_complex


@pytest.fixture
def random_cyclic():
    return random_cyclic_complex

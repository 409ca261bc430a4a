import random
from math import gcd

import pytest

from hilb2.lattice import LinearForm


def seeded_forms(seed: int, n: int, m_max: int) -> list[LinearForm]:
    """Deterministic sample of primitive canonical forms."""
    rng = random.Random(seed)
    out = []
    seen = set()
    while len(out) < n:
        t = tuple(rng.randint(-m_max, m_max) for _ in range(3))
        if t == (0, 0, 0) or gcd(gcd(t[0], t[1]), t[2]) != 1:
            continue
        f = LinearForm.from_raw(*t)
        if f.triple in seen:
            continue
        seen.add(f.triple)
        out.append(f)
    return out


@pytest.fixture
def rng():
    return random.Random(0)

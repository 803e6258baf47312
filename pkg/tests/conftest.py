import math
import random
from fractions import Fraction
from functools import lru_cache
from itertools import product

from hypothesis import strategies as st

from rightsize.model import Instance


def feasible_sequences(inst: Instance) -> int:
    configs = list(product(*(range(c + 1) for c in inst.m)))
    return math.prod(sum(1 for c in configs if sum(c) >= v) for v in inst.lam)


def seeded_instance(seed: int, d_max: int = 3, m_max: int = 2, T_max: int = 8, cap: int = 10**6) -> Instance:
    """Small random instance; T is cut back until exhaustive search fits ``cap``."""
    rng = random.Random(seed)
    d = rng.randint(1, d_max)
    m = tuple(rng.randint(1, m_max) for _ in range(d))
    ls = sorted(rng.sample(range(0, 24), d), reverse=True)
    bs = sorted(rng.sample(range(1, 40), d))
    T = rng.randint(1, T_max)
    width = sum(m)
    lam = [rng.randint(0, width) if rng.random() < 0.7 else 0 for _ in range(T)]
    inst = Instance(m, [Fraction(b, 2) for b in bs], [Fraction(v, 2) for v in ls], lam)
    while feasible_sequences(inst) > cap:
        inst = inst.prefix(inst.T - 1)
    return inst


@lru_cache(maxsize=None)
def corpus(n: int = 1000) -> tuple[Instance, ...]:
    return tuple(seeded_instance(seed) for seed in range(n))


@st.composite
def instances(draw, d_max=3, m_max=2, T_max=10, allow_free=True):
    d = draw(st.integers(1, d_max))
    m = tuple(draw(st.integers(1, m_max)) for _ in range(d))
    lo = 0 if allow_free else 1
    ls = sorted(draw(st.lists(st.integers(lo, 30), min_size=d, max_size=d, unique=True)), reverse=True)
    bs = sorted(draw(st.lists(st.integers(1, 60), min_size=d, max_size=d, unique=True)))
    den = draw(st.sampled_from([1, 2, 3]))
    T = draw(st.integers(0, T_max))
    lam = draw(st.lists(st.integers(0, sum(m)), min_size=T, max_size=T))
    return Instance(m, [Fraction(b, den) for b in bs], [Fraction(v, den) for v in ls], lam)


@st.composite
def schedules_for(draw, inst: Instance, feasible: bool = True):
    rows = []
    for demand in inst.lam:
        while True:
            row = tuple(draw(st.integers(0, c)) for c in inst.m)
            if not feasible or sum(row) >= demand:
                break
            # top up greedily from the highest type so the draw terminates
            row = list(row)
            for j in reversed(range(inst.d)):
                while sum(row) < demand and row[j] < inst.m[j]:
                    row[j] += 1
            row = tuple(row)
            break
        rows.append(row)
    return rows

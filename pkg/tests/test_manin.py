import math
import random
from fractions import Fraction

import pytest

from ocsymb.manin import (
    Cusp,
    ManinData,
    SIGMA,
    TAU,
    continued_fraction_paths,
    gamma0_index,
    mat_det,
    mat_mul,
)


@pytest.mark.parametrize("m,idx", [(33, 48), (3, 4), (5, 6), (11, 12), (15, 24)])
def test_index_formula(m, idx):
    assert gamma0_index(m) == idx
    assert ManinData(m).index == idx


def test_sl2_lifts():
    md = ManinData(33)
    for (c, d), g in zip(md.p1, md.reps):
        assert mat_det(g) == 1
        assert md.p1_class(g[2], g[3]) == md.p1_class(c, d)


def test_generators_of_psl2_have_right_orders():
    s2 = mat_mul(SIGMA, SIGMA)
    assert s2 == (-1, 0, 0, -1)
    t3 = mat_mul(mat_mul(TAU, TAU), TAU)
    assert t3 == (1, 0, 0, 1)


def test_continued_fraction_telescopes():
    rng = random.Random(17)
    for _ in range(50):
        num = rng.randrange(-400, 400)
        den = rng.randrange(1, 120)
        cusp = Cusp(num, den)
        paths = continued_fraction_paths(cusp)
        # endpoints telescope from infinity to the cusp
        prev = Cusp.infinity()
        for h in paths:
            assert mat_det(h) == 1
            assert Cusp(h[0], h[2]) == prev       # h(infty)
            prev = Cusp(h[1], h[3])               # h(0)
        assert prev == cusp


def test_transport_lands_in_gamma0():
    md = ManinData(33)
    rng = random.Random(5)
    for _ in range(30):
        cusp = Cusp(rng.randrange(-50, 50), rng.randrange(1, 40))
        for c, gamma, sign in md.paths_for_cusp(cusp):
            assert mat_det(gamma) == 1
            assert gamma[2] % 33 == 0


def test_relations_cover_all_generators():
    md = ManinData(33)
    touched = set()
    for rel in md.relation_terms():
        for c, g in rel:
            touched.add(c)
            assert mat_det(g) == 1 and g[2] % 33 == 0
    assert touched == set(range(md.index))


def test_operator_structure_composes_matrices():
    md = ManinData(15)
    plan = md.operator_structure([(1, 0, 0, 3), (1, 1, 0, 3), (1, 2, 0, 3)])
    assert len(plan) == md.index
    for terms in plan:
        for c, mat, sign in terms:
            assert 0 <= c < md.index
            assert mat_det(mat) == 3
            assert sign in (1, -1)

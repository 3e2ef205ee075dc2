import math
import random

import pytest

from ocsymb.dist import (
    IOTA,
    DeltaElement,
    FiniteApproxDist,
    SymPoly,
    action_matrix,
    amice_basis_eval,
    amice_valuation,
    coefficient_shape,
    integrate_weight_k,
)
from ocsymb.padic import factorial_valuation, int_valuation
from ocsymb.weightspace import FamilyCoefficients, WeightChar


def test_amice_basis_eval_examples():
    assert amice_basis_eval(0, 1, 12345, 3) == 1
    assert amice_basis_eval(1, 1, 7, 3) == 7
    assert amice_basis_eval(3, 1, 4, 3) == 4   # 1! * binom(4,3)


def test_shape_examples():
    assert coefficient_shape(3, 0, 3) == [(0, 3), (1, 2), (2, 1)]
    assert coefficient_shape(3, 1, 2) == [(0, 2), (1, 2), (2, 2), (3, 1), (4, 1), (5, 1)]
    assert coefficient_shape(3, 1, 1) == [(0, 1), (1, 1), (2, 1)]


@pytest.mark.parametrize("p,s,i", [(p, s, i) for p in (3, 5) for s in (0, 1)
                                   for i in range(1, 9)])
def test_shape_matches_structure_formula(p, s, i):
    shape = coefficient_shape(p, s, i)
    assert len(shape) == i * p ** s
    for j, e in shape:
        assert e == i - j // p ** s and e >= 1


@pytest.mark.parametrize("p,s", [(3, 0), (3, 1), (5, 0), (5, 1), (7, 1)])
def test_amice_transition_valuation(p, s):
    # v_p(c_j) = floor(p^-s j) where c_j = floor(p^(1-s) j)! / floor(p^-s j)!
    for j in range(0, 1001):
        c = math.factorial(j // p ** (s - 1) if s >= 1 else j * p) \
            if False else math.factorial(_fl(j, s - 1, p)) // math.factorial(_fl(j, s, p))
        assert int_valuation(c, p) == _fl(j, s, p)


def _fl(j, s, p):
    # floor(p^-s j) for possibly negative s
    return j * p ** (-s) if s < 0 else j // p ** s


def test_dirac_moments_and_integration():
    w = WeightChar.integer(3, 2)
    mu = FiniteApproxDist.dirac(w, 0, 6)
    assert mu.coeffs[0] == 1 and all(c == 0 for c in mu.coeffs[1:])
    for k in range(2, 9):
        wk = WeightChar.integer(3, k)
        muk = FiniteApproxDist.dirac(wk, 0, 8)
        poly, precs = integrate_weight_k(muk, k)
        want = [0] * (k - 1)
        want[k - 2] = 1           # X^(k-2)
        got = [c % 3 ** pr for c, pr in zip(poly.coeffs, precs)]
        assert got == want


def test_translation_gives_dirac_at_b():
    # gamma = (1, b; 0, 1) sends the point mass at 0 to the one at b
    p, s, depth, b = 3, 1, 3, 2
    w = WeightChar.integer(p, 2)
    mu = FiniteApproxDist.dirac(w, s, depth)
    nu = mu.act(DeltaElement(p, 1, b, 0, 1))
    for (j, e), got in zip(nu.shape(), nu.coeffs):
        assert got == amice_basis_eval(j, s, b, p) % p ** e


def test_act_identity_and_monoid_law():
    p, s, depth = 3, 0, 5
    w = WeightChar.integer(p, 2)
    rng = random.Random(31)

    def rand_delta():
        while True:
            a = rng.randrange(1, p ** 3)
            if a % p == 0:
                continue
            b = rng.randrange(-p ** 3, p ** 3)
            c = p * rng.randrange(-p ** 2, p ** 2)
            d = rng.randrange(-p ** 3, p ** 3)
            if a * d - b * c != 0:
                return DeltaElement(p, a, b, c, d)

    def rand_dist():
        return FiniteApproxDist(w, s, depth,
                                [rng.randrange(p ** depth) for _ in range(depth)])

    ident = DeltaElement(p, 1, 0, 0, 1)
    for _ in range(20):
        g1, g2 = rand_delta(), rand_delta()
        mu = rand_dist()
        assert mu.act(ident) == mu
        assert mu.act(g1 * g2) == mu.act(g1).act(g2)


def test_act_monoid_law_weight_k_and_s1():
    p, s, depth = 3, 1, 3
    w = WeightChar.integer(p, 4)
    rng = random.Random(77)
    for _ in range(10):
        a = 1 + p * rng.randrange(p ** 2)
        g1 = DeltaElement(p, a, rng.randrange(9), p * rng.randrange(3), 1 + p * rng.randrange(9))
        g2 = DeltaElement(p, 1, rng.randrange(9), 0, p)
        mu = FiniteApproxDist(w, s, depth,
                              [rng.randrange(p ** depth) for _ in range(depth * p)])
        assert mu.act(g1 * g2) == mu.act(g1).act(g2)


def test_congruence_subgroup_acts_trivially():
    # matrices = 1 mod p^(s+n) act as the identity on the depth quotient
    # at p-precision n
    for p in (3, 5):
        for s in (0, 1):
            for n in (1, 2):
                depth = n + 1
                w = WeightChar.integer(p, 2)
                m = p ** (s + n)
                gens = [DeltaElement(p, 1, m, 0, 1),
                        DeltaElement(p, 1, 0, m, 1),
                        DeltaElement(p, 1 + m, m, 2 * m, 1 + 3 * m)]
                for g in gens:
                    app = action_matrix(g, w, s, depth)
                    J = depth * p ** s
                    for j in range(J):
                        e = min(n, depth - amice_valuation(j, s, p))
                        for jp in range(J):
                            want = 1 if jp == j else 0
                            assert (app[j][jp] - want) % p ** e == 0


def test_reduce_depth_and_transitivity():
    p, s = 3, 1
    w = WeightChar.integer(p, 2)
    rng = random.Random(3)
    mu = FiniteApproxDist(w, s, 4, [rng.randrange(3 ** 4) for _ in range(4 * 3)])
    assert mu.reduce_depth(2) == mu.reduce_depth(3).reduce_depth(2)
    g = DeltaElement(p, 1, 1, 3, 2)
    assert mu.act(g).reduce_depth(2) == mu.reduce_depth(2).act(g)


def test_integration_equivariance():
    # i_k(mu | g) = i_k(mu) . g mod the graded precision
    p, s, depth, k = 3, 0, 6, 4
    w = WeightChar.integer(p, k)
    rng = random.Random(9)
    for _ in range(10):
        mu = FiniteApproxDist(w, s, depth,
                              [rng.randrange(p ** depth) for _ in range(depth)])
        g = DeltaElement(p, 1 + p * rng.randrange(9), rng.randrange(5),
                         p * rng.randrange(5), 1 + p * rng.randrange(9))
        lhs, precs = integrate_weight_k(mu.act(g), k)
        rhs_poly, _ = integrate_weight_k(mu, k)
        rhs = rhs_poly.act((g.a, g.b, g.c, g.d))
        for l, r, pr in zip(lhs.coeffs, rhs.coeffs, precs):
            assert (l - r) % p ** pr == 0


def test_iota_action_squares_to_identity():
    p, s, depth = 3, 0, 5
    w = WeightChar.integer(p, 4)
    rng = random.Random(12)
    mu = FiniteApproxDist(w, s, depth, [rng.randrange(p ** depth) for _ in range(depth)])
    assert mu.act(IOTA).act(IOTA) == mu


def test_family_action_specializes_to_scalar_action():
    # the family action at T = (1+p)^(k-2) - 1 is the weight-k action;
    # at s = 0 the family ring must truncate at T-degree <= p
    p, s, depth, k = 3, 0, 3, 4
    ring = FamilyCoefficients(p, 8, 3)
    fam = WeightChar.family(ring, component=(k - 2) % (p - 1))
    wk = WeightChar.integer(p, k)
    rng = random.Random(21)
    mu_fam = FiniteApproxDist(fam, s, depth,
                              [ring.from_int(rng.randrange(p ** depth))
                               for _ in range(depth)])
    g = DeltaElement(p, 1, 1, p, 2)
    lhs = mu_fam.act(g).specialize_weight(k)
    rhs = mu_fam.specialize_weight(k).act(g)
    assert lhs.depth == rhs.depth == depth
    assert lhs == rhs


def test_family_dirac_integrates_to_monomial():
    p, s = 3, 0
    ring = FamilyCoefficients(p, 8, 8)
    for k in (2, 4, 6, 8):
        fam = WeightChar.family(ring, component=(k - 2) % (p - 1))
        mu = FiniteApproxDist.dirac(fam, s, 8)
        poly, precs = integrate_weight_k(mu.specialize_weight(k), k)
        want = [0] * (k - 1)
        want[k - 2] = 1
        assert [c % 3 ** pr for c, pr in zip(poly.coeffs, precs)] == want


def test_delta_element_rejects_bad_matrices():
    with pytest.raises(ValueError):
        DeltaElement(3, 1, 0, 1, 1)      # c not divisible by p
    with pytest.raises(ValueError):
        DeltaElement(3, 3, 1, 3, 1)      # a not a unit
    with pytest.raises(ValueError):
        DeltaElement(3, 1, 2, 3, 6)      # det = 0


def test_sympoly_action_composition():
    rng = random.Random(4)
    for k in (2, 4, 6):
        P = SymPoly(k, [rng.randrange(-5, 6) for _ in range(k - 1)])
        g1 = (1, 2, 3, 5)
        g2 = (2, 1, 0, 3)
        comp = (g1[0] * g2[0] + g1[1] * g2[2], g1[0] * g2[1] + g1[1] * g2[3],
                g1[2] * g2[0] + g1[3] * g2[2], g1[2] * g2[1] + g1[3] * g2[3])
        assert P.act(g1).act(g2) == P.act(comp)

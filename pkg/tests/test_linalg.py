import random
from fractions import Fraction

from ocsymb.linalg import (
    LocalReduction,
    SpanSolver,
    charpoly_berkowitz,
    charpoly_fraction,
    charpoly_hessenberg_mod,
    charpoly_mod,
    frac_nullspace,
    frac_rref,
    frac_solve_in_span,
    kernel_mod,
    mat_mul_mod,
    mat_vec_mod,
    poly_eval_reversed_on_matrix,
)


def _charpoly_direct(A):
    """Oracle: det(XI - A) by Fraction cofactor expansion on the poly ring."""
    n = len(A)

    def poly_mul(f, g):
        out = [Fraction(0)] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            for j, b in enumerate(g):
                out[i + j] += a * b
        return out

    def det(rows):
        k = len(rows)
        if k == 0:
            return [Fraction(1)]
        if k == 1:
            return rows[0][0]
        out = [Fraction(0)]
        for j in range(k):
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = poly_mul(rows[0][j], det(minor))
            sign = 1 if j % 2 == 0 else -1
            if len(out) < len(term):
                out += [Fraction(0)] * (len(term) - len(out))
            for t, c in enumerate(term):
                out[t] += sign * c
        return out

    entries = [[[Fraction(-A[i][j]), Fraction(1 if i == j else 0)] for j in range(n)]
               for i in range(n)]
    f = det(entries)
    return f + [Fraction(0)] * (n + 1 - len(f))


def test_rref_and_nullspace():
    rows = [[Fraction(1), Fraction(2), Fraction(3)],
            [Fraction(2), Fraction(4), Fraction(6)]]
    ns = frac_nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert sum(a * b for a, b in zip(rows[0], v)) == 0


def test_solve_in_span():
    basis = [[Fraction(1), Fraction(0), Fraction(1)],
             [Fraction(0), Fraction(1), Fraction(1)]]
    coords = frac_solve_in_span(basis, [Fraction(2), Fraction(3), Fraction(5)])
    assert coords == [Fraction(2), Fraction(3)]
    assert frac_solve_in_span(basis, [Fraction(0), Fraction(0), Fraction(1)]) is None


def test_berkowitz_matches_direct():
    rng = random.Random(7)
    for n in range(1, 6):
        A = [[rng.randrange(-9, 10) for _ in range(n)] for _ in range(n)]
        assert charpoly_fraction(A) == _charpoly_direct(A)


def test_charpoly_mod_matches_fraction():
    rng = random.Random(11)
    p, e = 3, 8
    q = p ** e
    for n in [2, 4, 7]:
        A = [[rng.randrange(0, q) for _ in range(n)] for _ in range(n)]
        exact = charpoly_fraction(A)
        bk = charpoly_berkowitz(A, red=lambda x: x % q)
        assert [int(c) % q for c in exact] == [c % q for c in bk]
        hs, eff = charpoly_hessenberg_mod(A, p, e)
        m = p ** eff
        assert all((int(c) - d) % m == 0 for c, d in zip(exact, hs))


def test_kernel_mod_simple():
    p, e = 3, 5
    rows = [[1, 0, 2], [0, 0, 0]]
    sat, tors = kernel_mod(rows, 3, p, e)
    assert len(sat) == 2 and not tors
    for v in sat:
        assert all(x % p ** e == 0 for x in mat_vec_mod(rows, v, p ** e))


def test_kernel_mod_torsion():
    # x = 0 mod p has kernel p^(e-1) Z/p^e: one torsion generator, no free part
    p, e = 3, 4
    sat, tors = kernel_mod([[p]], 1, p, e)
    assert not sat
    assert len(tors) == 1
    vec, v = tors[0]
    assert v == 1 and vec[0] == p ** (e - 1)


def test_kernel_mod_random_against_bruteforce():
    rng = random.Random(23)
    p, e = 3, 3
    q = p ** e
    for _ in range(15):
        m, n = rng.randrange(1, 4), rng.randrange(1, 4)
        rows = [[rng.randrange(q) for _ in range(n)] for _ in range(m)]
        sat, tors = kernel_mod(rows, n, p, e)
        gens = sat + [t[0] for t in tors]
        # brute force kernel size
        count = 0
        for x in range(q ** n):
            vec = [(x // q ** i) % q for i in range(n)]
            if all(v % q == 0 for v in mat_vec_mod(rows, vec, q)):
                count += 1
        # size of the span of the generators
        seen = set()
        frontier = [tuple([0] * n)]
        seen.add(frontier[0])
        for g in gens:
            new = set()
            for base in seen:
                acc = list(base)
                for _ in range(q - 1):
                    acc = [(a + b) % q for a, b in zip(acc, g)]
                    new.add(tuple(acc))
            seen |= new
        assert len(seen) == count


def test_local_solve_and_span_solver():
    p, e = 3, 6
    q = p ** e
    basis = [[1, 2, 0], [0, 3, 1]]
    solver = SpanSolver(basis, p, e)
    target = [(2 * 1 + 5 * 0) % q, (2 * 2 + 5 * 3) % q, (2 * 0 + 5 * 1) % q]
    out = solver.coordinates(target)
    assert out is not None
    (c1, c2), loss = out
    assert (c1 - 2) % p ** (e - loss) == 0
    assert (c2 - 5) % p ** (e - loss) == 0
    assert solver.coordinates([1, 0, 0]) is None


def test_poly_eval_reversed():
    p, e = 3, 6
    q = p ** e
    A = [[2, 1], [0, 5]]
    # Q(X) = 1 - 7X: Q*(A) = A - 7
    out = poly_eval_reversed_on_matrix([1, -7 % q], A, q)
    assert out[0][0] % q == (2 - 7) % q and out[1][1] % q == (5 - 7) % q

"""Coset combinatorics for Gamma_0(m): generators, relations, paths.

Modular symbols on Gamma_0(m) are functions on degree-zero cusp divisors
determined by their values on the generating paths [g] = g{0} - g{infty},
one per right coset, subject to the two- and three-term relations coming
from the elliptic elements of SL_2(Z).  Arbitrary divisors reduce to
generating paths by continued fractions (Manin's trick); the transport
matrices that appear all lie in Gamma_0(m).
"""

from __future__ import annotations

import math
from fractions import Fraction

SIGMA = (0, -1, 1, 0)        # order 4, sigma^2 = -1
TAU = (0, -1, 1, -1)         # order 3 in PSL_2


def mat_mul(m1, m2):
    a, b, c, d = m1
    e, f, g, h = m2
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_inv_sl2(m):
    a, b, c, d = m
    if a * d - b * c != 1:
        raise ValueError("not in SL2(Z)")
    return (d, -b, -c, a)


def mat_det(m):
    return m[0] * m[3] - m[1] * m[2]


class Cusp:
    """A point of P^1(Q) as a reduced integer pair (num, den), den >= 0."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        if den == 0 and num == 0:
            raise ValueError("0/0 is not a cusp")
        g = math.gcd(num, den)
        num, den = num // g, den // g
        if den < 0:
            num, den = -num, -den
        if den == 0:
            num = 1
        self.num, self.den = num, den

    @staticmethod
    def infinity() -> "Cusp":
        return Cusp(1, 0)

    @staticmethod
    def from_rational(r: Fraction) -> "Cusp":
        return Cusp(r.numerator, r.denominator)

    def is_infinity(self) -> bool:
        return self.den == 0

    def apply(self, m) -> "Cusp":
        a, b, c, d = m
        return Cusp(a * self.num + b * self.den, c * self.num + d * self.den)

    def __eq__(self, other):
        return (self.num, self.den) == (other.num, other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return "oo" if self.den == 0 else f"{self.num}/{self.den}"


def continued_fraction_paths(cusp: Cusp):
    """SL2 matrices h_i with {cusp} - {infty} = sum_i (h_i{0} - h_i{infty}).

    Convergents p_i/q_i of the cusp give unimodular edges; the sign of
    det is fixed by negating the second column.
    """
    if cusp.is_infinity():
        return []
    a, b = cusp.num, cusp.den
    # continued fraction digits by floored division (works for a < 0)
    digits = []
    x, y = a, b
    while y:
        q = x // y
        digits.append(q)
        x, y = y, x - q * y
    paths = []
    p_prev, q_prev = 1, 0
    p_cur, q_cur = digits[0], 1
    paths.append((1, digits[0], 0, 1))
    for i in range(1, len(digits)):
        p_next = digits[i] * p_cur + p_prev
        q_next = digits[i] * q_cur + q_prev
        sign = 1 if i % 2 == 0 else -1
        h = (p_cur, sign * p_next, q_cur, sign * q_next)
        if mat_det(h) != 1:
            raise ArithmeticError("convergent matrix not unimodular")
        paths.append(h)
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_next, q_next
    return paths


class ManinData:
    """Generators and relations for modular symbols on Gamma_0(level).

    Attributes:
      reps: one SL2(Z) lift per class of P^1(Z/level), deterministic order
      sigma_orbits / tau_orbits: orbit representatives of the two- and
        three-term relations, with their transport matrices
    """

    def __init__(self, level: int):
        if level < 1:
            raise ValueError("level must be positive")
        self.level = level
        self._p1_index: dict = {}
        self._build_p1()
        self.reps = [self._lift(c, d) for (c, d) in self.p1]
        self._rep_inv = [mat_inv_sl2(g) for g in self.reps]
        self._build_relations()
        self._path_cache: dict = {}
        self._structure_cache: dict = {}

    # -- P^1(Z/level) ----------------------------------------------------

    def _canonical(self, c: int, d: int):
        m = self.level
        best = None
        for u in range(1, m + 1):
            if math.gcd(u, m) != 1:
                continue
            cand = (u * c % m, u * d % m)
            if best is None or cand < best:
                best = cand
        return best

    def _build_p1(self):
        m = self.level
        seen = {}
        order = []
        for c in range(m):
            for d in range(m):
                if math.gcd(math.gcd(c, d), m) != 1:
                    continue
                key = self._canonical(c, d)
                if key not in seen:
                    seen[key] = len(order)
                    order.append(key)
        self.p1 = order
        self._p1_index = seen

    def p1_class(self, c: int, d: int) -> int:
        return self._p1_index[self._canonical(c % self.level, d % self.level)]

    def class_of_matrix(self, g) -> int:
        return self.p1_class(g[2], g[3])

    @property
    def index(self) -> int:
        return len(self.p1)

    def _lift(self, c: int, d: int):
        """An SL2(Z) matrix with bottom row congruent to (c, d) mod level."""
        m = self.level
        if m == 1:
            return (1, 0, 0, 1)
        c0, d0 = c % m, d % m
        c1 = c0 if c0 else m
        d1 = None
        for t in range(c1 + 1):
            cand = d0 + t * m
            if math.gcd(c1, cand) == 1:
                d1 = cand
                break
        if d1 is None:
            raise ArithmeticError("no coprime lift found")
        g, x, y = _xgcd(d1, c1)
        # x*d1 + y*c1 = 1, so (x, -y; c1, d1) has determinant 1
        return (x, -y, c1, d1)

    # -- relations --------------------------------------------------------

    def transport(self, h):
        """(class index, gamma) with [h] = [g_class] | gamma^{-1} ...

        Concretely phi([h]) = phi([g_c]) | (g_c h^{-1}) for any symbol phi,
        so gamma = g_c h^{-1} in Gamma_0(level) is returned.
        """
        c = self.class_of_matrix(h)
        gamma = mat_mul(self.reps[c], _mat_inv_det1_or_unimod(h))
        if gamma[2] % self.level:
            raise ArithmeticError("transport not in Gamma_0(level)")
        return c, gamma

    def _build_relations(self):
        # two-term: [g] + [g sigma] = 0; three-term: [g] + [g tau] + [g tau^2] = 0
        self.sigma_orbits = []
        seen = set()
        for c, g in enumerate(self.reps):
            if c in seen:
                continue
            h = mat_mul(g, SIGMA)
            c2, gamma = self.transport(h)
            self.sigma_orbits.append(((c, (1, 0, 0, 1)), (c2, gamma)))
            seen.add(c)
            seen.add(c2)
        self.tau_orbits = []
        seen = set()
        for c, g in enumerate(self.reps):
            if c in seen:
                continue
            terms = [(c, (1, 0, 0, 1))]
            seen.add(c)
            h = g
            for _ in range(2):
                h = mat_mul(h, TAU)
                c2, gamma = self.transport(h)
                terms.append((c2, gamma))
                seen.add(c2)
            self.tau_orbits.append(tuple(terms))

    def relation_terms(self):
        """All relations as lists of (class, matrix) pairs summing to zero."""
        rels = [list(orb) for orb in self.sigma_orbits]
        rels += [list(orb) for orb in self.tau_orbits]
        return rels

    # -- divisor evaluation ------------------------------------------------

    def paths_for_cusp(self, cusp: Cusp):
        """Signed generating-path contributions of {cusp} - {infty}:
        a list of (class, gamma, sign)."""
        key = (cusp.num, cusp.den)
        hit = self._path_cache.get(key)
        if hit is not None:
            return hit
        out = []
        for h in continued_fraction_paths(cusp):
            c, gamma = self.transport(h)
            out.append((c, gamma, 1))
        self._path_cache[key] = out
        return out

    def paths_for_divisor(self, target: Cusp, source: Cusp):
        """Contributions of {target} - {source}."""
        out = list(self.paths_for_cusp(target))
        out += [(c, g, -s) for (c, g, s) in self.paths_for_cusp(source)]
        return out

    def operator_structure(self, mats):
        """Evaluation plan for sum_t phi(m_t D) | m_t on each generator.

        For generator class c and operator matrix m_t, the divisor
        m_t g_c ({0} - {infty}) is decomposed into generating paths; each
        term contributes (source class, gamma * m_t, sign).  The plan
        depends only on the level and the matrices, so it is cached.
        """
        key = tuple(mats)
        hit = self._structure_cache.get(key)
        if hit is not None:
            return hit
        plan = []
        for c, g in enumerate(self.reps):
            terms = []
            zero_c = g[1], g[3]
            inf_c = g[0], g[2]
            for m in mats:
                tgt = Cusp(*zero_c).apply(m)
                src = Cusp(*inf_c).apply(m)
                for (c2, gamma, sign) in self.paths_for_divisor(tgt, src):
                    terms.append((c2, mat_mul(gamma, m), sign))
            plan.append(terms)
        self._structure_cache[key] = plan
        return plan


def _mat_inv_det1_or_unimod(h):
    a, b, c, d = h
    det = a * d - b * c
    if det == 1:
        return (d, -b, -c, a)
    if det == -1:
        return (-d, b, c, -a)
    raise ValueError("path matrix must be unimodular")


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def cusps_equivalent(level: int, c1: Cusp, c2: Cusp) -> bool:
    """Gamma_0(level)-equivalence of cusps (Cremona's criterion):
    p1/q1 ~ p2/q2 iff s1 q2 = s2 q1 mod gcd(q1 q2, level), p_i s_i = 1 mod q_i."""
    q1, q2 = c1.den, c2.den
    if q1 == 0 or q2 == 0:
        if q1 == 0 and q2 == 0:
            return True
        other = c2 if q1 == 0 else c1
        return other.den % level == 0
    s1 = pow(c1.num % q1, -1, q1) if q1 > 1 else 0
    s2 = pow(c2.num % q2, -1, q2) if q2 > 1 else 0
    g = math.gcd(q1 * q2, level)
    return (s1 * q2 - s2 * q1) % g == 0


class CuspClasses:
    """Gamma_0(level)-classes of a finite set of cusps, built on demand."""

    def __init__(self, level: int):
        self.level = level
        self.reps: list[Cusp] = []

    def class_of(self, cusp: Cusp) -> int:
        for i, r in enumerate(self.reps):
            if cusps_equivalent(self.level, r, cusp):
                return i
        self.reps.append(cusp)
        return len(self.reps) - 1


def gamma0_index(m: int) -> int:
    """[SL2(Z) : Gamma_0(m)] = m prod_{ell | m} (1 + 1/ell)."""
    idx = m
    mm = m
    ell = 2
    while ell * ell <= mm:
        if mm % ell == 0:
            idx = idx // ell * (ell + 1)
            while mm % ell == 0:
                mm //= ell
        ell += 1
    if mm > 1:
        idx = idx // mm * (mm + 1)
    return idx

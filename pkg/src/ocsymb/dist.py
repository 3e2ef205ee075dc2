"""Finite approximation modules of locally analytic distributions.

A distribution on Z_p of radius index s is stored through the Amice
basis e_j(x) = floor(p^-s j)! * binom(x, j).  Writing v_j = floor(p^-s j),
the depth-i approximation module keeps the coefficients mu(e_j) with
v_j < i, coefficient j modulo p^(i - v_j) (and modulo the coefficient
ring's own truncation in the family case).  This quotient is finite, the
monoid of matrices (a b; c d) with p | c, p-unit a and nonzero
determinant acts on it, and the action matrix in the Amice basis is
computed column by column through Mahler's finite-difference expansion.

Integration against (X + x)^(k-2) specializes a depth-i distribution to a
polynomial of degree k-2, the classical weight-k coefficient module.
"""

from __future__ import annotations

import math
import threading

from .padic import factorial_valuation, int_valuation
from .weightspace import FamilyCoefficients, FamilyElement, WeightChar, \
    min_analyticity_radius, specialization_point, universal_char_eval

IOTA = "iota"  # marker for the action of diag(-1, 1)


def amice_valuation(j: int, s: int, p: int) -> int:
    return j // p ** s


def coefficient_shape(p: int, s: int, depth: int):
    """[(j, i - v_j)] for the stored indices of the depth-i module.

    This is the structure of the finite quotient: the index set is
    {j : v_j < i}, of size i * p^s, with coefficient j living modulo
    p^(i - v_j).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return [(j, depth - amice_valuation(j, s, p)) for j in range(depth * p ** s)]


def amice_basis_eval(j: int, s: int, x: int, p: int) -> int:
    """e_j(x) = floor(p^-s j)! * binom(x, j) for integer x (exact)."""
    return math.factorial(amice_valuation(j, s, p)) * _comb_any(x, j)


def _comb_any(x: int, j: int) -> int:
    """binom(x, j) for any integer x (exact; the product is divisible by j!)."""
    num = 1
    for r in range(j):
        num *= x - r
    return num // math.factorial(j)


class DeltaElement:
    """An integer matrix (a b; c d) with p | c, p-unit a, det != 0.

    These are exactly the matrices acting on the distribution modules;
    anything else is rejected here rather than handled downstream.
    """

    __slots__ = ("a", "b", "c", "d", "p")

    def __init__(self, p: int, a: int, b: int, c: int, d: int):
        if a * d - b * c == 0:
            raise ValueError("singular matrix")
        if c % p != 0:
            raise ValueError("lower-left entry must be divisible by p")
        if a % p == 0:
            raise ValueError("upper-left entry must be a p-adic unit")
        self.p = p
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def key(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "DeltaElement") -> "DeltaElement":
        if self.p != other.p:
            raise ValueError("prime mismatch")
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        return DeltaElement(self.p, a, b, c, d)

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def __repr__(self):
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


# ---------------------------------------------------------------------------
# action matrices (cached)

_matrix_cache: dict = {}
_cache_lock = threading.Lock()

_smin_cache: dict = {}


def _weight_smin(weight: WeightChar) -> int:
    key = weight.cache_key()
    if key not in _smin_cache:
        _smin_cache[key] = min_analyticity_radius(weight)
    return _smin_cache[key]


def working_precision(p: int, s: int, depth: int) -> int:
    J = depth * p ** s
    return depth + factorial_valuation(J, p) + factorial_valuation(depth, p) + 4


def action_matrix(gamma, weight: WeightChar, s: int, depth: int):
    """Application matrix of mu -> mu | gamma on the depth-i module.

    Row j lists the coefficients expressing (mu | gamma)(e_j) in terms of
    the stored mu(e_j'): row j is the Amice expansion of gamma . e_j read
    off by finite differences.  gamma is a DeltaElement or the IOTA
    marker.  Cached per (matrix, weight, s, depth); inserts are
    idempotent, so concurrent builders agree.
    """
    p = weight.p
    gkey = gamma if gamma == IOTA else gamma.key()
    key = (gkey, weight.cache_key(), s, depth)
    hit = _matrix_cache.get(key)
    if hit is not None:
        return hit
    mat = _build_action_matrix(gamma, weight, s, depth)
    with _cache_lock:
        _matrix_cache.setdefault(key, mat)
    return _matrix_cache[key]


def _build_action_matrix(gamma, weight: WeightChar, s: int, depth: int):
    p = weight.p
    J = depth * p ** s
    W = working_precision(p, s, depth)
    is_fam = weight.is_family()
    if is_fam:
        W = max(W, weight.ring.prec + 2)
    qW = p ** W

    if is_fam:
        work_ring = FamilyCoefficients(p, W, weight.ring.tdeg)

        def chi(z: int):
            omega, series = universal_char_eval(z, work_ring)
            return series * pow(omega, weight.component, work_ring.q)
    else:
        k = weight.k

        def chi(z: int):
            zz = z % qW
            if k >= 2:
                return pow(zz, k - 2, qW)
            return pow(pow(zz, -1, qW), 2 - k, qW)

    if gamma == IOTA:
        a, b, c, d = -1, 0, 0, 1
    else:
        a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d

    # values (gamma . e_j)(x) = chi(a+cx) e_j((b+dx)/(a+cx)) at x = 0..J-1
    cols = [[None] * J for _ in range(J)]
    for x in range(J):
        y = (b + d * x) * pow(a + c * x, -1, qW) % qW
        chival = chi(a + c * x)
        falling = 1
        for j in range(J):
            if j:
                falling = falling * ((y - (j - 1)) % qW) % qW
            # binom(y, j) = falling / j!: exact since y is a p-adic integer
            vfac = factorial_valuation(j, p)
            if falling % p ** vfac:
                raise ArithmeticError("binomial value not p-integral "
                                      "(matrix outside the monoid?)")
            m = math.factorial(j) // p ** vfac
            ej = (falling // p ** vfac) * pow(m, -1, qW) \
                * math.factorial(amice_valuation(j, s, p)) % qW
            cols[j][x] = chival * ej if is_fam else chival * ej % qW
    # Mahler: the expansion coefficient of e_j' in gamma . e_j is
    # Delta^j'(gamma . e_j)(0) / v_j'!.  The application matrix for
    # (mu | gamma)(e_j) = mu(gamma . e_j) is the transpose of that.
    app = [[None] * J for _ in range(J)]
    for j in range(J):
        vals = list(cols[j])
        for jp in range(J):
            fac = math.factorial(amice_valuation(jp, s, p))
            app[j][jp] = _divide_entry(vals[0], fac, p, qW, is_fam)
            if jp < J - 1:
                if is_fam:
                    vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
                else:
                    vals = [(vals[i + 1] - vals[i]) % qW for i in range(len(vals) - 1)]
    if is_fam:
        # entries are exact mod p^W; restate them in the weight's own ring
        ring = weight.ring
        app = [[ring.element(e.coeffs) for e in row] for row in app]
    return app


def _divide_entry(entry, fac: int, p: int, qW: int, is_family: bool):
    if fac == 1:
        return entry
    if is_family:
        return entry.divide_exact_int(fac)
    v = int_valuation(fac, p)
    m = fac // p ** v
    if entry % p ** v:
        raise ArithmeticError("finite difference not divisible by v_j'! "
                              "(matrix outside the monoid?)")
    return (entry // p ** v) * pow(m, -1, qW) % qW


# ---------------------------------------------------------------------------


class FiniteApproxDist:
    """A distribution in the depth-i quotient, stored by Amice coefficients.

    coeffs[j] is mu(e_j) modulo p^(depth - v_j) (scalar weight) or a
    FamilyElement with that p-precision (family weight).  Immutable.
    """

    __slots__ = ("weight", "s", "depth", "coeffs")

    def __init__(self, weight: WeightChar, s: int, depth: int, coeffs):
        p = weight.p
        J = depth * p ** s
        if len(coeffs) != J:
            raise ValueError(f"expected {J} coefficients, got {len(coeffs)}")
        norm = []
        for j, cval in enumerate(coeffs):
            m = depth - amice_valuation(j, s, p)
            if weight.is_family():
                if isinstance(cval, int):
                    cval = weight.ring.from_int(cval)
                norm.append(cval.reduce_p_precision(m))
            else:
                norm.append(cval % p ** m)
        self.weight = weight
        self.s = s
        self.depth = depth
        self.coeffs = tuple(norm)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(weight: WeightChar, s: int, depth: int) -> "FiniteApproxDist":
        J = depth * weight.p ** s
        fill = weight.ring.zero() if weight.is_family() else 0
        return FiniteApproxDist(weight, s, depth, [fill] * J)

    @staticmethod
    def dirac(weight: WeightChar, s: int, depth: int) -> "FiniteApproxDist":
        """The point mass at 0: mu(e_j) = e_j(0) = [j == 0]."""
        J = depth * weight.p ** s
        one = weight.ring.one() if weight.is_family() else 1
        fill = weight.ring.zero() if weight.is_family() else 0
        return FiniteApproxDist(weight, s, depth, [one] + [fill] * (J - 1))

    # -- basics --------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FiniteApproxDist) and \
            (self.weight, self.s, self.depth, self.coeffs) == \
            (other.weight, other.s, other.depth, other.coeffs)

    def __hash__(self):
        return hash((self.weight, self.s, self.depth, self.coeffs))

    def __repr__(self):
        return f"FiniteApproxDist(depth={self.depth}, s={self.s}, {list(self.coeffs)})"

    def __add__(self, other):
        self._compat(other)
        return FiniteApproxDist(self.weight, self.s, self.depth,
                                [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._compat(other)
        return FiniteApproxDist(self.weight, self.s, self.depth,
                                [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return FiniteApproxDist(self.weight, self.s, self.depth,
                                [-a for a in self.coeffs])

    def scale(self, n) -> "FiniteApproxDist":
        return FiniteApproxDist(self.weight, self.s, self.depth,
                                [a * n for a in self.coeffs])

    def _compat(self, other):
        if (self.weight, self.s, self.depth) != (other.weight, other.s, other.depth):
            raise ValueError("incompatible distribution modules")

    def is_zero(self) -> bool:
        if self.weight.is_family():
            return all(all(x == 0 for x in c.coeffs) for c in self.coeffs)
        return all(c == 0 for c in self.coeffs)

    # -- structure -----------------------------------------------------

    def shape(self):
        return coefficient_shape(self.weight.p, self.s, self.depth)

    def reduce_depth(self, new_depth: int) -> "FiniteApproxDist":
        """Natural surjection onto the depth-i quotient for i <= depth."""
        if new_depth > self.depth:
            raise ValueError("cannot deepen a finite approximation")
        p = self.weight.p
        J = new_depth * p ** self.s
        return FiniteApproxDist(self.weight, self.s, new_depth, list(self.coeffs[:J]))

    # -- the monoid action ----------------------------------------------

    def act(self, gamma) -> "FiniteApproxDist":
        """mu | gamma, (mu | gamma)(f) = mu(gamma . f).

        gamma is a DeltaElement (checked at construction) or IOTA.
        Requires s at least the weight's analyticity radius.
        """
        if gamma != IOTA and gamma.is_identity():
            return self
        if self.s < _weight_smin(self.weight):
            raise ValueError("radius index below the weight's analyticity radius")
        rows = action_matrix(gamma, self.weight, self.s, self.depth)
        out = []
        for row in rows:
            acc = None
            for aij, cj in zip(row, self.coeffs):
                term = aij * cj
                acc = term if acc is None else acc + term
            out.append(acc)
        return FiniteApproxDist(self.weight, self.s, self.depth, out)

    # -- moments and integration ----------------------------------------

    def moments(self, upto: int):
        """mu(x^m) for m = 0..upto via the unitriangular basis change
        x^m = sum_t S(m,t) t! binom(x,t)."""
        p = self.weight.p
        J = self.depth * p ** self.s
        if upto >= J:
            raise ValueError("depth too small to expose these moments")
        S = _stirling2_table(upto)
        out = []
        for m in range(upto + 1):
            acc = None
            for t in range(m + 1):
                c = S[m][t] * math.factorial(t) // \
                    math.factorial(amice_valuation(t, self.s, p))
                term = self.coeffs[t] * c
                acc = term if acc is None else acc + term
            if acc is None:
                acc = self.coeffs[0] * 0
            out.append(acc)
        return out

    def specialize_weight(self, k: int) -> "FiniteApproxDist":
        """Family -> integer weight k: substitute T = (1+p)^(k-2) - 1.

        The output depth is limited by what the ring truncation certifies.
        """
        if not self.weight.is_family():
            raise ValueError("specialization applies to family coefficients")
        p = self.weight.p
        if (k - 2) % (p - 1) != self.weight.component:
            raise ValueError("weight %d is not on the omega^%d component"
                             % (k, self.weight.component))
        ring = self.weight.ring
        t = specialization_point(p, k, ring.prec)
        vt = 1 + int_valuation(k - 2, p) if k != 2 else ring.prec
        new_depth = min(self.depth, ring.prec, ring.tdeg * vt)
        target = WeightChar.integer(p, k)
        J = new_depth * p ** self.s
        vals = [c.evaluate(t).residue for c in self.coeffs[:J]]
        return FiniteApproxDist(target, self.s, new_depth, vals)


def integrate_weight_k(mu: FiniteApproxDist, k: int):
    """The weight-k integration: sum_j binom(k-2,j) mu(x^j) X^(k-2-j).

    Returns (SymPoly mod p^depth-graded, precision list): the coefficient
    of X^(k-2-j) is certified mod p^(depth - v_j).
    """
    if mu.weight.is_family():
        raise ValueError("integrate a scalar-weight distribution "
                         "(specialize the family first)")
    if mu.weight.k != k:
        raise ValueError("weight mismatch")
    p = mu.weight.p
    moms = mu.moments(k - 2)
    coeffs = [0] * (k - 1)
    precs = [0] * (k - 1)
    for j in range(k - 1):
        vj = amice_valuation(j, mu.s, p)
        prec = mu.depth - vj
        coeffs[k - 2 - j] = math.comb(k - 2, j) * moms[j] % p ** prec
        precs[k - 2 - j] = prec
    return SymPoly(k, coeffs), precs


# ---------------------------------------------------------------------------


_STIRLING: list[list[int]] = [[1]]


def _stirling2_table(n: int):
    """Stirling numbers of the second kind up to row n (cached)."""
    while len(_STIRLING) <= n:
        m = len(_STIRLING)
        prev = _STIRLING[-1]
        row = [0] * (m + 1)
        for t in range(1, m + 1):
            row[t] = (prev[t] * t if t < m else 0) + prev[t - 1]
        _STIRLING.append(row)
    return _STIRLING


class SymPoly:
    """A polynomial of degree <= k-2 with the twisted right matrix action

        (P . g)(X) = (d + cX)^(k-2) P((b + aX)/(d + cX)).

    Coefficients are plain integers or Fractions; reduction mod p-powers
    is the caller's concern.
    """

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs):
        if k < 2:
            raise ValueError("weight must be >= 2")
        c = list(coeffs)
        if len(c) != k - 1:
            raise ValueError("expected %d coefficients" % (k - 1))
        self.k = k
        self.coeffs = tuple(c)

    def __repr__(self):
        return f"SymPoly(k={self.k}, {list(self.coeffs)})"

    def __eq__(self, other):
        return isinstance(other, SymPoly) and (self.k, self.coeffs) == (other.k, other.coeffs)

    def __add__(self, other):
        return SymPoly(self.k, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return SymPoly(self.k, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return SymPoly(self.k, [-a for a in self.coeffs])

    def scale(self, n):
        return SymPoly(self.k, [a * n for a in self.coeffs])

    def act(self, mat) -> "SymPoly":
        """Right action by an integer matrix (a b; c d) (any nonzero det)."""
        a, b, c, d = mat
        n = self.k - 2
        out = [0] * (n + 1)
        # (b + aX)^t (d + cX)^(n-t), accumulated per t
        for t, pt in enumerate(self.coeffs):
            if pt == 0:
                continue
            f = _binom_expand(b, a, t)
            g = _binom_expand(d, c, n - t)
            for i, fi in enumerate(f):
                if fi == 0:
                    continue
                for j, gj in enumerate(g):
                    out[i + j] += pt * fi * gj
        return SymPoly(self.k, out)

    def reduce_mod(self, q: int) -> "SymPoly":
        return SymPoly(self.k, [x % q for x in self.coeffs])


def _binom_expand(u, v, t):
    """Coefficients of (u + vX)^t."""
    return [math.comb(t, i) * u ** (t - i) * v ** i for i in range(t + 1)]

"""Exact classical modular symbols over Q and their eigen-data.

Weight-k modular symbols on Gamma_0(m) are computed as the nullspace of
the Manin relation matrix over exact fractions.  Hecke operators, the
Atkin-Lehner-style U_p, diamonds and the complex-conjugation involution
act through the coset plans of ManinData; simultaneous eigenspaces are
cut out by scanning integer eigenvalues inside the Hasse bound and
refining with further operators.

The resulting eigensymbols are normalized to primitive integral vectors;
special values extracted from them (Birch-style twisted sums at cusps
b/p^n) are exact rationals and serve as the independent side of every
p-adic interpolation check downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .dist import SymPoly
from .linalg import (
    charpoly_fraction,
    frac_nullspace,
    frac_rref,
    frac_solve_in_span,
    mat_mul_frac,
)
from .manin import Cusp, ManinData, mat_mul
from .padic import fraction_valuation, hensel_root

IOTA_MAT = (-1, 0, 0, 1)


def up_matrices(p: int):
    return [(1, a, 0, p) for a in range(p)]


def hecke_matrices(ell: int):
    return [(1, a, 0, ell) for a in range(ell)] + [(ell, 0, 0, 1)]


def diamond_matrix(d: int, m: int):
    """A matrix in Gamma_0(m) with lower-right entry congruent to d."""
    if math.gcd(d, m) != 1:
        raise ValueError("diamond class must be prime to the level")
    d1 = d % m
    g, x, y = _xgcd(d1, m)
    t = 0
    while math.gcd(m, d1) != 1:
        d1 += m
        t += 1
        if t > m:
            raise ArithmeticError("no diamond lift")
    g, x, y = _xgcd(d1, m)
    # x*d1 + y*m = 1 -> (x, -y; m, d1) in SL2, bottom row (0, d) mod m
    return (x, -y, m, d1)


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class ClassicalSymbolSpace:
    """Symb_{Gamma_0(level)}(Sym^(k-2) Q^2), solved over exact fractions.

    Coordinates are the flattened generator values: generator c occupies
    the block [c*(k-1), (c+1)*(k-1)) listing the coefficients of
    X^0..X^(k-2).
    """

    def __init__(self, level: int, k: int):
        if k < 2 or k % 2 != 0:
            raise ValueError("even weight k >= 2 required on Gamma_0")
        self.level = level
        self.k = k
        self.md = ManinData(level)
        self.ngen = self.md.index
        self.vdim = k - 1
        self.dim_total = self.ngen * self.vdim
        if self.dim_total > 2000:
            raise ValueError("space too large for exact desk-scale solving")
        self._small_cache: dict = {}
        rows = []
        for rel in self.md.relation_terms():
            rows.extend(self._relation_rows(rel))
        self.basis = frac_nullspace(rows, self.dim_total)
        self.dim = len(self.basis)
        self._op_cache: dict = {}

    # -- matrices of the polynomial action --------------------------------

    def _small_matrix(self, mat):
        """(k-1)x(k-1) matrix of P -> P | mat on coefficient vectors."""
        key = mat
        hit = self._small_cache.get(key)
        if hit is None:
            cols = []
            for u in range(self.vdim):
                basis_poly = SymPoly(self.k, [1 if t == u else 0 for t in range(self.vdim)])
                cols.append(basis_poly.act(mat).coeffs)
            hit = [[cols[u][t] for u in range(self.vdim)] for t in range(self.vdim)]
            self._small_cache[key] = hit
        return hit

    def _relation_rows(self, rel):
        rows = []
        for t in range(self.vdim):
            row = [Fraction(0)] * self.dim_total
            for c, gamma in rel:
                m = self._small_matrix(gamma)
                for u in range(self.vdim):
                    row[c * self.vdim + u] += m[t][u]
            rows.append(row)
        return rows

    # -- evaluation ---------------------------------------------------------

    def value_at(self, vec, c: int) -> SymPoly:
        return SymPoly(self.k, vec[c * self.vdim:(c + 1) * self.vdim])

    def evaluate(self, vec, target: Cusp, source: Cusp) -> SymPoly:
        """phi({target} - {source}) for the symbol with coordinates vec."""
        acc = [0] * self.vdim
        for c, gamma, sign in self.md.paths_for_divisor(target, source):
            poly = self.value_at(vec, c).act(gamma)
            for t in range(self.vdim):
                acc[t] += sign * poly.coeffs[t]
        return SymPoly(self.k, acc)

    def apply_plan(self, vec, plan):
        out = []
        for terms in plan:
            acc = [0] * self.vdim
            for c2, mat, sign in terms:
                poly = self.value_at(vec, c2).act(mat)
                for t in range(self.vdim):
                    acc[t] += sign * poly.coeffs[t]
            out.extend(acc)
        return out

    def apply_matrices(self, vec, mats):
        """vec | (sum of double-coset matrices): the raw Hecke action."""
        return self.apply_plan(vec, self.md.operator_structure(tuple(mats)))

    # -- restricted operators ------------------------------------------------

    def restricted(self, mats) -> list[list[Fraction]]:
        """Matrix of the operator on the relation-nullspace basis."""
        key = tuple(mats)
        hit = self._op_cache.get(key)
        if hit is not None:
            return hit
        cols = []
        for b in self.basis:
            img = [Fraction(x) for x in self.apply_matrices(b, mats)]
            coords = frac_solve_in_span(self.basis, img)
            if coords is None:
                raise ArithmeticError("operator does not preserve the symbol space")
            cols.append(coords)
        out = [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]
        self._op_cache[key] = out
        return out

    def up_restricted(self, p: int):
        return self.restricted(up_matrices(p))

    def hecke_restricted(self, ell: int):
        if self.level % ell == 0:
            raise ValueError("T_ell needs ell prime to the level (use U)")
        return self.restricted(hecke_matrices(ell))

    def iota_restricted(self):
        return self.restricted([IOTA_MAT])


# ---------------------------------------------------------------------------
# eigen-decomposition


@dataclass
class EigenPacket:
    level: int
    weight: int
    sign: int
    a: dict = field(default_factory=dict)       # T_ell eigenvalues
    up_eigenvalue: Fraction | None = None       # scalar U_p at this level
    up_block: list | None = None                # 2x2 U_p matrix on a p-old block
    up_charpoly: list | None = None             # ascending coeffs on the block
    vectors: list = field(default_factory=list) # primitive integral symbols
    is_eisenstein: bool = False

    def label(self):
        kind = "eis" if self.is_eisenstein else "cusp"
        return (self.level, self.weight, self.sign, kind,
                tuple(sorted((l, str(v)) for l, v in self.a.items())))


def _restrict_to(space_dim, op, sub):
    """Matrix of op on the span of the column vectors in sub (coordinates)."""
    imgs = [[sum(op[i][j] * v[j] for j in range(space_dim)) for i in range(space_dim)]
            for v in sub]
    cols = []
    for img in imgs:
        coords = frac_solve_in_span(sub, img)
        if coords is None:
            raise ArithmeticError("subspace not stable")
        cols.append(coords)
    return [[cols[j][i] for j in range(len(sub))] for i in range(len(sub))]


def _integer_eigen_split(op, bound):
    """[(a, kernel basis of (op - a))] for integer a within the bound."""
    n = len(op)
    out = []
    for a in range(-bound, bound + 1):
        shifted = [[op[i][j] - (a if i == j else 0) for j in range(n)] for i in range(n)]
        ker = frac_nullspace(shifted, n)
        ker = _independent(ker)
        if ker:
            out.append((a, ker))
    return out


def _independent(vectors):
    if not vectors:
        return []
    rref, pivots = frac_rref([list(v) for v in vectors])
    return [rref[i] for i in range(len(pivots))]


def _primitive_integral(vec):
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g:
        ints = [x // g for x in ints]
    return ints


def _fix_orientation(space: ClassicalSymbolSpace, ints):
    """Sign convention: leading coefficient of the value at {0}-{infty}
    positive when nonzero, else first nonzero coordinate positive."""
    val = space.evaluate(ints, Cusp(0, 1), Cusp.infinity())
    lead = next((c for c in reversed(val.coeffs) if c), None)
    if lead is None:
        lead = next((c for c in ints if c), 1)
    return [-x for x in ints] if lead < 0 else ints


def decompose(space: ClassicalSymbolSpace, p: int, ell_list=(2, 3, 5, 7, 11, 13)):
    """Eigenpackets of the Hecke action on a classical symbol space.

    Splits by the involution sign, then by integer eigenvalues of the
    first good T_ell, then by U_p where that is still reducible.  Blocks
    whose U_p-characteristic polynomial is irreducible over Q (p-old
    stabilization pairs) are reported with the 2x2 block.
    """
    k = space.k
    iota = space.iota_restricted()
    packets = []
    ell0 = next(l for l in ell_list if space.level % l)
    # covers both the cuspidal Hasse bound and Eisenstein eigenvalues
    hasse = 2 * _isqrt_ceil(ell0 ** (k - 1)) + ell0 ** (k - 1) + 1
    t0 = space.restricted(hecke_matrices(ell0))
    for sign in (1, -1):
        shifted = [[iota[i][j] - (sign if i == j else 0) for j in range(space.dim)]
                   for i in range(space.dim)]
        sign_basis = _independent(frac_nullspace(shifted, space.dim))
        if not sign_basis:
            continue
        t0_sub = _restrict_to(space.dim, t0, sign_basis)
        for a0, ker in _integer_eigen_split(t0_sub, hasse):
            block = [_lincomb(sign_basis, v) for v in ker]
            packets.extend(_split_block_by_up(space, p, k, sign, block, {ell0: Fraction(a0)}))
    return packets


def _isqrt_ceil(n):
    r = math.isqrt(n)
    return r + (r * r < n)


def _lincomb(basis, coords):
    n = len(basis[0])
    return [sum(c * b[i] for c, b in zip(coords, basis)) for i in range(n)]


def _split_block_by_up(space, p, k, sign, block, known_a):
    """Refine a T-eigenblock under U_p; emit finished packets."""
    out = []
    if space.level % p:
        raise ValueError("the space must have p in the level")
    up = space.restricted(up_matrices(p))
    up_sub = _restrict_to(space.dim, up, block)
    cp = charpoly_fraction(up_sub)
    # try integer roots first
    splits = _integer_eigen_split(up_sub, p ** (k - 1) + 1)
    covered = sum(len(kr) for _, kr in splits)
    if covered == len(block):
        for aup, ker in splits:
            vecs = [_lincomb(block, v) for v in ker]
            out.extend(_finalize_packets(space, p, k, sign, vecs, dict(known_a),
                                         up_eig=Fraction(aup)))
        return out
    if covered == 0 and len(block) == 2:
        # irreducible quadratic U_p block: a p-old stabilization pair
        out.extend(_finalize_packets(space, p, k, sign, block, dict(known_a),
                                     up_block=up_sub, up_charpoly=cp))
        return out
    raise ArithmeticError("U_p block neither split nor irreducible; "
                          "refine with more operators")


def _finalize_packets(space, p, k, sign, vecs, known_a, up_eig=None,
                      up_block=None, up_charpoly=None):
    """Check T_ell acts by scalars; build the packet record."""
    a = dict(known_a)
    for ell in (2, 3, 5, 7, 11, 13):
        if space.level % ell == 0 or ell in a:
            continue
        t = space.restricted(hecke_matrices(ell))
        sub = _restrict_to(space.dim, t, vecs)
        diag = sub[0][0]
        for i in range(len(vecs)):
            for j in range(len(vecs)):
                want = diag if i == j else 0
                if sub[i][j] != want:
                    raise ArithmeticError("block not scalar under T_%d; "
                                          "needs further splitting" % ell)
        a[ell] = diag
    eis = all(val == 1 + Fraction(ell) ** (k - 1)
              for ell, val in a.items())
    prim = [_fix_orientation(space, _primitive_integral(v)) for v in vecs]
    return [EigenPacket(level=space.level, weight=k, sign=sign, a=a,
                        up_eigenvalue=up_eig, up_block=up_block,
                        up_charpoly=up_charpoly, vectors=prim,
                        is_eisenstein=eis)]


# ---------------------------------------------------------------------------
# special values


def moment_at(space: ClassicalSymbolSpace, vec, target: Cusp, source: Cusp, t: int):
    """The t-th moment of phi({target}-{source}): [X^(k-2-t)] / binom(k-2, t)."""
    poly = space.evaluate(vec, target, source)
    return Fraction(poly.coeffs[space.k - 2 - t], math.comb(space.k - 2, t))


def twisted_moment_sum(space, vec, j: int, p: int, n: int, eta_values):
    """sum over b in (Z/p^n)^x of eta(b) * M_j(b) with
    M_j(b) = sum_t binom(j,t) b^(j-t) p^(nt) moment_t({b/p^n} - {infty}).

    eta_values maps b -> an exact value (Fraction for real characters).
    """
    total = Fraction(0)
    pn = p ** n
    for b in range(1, pn):
        if b % p == 0:
            continue
        eb = eta_values(b)
        if eb == 0:
            continue
        mj = Fraction(0)
        for t in range(j + 1):
            mt = moment_at(space, vec, Cusp(b, pn), Cusp.infinity(), t)
            mj += math.comb(j, t) * Fraction(b) ** (j - t) * Fraction(p) ** (n * t) * mt
        total += eb * mj
    return total


def quadratic_character(p: int):
    """The Legendre symbol mod p as an exact-valued character."""
    def eta(b):
        r = pow(b % p, (p - 1) // 2, p)
        return Fraction(1) if r == 1 else Fraction(-1)
    return eta


def trivial_character(p: int, n: int):
    def eta(b):
        return Fraction(1)
    return eta


def algebraic_lvalue(space, vec, j: int, p: int, conductor: int, eta_values):
    """L^alg entry: p^-(j+1)n * (twisted Birch sum), n = v_p(conductor).

    For the trivial character (conductor 1) this is the plain j-th moment
    at {0} - {infty}; the p-adic Euler factors are applied by the caller.
    """
    if conductor == 1:
        return moment_at(space, vec, Cusp(0, 1), Cusp.infinity(), j)
    n = 0
    c = conductor
    while c % p == 0:
        c //= p
        n += 1
    if c != 1:
        raise ValueError("conductor must be a p-power")
    s = twisted_moment_sum(space, vec, j, p, n, eta_values)
    return s / Fraction(p) ** ((j + 1) * n)


# ---------------------------------------------------------------------------
# the oracle: all eigen-data at tame level N, prime p, weight k


@dataclass
class NewformData:
    """A cuspidal Hecke eigensystem with its symbols and stabilization."""
    N: int
    p: int
    k: int
    a: dict
    p_new: bool
    # primitive integral +/- symbols, at level N (p-old) or Np (p-new)
    symbol_level: int
    plus_vec: list = None
    minus_vec: list = None
    ap: Fraction = None               # T_p (p-old) or U_p (p-new) eigenvalue

    def hecke_poly_coeffs(self):
        """X^2 - a_p X + p^(k-1) (ascending), for stabilization roots."""
        return [self.p ** (self.k - 1), -int(self.ap), 1]

    def unit_root(self, prec: int) -> int | None:
        """The Hensel-lifted unit root of the p-th Hecke polynomial, when
        the form is ordinary at p; None otherwise."""
        if self.p_new:
            return None
        if int(self.ap) % self.p == 0:
            return None
        c = self.hecke_poly_coeffs()
        return hensel_root(c, int(self.ap) % self.p, self.p, prec)


@dataclass
class OracleData:
    N: int
    p: int
    k: int
    space: ClassicalSymbolSpace            # level Np
    base_space: ClassicalSymbolSpace | None  # level N (p-old source), if used
    packets: list
    newforms: list


def classical_oracle(N: int, p: int, k: int) -> OracleData:
    """Exact eigen-data at level Np: packets, newforms, and symbols.

    p-old systems are traced back to level N where the primitive newform
    symbol lives; p-new systems keep their level-Np eigensymbols.
    """
    if N % p == 0:
        raise ValueError("tame level must be prime to p")
    if N * p < 3:
        raise ValueError("level Np >= 3 required")
    space = ClassicalSymbolSpace(N * p, k)
    packets = decompose(space, p)
    newforms = []
    base_space = None
    cusp_systems = {}
    for pk in packets:
        if pk.is_eisenstein:
            continue
        key = tuple(sorted((l, v) for l, v in pk.a.items()))
        cusp_systems.setdefault(key, []).append(pk)
    for key, pks in sorted(cusp_systems.items()):
        sample = pks[0]
        p_new = sample.up_block is None
        if p_new:
            ap = sample.up_eigenvalue
            plus = next((q for q in pks if q.sign == 1), None)
            minus = next((q for q in pks if q.sign == -1), None)
            nf = NewformData(N=N, p=p, k=k, a=dict(sample.a), p_new=True,
                             symbol_level=N * p,
                             plus_vec=plus.vectors[0] if plus and plus.vectors else None,
                             minus_vec=minus.vectors[0] if minus and minus.vectors else None,
                             ap=ap)
        else:
            # trace of the U_p block is a_p of the level-N newform
            cp = sample.up_charpoly
            ap = -cp[1]
            if base_space is None:
                base_space = ClassicalSymbolSpace(N, k)
                base_packets = decompose_tame(base_space)
            match = [q for q in base_packets
                     if not q.is_eisenstein and
                     all(q.a.get(l) == v for l, v in sample.a.items() if l in q.a)]
            plus = next((q for q in match if q.sign == 1), None)
            minus = next((q for q in match if q.sign == -1), None)
            if plus is None or minus is None:
                raise ArithmeticError("p-old system not found at tame level")
            if plus.a.get(p) != ap:
                raise ArithmeticError("U_p block trace does not match the "
                                      "tame-level T_p eigenvalue")
            nf = NewformData(N=N, p=p, k=k, a=dict(sample.a), p_new=False,
                             symbol_level=N,
                             plus_vec=plus.vectors[0], minus_vec=minus.vectors[0],
                             ap=ap)
        newforms.append(nf)
    return OracleData(N=N, p=p, k=k, space=space, base_space=base_space,
                      packets=packets, newforms=newforms)


def decompose_tame(space: ClassicalSymbolSpace, ell_list=(2, 3, 5, 7, 11, 13)):
    """Eigen-decomposition at a level with no distinguished p: split by
    sign and by the first two good T_ell."""
    k = space.k
    iota = space.iota_restricted()
    packets = []
    ells = [l for l in ell_list if space.level % l][:2]
    bound0 = 2 * _isqrt_ceil(ells[0] ** (k - 1)) + ells[0] ** (k - 1) + 1
    t0 = space.restricted(hecke_matrices(ells[0]))
    for sign in (1, -1):
        shifted = [[iota[i][j] - (sign if i == j else 0) for j in range(space.dim)]
                   for i in range(space.dim)]
        sign_basis = _independent(frac_nullspace(shifted, space.dim))
        if not sign_basis:
            continue
        t0_sub = _restrict_to(space.dim, t0, sign_basis)
        for a0, ker in _integer_eigen_split(t0_sub, bound0):
            vecs = [_lincomb(sign_basis, v) for v in ker]
            if len(vecs) > 1:
                raise ArithmeticError("tame block needs refinement beyond T_%d"
                                      % ells[0])
            packets.extend(_finalize_packets(space, 0, k, sign, vecs,
                                             {ells[0]: Fraction(a0)}))
    return packets


def _finalize_tame(space, k, sign, vecs, known_a):
    return _finalize_packets(space, 0, k, sign, vecs, known_a)

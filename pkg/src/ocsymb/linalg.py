"""Dense linear algebra over Q (exact fractions) and over Z/p^e.

The local-ring routines implement valuation-aware column reduction: the
kernel of an integer matrix mod p^e is generated by unimodular transform
columns at zero columns of the reduced matrix (the saturated, free part)
together with p^(e-v)-scaled pivot columns (torsion directions).  Pivots
are chosen with minimal valuation so all eliminations are exact.

Matrices are lists of row lists throughout.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import int_valuation


# ---------------------------------------------------------------------------
# exact rational routines


def frac_rref(rows: list[list[Fraction]]):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def frac_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over Q."""
    if not rows:
        return [[Fraction(1 if i == j else 0) for i in range(ncols)] for j in range(ncols)]
    rref, pivots = frac_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    return basis


def frac_solve_in_span(basis: list[list[Fraction]], target: list[Fraction]):
    """Coordinates of target in the span of the basis vectors, or None."""
    ncols = len(target)
    aug = [[basis[j][i] for j in range(len(basis))] + [target[i]] for i in range(ncols)]
    rref, pivots = frac_rref(aug)
    if len(basis) in pivots:
        return None
    coords = [Fraction(0)] * len(basis)
    for r, pc in enumerate(pivots):
        coords[pc] = rref[r][len(basis)]
    return coords


def mat_mul_frac(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def integer_kernel(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Z-basis of the saturated kernel {x in Z^ncols : A x = 0}.

    Exact Euclidean column reduction with a tracked unimodular transform;
    the transform columns under the zero columns of the echelon form are
    a basis of the full integer kernel.
    """
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    trans = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    nrows = len(rows)
    used = []
    active = list(range(ncols))
    for r in range(nrows):
        live = [j for j in active if cols[j][r] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda j: abs(cols[j][r]))
            piv = live[0]
            for j in live[1:]:
                f = cols[j][r] // cols[piv][r]
                if f:
                    cols[j] = [a - f * b for a, b in zip(cols[j], cols[piv])]
                    trans[j] = [a - f * b for a, b in zip(trans[j], trans[piv])]
            live = [j for j in live if cols[j][r] != 0]
        piv = live[0]
        active.remove(piv)
        used.append(piv)
    return [trans[j] for j in active]


# ---------------------------------------------------------------------------
# Berkowitz characteristic polynomial (division-free, any commutative ring)


def charpoly_berkowitz(A, red=None):
    """Coefficients of det(X*I - A), ascending degree, via Berkowitz.

    Division-free, so exact over Z/p^e (pass red = lambda x: x % q) and
    over Q (red = None).
    """
    n = len(A)
    if red is None:
        red = lambda x: x
    if n == 0:
        return [1]
    # descending-coefficient vector of the leading principal minors
    c = [1, red(-A[0][0])]
    for k in range(2, n + 1):
        a = A[k - 1][k - 1]
        R = A[k - 1][:k - 1]
        C = [A[i][k - 1] for i in range(k - 1)]
        B = [row[:k - 1] for row in A[:k - 1]]
        q = [1, red(-a)]
        w = C
        for _ in range(k - 1):
            q.append(red(-sum(r * x for r, x in zip(R, w))))
            w = [red(sum(B[i][t] * w[t] for t in range(len(w)))) for i in range(len(w))]
        new = [0] * (k + 1)
        for i in range(k + 1):
            acc = 0
            for j in range(max(0, i - (len(q) - 1)), min(i, len(c) - 1) + 1):
                acc += q[i - j] * c[j]
            new[i] = red(acc)
        c = new
    # c is in descending order (leading coefficient first)
    return list(reversed(c))


def charpoly_fraction(A) -> list[Fraction]:
    return [Fraction(x) for x in charpoly_berkowitz([[Fraction(x) for x in row] for row in A])]


# ---------------------------------------------------------------------------
# Z/p^e routines


class LocalReduction:
    """Column reduction of an integer matrix mod p^e with exact pivoting.

    Right-multiplies A by an invertible transform U so that A U is in
    column-echelon form with valuation-normalized pivots p^v.  Unit pivots
    are taken first; non-unit pivots use a minimal-valuation scan so that
    every elimination quotient is integral.
    """

    def __init__(self, rows: list[list[int]], p: int, e: int):
        self.p = p
        self.e = e
        self.q = p ** e
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        self.nrows, self.ncols = nrows, ncols
        # work on columns as rows of the transpose
        cols = [[rows[i][j] % self.q for i in range(nrows)] for j in range(ncols)]
        trans = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
        pivot_rows: list[int] = []
        pivot_cols: list[int] = []
        pivot_vals: list[int] = []
        active = list(range(ncols))
        used_rows = set()
        while True:
            best = None
            for cj in active:
                col = cols[cj]
                for ri in range(nrows):
                    if ri in used_rows:
                        continue
                    x = col[ri]
                    if x:
                        v = int_valuation(x, p)
                        if best is None or v < best[0]:
                            best = (v, cj, ri)
                            if v == 0:
                                break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                break
            v, cj, ri = best
            q = self.q
            unit = cols[cj][ri] // p ** v
            uinv = pow(unit, -1, q)
            cols[cj] = [x * uinv % q for x in cols[cj]]
            trans[cj] = [x * uinv % q for x in trans[cj]]
            pw = p ** v
            for sj in active:
                if sj == cj:
                    continue
                x = cols[sj][ri]
                if x:
                    f = x // pw  # exact: minimality of the pivot valuation
                    cols[sj] = [(a - f * b) % q for a, b in zip(cols[sj], cols[cj])]
                    trans[sj] = [(a - f * b) % q for a, b in zip(trans[sj], trans[cj])]
            used_rows.add(ri)
            pivot_rows.append(ri)
            pivot_cols.append(cj)
            pivot_vals.append(v)
            active.remove(cj)
        self.cols = cols
        self.trans = trans
        self.pivot_rows = pivot_rows
        self.pivot_cols = pivot_cols
        self.pivot_vals = pivot_vals
        self.free_cols = active

    def kernel(self):
        """(saturated_basis, torsion_generators): vectors in (Z/p^e)^ncols.

        Saturated basis vectors are unimodular; each torsion generator is
        killed by p^v for the paired pivot valuation v > 0.
        """
        sat = [list(self.trans[cj]) for cj in self.free_cols]
        tors = []
        for cj, v in zip(self.pivot_cols, self.pivot_vals):
            if v > 0:
                scale = self.p ** (self.e - v)
                tors.append(([x * scale % self.q for x in self.trans[cj]], v))
        return sat, tors

    def solve(self, target: list[int], tolerance: int = 0):
        """x with A x = target mod p^(e - tolerance), or None if inconsistent.

        Returns (x, loss): coordinate x[j] is only determined mod
        p^(e - v) against a pivot of valuation v; loss is the largest
        pivot valuation used.
        """
        q = self.q
        p = self.p
        b = [t % q for t in target]
        y = {}
        loss = 0
        for ri, cj, v in zip(self.pivot_rows, self.pivot_cols, self.pivot_vals):
            r = b[ri]
            if r == 0:
                continue
            if r % p ** v != 0:
                return None
            coeff = r // p ** v
            loss = max(loss, v)
            y[cj] = coeff
            col = self.cols[cj]
            b = [(a - coeff * col[i]) % q for i, a in enumerate(b)]
        qv = p ** (self.e - tolerance) if tolerance else q
        if any(x % qv for x in b):
            return None
        x = [0] * self.ncols
        for cj, coeff in y.items():
            col = self.trans[cj]
            for i in range(self.ncols):
                x[i] = (x[i] + coeff * col[i]) % q
        return x, loss


def kernel_mod(rows: list[list[int]], ncols: int, p: int, e: int):
    """Saturated kernel basis and torsion generators of A mod p^e."""
    if not rows:
        basis = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
        return basis, []
    red = LocalReduction(rows, p, e)
    return red.kernel()


class SpanSolver:
    """Repeatedly express vectors in the span of fixed columns mod p^e."""

    def __init__(self, basis: list[list[int]], p: int, e: int):
        self.n = len(basis)
        rows = [[basis[j][i] for j in range(self.n)] for i in range(len(basis[0]))]
        self.red = LocalReduction(rows, p, e)

    def coordinates(self, target: list[int], tolerance: int = 0):
        return self.red.solve(target, tolerance=tolerance)


# ---------------------------------------------------------------------------
# Hessenberg charpoly mod p^e (O(n^3), with tracked precision loss)


def charpoly_hessenberg_mod(A: list[list[int]], p: int, e: int):
    """(coeffs ascending of det(XI - A) mod p^e, effective precision).

    Similarity reduction to Hessenberg form with minimal-valuation pivoting;
    each non-unit pivot of valuation v costs v digits of certified precision.
    """
    n = len(A)
    q = p ** e
    H = [[x % q for x in row] for row in A]
    loss = 0
    for k in range(n - 2):
        cand = [(int_valuation(H[i][k], p), i) for i in range(k + 1, n) if H[i][k]]
        if not cand:
            continue
        v, piv = min(cand)
        if piv != k + 1:
            H[piv], H[k + 1] = H[k + 1], H[piv]
            for row in H:
                row[piv], row[k + 1] = row[k + 1], row[piv]
        loss = max(loss, v)
        pw = p ** v
        unit_inv = pow(H[k + 1][k] // pw, -1, q)
        for i in range(k + 2, n):
            x = H[i][k]
            if not x:
                continue
            f = (x // pw) * unit_inv % q if x % pw == 0 else None
            if f is None:
                # entry valuation below pivot valuation cannot happen (minimal pivot)
                raise ArithmeticError("pivot valuation not minimal")
            Hk1 = H[k + 1]
            H[i] = [(a - f * b) % q for a, b in zip(H[i], Hk1)]
            for row in H:
                row[k + 1] = (row[k + 1] + f * row[i]) % q
    # division-free charpoly of a Hessenberg matrix
    polys = [[1]]
    for m in range(1, n + 1):
        x_minus = polys[m - 1]
        new = [0] + list(x_minus)
        d = H[m - 1][m - 1]
        new = [(c1 - d * c0) % q for c1, c0 in zip(new, list(x_minus) + [0])]
        beta = 1
        for i in range(m - 1, 0, -1):
            beta = beta * H[i][i - 1] % q
            coef = H[i - 1][m - 1] * beta % q
            pi = polys[i - 1]
            for t in range(len(pi)):
                new[t] = (new[t] - coef * pi[t]) % q
        polys.append(new)
    eff = e - loss
    return polys[n], eff


def charpoly_mod(A: list[list[int]], p: int, e: int, exact_cutoff: int = 36):
    """Characteristic polynomial mod p^e; Berkowitz when small, else Hessenberg."""
    n = len(A)
    q = p ** e
    if n <= exact_cutoff:
        coeffs = charpoly_berkowitz(A, red=lambda x: x % q)
        return [c % q for c in coeffs], e
    return charpoly_hessenberg_mod(A, p, e)


def mat_mul_mod(A, B, q):
    n, k = len(A), len(B)
    m = len(B[0])
    Bt = [[B[t][j] for t in range(k)] for j in range(m)]
    return [[sum(row[t] * col[t] for t in range(k)) % q for col in Bt] for row in A]


def mat_vec_mod(A, v, q):
    return [sum(a * b for a, b in zip(row, v)) % q for row in A]


def poly_eval_reversed_on_matrix(coeffs: list[int], A: list[list[int]], q: int):
    """X^d Q(1/X) evaluated at A, for Q given by ascending coeffs (Q(0)=1).

    The reversed polynomial is sum_t coeffs[t] A^(d-t), computed by Horner.
    """
    n = len(A)
    d = len(coeffs) - 1
    acc = [[coeffs[0] if i == j else 0 for j in range(n)] for i in range(n)]
    for t in range(1, d + 1):
        acc = mat_mul_mod(acc, A, q)
        for i in range(n):
            acc[i][i] = (acc[i][i] + coeffs[t]) % q
    return acc

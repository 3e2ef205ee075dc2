"""Weight space: integer weights, one-parameter families, and characters.

A point of weight space is a continuous character of Z_p^x.  An integer
weight k acts through z -> z^(k-2).  A one-parameter family lives over the
coefficient ring Z_p[[T]] truncated to (p^M, T^Mt); the group element 1+p
is sent to 1+T, and a general unit z to

    omega(z)^component * sum_n binom(log z_1 / log(1+p), n) T^n

where z_1 = z/omega(z) is the 1-unit part.  The analyticity radius of a
character is the least s such that z -> chi(1 + p^(s+1) x) expands with
integral coefficients; it is 0 both for integer weights and for the
standard family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .padic import (
    PadicInt,
    factorial_valuation,
    int_valuation,
    is_odd_prime,
    log_series_int,
    teichmuller_int,
)


class FamilyCoefficients:
    """The truncated coefficient ring Z_p[[T]] / (p^prec, T^tdeg).

    Acts as a ring descriptor; elements are FamilyElement instances.
    Every quotient by a power of the ideal (p, T) is a finite abelian
    group, which is what makes depth-truncated distribution modules
    finite below.
    """

    def __init__(self, p: int, prec: int, tdeg: int):
        if not is_odd_prime(p):
            raise ValueError("p must be an odd prime")
        if prec < 1 or tdeg < 1:
            raise ValueError("positive precision and T-degree required")
        self.p = p
        self.prec = prec
        self.tdeg = tdeg
        self.q = p ** prec

    def __repr__(self):
        return f"Z_{self.p}[[T]]/({self.p}^{self.prec}, T^{self.tdeg})"

    def __eq__(self, other):
        return isinstance(other, FamilyCoefficients) and \
            (self.p, self.prec, self.tdeg) == (other.p, other.prec, other.tdeg)

    def __hash__(self):
        return hash((self.p, self.prec, self.tdeg))

    def element(self, coeffs) -> "FamilyElement":
        return FamilyElement(self, coeffs)

    def zero(self) -> "FamilyElement":
        return FamilyElement(self, [])

    def one(self) -> "FamilyElement":
        return FamilyElement(self, [1])

    def from_int(self, n: int) -> "FamilyElement":
        return FamilyElement(self, [n])

    def tvar(self) -> "FamilyElement":
        return FamilyElement(self, [0, 1])


class FamilyElement:
    """A truncated series sum a_n T^n with a_n in Z/p^prec."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: FamilyCoefficients, coeffs):
        q = ring.q
        c = [x % q for x in coeffs[: ring.tdeg]]
        c += [0] * (ring.tdeg - len(c))
        self.ring = ring
        self.coeffs = tuple(c)

    def __repr__(self):
        return f"FamilyElement{list(self.coeffs)}"

    def __eq__(self, other):
        return isinstance(other, FamilyElement) and self.ring == other.ring \
            and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        return FamilyElement(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FamilyElement(self.ring, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def _coerce(self, other) -> "FamilyElement":
        if isinstance(other, FamilyElement):
            if other.ring != self.ring:
                raise ValueError("mixing distinct coefficient rings")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        raise TypeError(f"cannot coerce {other!r}")

    def __mul__(self, other):
        other = self._coerce(other)
        n = self.ring.tdeg
        q = self.ring.q
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] = (out[i + j] + a * b) % q
        return FamilyElement(self.ring, out)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.coeffs[0] % self.ring.p != 0

    def unit_inverse(self) -> "FamilyElement":
        """Series inverse; constant term must be a unit."""
        if not self.is_unit():
            raise ZeroDivisionError("inverse of a non-unit series")
        q = self.ring.q
        n = self.ring.tdeg
        c0inv = pow(self.coeffs[0], -1, q)
        out = [c0inv] + [0] * (n - 1)
        for m in range(1, n):
            s = sum(self.coeffs[i] * out[m - i] for i in range(1, m + 1)) % q
            out[m] = (-c0inv * s) % q
        return FamilyElement(self.ring, out)

    def divide_exact_int(self, d: int) -> "FamilyElement":
        """Exact coefficientwise division by an integer d = p^v * m.

        Lossy on the p-precision ledger; the caller tracks that.  Raises
        when a coefficient is not divisible by p^v.
        """
        p = self.ring.p
        v = int_valuation(d, p)
        m = d // p ** v
        q = self.ring.q
        minv = pow(m, -1, q)
        out = []
        for a in self.coeffs:
            if a % p ** v:
                raise ValueError("coefficient not divisible by p^%d" % v)
            out.append((a // p ** v) * minv % q)
        return FamilyElement(self.ring, out)

    def evaluate(self, t: int, prec: int | None = None) -> PadicInt:
        """Substitute T -> t with v_p(t) >= 1.

        The result is certified mod p^min(prec, tdeg * v_p(t)) since the
        dropped tail T^tdeg contributes at least p^(tdeg * v_p(t)).
        """
        p = self.ring.p
        if t % p != 0:
            raise ValueError("substitution point must have positive valuation")
        vt = int_valuation(t, p) if t else self.ring.prec
        out_prec = min(self.ring.prec, self.ring.tdeg * vt)
        if prec is not None:
            out_prec = min(out_prec, prec)
        q = p ** out_prec
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * t + a) % q
        return PadicInt(p, out_prec, acc)

    def reduce_mod_a_power(self, n: int) -> tuple:
        """Canonical representative modulo (p, T)^n: coefficient of T^m
        taken mod p^(n-m), zero for m >= n."""
        p = self.ring.p
        out = []
        for m, a in enumerate(self.coeffs):
            if m >= n:
                break
            out.append(a % p ** (n - m))
        return tuple(out)

    def reduce_p_precision(self, k: int) -> "FamilyElement":
        q = self.ring.p ** min(k, self.ring.prec)
        return FamilyElement(self.ring, [a % q for a in self.coeffs])


@dataclass(frozen=True)
class WeightChar:
    """A point or one-parameter family of weight space.

    kind = "integer": the character z -> z^(k-2); component is then
    (k-2) mod (p-1).  kind = "family": the universal character on the
    component of the given omega-power, valued in a FamilyCoefficients
    ring.
    """

    p: int
    kind: str
    k: int | None = None
    ring: FamilyCoefficients | None = None
    component: int | None = None

    @staticmethod
    def integer(p: int, k: int) -> "WeightChar":
        if not is_odd_prime(p):
            raise ValueError("p must be an odd prime")
        return WeightChar(p=p, kind="integer", k=k, component=(k - 2) % (p - 1))

    @staticmethod
    def family(ring: FamilyCoefficients, component: int = 0) -> "WeightChar":
        return WeightChar(p=ring.p, kind="family", ring=ring,
                          component=component % (ring.p - 1))

    def is_family(self) -> bool:
        return self.kind == "family"

    def cache_key(self):
        if self.kind == "integer":
            return ("k", self.p, self.k)
        return ("fam", self.p, self.ring.prec, self.ring.tdeg, self.component)

    def value(self, z: int, prec: int):
        """chi(z) for a unit z: an integer mod p^prec (integer weight) or
        a FamilyElement (family)."""
        if z % self.p == 0:
            raise ValueError("character evaluated at a non-unit")
        if self.kind == "integer":
            q = self.p ** prec
            return pow(z, self.k - 2, q) if self.k >= 2 else \
                pow(pow(z, -1, q), 2 - self.k, q)
        omega, series = universal_char_eval(z, self.ring)
        scalar = pow(omega, self.component, self.ring.q)
        return series * scalar

    def minus_one_sign(self) -> int:
        """chi(-1) = (-1)^component (the 1-unit part of -1 is trivial)."""
        return -1 if self.component % 2 else 1


def universal_char_eval(z: int, ring: FamilyCoefficients):
    """(omega(z), sum_n binom(log<z>/log(1+p), n) T^n) for a unit z.

    The exponent c = log<z>/log(1+p) is a p-adic integer; binom(c, n) is
    computed at a working precision raised by v_p(n!) so every returned
    coefficient is exact mod p^prec.
    """
    p, M, Mt = ring.p, ring.prec, ring.tdeg
    if z % p == 0:
        raise ValueError("universal character evaluated at a non-unit")
    boost = factorial_valuation(Mt, p) + 2
    W = M + boost + 1
    qW = p ** W
    omega = teichmuller_int(z, p, W)
    z1 = z * pow(omega, -1, qW) % qW          # the 1-unit part <z>
    lz = log_series_int(z1 - 1, p, W)
    lg = log_series_int(p, p, W)              # log(1+p) = p * unit
    c = (lz // p) * pow(lg // p, -1, qW) % qW
    coeffs = [1]
    num = 1
    q = ring.q
    for n in range(1, Mt):
        num = num * (c - (n - 1)) % qW
        vf = factorial_valuation(n, p)
        if num % p ** vf:
            raise ArithmeticError("binomial coefficient not p-integral")
        mfac = math.factorial(n) // p ** vf
        coeffs.append((num // p ** vf) * pow(mfac, -1, q) % q)
    return omega % ring.q, ring.element(coeffs)


def specialization_point(p: int, k: int, prec: int) -> int:
    """The T-value (1+p)^(k-2) - 1 classifying integer weight k."""
    return (pow(1 + p, k - 2, p ** prec) - 1) % p ** prec


def min_analyticity_radius(weight: WeightChar, s_cap: int = 3,
                           index_cap: int = 40) -> int:
    """Least s with chi(1 + p^(s+1) x) integral over the level-s basis.

    Integer weights are polynomial characters, hence radius 0.  For a
    family, the function f(x) = chi(1 + p^(s+1) x) is expanded over the
    basis e_j(x) = floor(p^-s j)! binom(x, j) by finite differences of
    exact values, and the coefficients f = sum r_j e_j must have r_j in
    the coefficient ring: Delta^j f(0) divisible by floor(p^-s j)!.  The
    check runs over the first tdeg * prec indices (capped) up to the
    ring's stored precision.

    The answer is relative to the ring truncation: at s = 0 the character
    is integral-analytic exactly through T-degree < p, so rings with
    tdeg <= p have radius 0 and deeper T-truncations need s >= 1.
    """
    if weight.kind == "integer":
        return 0
    ring = weight.ring
    for s in range(s_cap + 1):
        if _family_integral_at_radius(ring, weight.component, s, index_cap):
            return s
    raise ArithmeticError("no analytic radius found below cap")


def _family_integral_at_radius(ring: FamilyCoefficients, component: int,
                               s: int, index_cap: int) -> bool:
    p, M, Mt = ring.p, ring.prec, ring.tdeg
    jmax = min(Mt * M, index_cap)
    step = p ** (s + 1)
    vals = []
    for x in range(jmax + 1):
        omega, series = universal_char_eval(1 + step * x, ring)
        vals.append(series * pow(omega, component, ring.q))
    for j in range(jmax + 1):
        fac = factorial_valuation(j // p ** s, p)
        need = p ** min(fac, M)
        if any(a % need for a in vals[0].coeffs):
            return False
        if j < jmax:
            vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return True

"""Exact arithmetic in Z/p^M with valuation and precision bookkeeping.

Everything downstream (distribution modules, symbol spaces, spectral data)
reduces to integer arithmetic modulo a prime power.  A value is a residue
together with the number of p-adic digits it is known to; operations
propagate the worst case.  Elements congruent to 0 modulo p^M cannot be
certified to vanish, so their valuation is reported as infinity rather
than as an exact zero claim.

Only odd primes are supported.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def int_valuation(n: int, p: int):
    """v_p(n) for an exact integer, math.inf for n = 0."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def fraction_valuation(q: Fraction, p: int):
    if q == 0:
        return INF
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) by Legendre's formula, sum over t of floor(n / p^t)."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


class PadicInt:
    """A residue in Z/p^prec, tracked with its own precision.

    Immutable.  Arithmetic returns values at the minimum precision of the
    operands; divisions by p-powers reduce precision accordingly.
    """

    __slots__ = ("p", "prec", "residue")

    def __init__(self, p: int, prec: int, value: int):
        if prec < 1:
            raise ValueError("precision must be >= 1")
        self.p = p
        self.prec = prec
        self.residue = value % (p ** prec)

    def _check(self, other: "PadicInt"):
        if self.p != other.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    def __repr__(self):
        return f"{self.residue} + O({self.p}^{self.prec})"

    def __eq__(self, other):
        if not isinstance(other, PadicInt):
            return NotImplemented
        return (self.p, self.prec, self.residue) == (other.p, other.prec, other.residue)

    def __hash__(self):
        return hash((self.p, self.prec, self.residue))

    def congruent(self, other, prec: int | None = None) -> bool:
        """True if self and other agree modulo p^prec (default: joint precision)."""
        if isinstance(other, int):
            other = PadicInt(self.p, self.prec, other)
        self._check(other)
        m = min(self.prec, other.prec)
        if prec is not None:
            if prec > m:
                raise ValueError("requested precision exceeds known digits")
            m = prec
        q = self.p ** m
        return (self.residue - other.residue) % q == 0

    def reduce(self, prec: int) -> "PadicInt":
        if prec > self.prec:
            raise ValueError("cannot increase precision")
        return PadicInt(self.p, prec, self.residue)

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicInt(self.p, self.prec, other)
        self._check(other)
        m = min(self.prec, other.prec)
        return PadicInt(self.p, m, self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.p, self.prec, -self.residue)

    def __sub__(self, other):
        if isinstance(other, int):
            other = PadicInt(self.p, self.prec, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = PadicInt(self.p, self.prec, other)
        self._check(other)
        m = min(self.prec, other.prec)
        return PadicInt(self.p, m, self.residue * other.residue)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        return PadicInt(self.p, self.prec, pow(self.residue, n, self.p ** self.prec))

    def valuation(self):
        """v_p of the residue; math.inf when indistinguishable from zero."""
        return int_valuation(self.residue, self.p) if self.residue else INF

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def unit_inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise ZeroDivisionError("inverse of a non-unit")
        q = self.p ** self.prec
        return PadicInt(self.p, self.prec, pow(self.residue, -1, q))

    def divide_exact_p_power(self, t: int) -> "PadicInt":
        """Divide by p^t; requires p^t | residue.  Loses t digits."""
        if t == 0:
            return self
        if t >= self.prec:
            raise ValueError("not enough precision to divide by p^%d" % t)
        if self.residue % self.p ** t != 0:
            raise ValueError("residue not divisible by p^%d" % t)
        return PadicInt(self.p, self.prec - t, self.residue // self.p ** t)

    def divide_exact_int(self, n: int) -> "PadicInt":
        """Exact division by a nonzero integer n = p^v * m; loses v digits."""
        v = int_valuation(n, self.p)
        out = self.divide_exact_p_power(v)
        m = n // self.p ** v
        return out * PadicInt(self.p, out.prec, pow(m, -1, self.p ** out.prec))

    def from_same(self, value: int) -> "PadicInt":
        return PadicInt(self.p, self.prec, value)


def val(x: PadicInt):
    """Valuation of a tracked residue (infinity-flag on 0 mod p^prec)."""
    return x.valuation()


def teichmuller(u: PadicInt) -> PadicInt:
    """The (p-1)-th root of unity congruent to u mod p.

    Computed as the limit of u^(p^n); each step stabilizes one more digit,
    so prec iterations suffice.
    """
    if not u.is_unit():
        raise ValueError("Teichmuller lift of a non-unit")
    q = u.p ** u.prec
    x = u.residue % q
    for _ in range(u.prec):
        x = pow(x, u.p, q)
    return PadicInt(u.p, u.prec, x)


def teichmuller_int(a: int, p: int, prec: int) -> int:
    """Integer residue of the Teichmuller lift of a mod p^prec."""
    return teichmuller(PadicInt(p, prec, a)).residue


def log_series_int(t: int, p: int, target_prec: int) -> int:
    """log(1+t) mod p^target_prec for p | t, by the alternating series.

    Each term t^n / n is an exact p-adic integer; working precision is
    raised internally so every term is correct mod p^target_prec.
    """
    if t % p != 0:
        raise ValueError("log series needs an argument congruent to 1 mod p")
    # last term needed: n - floor(log_p n) < target_prec
    n_max = 1
    while n_max - math.floor(math.log(n_max, p) + 1e-9) < target_prec:
        n_max += 1
    extra = factorial_valuation(n_max, p) + 2
    q = p ** (target_prec + extra)
    acc = 0
    tn = 1
    for n in range(1, n_max + 1):
        tn = (tn * t) % q
        v = int_valuation(n, p)
        m = n // p ** v
        term = (tn // p ** v) * pow(m, -1, q) % q
        acc = (acc - term if n % 2 == 0 else acc + term) % q
    return acc % (p ** target_prec)


def padic_log(u: PadicInt) -> PadicInt:
    """log of a 1-unit, u = 1 mod p.

    Documented worst-case loss from the series divisions: floor(log_p prec)
    digits; the returned precision reflects it.
    """
    p, M = u.p, u.prec
    if u.residue % p != 1 % p:
        raise ValueError("padic_log requires u = 1 mod p")
    loss = math.floor(math.log(M, p) + 1e-9) if M > 1 else 0
    out_prec = max(1, M - loss)
    value = log_series_int(u.residue - 1, p, out_prec)
    return PadicInt(p, out_prec, value)


def padic_binomial_int(c: int, n: int, p: int, target_prec: int) -> int:
    """binom(c, n) mod p^target_prec for a p-adic integer c given mod a high power.

    The caller must supply c modulo at least p^(target_prec + v_p(n!)).
    """
    if n == 0:
        return 1 % p ** target_prec
    vfac = factorial_valuation(n, p)
    q = p ** (target_prec + vfac)
    num = 1
    for r in range(n):
        num = num * (c - r) % q
    if num % p ** vfac != 0:
        raise ArithmeticError("binomial numerator not divisible by p^v(n!)")
    m = math.factorial(n) // p ** vfac
    return (num // p ** vfac) * pow(m, -1, p ** target_prec) % p ** target_prec


def hensel_root(coeffs: list[int], r0: int, p: int, prec: int) -> int:
    """Lift a simple root of an integer polynomial from mod p to mod p^prec.

    coeffs are ascending-degree.  Requires f(r0) = 0 mod p and f'(r0) a unit.
    Newton iteration doubles the number of correct digits each step.
    """
    def f(x, q):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % q
        return acc

    def fp(x, q):
        acc = 0
        for i in range(len(coeffs) - 1, 0, -1):
            acc = (acc * x + i * coeffs[i]) % q
        return acc

    if f(r0, p) % p != 0:
        raise ValueError("not a root mod p")
    if fp(r0, p) % p == 0:
        raise ValueError("root is not simple mod p")
    x = r0 % p
    known = 1
    while known < prec:
        known = min(2 * known, prec)
        q = p ** known
        x = (x - f(x, q) * pow(fp(x, q), -1, q)) % q
    return x % p ** prec


def crt_lift_fraction(q: Fraction, p: int, prec: int) -> int:
    """Reduce a rational with p-free denominator into Z/p^prec."""
    if q.denominator % p == 0:
        raise ValueError("denominator not prime to p")
    mod = p ** prec
    return q.numerator * pow(q.denominator, -1, mod) % mod

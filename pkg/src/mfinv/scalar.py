"""Exact scalar arithmetic: rationals and cyclotomic field elements.

Every number in this package is either a rational or an element of a single
cyclotomic field Q(zeta_m).  A computation session fixes one conductor m up
front; mixing conductors is an error rather than an embedding problem.

    >>> ctx = CyclotomicContext(4)
    >>> z = ctx.zeta()
    >>> print(z * z)
    -1
    >>> print((one(ctx) + z) * (one(ctx) - z))
    2

Rationals are plain wrapped fractions:

    >>> print(rational(2, 4) + rational(1, 3))
    5/6
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_m, low degree first, monic.

    Computed by dividing x^m - 1 by Phi_d for every proper divisor d of m.
    """
    if m < 1:
        raise ValueError("conductor must be positive")
    # x^m - 1
    num = [Fraction(0)] * (m + 1)
    num[0] = Fraction(-1)
    num[m] = Fraction(1)
    for d in range(1, m):
        if m % d == 0:
            num = _polydiv_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _polydiv_exact(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    # exact division over Q, low degree first; remainder must vanish
    num = list(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] / den[-1]
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    assert all(c == 0 for c in num), "non-exact polynomial division"
    return out


@dataclass(frozen=True)
class CyclotomicContext:
    """The field Q(zeta_m), presented as Q[x]/Phi_m(x)."""

    order: int

    @property
    def degree(self) -> int:
        return len(self.minimal_polynomial) - 1

    @property
    def minimal_polynomial(self) -> tuple[Fraction, ...]:
        return cyclotomic_polynomial(self.order)

    def zeta(self, power: int = 1) -> "Scalar":
        """The root of unity zeta_m^power as a Scalar."""
        power %= self.order
        if self.degree == 1:
            # Phi_1 = x - 1 or Phi_2 = x + 1: zeta is rational
            root = -self.minimal_polynomial[0]
            return Scalar(self, (root**power,))
        coeffs = _reduce_mod_phi(
            [Fraction(0)] * power + [Fraction(1)], self.minimal_polynomial
        )
        return Scalar(self, tuple(coeffs))

    def from_rational(self, a: Fraction | int) -> "Scalar":
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(a)
        return Scalar(self, tuple(coeffs))


def _reduce_mod_phi(
    coeffs: list[Fraction], phi: tuple[Fraction, ...]
) -> list[Fraction]:
    d = len(phi) - 1
    coeffs = list(coeffs)
    for k in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[k]
        if c:
            # x^k -> x^(k-d) * (x^d - phi) since phi is monic
            for j in range(d):
                coeffs[k - d + j] -= c * phi[j]
        coeffs[k] = Fraction(0)
    coeffs = coeffs[:d]
    while len(coeffs) < d:
        coeffs.append(Fraction(0))
    return coeffs


@dataclass(frozen=True)
class Scalar:
    """An exact field element.

    ``context`` is None for plain rationals, in which case ``coeffs`` has
    length one.  For cyclotomic elements ``coeffs`` lists the coordinates in
    the power basis 1, zeta, ..., zeta^(d-1), always fully reduced mod Phi_m,
    so equality is componentwise.
    """

    context: CyclotomicContext | None
    coeffs: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is not rational: %s" % (self,))
        return self.coeffs[0]

    def is_rational_integer(self) -> bool:
        return self.is_rational() and self.coeffs[0].denominator == 1

    def __eq__(self, other):
        """Equality across int, Fraction, and context-lifted rationals.

        Scalars in distinct cyclotomic fields compare equal only when both
        are rational; no cross-conductor embedding is attempted.
        """
        try:
            pair = _unify(self, other)
        except ValueError:
            # mixed conductors: only rational values can still agree
            if self.is_rational() and other.is_rational():
                return self.as_fraction() == other.as_fraction()
            return False
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.context.order, self.coeffs))

    def __add__(self, other):
        pair = _unify(self, other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Scalar(a.context, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.context, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        pair = _unify(self, other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return Scalar(a.context, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Scalar(self.context, tuple(a * f for a in self.coeffs))
        pair = _unify(self, other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        if a.context is None:
            return Scalar(None, (a.coeffs[0] * b.coeffs[0],))
        if b.is_rational():
            f = b.coeffs[0]
            return Scalar(a.context, tuple(x * f for x in a.coeffs))
        prod = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Scalar(
            a.context, tuple(_reduce_mod_phi(prod, a.context.minimal_polynomial))
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("scalar inverse of zero")
        if self.context is None:
            return Scalar(None, (1 / self.coeffs[0],))
        if self.is_rational():
            return self.context.from_rational(1 / self.coeffs[0])
        # extended gcd of the representative with Phi_m; Phi_m is irreducible
        # over Q so the gcd is a nonzero constant
        s = _xgcd_inverse(list(self.coeffs), list(self.context.minimal_polynomial))
        return Scalar(
            self.context,
            tuple(_reduce_mod_phi(s, self.context.minimal_polynomial)),
        )

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * Scalar(None, (1 / Fraction(other),))
        pair = _unify(self, other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = one(self.context)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self) -> str:
        if self.context is None or self.is_rational():
            return _fmt_fraction(self.coeffs[0])
        parts: list[str] = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(_fmt_fraction(c))
                continue
            mono = "z" if k == 1 else "z^%d" % k
            if c == 1:
                term = mono
            elif c == -1:
                term = "-" + mono
            else:
                term = "%s*%s" % (_fmt_fraction(c), mono)
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return "Scalar(%s)" % self


def _unify(a: Scalar, b) -> tuple[Scalar, Scalar]:
    if isinstance(b, (int, Fraction)):
        b = Scalar(None, (Fraction(b),))
    if not isinstance(b, Scalar):
        return NotImplemented  # type: ignore[return-value]
    if a.context is None and b.context is None:
        return a, b
    if a.context is None:
        return b.context.from_rational(a.coeffs[0]), b
    if b.context is None:
        return a, a.context.from_rational(b.coeffs[0])
    if a.context.order != b.context.order:
        raise ValueError(
            "mixed cyclotomic conductors %d and %d"
            % (a.context.order, b.context.order)
        )
    return a, b


def _fmt_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def _xgcd_inverse(a: list[Fraction], phi: list[Fraction]) -> list[Fraction]:
    # returns s with s*a = 1 mod phi (phi irreducible, deg a < deg phi)
    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def sub_scaled(p, q, c, shift):
        while len(p) < len(q) + shift:
            p.append(Fraction(0))
        for i, qi in enumerate(q):
            p[i + shift] -= c * qi
        return trim(p)

    r0, r1 = trim(list(phi)), trim(list(a))
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        r = list(r0)
        s = list(s0)
        for k in range(len(r0) - len(r1), -1, -1):
            if len(r) < k + len(r1):
                continue
            c = r[k + len(r1) - 1] / r1[-1]
            if c:
                r = sub_scaled(r, r1, c, k)
                s = sub_scaled(s, s1, c, k)
        r0, r1 = r1, trim(r)
        s0, s1 = s1, s
        if not r1:
            raise ZeroDivisionError("element shares a factor with the modulus")
    c = r1[0]
    return [x / c for x in s1]


def rational(p: int | Fraction, q: int = 1) -> Scalar:
    return Scalar(None, (Fraction(p, q),))


def zero(ctx: CyclotomicContext | None = None) -> Scalar:
    if ctx is None:
        return Scalar(None, (Fraction(0),))
    return ctx.from_rational(0)


def one(ctx: CyclotomicContext | None = None) -> Scalar:
    if ctx is None:
        return Scalar(None, (Fraction(1),))
    return ctx.from_rational(1)


def scalar_to_json(s: Scalar):
    """Serialize for CLI output: "p/q" for rationals, {m, coeffs} otherwise."""
    if s.context is None or s.is_rational():
        return _fmt_fraction(s.coeffs[0])
    return {
        "m": s.context.order,
        "coeffs": [_fmt_fraction(c) for c in s.coeffs],
    }

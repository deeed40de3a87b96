"""Sparse multivariate polynomials over the exact scalars.

The ring is a fixed, ordered tuple of variable names.  Monomials are bare
exponent tuples; the canonical term order everywhere (printing, Groebner
bases, quotient bases) is graded reverse lexicographic with respect to the
given variable order.

A small expression parser covers the CLI input grammar: `+ - * / ^`,
integer literals, parentheses, variable names, and (in a cyclotomic
session) the literal `z` for zeta_m.  Division is only by nonzero
constants.

    >>> R = PolyRing(("x", "y"))
    >>> w = R.parse("x^3 + x*y^2")
    >>> print(w.partial_derivative(1))
    2*x*y
    >>> print(R.parse("(x + y)^2 - x^2 - y^2"))
    2*x*y
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalar import CyclotomicContext, Scalar, one as scalar_one, rational

Monomial = tuple  # exponent tuples, length = ring.n


def grevlex_key(m: Monomial):
    """Sort key: larger key = larger monomial in grevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class PolyRing:
    """k[x_1, ..., x_n] with a fixed variable order and scalar context."""

    names: tuple[str, ...]
    context: CyclotomicContext | None = None

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def n(self) -> int:
        return len(self.names)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        if isinstance(c, (int, Fraction)):
            c = rational(Fraction(c)) if self.context is None else self.context.from_rational(Fraction(c))
        if not isinstance(c, Scalar):
            raise TypeError("not a scalar: %r" % (c,))
        if c.is_zero():
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.n: c})

    def var(self, i: int) -> "Polynomial":
        expo = [0] * self.n
        expo[i] = 1
        return Polynomial(self, {tuple(expo): scalar_one(self.context)})

    def monomial(self, m: Monomial, c=None) -> "Polynomial":
        if c is None:
            c = scalar_one(self.context)
        return self.from_terms({tuple(m): c})

    def from_terms(self, terms: dict) -> "Polynomial":
        return Polynomial(self, {m: c for m, c in terms.items() if not c.is_zero()})

    def parse(self, text: str) -> "Polynomial":
        return _parse(self, text)

    def scalar(self, c) -> Scalar:
        if isinstance(c, Scalar):
            return c
        if self.context is None:
            return rational(Fraction(c))
        return self.context.from_rational(Fraction(c))


class Polynomial:
    """Immutable by convention; ``terms`` maps monomials to nonzero scalars."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lead = None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_coeff(self) -> Scalar:
        z = (0,) * self.ring.n
        return self.terms.get(z, self.ring.scalar(0))

    def as_scalar(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant: %s" % self)
        return self.constant_coeff()

    def coeff_of(self, m: Monomial) -> Scalar:
        return self.terms.get(tuple(m), self.ring.scalar(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def leading_monomial(self) -> Monomial:
        if self._lead is None:
            if not self.terms:
                raise ValueError("leading monomial of zero")
            self._lead = max(self.terms, key=grevlex_key)
        return self._lead

    def leading_coeff(self) -> Scalar:
        return self.terms[self.leading_monomial()]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            if other == 0:
                return self.is_zero()
            return NotImplemented
        return self.ring.names == other.ring.names and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction, Scalar)):
            c = self.ring.scalar(other)
            if c.is_zero():
                return self.ring.zero()
            return Polynomial(self.ring, {m: a * c for m, a in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = s
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self * (rational(1) / Fraction(other))
        if isinstance(other, Scalar):
            return self * other.inverse()
        if isinstance(other, Polynomial) and other.is_constant():
            return self * other.as_scalar().inverse()
        raise ZeroDivisionError("division only by nonzero constants")

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def partial_derivative(self, i: int) -> "Polynomial":
        out: dict = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                continue
            m2 = list(m)
            m2[i] -= 1
            out[tuple(m2)] = c * m[i]
        return self.ring.from_terms(out)

    def substitute(self, target: PolyRing, images: list["Polynomial"]) -> "Polynomial":
        """Ring map sending variable i to images[i] (all in ``target``)."""
        if len(images) != self.ring.n:
            raise ValueError("need one image per variable")
        out = target.zero()
        powers: list[dict[int, Polynomial]] = [dict() for _ in images]
        for m, c in self.terms.items():
            piece = target.const(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                p = powers[i].get(e)
                if p is None:
                    p = images[i] ** e
                    powers[i][e] = p
                piece = piece * p
            out = out + piece
        return out

    def quasi_degree(self, weights: list[int]) -> int | None:
        """Common weighted degree of all terms, or None if inhomogeneous."""
        degs = {sum(w * e for w, e in zip(weights, m)) for m in self.terms}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else 0

    def map_ring(self, target: PolyRing) -> "Polynomial":
        """Reinterpret in a ring with the same variables (context upgrade)."""
        if target.names != self.ring.names:
            raise ValueError("variable mismatch")
        return target.from_terms(
            {m: target.scalar(0) + c for m, c in self.terms.items()}
        )

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return self.ring.const(other)
        raise TypeError("cannot combine polynomial with %r" % (other,))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                name if e == 1 else "%s^%d" % (name, e)
                for name, e in zip(self.ring.names, m)
                if e > 0
            )
            cs = str(c)
            atomic = not ("+" in cs or " " in cs or (cs.count("-") - cs.startswith("-")) > 0)
            if not mono:
                term = cs if atomic else "(%s)" % cs
            elif atomic:
                if cs == "1":
                    term = mono
                elif cs == "-1":
                    term = "-" + mono
                else:
                    term = "%s*%s" % (cs, mono)
            else:
                term = "(%s)*%s" % (cs, mono)
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    def __repr__(self) -> str:
        return "Poly(%s)" % self


def difference_derivative(
    f: Polynomial, j: int, doubled: PolyRing
) -> Polynomial:
    """The j-th difference derivative, an element of the doubled ring.

    The doubled ring lists the original variables first and their primed
    partners second.  Variables before position j stay unsubstituted, those
    after j are replaced by their partners, and the quotient

        [f(x_1..x_{j-1}, y_j, .., y_n) - f(x_1..x_j, y_{j+1}, .., y_n)] / (y_j - x_j)

    is divided out exactly.
    """
    n = f.ring.n
    if doubled.n != 2 * n:
        raise ValueError("doubled ring must have 2n variables")
    xs = [doubled.var(i) for i in range(n)]
    ys = [doubled.var(n + i) for i in range(n)]
    upper = f.substitute(doubled, xs[:j] + ys[j:])
    lower = f.substitute(doubled, xs[: j + 1] + ys[j + 1 :])
    return _divide_by_linear(upper - lower, n + j, j, doubled)


def _divide_by_linear(f: Polynomial, yi: int, xi: int, ring: PolyRing) -> Polynomial:
    # exact division by (y - x) where y = var yi, x = var xi
    quotient: dict = {}
    rem = dict(f.terms)
    while rem:
        # pick a term of maximal y-degree
        m = max(rem, key=lambda t: (t[yi], grevlex_key(t)))
        if m[yi] == 0:
            raise ValueError("division by (y - x) is not exact")
        c = rem[m]
        q = list(m)
        q[yi] -= 1
        q = tuple(q)
        quotient[q] = quotient.get(q, ring.scalar(0)) + c
        # subtract c * q * (y - x)
        for sign, idx in ((1, yi), (-1, xi)):
            t = list(q)
            t[idx] += 1
            t = tuple(t)
            s = rem.get(t, ring.scalar(0)) - c * sign
            if s.is_zero():
                rem.pop(t, None)
            else:
                rem[t] = s
    return ring.from_terms(quotient)


def doubled_ring(ring: PolyRing, suffix: str = "_y") -> PolyRing:
    return PolyRing(
        ring.names + tuple(n + suffix for n in ring.names), ring.context
    )


def determinant(rows, one):
    """Determinant by Laplace expansion along the first row.

    Works over any commutative ring whose elements support `+`, `-` and `*`;
    `one` is the ring's multiplicative identity (the value of the empty
    determinant).  Intended for the small matrices that appear here: Hessians,
    residue cofactors, difference Jacobians.
    """
    n = len(rows)
    if n == 0:
        return one
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        term = rows[0][j] * determinant(minor, one)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


# --- expression parser ------------------------------------------------------

_OPS = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(text[i:j])
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(text[i:j])
            i = j
        elif ch in "+-*/^()":
            out.append(ch)
            i += 1
        else:
            raise ValueError("bad character %r in %r" % (ch, text))
    return out


class _Parser:
    def __init__(self, ring: PolyRing, tokens: list[str]):
        self.ring = ring
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def parse_expr(self, min_prec: int) -> Polynomial:
        left = self.parse_atom()
        while True:
            op = self.peek()
            if op not in _OPS or _OPS[op] < min_prec:
                return left
            self.next()
            if op == "^":
                expo = self.next()
                if expo is None or not expo.isdigit():
                    raise ValueError("exponent must be a nonnegative integer")
                left = left ** int(expo)
                continue
            right = self.parse_expr(_OPS[op] + 1)
            if op == "+":
                left = left + right
            elif op == "-":
                left = left - right
            elif op == "*":
                left = left * right
            else:
                if not right.is_constant() or right.is_zero():
                    raise ValueError("division only by nonzero constants")
                left = left / right.as_scalar()
        return left

    def parse_atom(self) -> Polynomial:
        t = self.next()
        if t is None:
            raise ValueError("unexpected end of expression")
        if t == "(":
            inner = self.parse_expr(1)
            if self.next() != ")":
                raise ValueError("missing closing parenthesis")
            return inner
        if t == "-":
            return -self.parse_expr(3)
        if t == "+":
            return self.parse_expr(3)
        if t.isdigit():
            return self.ring.const(int(t))
        if t in self.ring.names:
            return self.ring.var(self.ring.names.index(t))
        if t == "z" and self.ring.context is not None:
            return self.ring.const(self.ring.context.zeta())
        raise ValueError("unknown name %r" % t)


def _parse(ring: PolyRing, text: str) -> Polynomial:
    p = _Parser(ring, _tokenize(text))
    result = p.parse_expr(1)
    if p.peek() is not None:
        raise ValueError("trailing input at %r" % p.peek())
    return result

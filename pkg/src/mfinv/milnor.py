"""The Milnor algebra of an isolated singularity and its residue trace.

For a potential w with an isolated critical point at the origin, the
quotient A = k[x]/(dw/dx_1, ..., dw/dx_n) is finite dimensional and carries
the Grothendieck residue trace.  The trace is evaluated exactly through the
transformation law: writing x_i^N = sum_j a_ij dw/dx_j via Groebner
cofactors turns the residue with Jacobian denominators into one with
monomial denominators (x_1^N, ..., x_n^N), where it is plain coefficient
extraction:

    tr(f) = [x_1^(N-1) ... x_n^(N-1)] (f * det(a)).

Scaled suitably this trace is the inverse of the intersection form; with
the sign (-1)^(n choose 2) it is the canonical pairing that the boundary
and bulk invariants land in.

    >>> A = build_milnor(PolyRing(("x",)).parse("x^3"))
    >>> A.mu
    2
    >>> str(residue_trace(hessian_class(A)))
    '2'
"""
from __future__ import annotations

from dataclasses import dataclass

from .groebner import (
    GroebnerBasis,
    buchberger,
    local_support_check,
    normal_form,
    normal_form_with_cofactors,
    quotient_basis,
)
from .poly import Monomial, Polynomial, PolyRing, determinant
from .scalar import Scalar


@dataclass(frozen=True)
class MilnorRing:
    """k[x]/J_w with the data needed to evaluate residue traces.

    ``basis`` lists the standard monomials of the Jacobian ideal (grevlex
    ascending), ``nilpotency`` is the uniform exponent N with every
    x_i^N in J_w, and ``residue_cofactor_det`` is det(a_ij) for one fixed
    choice of cofactors x_i^N = sum_j a_ij dw/dx_j.
    """

    ring: PolyRing
    w: Polynomial
    jacobian_gb: GroebnerBasis
    basis: tuple[Monomial, ...]
    mu: int
    nilpotency: int
    residue_cofactor_det: Polynomial

    def project(self, value: Polynomial, parity: int | None = None) -> "MilnorClass":
        """The class of ``value`` in A_w, reduced to normal form."""
        if value.ring.names != self.ring.names:
            raise ValueError("polynomial from a different ring")
        if parity is None:
            parity = self.ring.n % 2
        return MilnorClass(self, normal_form(value, self.jacobian_gb), parity % 2)

    def zero_class(self, parity: int | None = None) -> "MilnorClass":
        return self.project(self.ring.zero(), parity)

    def coordinates(self, value: Polynomial) -> tuple[Scalar, ...]:
        """Coefficients of the class of ``value`` on the monomial basis."""
        nf = normal_form(value, self.jacobian_gb)
        coords = tuple(nf.coeff_of(m) for m in self.basis)
        if sum(1 for c in coords if not c.is_zero()) != len(nf.terms):
            raise AssertionError("normal form not supported on the basis")
        return coords


@dataclass(frozen=True)
class MilnorClass:
    """An element of A_w together with the parity of its ambient class."""

    ring: MilnorRing
    value: Polynomial
    parity: int

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __add__(self, other: "MilnorClass") -> "MilnorClass":
        _same_ring(self, other)
        return MilnorClass(self.ring, self.value + other.value, self.parity)

    def __sub__(self, other: "MilnorClass") -> "MilnorClass":
        _same_ring(self, other)
        return MilnorClass(self.ring, self.value - other.value, self.parity)

    def __neg__(self) -> "MilnorClass":
        return MilnorClass(self.ring, -self.value, self.parity)

    def scale(self, c) -> "MilnorClass":
        return MilnorClass(self.ring, self.value * c, self.parity)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MilnorClass):
            return NotImplemented
        return (
            self.ring.w == other.ring.w
            and self.value == other.value
            and self.parity == other.parity
        )

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return str(self.value)


def _same_ring(a: MilnorClass, b: MilnorClass) -> None:
    if a.ring.w != b.ring.w or a.ring.ring.names != b.ring.ring.names:
        raise ValueError("ring mismatch")


def build_milnor(w: Polynomial) -> MilnorRing:
    """Build A_w for a potential with an isolated singular point at 0.

    Raises ValueError("not an isolated singularity") when the Jacobian
    quotient is infinite dimensional, and ValueError("singular locus not
    local") when the quotient has support away from the origin.  The
    zero-variable ring (a sector with no fixed coordinates) degenerates
    to A = k with mu = 1.
    """
    ring = w.ring
    n = ring.n
    if not w.coeff_of((0,) * n).is_zero():
        raise ValueError("potential must vanish at the origin")
    partials = [w.partial_derivative(i) for i in range(n)]
    if all(p.is_zero() for p in partials):
        if n > 0:
            raise ValueError("not an isolated singularity")
        # sector with no coordinates: A = k, the residue is the identity
        gb = GroebnerBasis(ring, (), transform=(), originals=())
        return MilnorRing(ring, w, gb, ((),), 1, 0, ring.one())
    gb = buchberger(partials, track=True)
    basis = quotient_basis(gb)
    if basis is None:
        raise ValueError("not an isolated singularity")
    if not local_support_check(gb):
        raise ValueError("singular locus not local")
    mu = len(basis)
    nil = _nilpotency_exponent(ring, gb, mu)
    det = _cofactor_determinant(ring, gb, nil)
    return MilnorRing(ring, w, gb, tuple(basis), mu, nil, det)


def _nilpotency_exponent(ring: PolyRing, gb: GroebnerBasis, mu: int) -> int:
    # smallest uniform N with x_i^N in the ideal for every i; the maximal
    # ideal of an Artinian local ring of length mu satisfies m^mu = 0, so
    # the search below terminates by N = mu at the latest
    best = 0
    for i in range(ring.n):
        x = ring.var(i)
        p = x
        k = 1
        while not normal_form(p, gb).is_zero():
            p = p * x
            k += 1
            if k > mu + 1:
                raise AssertionError("nilpotency search ran past the length bound")
        best = max(best, k)
    return best


def _cofactor_determinant(ring: PolyRing, gb: GroebnerBasis, exponent: int) -> Polynomial:
    rows = []
    for i in range(ring.n):
        r, cof = normal_form_with_cofactors(ring.var(i) ** exponent, gb)
        if not r.is_zero():
            raise AssertionError("power of a variable failed to reduce to zero")
        rows.append(list(cof))
    return determinant(rows, ring.one())


def residue_trace(f: MilnorClass, *, exponent: int | None = None) -> Scalar:
    """The Grothendieck residue of f dx against (dw/dx_1, ..., dw/dx_n).

    ``exponent`` overrides the stored nilpotency exponent (the value is
    independent of the choice; the parameter exists so tests can witness
    that).
    """
    A = f.ring
    if exponent is None:
        return _trace_poly(A, f.value, A.nilpotency, A.residue_cofactor_det)
    det = _cofactor_determinant(A.ring, A.jacobian_gb, exponent)
    return _trace_poly(A, f.value, exponent, det)


def _trace_poly(A: MilnorRing, p: Polynomial, exponent: int, det: Polynomial) -> Scalar:
    n = A.ring.n
    target = tuple([exponent - 1] * n)
    return (p * det).coeff_of(target)


def hessian_class(A: MilnorRing) -> MilnorClass:
    """The class of det(d^2 w / dx_i dx_j); its trace is the Milnor number."""
    n = A.ring.n
    rows = [
        [A.w.partial_derivative(i).partial_derivative(j) for j in range(n)]
        for i in range(n)
    ]
    return A.project(determinant(rows, A.ring.one()))


def canonical_pairing(f: MilnorClass, g: MilnorClass) -> Scalar:
    """<f, g> = (-1)^(n choose 2) tr(f g), the form the index theorem uses."""
    _same_ring(f, g)
    A = f.ring
    n = A.ring.n
    value = _trace_poly(A, f.value * g.value, A.nilpotency, A.residue_cofactor_det)
    if (n * (n - 1) // 2) % 2:
        value = -value
    return value


def gram_matrix(A: MilnorRing) -> list[list[Scalar]]:
    """tr(b_a * b_b) over the standard monomial basis (no sign twist)."""
    mats = []
    for ma in A.basis:
        row = []
        pa = A.ring.monomial(ma)
        for mb in A.basis:
            row.append(
                _trace_poly(A, pa * A.ring.monomial(mb), A.nilpotency, A.residue_cofactor_det)
            )
        mats.append(row)
    return mats

"""Hom-complex cohomology and the categorical side of the Cardy identity.

Everything here is linear algebra over the polynomial ring itself: the
differential on Hom(E, F) is an R-linear matrix, its kernel is a module
Groebner basis, and each parity's cohomology is the finite-dimensional
subquotient kernel/image.  For an isolated singularity supported at the
origin this computes the same dimensions as the formal-local theory.

`cardy_lhs` evaluates the supertrace of f -> (-1)^(|a||b| + |a||f|) b f a
on that cohomology, the quantity the index pairing of tau classes must
reproduce.
"""
from __future__ import annotations

from dataclasses import dataclass

from .groebner import (
    ModuleGB,
    module_kernel,
    module_normal_form,
    module_lift,
    subquotient_presentation,
)
from .mfcore import (
    MatFac,
    MorphismCocycle,
    hom_basis_sizes,
    hom_differential,
    morphism_to_vector,
    vector_to_morphism,
)
from .poly import PolyRing
from .scalar import Scalar, zero as scalar_zero


@dataclass(frozen=True)
class ParityCohomology:
    """One parity's worth of cohomology of the Hom complex."""

    parity: int
    kernel: ModuleGB  # cocycles, a submodule of the flattened Hom space
    relations: ModuleGB  # presentation of kernel/image over the kernel gens
    standard: tuple  # (position, monomial) pairs indexing a k-basis

    @property
    def dimension(self) -> int:
        return len(self.standard)


@dataclass(frozen=True)
class CohomologyBasis:
    source: MatFac
    target: MatFac
    even: ParityCohomology
    odd: ParityCohomology

    def representative(self, parity: int, index: int) -> MorphismCocycle:
        """An explicit cocycle representing the index-th basis class."""
        co = self.even if parity == 0 else self.odd
        pos, mono = co.standard[index]
        ring = self.source.ring
        gen = co.kernel.generators[pos]
        vec = [ring.monomial(mono) * p for p in gen]
        return vector_to_morphism(self.source, self.target, parity, vec)

    def class_coordinates(self, f: MorphismCocycle) -> tuple[Scalar, ...]:
        """Coordinates of the class of a cocycle on the chosen basis."""
        co = self.even if f.parity == 0 else self.odd
        vec = morphism_to_vector(f)
        if len(co.kernel.generators) == 0:
            if any(not p.is_zero() for p in vec):
                raise ValueError("morphism is not a cocycle")
            return tuple()
        lift = module_lift(vec, co.kernel)
        if lift is None:
            raise ValueError("morphism is not a cocycle")
        reduced = module_normal_form(lift, co.relations)
        ring = self.source.ring
        coords = []
        for pos, mono in co.standard:
            coords.append(reduced[pos].coeff_of(mono))
        # everything in the reduced lift must be accounted for by the basis
        total = sum(len(p.terms) for p in reduced)
        if total != sum(1 for c in coords if not c.is_zero()):
            raise AssertionError("reduced coordinates leak outside the basis")
        return tuple(coords)


def hom_cohomology(E: MatFac, F: MatFac):
    """Dimensions (h0, h1) of Hom cohomology plus an explicit basis."""
    if E.w != F.w:
        raise ValueError("potential mismatch")
    ring = E.ring
    n0, n1 = hom_basis_sizes(E, F)
    d_even, d_odd = hom_differential(E, F)
    even = _parity_cohomology(ring, 0, d_even, n0, n1, d_odd, n1)
    odd = _parity_cohomology(ring, 1, d_odd, n1, n0, d_even, n0)
    basis = CohomologyBasis(E, F, even, odd)
    return even.dimension, odd.dimension, basis


def _parity_cohomology(
    ring: PolyRing,
    parity: int,
    d_out,  # matrix of d leaving this parity
    n_in: int,
    n_out: int,
    d_in,  # matrix of d arriving into this parity
    n_prev: int,
) -> ParityCohomology:
    kernel = module_kernel(d_out, n_in, n_out, ring)
    image = [tuple(d_in[r][c] for r in range(n_in)) for c in range(n_prev)]
    relations, standard = subquotient_presentation(kernel, image)
    return ParityCohomology(parity, kernel, relations, tuple(standard))


def euler(E: MatFac, F: MatFac) -> int:
    h0, h1, _ = hom_cohomology(E, F)
    return h0 - h1


def cardy_lhs(
    E: MatFac,
    F: MatFac,
    alpha: MorphismCocycle,
    beta: MorphismCocycle,
    *,
    intro_sign_variant: bool = False,
) -> Scalar:
    """str_k of m_(alpha,beta) : f -> (-1)^(|a||b| + |a||f|) beta f alpha.

    The supertrace runs over the cohomology of Hom(E, F).
    ``intro_sign_variant`` multiplies by an extra (-1)^|alpha| (an
    alternative sign convention); the default matches the index pairing.
    """
    if not alpha.is_closed() or not beta.is_closed():
        raise ValueError("morphism is not closed")
    _, _, basis = hom_cohomology(E, F)
    ctx = E.ring.context
    total = scalar_zero(ctx)
    flip = (alpha.parity + beta.parity) % 2
    for parity, co in ((0, basis.even), (1, basis.odd)):
        if co.dimension == 0:
            continue
        if flip:
            continue  # m maps this parity to the other one: zero diagonal
        for k in range(co.dimension):
            f = basis.representative(parity, k)
            g = beta.compose(f).compose(alpha)
            sign = 1
            if (alpha.parity * beta.parity + alpha.parity * parity) % 2:
                sign = -sign
            if parity:  # supertrace sign
                sign = -sign
            coords = basis.class_coordinates(g)
            c = coords[k]
            total = total + (c if sign > 0 else -c)
    if intro_sign_variant and alpha.parity % 2:
        total = -total
    return total

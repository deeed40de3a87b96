"""Finite diagonal symmetry: sectors, equivariant characters, orbifold sums.

A group element is a tuple of root-of-unity scalars (lambda_1..lambda_n)
acting by x_i -> lambda_i x_i.  Everything is enumerated: the closure of
the generators, the per-element action matrices on a factorization
(extended multiplicatively from the generators and checked against the
group relations), and the sector data

    w_g = w restricted to the fixed variables of g,

whose Milnor algebra receives the g-component of the equivariant Chern
character.  The equivariance convention used throughout:

    rho(g) . delta(g x) = delta(x) . rho(g)

checked for every element, which over a group is equivalent to the usual
one-sided conjugation form.  Sectors with no fixed variables degenerate to
the zero-variable Milnor algebra A = k; the supertrace of rho(g) itself is
the character there and the empty pairing sign is +1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .homology import hom_cohomology
from .mfcore import (
    EquivariantMF,
    MatFac,
    Matrix,
    MorphismCocycle,
    dual,
    identity_matrix,
    koszul_subsets,
    mat_mul,
    mat_transpose,
    stabilized_residue_field,
)
from .milnor import MilnorClass, MilnorRing, build_milnor, canonical_pairing
from .invariants import supertrace
from .poly import Polynomial, PolyRing
from .scalar import (
    CyclotomicContext,
    Scalar,
    one as scalar_one,
    rational,
    zero as scalar_zero,
)

Element = tuple  # tuple[Scalar, ...] of length n


class DiagonalGroup:
    """An enumerated finite group of diagonal scaling symmetries."""

    __slots__ = ("context", "n", "generators", "elements", "words", "_index")

    def __init__(self, context, n, generators, elements, words):
        self.context = context
        self.n = n
        self.generators = generators
        self.elements = elements  # identity first
        self.words = words  # per element, a tuple of generator indices
        self._index = {g: k for k, g in enumerate(elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Element:
        return self.elements[0]

    def index(self, g: Element) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise ValueError("element is not in the enumerated group") from None

    def inverse(self, g: Element) -> Element:
        inv = tuple(x.inverse() for x in g)
        self.index(inv)
        return inv

    def word(self, g: Element) -> tuple:
        return self.words[self.index(g)]


def close_group(n: int, generators, context=None, bound: int = 64) -> DiagonalGroup:
    """Enumerate the closure of diagonal generators by repeated products."""
    gens = [tuple(g) for g in generators]
    one = scalar_one(context)
    for g in gens:
        if len(g) != n:
            raise ValueError("generator length does not match the variable count")
        for lam in g:
            if context is None:
                if not (lam == 1 or lam == -1):
                    raise ValueError("entry %s is not a root of unity" % lam)
            elif not (lam ** context.order) == 1:
                raise ValueError("entry %s is not a root of unity" % lam)
    identity = tuple(one for _ in range(n))
    elements = [identity]
    words = [()]
    seen = {identity}
    frontier = [(identity, ())]
    while frontier:
        nxt = []
        for g, gw in frontier:
            for k, h in enumerate(gens):
                prod = tuple(a * b for a, b in zip(g, h))
                if prod not in seen:
                    seen.add(prod)
                    elements.append(prod)
                    words.append(gw + (k,))
                    nxt.append((prod, gw + (k,)))
                    if len(elements) > bound:
                        raise ValueError("group closure exceeds the bound %d" % bound)
        frontier = nxt
    return DiagonalGroup(context, n, tuple(gens), tuple(elements), tuple(words))


def substitute_action(p: Polynomial, g: Element) -> Polynomial:
    """p(g x): scale each variable by its eigenvalue."""
    ring = p.ring
    out = {}
    for m, c in p.terms.items():
        factor = c
        for i, e in enumerate(m):
            if e:
                factor = factor * g[i] ** e
        out[m] = out.get(m, ring.scalar(0)) + factor
    return ring.from_terms(out)


def check_invariance(w: Polynomial, G: DiagonalGroup) -> None:
    for g in G.elements:
        if substitute_action(w, g) != w:
            raise ValueError(
                "potential is not invariant under (%s)" % ", ".join(str(x) for x in g)
            )


@dataclass(frozen=True)
class Sector:
    """Fixed-locus data of one group element."""

    g: Element
    fixed_indices: tuple[int, ...]
    milnor: MilnorRing  # A_{w_g} over the fixed-variable ring

    @property
    def w_g(self) -> Polynomial:
        return self.milnor.w

    @property
    def n_fixed(self) -> int:
        return len(self.fixed_indices)


@dataclass(frozen=True)
class SectorClass:
    sector: Sector
    value: Polynomial
    parity: int

    def as_milnor(self) -> MilnorClass:
        return MilnorClass(self.sector.milnor, self.value, self.parity)

    def is_zero(self) -> bool:
        return self.value.is_zero()


def sector(w: Polynomial, g: Element) -> Sector:
    ring = w.ring
    fixed = tuple(i for i, lam in enumerate(g) if lam == 1)
    sub_ring = PolyRing(tuple(ring.names[i] for i in fixed), ring.context)
    images = []
    at = 0
    for i in range(ring.n):
        if i in fixed:
            images.append(sub_ring.var(at))
            at += 1
        else:
            images.append(sub_ring.zero())
    w_g = w.substitute(sub_ring, images)
    try:
        milnor = build_milnor(w_g)
    except ValueError as exc:
        raise AssertionError("sector potential is not isolated: %s" % exc) from exc
    return Sector(g, fixed, milnor)


def restrict_to_sector(p: Polynomial, sec: Sector) -> Polynomial:
    ring = p.ring
    sub_ring = sec.milnor.ring
    images = []
    at = 0
    for i in range(ring.n):
        if i in sec.fixed_indices:
            images.append(sub_ring.var(at))
            at += 1
        else:
            images.append(sub_ring.zero())
    return p.substitute(sub_ring, images)


# --- action matrices --------------------------------------------------------


def _smat_mul(A, B):
    rows = []
    for row in A:
        out = []
        for j in range(len(B[0])):
            acc = None
            for k, a in enumerate(row):
                term = a * B[k][j]
                acc = term if acc is None else acc + term
            out.append(acc)
        rows.append(tuple(out))
    return tuple(rows)


def _smat_identity(size: int, context):
    one = scalar_one(context)
    zero = scalar_zero(context)
    return tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size))


def equivariant_actions(E: EquivariantMF, G: DiagonalGroup) -> dict:
    """rho(g) for every element, extended from the generators.

    Raises when the extension is inconsistent (the action fails a group
    relation) or a generator count mismatches.
    """
    if len(E.action) != len(G.generators):
        raise ValueError("one action matrix per group generator is required")
    size = E.base.rank
    rho = {G.identity: _smat_identity(size, G.context)}
    for g in G.elements:
        if g in rho:
            continue
        word = G.word(g)
        M = rho[G.identity]
        for k in word:
            M = _smat_mul(M, E.action[k])
        rho[g] = M
    # multiplicativity across the full table catches relation violations
    for g in G.elements:
        for k, h in enumerate(G.generators):
            prod = tuple(a * b for a, b in zip(g, h))
            got = _smat_mul(rho[g], E.action[k])
            want = rho[prod]
            if got != want:
                raise ValueError("action does not respect the group relations")
    return rho


def scalar_to_poly_matrix(ring: PolyRing, M) -> Matrix:
    return tuple(tuple(ring.const(c) for c in row) for row in M)


def validate_equivariant(E: EquivariantMF, G: DiagonalGroup, actions=None) -> None:
    """Check rho(g) delta(g x) = delta(x) rho(g) for every element."""
    if actions is None:
        actions = equivariant_actions(E, G)
    ring = E.base.ring
    delta = E.base.full_delta()
    for g in G.elements:
        moved = tuple(tuple(substitute_action(p, g) for p in row) for row in delta)
        rho = scalar_to_poly_matrix(ring, actions[g])
        lhs = mat_mul(rho, moved, ring)
        rhs = mat_mul(delta, rho, ring)
        if lhs != rhs:
            raise ValueError(
                "factorization is not equivariant under (%s)"
                % ", ".join(str(x) for x in g)
            )


def twist(E: EquivariantMF, characters) -> EquivariantMF:
    """Tensor by the character sending generator k to characters[k]."""
    chars = list(characters)
    if len(chars) != len(E.action):
        raise ValueError("one character value per generator is required")
    action = tuple(
        tuple(tuple(c * chi for c in row) for row in rho)
        for rho, chi in zip(E.action, chars)
    )
    return EquivariantMF(E.base, action)


def equivariant_dual(E: EquivariantMF, G: DiagonalGroup) -> EquivariantMF:
    """The dual factorization with the transpose-inverse action."""
    actions = equivariant_actions(E, G)
    new_action = []
    for k, h in enumerate(G.generators):
        inv = G.inverse(h)
        new_action.append(tuple(map(tuple, mat_transpose(actions[inv]))))
    return EquivariantMF(dual(E.base), tuple(new_action))


# --- equivariant characters -------------------------------------------------


def _sector_character(
    base: MatFac,
    sec: Sector,
    rho_g,
    alpha: MorphismCocycle | None,
) -> SectorClass:
    ring = base.ring
    P = identity_matrix(ring, base.rank)
    for i in sorted(sec.fixed_indices, reverse=True):
        P = mat_mul(P, base.partial_delta(i), ring)
    M = mat_mul(P, scalar_to_poly_matrix(ring, rho_g), ring)
    extra = 0
    if alpha is not None:
        M = mat_mul(M, alpha.full_matrix(), ring)
        extra = alpha.parity
    s = restrict_to_sector(supertrace(M, base.r0), sec)
    cls = sec.milnor.project(s, parity=(sec.n_fixed + extra) % 2)
    return SectorClass(sec, cls.value, cls.parity)


def chern_equivariant(
    E: EquivariantMF, G: DiagonalGroup, g: Element, *, sec: Sector | None = None,
    actions=None,
) -> SectorClass:
    """The g-component of the equivariant Chern character, in A_{w_g}."""
    if actions is None:
        actions = equivariant_actions(E, G)
        validate_equivariant(E, G, actions)
    if sec is None:
        sec = sector(E.base.w, g)
    return _sector_character(E.base, sec, actions[g], None)


def tau_equivariant(
    E: EquivariantMF,
    G: DiagonalGroup,
    g: Element,
    alpha: MorphismCocycle,
    *,
    sec: Sector | None = None,
    actions=None,
) -> SectorClass:
    """Equivariant boundary-bulk map on an invariant closed endomorphism."""
    if actions is None:
        actions = equivariant_actions(E, G)
        validate_equivariant(E, G, actions)
    if not alpha.is_closed():
        raise ValueError("morphism is not closed")
    _check_invariant_morphism(E, E, alpha, G, actions, actions)
    if sec is None:
        sec = sector(E.base.w, g)
    return _sector_character(E.base, sec, actions[g], alpha)


def _check_invariant_morphism(E, F, f, G, actions_E, actions_F) -> None:
    M = f.full_matrix()
    for g in G.elements:
        if _morphism_action_full(E, F, f, g, actions_E, actions_F) != M:
            raise ValueError("morphism is not invariant under the group")


def _morphism_action_full(E, F, f, g, actions_E, actions_F):
    """Full matrix of g . f = rho_F(g) f(g x) rho_E(g)^(-1)."""
    ring = E.base.ring
    M = f.full_matrix()
    moved = tuple(tuple(substitute_action(p, g) for p in row) for row in M)
    ginv = tuple(x.inverse() for x in g)
    left = scalar_to_poly_matrix(ring, actions_F[g])
    right = scalar_to_poly_matrix(ring, actions_E[ginv])
    return mat_mul(left, mat_mul(moved, right, ring), ring)


def c_weight(g: Element, context=None) -> Scalar:
    """Product over moving directions of (1 - lambda_i)^(-1); 1 at identity."""
    total = scalar_one(context)
    for lam in g:
        if lam == 1:
            continue
        total = total * (scalar_one(context) - lam).inverse()
    return total


def chi_equivariant(E: EquivariantMF, F: EquivariantMF, G: DiagonalGroup) -> Scalar:
    """The orbifold index pairing; always a rational integer.

    |G|^(-1) sum_g c_g <ch(E)_(g^-1), ch(F)_g> paired in the g-sector.
    """
    if E.base.w != F.base.w:
        raise ValueError("potential mismatch")
    actions_E = equivariant_actions(E, G)
    actions_F = equivariant_actions(F, G)
    validate_equivariant(E, G, actions_E)
    validate_equivariant(F, G, actions_F)
    total = rational(0)
    for g in G.elements:
        sec = sector(E.base.w, g)
        ginv = G.inverse(g)
        a = _sector_character(E.base, sec, actions_E[ginv], None)
        b = _sector_character(F.base, sec, actions_F[g], None)
        pair = canonical_pairing(a.as_milnor(), b.as_milnor())
        total = total + c_weight(g, G.context) * pair
    total = total / rational(G.order)
    if not total.is_rational_integer():
        raise ValueError("equivariant index is not an integer: %s" % total)
    return total


def invariant_hom_dimensions(
    E: EquivariantMF, F: EquivariantMF, G: DiagonalGroup
) -> tuple[int, int]:
    """Dimensions of the G-invariant parts of the Hom cohomology.

    Computed through the averaging projector acting on class coordinates;
    idempotency and integrality of the trace are asserted.
    """
    actions_E = equivariant_actions(E, G)
    actions_F = equivariant_actions(F, G)
    validate_equivariant(E, G, actions_E)
    validate_equivariant(F, G, actions_F)
    h0, h1, basis = hom_cohomology(E.base, F.base)
    dims = []
    for parity, count in ((0, h0), (1, h1)):
        if count == 0:
            dims.append(0)
            continue
        reps = [basis.representative(parity, k) for k in range(count)]
        avg = None
        for g in G.elements:
            cols = []
            for f in reps:
                acted = _morphism_action_full(E, F, f, g, actions_E, actions_F)
                af = MorphismCocycle.from_full(E.base, F.base, parity, acted)
                cols.append(basis.class_coordinates(af))
            Mg = tuple(tuple(cols[c][r] for c in range(count)) for r in range(count))
            avg = Mg if avg is None else tuple(
                tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(avg, Mg)
            )
        inv_order = rational(1, G.order)
        P = tuple(tuple(c * inv_order for c in row) for row in avg)
        if _smat_mul(P, P) != P:
            raise AssertionError("averaging operator failed to be idempotent")
        trace = rational(0)
        for i in range(count):
            trace = trace + P[i][i]
        if not trace.is_rational_integer():
            raise AssertionError("projector trace is not an integer: %s" % trace)
        dims.append(int(trace.as_fraction()))
    return dims[0], dims[1]


# --- orbifold Hochschild dimensions ----------------------------------------


def orbifold_hh_dimensions(w: Polynomial, G: DiagonalGroup):
    """Per-sector invariant dimensions of A_{w_g} . dx_fixed, with totals.

    Returns (sectors, total_even, total_odd) where sectors is a list of
    (g, parity, dimension).  h acts on the sector algebra by substitution
    and on the form factor by the product of its fixed-direction
    eigenvalues.
    """
    check_invariance(w, G)
    out = []
    total = [0, 0]
    for g in G.elements:
        sec = sector(w, g)
        A = sec.milnor
        parity = sec.n_fixed % 2
        # each h acts diagonally on the monomial basis
        trace = rational(0)
        for h in G.elements:
            form = scalar_one(G.context)
            for i in sec.fixed_indices:
                form = form * h[i]
            for m in A.basis:
                weight = form
                for pos, e in enumerate(m):
                    if e:
                        weight = weight * h[sec.fixed_indices[pos]] ** e
                trace = trace + weight
        trace = trace / rational(G.order)
        if not trace.is_rational_integer():
            raise AssertionError("invariant dimension is not an integer")
        dim = int(trace.as_fraction())
        out.append((g, parity, dim))
        total[parity] += dim
    return out, total[0], total[1]


# --- equivariant stabilization ---------------------------------------------


def equivariant_stabilization(w: Polynomial, G: DiagonalGroup) -> EquivariantMF:
    """k^st with the subset-diagonal action (valid for any diagonal group)."""
    check_invariance(w, G)
    kst = stabilized_residue_field(w)
    evens, odds = koszul_subsets(w.ring.n)
    ordered = evens + odds
    action = []
    one = scalar_one(G.context)
    zero = scalar_zero(G.context)
    for h in G.generators:
        diag = []
        for s in ordered:
            lam = one
            for i in s:
                lam = lam * h[i]
            diag.append(lam)
        action.append(
            tuple(
                tuple(diag[i] if i == j else zero for j in range(len(ordered)))
                for i in range(len(ordered))
            )
        )
    return EquivariantMF(kst, tuple(action))


def moving_determinant(G: DiagonalGroup, g: Element) -> Scalar:
    """det(id - g) on the full variable space (used when nothing is fixed)."""
    total = scalar_one(G.context)
    for lam in g:
        total = total * (scalar_one(G.context) - lam)
    return total


# --- graded potentials as equivariant ones ----------------------------------


@dataclass(frozen=True)
class GradedStructure:
    """The cyclic grading symmetry of a quasi-homogeneous potential.

    The abstract group is Z/(2 ell).  Its generator scales x_i by
    zeta^(a_i) where zeta has order 2 ell; this diagonal action need not
    be faithful (distinct group elements can move the variables the same
    way while acting differently on factorizations through the extra
    half-period twist on odd summands), so the group is kept abstract
    rather than enumerated from its diagonal tuples.
    """

    ring: PolyRing
    w: Polynomial
    weights: tuple[int, ...]  # after the possible doubling
    ell: int  # half the (doubled) degree of w
    zeta: Scalar  # primitive root of order 2*ell
    doubled: bool

    @property
    def order(self) -> int:
        return 2 * self.ell

    def element(self, m: int) -> Element:
        """The diagonal tuple through which [m] scales the variables."""
        L = self.order
        return tuple(self.zeta ** ((m * a) % L) for a in self.weights)


def graded_to_equivariant(w: Polynomial, weights) -> GradedStructure:
    """Realize the grading of w as a cyclic symmetry of order 2*ell.

    Weights are doubled when the weighted degree of w is odd, so that the
    degree of w is always 2*ell and the generator acts by zeta_(2 ell)^(a_i).
    """
    weights = tuple(int(a) for a in weights)
    degw = w.quasi_degree(weights)
    if degw is None or degw <= 0:
        raise ValueError("potential is not quasi-homogeneous for these weights")
    doubled = degw % 2 == 1
    if doubled:
        weights = tuple(2 * a for a in weights)
        degw *= 2
    ell = degw // 2
    L = degw
    base_ring = w.ring
    if base_ring.context is None:
        ctx = CyclotomicContext(L)
        zeta = ctx.zeta()
        ring = PolyRing(base_ring.names, ctx)
        w2 = w.map_ring(ring)
    else:
        ctx = base_ring.context
        if ctx.order % L:
            raise ValueError(
                "session field of order %d has no root of order %d" % (ctx.order, L)
            )
        zeta = ctx.zeta(ctx.order // L)
        ring = base_ring
        w2 = w
    return GradedStructure(ring, w2, weights, ell, zeta, doubled)


def graded_exponents(S: GradedStructure, E: MatFac, degrees0, degrees1):
    """Diagonal character exponents of the grading generator on E.

    degrees0/degrees1 assign an integer degree to each even/odd basis
    element, measured against S.weights (the doubled scale when S.doubled
    is set; odd summands often need odd degrees there).  Every nonzero
    entry of delta must be quasi-homogeneous of degree
    ell + deg(source) - deg(target).  The generator then acts on the even
    part by zeta^deg and on the odd part by zeta^(deg + ell); the
    returned list gives those exponents in full-basis order.
    """
    if E.ring.names != S.ring.names:
        raise ValueError("factorization ring does not match the graded ring")
    degrees0, degrees1 = list(degrees0), list(degrees1)
    if len(degrees0) != E.r0 or len(degrees1) != E.r1:
        raise ValueError("one degree per basis element is required")
    for blk, src, tgt in ((E.d0, degrees0, degrees1), (E.d1, degrees1, degrees0)):
        for t, row in enumerate(blk):
            for s, entry in enumerate(row):
                if entry.is_zero():
                    continue
                qd = entry.quasi_degree(S.weights)
                if qd is None or qd != S.ell + src[s] - tgt[t]:
                    raise ValueError(
                        "basis degrees are incompatible with a homogeneous delta"
                    )
    L = S.order
    exps = [d % L for d in degrees0]
    exps += [(d + S.ell) % L for d in degrees1]
    return exps


def _graded_rho(S: GradedStructure, exps, m: int):
    zero = scalar_zero(S.ring.context)
    size = len(exps)
    diag = [S.zeta ** ((m * e) % S.order) for e in exps]
    return tuple(
        tuple(diag[i] if i == j else zero for j in range(size)) for i in range(size)
    )


def graded_chi(
    S: GradedStructure,
    E: MatFac,
    degE: tuple,
    F: MatFac,
    degF: tuple,
) -> Scalar:
    """Graded Euler characteristic through the orbifold index over Z/(2 ell)."""
    if E.w != S.w or F.w != S.w:
        raise ValueError("potential mismatch")
    exps_E = graded_exponents(S, E, *degE)
    exps_F = graded_exponents(S, F, *degF)
    for base, exps in ((E, exps_E), (F, exps_F)):
        delta = base.full_delta()
        moved = tuple(
            tuple(substitute_action(p, S.element(1)) for p in row) for row in delta
        )
        rho = scalar_to_poly_matrix(S.ring, _graded_rho(S, exps, 1))
        if mat_mul(rho, moved, S.ring) != mat_mul(delta, rho, S.ring):
            raise ValueError("graded action does not commute with delta")
    L = S.order
    total = rational(0)
    for m in range(L):
        g = S.element(m)
        sec = sector(S.w, g)
        a = _sector_character(E, sec, _graded_rho(S, exps_E, -m), None)
        b = _sector_character(F, sec, _graded_rho(S, exps_F, m), None)
        pair = canonical_pairing(a.as_milnor(), b.as_milnor())
        total = total + c_weight(g, S.ring.context) * pair
    total = total / rational(L)
    if not total.is_rational_integer():
        raise ValueError("graded index is not an integer: %s" % total)
    return total

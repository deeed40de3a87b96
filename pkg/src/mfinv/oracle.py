"""Independent verification paths built on the diagonal factorization.

The boundary-bulk values produced by the closed-form derivative product
can be recomputed from first principles: factor w(y) - w(x) through the
difference derivatives, solve the transgression system for the diagonal
kernel degree by degree, and restrict the top component back to y = x.
Nothing in this module calls the derivative-product formula; the two
routes stay disjoint so that their agreement is a real check.

The solver works in coordinates (x, u) with u_j = y_j - x_j, where the
contraction to invert is plain multiplication by the u_j.  Uniqueness
comes from the splitting of the Koszul complex along the submodule of
components that only involve u_k with k >= the smallest wedge index; the
solver's unknowns are restricted to that submodule, which makes each
degree a finite +-1 incidence system over the coefficient field.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .groebner import buchberger, normal_form
from .invariants import chern, supertrace
from .mfcore import (
    MatFac,
    Matrix,
    MorphismCocycle,
    identity_matrix,
    koszul,
    mat_add,
    mat_equal,
    mat_mul,
    mat_neg,
    mat_sub,
    zero_matrix,
)
from .milnor import MilnorClass, MilnorRing, build_milnor, gram_matrix
from .poly import (
    Polynomial,
    PolyRing,
    determinant,
    difference_derivative,
    doubled_ring,
)
from .scalar import one as scalar_one, zero as scalar_zero


@dataclass(frozen=True)
class DiagonalData:
    """The stabilized diagonal of w over the doubled ring."""

    ring: PolyRing
    doubled: PolyRing
    w: Polynomial
    w_tilde: Polynomial  # w(y) - w(x)
    differences: tuple[Polynomial, ...]  # difference derivatives of w
    factorization: MatFac  # Koszul factorization of w_tilde


def build_diagonal(w: Polynomial) -> DiagonalData:
    """Difference derivatives and the Koszul factorization of w(y) - w(x)."""
    ring = w.ring
    n = ring.n
    doubled = doubled_ring(ring)
    xs = [doubled.var(i) for i in range(n)]
    ys = [doubled.var(n + i) for i in range(n)]
    w_tilde = w.substitute(doubled, ys) - w.substitute(doubled, xs)
    diffs = tuple(difference_derivative(w, j, doubled) for j in range(n))
    telescoped = doubled.zero()
    for j in range(n):
        telescoped = telescoped + diffs[j] * (ys[j] - xs[j])
    if telescoped != w_tilde:
        raise AssertionError("difference derivatives fail the telescoping identity")
    fac = koszul(diffs, tuple(ys[j] - xs[j] for j in range(n)))
    return DiagonalData(ring, doubled, w, w_tilde, diffs, fac)


@dataclass(frozen=True)
class DTensor:
    """Solution of the transgression system against the subset basis.

    components maps each strictly increasing index subset to a full
    rank x rank matrix over the doubled ring; the empty subset holds the
    identity.
    """

    data: DiagonalData
    source: MatFac
    components: tuple[tuple[tuple[int, ...], Matrix], ...]

    def component(self, subset) -> Matrix:
        key = tuple(subset)
        for s, M in self.components:
            if s == key:
                return M
        raise KeyError("no component for subset %r" % (key,))

    def top(self) -> Matrix:
        return self.component(tuple(range(self.data.ring.n)))


# --- coordinate changes -----------------------------------------------------


def _u_ring(ring: PolyRing) -> PolyRing:
    return PolyRing(
        ring.names + tuple(nm + "_u" for nm in ring.names), ring.context
    )


def _to_u(p: Polynomial, doubled: PolyRing, uring: PolyRing, n: int) -> Polynomial:
    images = [uring.var(i) for i in range(n)]
    images += [uring.var(i) + uring.var(n + i) for i in range(n)]
    return p.substitute(uring, images)


def _from_u(p: Polynomial, uring: PolyRing, doubled: PolyRing, n: int) -> Polynomial:
    images = [doubled.var(i) for i in range(n)]
    images += [doubled.var(n + i) - doubled.var(i) for i in range(n)]
    return p.substitute(doubled, images)


def _restrict_to_x(p: Polynomial, doubled: PolyRing, ring: PolyRing) -> Polynomial:
    n = ring.n
    images = [ring.var(i) for i in range(n)] * 2
    return p.substitute(ring, images)


# --- the degree-by-degree solver --------------------------------------------


def _subset_insert(S: tuple, i: int):
    """(position, new subset) for inserting i into the sorted subset S."""
    pos = sum(1 for s in S if s < i)
    return pos, tuple(sorted(S + (i,)))


def _solve_contraction(eqs: dict, n: int, uring: PolyRing):
    """Solve delta_Delta(X) = rhs for X supported on the split complement.

    eqs maps (subset, monomial) to a Scalar coefficient of the right-hand
    side; monomials are over the (x, u) ring, with the u block at
    positions n..2n-1.  Unknowns are coefficients of (T, monomial') with
    every u index of monomial' at least min(T).  Returns a dict with the
    same key shape for the solution.
    """
    eq_keys = {k for k, v in eqs.items() if v != 0}
    for (S, m), v in eqs.items():
        if v != 0 and all(m[n + i] == 0 for i in range(n)):
            raise AssertionError(
                "right-hand side has a u-free term; not in the contraction image"
            )
    unknowns: set = set()
    frontier = set(eq_keys)
    all_eqs = set(eq_keys)
    while frontier:
        new_unknowns = set()
        for S, m in frontier:
            for i in range(n):
                if m[n + i] == 0 or i in S:
                    continue
                pos, T = _subset_insert(S, i)
                m2 = tuple(
                    e - 1 if k == n + i else e for k, e in enumerate(m)
                )
                if any(m2[n + k] > 0 and k < T[0] for k in range(n)):
                    continue
                if (T, m2) not in unknowns:
                    new_unknowns.add((T, m2))
        unknowns |= new_unknowns
        frontier = set()
        for T, m2 in new_unknowns:
            for idx, i in enumerate(T):
                m3 = tuple(
                    e + 1 if k == n + i else e for k, e in enumerate(m2)
                )
                key = (tuple(s for s in T if s != i), m3)
                if key not in all_eqs:
                    all_eqs.add(key)
                    frontier.add(key)
    if not unknowns:
        if eq_keys:
            raise AssertionError("contraction system has no admissible unknowns")
        return {}
    rows = sorted(all_eqs)
    cols = sorted(unknowns)
    col_index = {c: k for k, c in enumerate(cols)}
    ctx = uring.context
    zero = scalar_zero(ctx)
    one = scalar_one(ctx)
    matrix = [[zero for _ in cols] for _ in rows]
    vector = [eqs.get(r, zero) for r in rows]
    for r, (S, m) in enumerate(rows):
        for i in range(n):
            if m[n + i] == 0 or i in S:
                continue
            pos, T = _subset_insert(S, i)
            m2 = tuple(e - 1 if k == n + i else e for k, e in enumerate(m))
            c = col_index.get((T, m2))
            if c is None:
                continue
            matrix[r][c] = one if pos % 2 == 0 else -one
    solution = _gauss_solve(matrix, vector, zero)
    out: dict = {}
    for (T, m2), k in col_index.items():
        if solution[k] != 0:
            out[(T, m2)] = solution[k]
    return out


def _gauss_solve(matrix, vector, zero):
    """Exact elimination; the systems here have unique solutions."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for rr in range(r, rows):
            if matrix[rr][c] != 0:
                pivot = rr
                break
        if pivot is None:
            raise AssertionError("contraction system is singular on a column")
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        vector[r], vector[pivot] = vector[pivot], vector[r]
        inv = matrix[r][c].inverse()
        matrix[r] = [a * inv for a in matrix[r]]
        vector[r] = vector[r] * inv
        for rr in range(rows):
            if rr != r and matrix[rr][c] != 0:
                f = matrix[rr][c]
                matrix[rr] = [a - f * b for a, b in zip(matrix[rr], matrix[r])]
                vector[rr] = vector[rr] - f * vector[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for rr in range(r, rows):
        if vector[rr] != 0:
            raise AssertionError("contraction system is inconsistent")
    solution = [zero] * cols
    for k, c in enumerate(pivots):
        solution[c] = vector[k]
    return solution


def solve_D(E: MatFac, data: DiagonalData | None = None) -> DTensor:
    """The unique normalized solution of the transgression system for E."""
    if data is None:
        data = build_diagonal(E.w)
    elif data.w != E.w:
        raise ValueError("diagonal data belongs to a different potential")
    ring = data.ring
    n = ring.n
    rank = E.rank
    uring = _u_ring(ring)
    x_images = [uring.var(i) for i in range(n)]
    y_images = [uring.var(i) + uring.var(n + i) for i in range(n)]
    delta = E.full_delta()
    delta_x = tuple(
        tuple(p.substitute(uring, x_images) for p in row) for row in delta
    )
    delta_y = tuple(
        tuple(p.substitute(uring, y_images) for p in row) for row in delta
    )
    diffs_u = tuple(
        _to_u(d, data.doubled, uring, n) for d in data.differences
    )

    def delta_tilde(M: Matrix, parity: int) -> Matrix:
        left = mat_mul(delta_x, M, uring)
        right = mat_mul(M, delta_y, uring)
        return mat_sub(left, right) if parity == 0 else mat_add(left, right)

    components: dict = {(): identity_matrix(uring, rank)}
    for j in range(n):
        rhs: dict = {}
        for S in combinations(range(n), j):
            acc = zero_matrix(uring, rank, rank)
            if j >= 1:
                for idx, i in enumerate(S):
                    rest = tuple(s for s in S if s != i)
                    term = tuple(
                        tuple(diffs_u[i] * p for p in row)
                        for row in components[rest]
                    )
                    acc = mat_add(acc, term if idx % 2 == 0 else mat_neg(term))
            dt = delta_tilde(components[S], j % 2)
            acc = mat_add(acc, dt if j % 2 == 0 else mat_neg(dt))
            rhs[S] = mat_neg(acc)
        for r in range(rank):
            for s in range(rank):
                eqs: dict = {}
                for S, M in rhs.items():
                    for mono, c in M[r][s].terms.items():
                        eqs[(S, mono)] = c
                sol = _solve_contraction(eqs, n, uring)
                for (T, mono), c in sol.items():
                    if T not in components:
                        components[T] = [
                            [dict() for _ in range(rank)] for _ in range(rank)
                        ]
                    components[T][r][s][mono] = c
        for T in list(components):
            if len(T) == j + 1 and not isinstance(components[T], tuple):
                grid = components[T]
                components[T] = tuple(
                    tuple(uring.from_terms(grid[a][b]) for b in range(rank))
                    for a in range(rank)
                )
        for T in combinations(range(n), j + 1):
            if T not in components:
                components[T] = zero_matrix(uring, rank, rank)
    _assert_system(components, diffs_u, delta_tilde, n, rank, uring)
    packed = []
    for size in range(n + 1):
        for S in combinations(range(n), size):
            M = components[S]
            doubled_M = tuple(
                tuple(_from_u(p, uring, data.doubled, n) for p in row)
                for row in M
            )
            packed.append((S, doubled_M))
    return DTensor(data, E, tuple(packed))


def _assert_system(components, diffs_u, delta_tilde, n, rank, uring):
    """Residual of every level of the transgression system must vanish."""
    us = [uring.var(n + i) for i in range(n)]
    for j in range(n + 1):
        for S in combinations(range(n), j):
            acc = zero_matrix(uring, rank, rank)
            # contraction applied to the level above
            for i in range(n):
                if i in S:
                    continue
                pos, T = _subset_insert(S, i)
                term = tuple(
                    tuple(us[i] * p for p in row) for row in components[T]
                ) if T in components else None
                if term is not None:
                    acc = mat_add(acc, term if pos % 2 == 0 else mat_neg(term))
            # wedge applied to the level below
            for idx, i in enumerate(S):
                rest = tuple(s for s in S if s != i)
                term = tuple(
                    tuple(diffs_u[i] * p for p in row)
                    for row in components[rest]
                )
                acc = mat_add(acc, term if idx % 2 == 0 else mat_neg(term))
            dt = delta_tilde(components[S], j % 2)
            acc = mat_add(acc, dt if j % 2 == 0 else mat_neg(dt))
            for row in acc:
                for p in row:
                    if not p.is_zero():
                        raise AssertionError(
                            "transgression system residual is nonzero at level %d"
                            % j
                        )


def restriction_recursion_check(D: DTensor) -> bool:
    """The nested-subset components restrict to derivative factors in turn."""
    data = D.data
    ring = data.ring
    doubled = data.doubled
    n = ring.n
    E = D.source
    for j in range(1, n + 1):
        S = tuple(range(n - j, n))
        prev = tuple(range(n - j + 1, n))
        pivot = n - j
        images = [doubled.var(i) for i in range(2 * n)]
        images[n + pivot] = doubled.var(pivot)
        lhs = tuple(
            tuple(p.substitute(doubled, images) for p in row)
            for row in D.component(S)
        )
        mixed = [doubled.var(i) for i in range(n)]
        for k in range(pivot + 1, n):
            mixed[k] = doubled.var(n + k)
        part = tuple(
            tuple(p.substitute(doubled, mixed) for p in row)
            for row in E.partial_delta(pivot)
        )
        rhs = mat_mul(D.component(prev), part, doubled)
        if not mat_equal(lhs, rhs):
            return False
    return True


def oracle_tau(
    E: MatFac,
    alpha: MorphismCocycle,
    A: MilnorRing,
    *,
    dtensor: DTensor | None = None,
) -> MilnorClass:
    """Boundary-bulk value recovered from the solved diagonal kernel."""
    if alpha.source.d0 != E.d0 or alpha.source.d1 != E.d1:
        raise ValueError("morphism is not an endomorphism of E")
    if alpha.target.d0 != E.d0 or alpha.target.d1 != E.d1:
        raise ValueError("morphism is not an endomorphism of E")
    if not alpha.is_closed():
        raise ValueError("morphism is not closed")
    if A.w != E.w:
        raise ValueError("potential mismatch")
    if dtensor is None:
        dtensor = solve_D(E)
    ring = dtensor.data.ring
    top = tuple(
        tuple(_restrict_to_x(p, dtensor.data.doubled, ring) for p in row)
        for row in dtensor.top()
    )
    M = mat_mul(top, alpha.full_matrix(), ring)
    parity = (ring.n + alpha.parity) % 2
    return A.project(supertrace(M, E.r0), parity=parity)


@dataclass(frozen=True)
class DiagonalChern:
    """Both evaluations of the diagonal's character, with their verdict."""

    direct: MilnorClass
    determinant: MilnorClass
    agree: bool


def chern_of_diagonal(w: Polynomial) -> DiagonalChern:
    """The character of the diagonal, by the 2n-variable formula and by
    the signed difference-Jacobian determinant, reduced in the doubled
    Milnor ring."""
    data = build_diagonal(w)
    ring = w.ring
    n = ring.n
    A_tilde = build_milnor(data.w_tilde)
    direct = chern(data.factorization, A_tilde)
    rows = [
        [
            difference_derivative(w.partial_derivative(i), j, data.doubled)
            for j in range(n)
        ]
        for i in range(n)
    ]
    det = determinant(rows, data.doubled.one())
    if (n * (n - 1) // 2) % 2:
        det = -det
    det_class = A_tilde.project(det, parity=0)
    return DiagonalChern(direct, det_class, direct == det_class)


def inverse_form_check(w: Polynomial) -> bool:
    """The reduced difference-Jacobian determinant inverts the trace form.

    Expands det(Delta_j(partial_i w)) over products of standard monomials
    in x and y and multiplies the coefficient matrix against the Gram
    matrix of the residue pairing; anything but the identity raises.
    """
    A = build_milnor(w)
    data = build_diagonal(w)
    ring = w.ring
    doubled = data.doubled
    n = ring.n
    rows = [
        [
            difference_derivative(w.partial_derivative(i), j, doubled)
            for j in range(n)
        ]
        for i in range(n)
    ]
    det = determinant(rows, doubled.one())
    xs = [doubled.var(i) for i in range(n)]
    ys = [doubled.var(n + i) for i in range(n)]
    partials = [w.partial_derivative(i) for i in range(n)]
    gens = [p.substitute(doubled, xs) for p in partials]
    gens += [p.substitute(doubled, ys) for p in partials]
    gb = buchberger(gens)
    reduced = normal_form(det, gb)
    mu = A.mu
    zero = scalar_zero(ring.context)
    coeffs = [[zero for _ in range(mu)] for _ in range(mu)]
    index = {m: k for k, m in enumerate(A.basis)}
    for mono, c in reduced.terms.items():
        mx = mono[:n]
        my = mono[n:]
        a = index.get(mx)
        b = index.get(my)
        if a is None or b is None:
            raise AssertionError(
                "reduced determinant leaves the standard basis product"
            )
        coeffs[a][b] = coeffs[a][b] + c
    G = gram_matrix(A)
    for i in range(mu):
        for j in range(mu):
            acc = zero
            for k in range(mu):
                acc = acc + coeffs[i][k] * G[k][j]
            expected = 1 if i == j else 0
            if acc != expected:
                raise AssertionError(
                    "coefficient matrix does not invert the Gram matrix"
                )
    return True

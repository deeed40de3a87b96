"""Matrix factorizations of a potential and the morphism calculus on them.

A factorization is a pair of polynomial matrix blocks d0 : E0 -> E1 and
d1 : E1 -> E0 with d1 d0 = d0 d1 = w * id.  The full odd differential is

    delta = [[0, d1], [d0, 0]]

acting on E0 + E1, and that basis order (even summand first) is used for
every "full matrix" in this package.  Koszul factorizations live on the
exterior algebra of k^m with basis indexed by subsets of {0..m-1}, sorted
by (size, lexicographic); wedge and contraction carry the sign
(-1)^(number of elements below the touched index).

Morphisms are stored as their two nonzero parity blocks.  The differential
on morphisms is d(f) = delta_F f - (-1)^|f| f delta_E, and closed odd
endomorphisms of the stabilized residue field generate a Clifford algebra,
built here from the same greedy monomial decomposition that builds k^st.
"""
from __future__ import annotations

from dataclasses import dataclass

from .poly import Polynomial, PolyRing

Matrix = tuple  # tuple[tuple[Polynomial, ...], ...], row major


def as_matrix(rows) -> Matrix:
    return tuple(tuple(row) for row in rows)


def zero_matrix(ring: PolyRing, r: int, c: int) -> Matrix:
    z = ring.zero()
    return tuple(tuple(z for _ in range(c)) for _ in range(r))


def identity_matrix(ring: PolyRing, n: int) -> Matrix:
    z, o = ring.zero(), ring.one()
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def mat_mul(A: Matrix, B: Matrix, ring: PolyRing) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise ValueError("matrix shapes do not compose")
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = ring.zero()
            for k, a in enumerate(row):
                if a.is_zero():
                    continue
                b = B[k][j]
                if not b.is_zero():
                    acc = acc + a * b
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_neg(A: Matrix) -> Matrix:
    return tuple(tuple(-a for a in row) for row in A)


def mat_scale(A: Matrix, c) -> Matrix:
    return tuple(tuple(a * c for a in row) for row in A)


def mat_transpose(A: Matrix) -> Matrix:
    if not A:
        return ()
    return tuple(tuple(A[i][j] for i in range(len(A))) for j in range(len(A[0])))


def mat_map(A: Matrix, fn) -> Matrix:
    return tuple(tuple(fn(a) for a in row) for row in A)


def mat_equal(A: Matrix, B: Matrix) -> bool:
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(a == b for a, b in zip(ra, rb))
        for ra, rb in zip(A, B)
    )


def block_diag(ring: PolyRing, A: Matrix, B: Matrix, ra: int, ca: int, rb: int, cb: int) -> Matrix:
    out = []
    for i in range(ra):
        out.append(tuple(A[i]) + tuple(ring.zero() for _ in range(cb)))
    for i in range(rb):
        out.append(tuple(ring.zero() for _ in range(ca)) + tuple(B[i]))
    return tuple(out)


@dataclass(frozen=True)
class MatFac:
    """A matrix factorization (E, delta) of the potential w."""

    ring: PolyRing
    w: Polynomial
    d0: Matrix  # r1 x r0, the even-to-odd block
    d1: Matrix  # r0 x r1

    def __post_init__(self):
        r1, r0 = len(self.d0), len(self.d1)
        if any(len(row) != r0 for row in self.d0):
            raise ValueError("d0 rows have inconsistent length")
        if any(len(row) != r1 for row in self.d1):
            raise ValueError("d1 rows have inconsistent length")

    @property
    def r0(self) -> int:
        return len(self.d1)

    @property
    def r1(self) -> int:
        return len(self.d0)

    @property
    def rank(self) -> int:
        return self.r0 + self.r1

    def parity_of(self, index: int) -> int:
        return 0 if index < self.r0 else 1

    def full_delta(self) -> Matrix:
        """The odd differential as a square matrix on E0 + E1."""
        z0 = zero_matrix(self.ring, self.r0, self.r0)
        z1 = zero_matrix(self.ring, self.r1, self.r1)
        top = tuple(z0[i] + self.d1[i] for i in range(self.r0))
        bot = tuple(self.d0[i] + z1[i] for i in range(self.r1))
        return top + bot

    def partial_delta(self, i: int) -> Matrix:
        return mat_map(self.full_delta(), lambda p: p.partial_derivative(i))

    def validate(self) -> None:
        """Check both factorization identities exactly."""
        for name, prod, rank in (
            ("d1*d0", mat_mul(self.d1, self.d0, self.ring), self.r0),
            ("d0*d1", mat_mul(self.d0, self.d1, self.ring), self.r1),
        ):
            for i in range(rank):
                for j in range(rank):
                    want = self.w if i == j else self.ring.zero()
                    if prod[i][j] != want:
                        raise ValueError(
                            "not a factorization: %s entry (%d, %d) is %s"
                            % (name, i, j, prod[i][j])
                        )


def validate(E: MatFac) -> None:
    E.validate()


# --- Koszul factorizations --------------------------------------------------


def koszul_subsets(m: int) -> tuple[list, list]:
    """Subsets of {0..m-1} split by parity, each sorted by (size, lex)."""
    subsets = [()]
    for j in range(m):
        subsets += [s + (j,) for s in subsets]
    subsets.sort(key=lambda s: (len(s), s))
    evens = [s for s in subsets if len(s) % 2 == 0]
    odds = [s for s in subsets if len(s) % 2 == 1]
    return evens, odds


def koszul_operator(
    ring: PolyRing, m: int, wedge: list, contract: list
) -> Matrix:
    """Full matrix of sum_j wedge[j] e_j^ + sum_j contract[j] i(e_j*).

    Acts on the subset basis in MatFac order (even subsets first); both
    coefficient lists have length m.
    """
    evens, odds = koszul_subsets(m)
    ordered = evens + odds
    pos = {s: i for i, s in enumerate(ordered)}
    size = len(ordered)
    rows = [[ring.zero() for _ in range(size)] for _ in range(size)]
    for s in ordered:
        col = pos[s]
        for j in range(m):
            below = sum(1 for i in s if i < j)
            sign = -1 if below % 2 else 1
            if j not in s and not wedge[j].is_zero():
                t = tuple(sorted(s + (j,)))
                entry = wedge[j] if sign > 0 else -wedge[j]
                rows[pos[t]][col] = rows[pos[t]][col] + entry
            if j in s and not contract[j].is_zero():
                t = tuple(i for i in s if i != j)
                entry = contract[j] if sign > 0 else -contract[j]
                rows[pos[t]][col] = rows[pos[t]][col] + entry
    return as_matrix(rows)


def koszul(a, b) -> MatFac:
    """The Koszul factorization {a, b} of sum_j a_j b_j on Lambda(k^m)."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise ValueError("coefficient sequences differ in length")
    if not a:
        raise ValueError("empty Koszul data")
    ring = a[0].ring
    m = len(a)
    w = ring.zero()
    for x, y in zip(a, b):
        w = w + x * y
    T = koszul_operator(ring, m, a, b)
    r0 = 2 ** (m - 1)
    d0 = tuple(row[:r0] for row in T[r0:])
    d1 = tuple(row[r0:] for row in T[:r0])
    E = MatFac(ring, w, d0, d1)
    E.validate()
    return E


# --- the basic operations ---------------------------------------------------


def tensor(E: MatFac, F: MatFac) -> MatFac:
    """E (x) F over w_E + w_F, with the grading sign on the second factor."""
    if E.ring.names != F.ring.names:
        raise ValueError("ring mismatch")
    ring = E.ring
    NE, NF = E.rank, F.rank
    pairs = [(i, j) for i in range(NE) for j in range(NF)]
    evens = [p for p in pairs if (E.parity_of(p[0]) + F.parity_of(p[1])) % 2 == 0]
    odds = [p for p in pairs if (E.parity_of(p[0]) + F.parity_of(p[1])) % 2 == 1]
    ordered = evens + odds
    pos = {p: i for i, p in enumerate(ordered)}
    dE, dF = E.full_delta(), F.full_delta()
    size = NE * NF
    rows = [[ring.zero() for _ in range(size)] for _ in range(size)]
    for (i, j) in ordered:
        col = pos[(i, j)]
        for i2 in range(NE):
            p = dE[i2][i]
            if not p.is_zero():
                rows[pos[(i2, j)]][col] = rows[pos[(i2, j)]][col] + p
        sign = -1 if E.parity_of(i) else 1
        for j2 in range(NF):
            p = dF[j2][j]
            if not p.is_zero():
                q = p if sign > 0 else -p
                rows[pos[(i, j2)]][col] = rows[pos[(i, j2)]][col] + q
    r0 = len(evens)
    d0 = tuple(tuple(rows[i][:r0]) for i in range(r0, size))
    d1 = tuple(tuple(rows[i][r0:]) for i in range(r0))
    out = MatFac(ring, E.w + F.w, d0, d1)
    out.validate()
    return out


def dual(E: MatFac) -> MatFac:
    """The dual factorization, of potential -w."""
    out = MatFac(E.ring, -E.w, mat_transpose(E.d1), mat_neg(mat_transpose(E.d0)))
    out.validate()
    return out


def shift(E: MatFac) -> MatFac:
    """Parity shift: swap the summands and negate the differential."""
    return MatFac(E.ring, E.w, mat_neg(E.d1), mat_neg(E.d0))


def direct_sum(E: MatFac, F: MatFac) -> MatFac:
    if E.w != F.w:
        raise ValueError("potential mismatch")
    ring = E.ring
    d0 = block_diag(ring, E.d0, F.d0, E.r1, E.r0, F.r1, F.r0)
    d1 = block_diag(ring, E.d1, F.d1, E.r0, E.r1, F.r0, F.r1)
    return MatFac(ring, E.w, d0, d1)


# --- morphisms --------------------------------------------------------------


@dataclass(frozen=True)
class MorphismCocycle:
    """A parity-homogeneous map E -> F, stored as its two nonzero blocks.

    Even maps carry (b00 : F0 <- E0, b11 : F1 <- E1); odd maps carry
    (b10 : F1 <- E0, b01 : F0 <- E1).  Nothing here asserts closedness;
    is_closed() checks it.
    """

    source: MatFac
    target: MatFac
    parity: int
    blocks: tuple  # (b00, b11) or (b10, b01)

    def __post_init__(self):
        first, second = self.blocks
        if self.parity == 0:
            shapes = ((self.target.r0, self.source.r0), (self.target.r1, self.source.r1))
        else:
            shapes = ((self.target.r1, self.source.r0), (self.target.r0, self.source.r1))
        for blk, (r, c) in zip((first, second), shapes):
            if len(blk) != r or any(len(row) != c for row in blk):
                raise ValueError("morphism block has the wrong shape")

    def full_matrix(self) -> Matrix:
        ring = self.source.ring
        sr0, sr1 = self.source.r0, self.source.r1
        tr0, tr1 = self.target.r0, self.target.r1
        if self.parity == 0:
            b00, b11 = self.blocks
            top = tuple(tuple(b00[i]) + tuple(zero_matrix(ring, tr0, sr1)[i]) for i in range(tr0))
            bot = tuple(tuple(zero_matrix(ring, tr1, sr0)[i]) + tuple(b11[i]) for i in range(tr1))
        else:
            b10, b01 = self.blocks
            top = tuple(tuple(zero_matrix(ring, tr0, sr0)[i]) + tuple(b01[i]) for i in range(tr0))
            bot = tuple(tuple(b10[i]) + tuple(zero_matrix(ring, tr1, sr1)[i]) for i in range(tr1))
        return top + bot

    @staticmethod
    def from_full(source: MatFac, target: MatFac, parity: int, M: Matrix) -> "MorphismCocycle":
        """Extract the parity blocks; the complementary blocks must vanish."""
        tr0 = target.r0
        sr0 = source.r0
        top = [row[:sr0] for row in M[:tr0]]
        topright = [row[sr0:] for row in M[:tr0]]
        bot = [row[:sr0] for row in M[tr0:]]
        botright = [row[sr0:] for row in M[tr0:]]
        if parity == 0:
            off = [topright, bot]
            blocks = (as_matrix(top), as_matrix(botright))
        else:
            off = [top, botright]
            blocks = (as_matrix(bot), as_matrix(topright))
        for blk in off:
            if any(not e.is_zero() for row in blk for e in row):
                raise ValueError("matrix is not parity-homogeneous of parity %d" % parity)
        return MorphismCocycle(source, target, parity, blocks)

    def compose(self, other: "MorphismCocycle") -> "MorphismCocycle":
        """self after other (the source of self is the target of other)."""
        if self.source is not other.target and self.source.d0 != other.target.d0:
            raise ValueError("composition endpoints do not match")
        M = mat_mul(self.full_matrix(), other.full_matrix(), self.source.ring)
        return MorphismCocycle.from_full(
            other.source, self.target, (self.parity + other.parity) % 2, M
        )

    def differential(self) -> "MorphismCocycle":
        """d(f) = delta_F f - (-1)^|f| f delta_E."""
        ring = self.source.ring
        M = self.full_matrix()
        left = mat_mul(self.target.full_delta(), M, ring)
        right = mat_mul(M, self.source.full_delta(), ring)
        D = mat_add(left, right) if self.parity else mat_sub(left, right)
        return MorphismCocycle.from_full(self.source, self.target, 1 - self.parity, D)

    def is_closed(self) -> bool:
        d = self.differential()
        return all(e.is_zero() for blk in d.blocks for row in blk for e in row)

    def __add__(self, other: "MorphismCocycle") -> "MorphismCocycle":
        if self.parity != other.parity:
            raise ValueError("cannot add maps of different parity")
        return MorphismCocycle(
            self.source,
            self.target,
            self.parity,
            (mat_add(self.blocks[0], other.blocks[0]), mat_add(self.blocks[1], other.blocks[1])),
        )

    def __sub__(self, other: "MorphismCocycle") -> "MorphismCocycle":
        return self + (-other)

    def __neg__(self) -> "MorphismCocycle":
        return MorphismCocycle(
            self.source, self.target, self.parity,
            (mat_neg(self.blocks[0]), mat_neg(self.blocks[1])),
        )

    def scale(self, c) -> "MorphismCocycle":
        return MorphismCocycle(
            self.source, self.target, self.parity,
            (mat_scale(self.blocks[0], c), mat_scale(self.blocks[1], c)),
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for blk in self.blocks for row in blk for e in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MorphismCocycle):
            return NotImplemented
        return (
            self.parity == other.parity
            and mat_equal(self.blocks[0], other.blocks[0])
            and mat_equal(self.blocks[1], other.blocks[1])
        )

    __hash__ = None  # type: ignore[assignment]


def identity_morphism(E: MatFac) -> MorphismCocycle:
    return MorphismCocycle(
        E, E, 0, (identity_matrix(E.ring, E.r0), identity_matrix(E.ring, E.r1))
    )


def zero_morphism(E: MatFac, F: MatFac, parity: int) -> MorphismCocycle:
    ring = E.ring
    if parity == 0:
        blocks = (zero_matrix(ring, F.r0, E.r0), zero_matrix(ring, F.r1, E.r1))
    else:
        blocks = (zero_matrix(ring, F.r1, E.r0), zero_matrix(ring, F.r0, E.r1))
    return MorphismCocycle(E, F, parity, blocks)


# --- the Hom complex as flat matrices ---------------------------------------


def hom_basis_sizes(E: MatFac, F: MatFac) -> tuple[int, int]:
    n0 = F.r0 * E.r0 + F.r1 * E.r1
    n1 = F.r1 * E.r0 + F.r0 * E.r1
    return n0, n1


def morphism_to_vector(f: MorphismCocycle) -> tuple:
    """Row-major flattening, first block then second."""
    return tuple(e for blk in f.blocks for row in blk for e in row)


def vector_to_morphism(E: MatFac, F: MatFac, parity: int, vec) -> MorphismCocycle:
    if parity == 0:
        shapes = ((F.r0, E.r0), (F.r1, E.r1))
    else:
        shapes = ((F.r1, E.r0), (F.r0, E.r1))
    vec = list(vec)
    blocks = []
    at = 0
    for r, c in shapes:
        blk = tuple(tuple(vec[at + i * c : at + (i + 1) * c]) for i in range(r))
        blocks.append(blk)
        at += r * c
    return MorphismCocycle(E, F, parity, tuple(blocks))


def hom_differential(E: MatFac, F: MatFac) -> tuple[Matrix, Matrix]:
    """Matrices of d on flattened Hom^0 and Hom^1.

    Returns (d_even : Hom^0 -> Hom^1, d_odd : Hom^1 -> Hom^0) over the
    polynomial ring; both compositions vanish when E and F share w.
    """
    if E.w != F.w:
        raise ValueError("potential mismatch")
    n0, n1 = hom_basis_sizes(E, F)
    cols_even = []
    for k in range(n0):
        unit = [E.ring.zero()] * n0
        unit[k] = E.ring.one()
        f = vector_to_morphism(E, F, 0, unit)
        cols_even.append(morphism_to_vector(f.differential()))
    cols_odd = []
    for k in range(n1):
        unit = [E.ring.zero()] * n1
        unit[k] = E.ring.one()
        f = vector_to_morphism(E, F, 1, unit)
        cols_odd.append(morphism_to_vector(f.differential()))
    d_even = tuple(tuple(cols_even[c][r] for c in range(n0)) for r in range(n1))
    d_odd = tuple(tuple(cols_odd[c][r] for c in range(n1)) for r in range(n0))
    return d_even, d_odd


# --- stabilization of the residue field -------------------------------------


def greedy_decomposition(w: Polynomial) -> list:
    """Write w = sum_i x_i w_i, dividing each monomial by its lowest variable.

    Requires w(0) = 0; deterministic, and any other valid decomposition can
    be passed to the constructors below instead.
    """
    ring = w.ring
    parts = [dict() for _ in range(ring.n)]
    for m, c in w.terms.items():
        i = next((k for k, e in enumerate(m) if e > 0), None)
        if i is None:
            raise ValueError("potential has a nonzero constant term")
        reduced = list(m)
        reduced[i] -= 1
        key = tuple(reduced)
        parts[i][key] = parts[i].get(key, ring.scalar(0)) + c
    return [ring.from_terms(p) for p in parts]


def stabilized_residue_field(w: Polynomial, decomposition=None) -> MatFac:
    """k^st = {(w_1..w_n); (x_1..x_n)}, the stabilization of the residue field."""
    ring = w.ring
    if decomposition is None:
        ws = greedy_decomposition(w)
    else:
        ws = list(decomposition)
        total = ring.zero()
        for i, wi in enumerate(ws):
            total = total + ring.var(i) * wi
        if total != w:
            raise ValueError("invalid decomposition: sum x_i w_i differs from w")
    xs = [ring.var(i) for i in range(ring.n)]
    return koszul(ws, xs)


def clifford_generators(w: Polynomial, decomposition=None):
    """Closed odd endomorphisms alpha_j of k^st generating a Clifford algebra.

    alpha_j = -(sum_i w_ij e_i^) + i(e_j*), with w_j = sum_i x_i w_ij from
    the greedy decomposition applied twice.  Requires w without linear part
    (w in the square of the maximal ideal).
    """
    ring = w.ring
    n = ring.n
    for m in w.terms:
        if sum(m) < 2:
            raise ValueError("potential has a linear part")
    kst = stabilized_residue_field(w, decomposition)
    ws = greedy_decomposition(w) if decomposition is None else list(decomposition)
    alphas = []
    for j in range(n):
        wij = greedy_decomposition(ws[j])
        wedge = [-wij[i] for i in range(n)]
        contract = [ring.one() if i == j else ring.zero() for i in range(n)]
        T = koszul_operator(ring, n, wedge, contract)
        r0 = kst.r0
        b10 = tuple(tuple(row[:r0]) for row in T[r0:])
        b01 = tuple(tuple(row[r0:]) for row in T[:r0])
        alphas.append(MorphismCocycle(kst, kst, 1, (b10, b01)))
    return kst, alphas


# --- equivariant structure (validated against a group in `equivariant`) -----


@dataclass(frozen=True)
class EquivariantMF:
    """A factorization with a constant parity-preserving action matrix per
    group generator, in the full E0 + E1 basis."""

    base: MatFac
    action: tuple  # one full square Scalar matrix per generator

    def __post_init__(self):
        r0 = self.base.r0
        for rho in self.action:
            if len(rho) != self.base.rank or any(len(row) != self.base.rank for row in rho):
                raise ValueError("action matrix has the wrong size")
            for i in range(self.base.rank):
                for j in range(self.base.rank):
                    if (i < r0) != (j < r0) and not rho[i][j].is_zero():
                        raise ValueError("action matrix does not preserve parity")

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfinv.homology import hom_cohomology
from mfinv.invariants import chern, tau
from mfinv.mfcore import (
    MatFac,
    MorphismCocycle,
    identity_morphism,
    koszul,
    koszul_subsets,
    mat_equal,
)
from mfinv.milnor import build_milnor
from mfinv.oracle import (
    DiagonalData,
    build_diagonal,
    chern_of_diagonal,
    inverse_form_check,
    oracle_tau,
    restriction_recursion_check,
    solve_D,
)
from mfinv.poly import PolyRing
from mfinv.scalar import rational

R1 = PolyRing(("x",))
R2 = PolyRing(("x", "y"))
R3 = PolyRing(("x", "y", "z"))


def xn_fac(n, i):
    return koszul([R1.parse("x^%d" % i)], [R1.parse("x^%d" % (n - i))])


BATTERY = [
    (R1.parse("x^2"), [xn_fac(2, 1)]),
    (R1.parse("x^4"), [xn_fac(4, 1), xn_fac(4, 2)]),
    (R1.parse("x^6"), [xn_fac(6, 3)]),
    (
        R2.parse("x^3 + x*y^2"),
        [
            koszul([R2.parse("x")], [R2.parse("x^2 + y^2")]),
            koszul([R2.parse("x"), R2.parse("y")], [R2.parse("x^2"), R2.parse("x*y")]),
        ],
    ),
    (
        R2.parse("x^2 + y^2"),
        [koszul([R2.parse("x"), R2.parse("y")], [R2.parse("x"), R2.parse("y")])],
    ),
    (
        R2.parse("x^3 + y^3"),
        [koszul([R2.parse("x"), R2.parse("y")], [R2.parse("x^2"), R2.parse("y^2")])],
    ),
    (
        R3.parse("x^3 + y^3 + z^3"),
        [
            koszul(
                [R3.parse("x"), R3.parse("y"), R3.parse("z")],
                [R3.parse("x^2"), R3.parse("y^2"), R3.parse("z^2")],
            )
        ],
    ),
]


def test_build_diagonal_telescopes():
    w = R2.parse("x^3 + x*y^2")
    data = build_diagonal(w)
    n = 2
    doubled = data.doubled
    xs = [doubled.var(i) for i in range(n)]
    ys = [doubled.var(n + i) for i in range(n)]
    total = doubled.zero()
    for j in range(n):
        total = total + data.differences[j] * (ys[j] - xs[j])
    assert total == data.w_tilde
    assert data.factorization.w == data.w_tilde


def test_difference_derivatives_restrict_to_partials():
    w = R2.parse("x^3 + x*y^2")
    data = build_diagonal(w)
    images = [R2.var(0), R2.var(1)] * 2
    for j in range(2):
        restricted = data.differences[j].substitute(R2, images)
        assert restricted == w.partial_derivative(j)


def test_diagonal_factorization_matches_subset_conventions():
    # the Koszul matrix mfcore builds must agree entry by entry with the
    # wedge/contraction signs the solver uses
    w = R2.parse("x^3 + y^3")
    data = build_diagonal(w)
    doubled = data.doubled
    n = 2
    evens, odds = koszul_subsets(n)
    ordered = evens + odds
    pos = {s: k for k, s in enumerate(ordered)}
    size = len(ordered)
    expected = [[doubled.zero() for _ in range(size)] for _ in range(size)]
    us = [doubled.var(n + i) - doubled.var(i) for i in range(n)]
    for s in ordered:
        col = pos[s]
        for i in range(n):
            below = sum(1 for t in s if t < i)
            sign = -1 if below % 2 else 1
            if i in s:
                t = tuple(k for k in s if k != i)
                term = us[i] if sign > 0 else -us[i]
            else:
                t = tuple(sorted(s + (i,)))
                d = data.differences[i]
                term = d if sign > 0 else -d
            expected[pos[t]][col] = expected[pos[t]][col] + term
    assert mat_equal(data.factorization.full_delta(), tuple(map(tuple, expected)))


def test_solve_rejects_foreign_diagonal():
    data = build_diagonal(R1.parse("x^2"))
    E = xn_fac(4, 2)
    with pytest.raises(ValueError, match="different potential"):
        solve_D(E, data)


def test_smallest_case_by_hand():
    # w = x^2, E = {x, x}: the single nontrivial component is the odd
    # part of the Koszul matrix itself
    E = xn_fac(2, 1)
    D = solve_D(E)
    doubled = D.data.doubled
    one = doubled.one()
    assert D.component(()) == ((one, doubled.zero()), (doubled.zero(), one))
    top = D.top()
    assert top[0][0].is_zero() and top[1][1].is_zero()
    assert top[0][1] == one and top[1][0] == one


@pytest.mark.parametrize("w,facs", BATTERY)
def test_restriction_recursion(w, facs):
    data = build_diagonal(w)
    for E in facs:
        D = solve_D(E, data)
        assert restriction_recursion_check(D)


@pytest.mark.parametrize("w,facs", BATTERY)
def test_oracle_tau_agrees_with_closed_form(w, facs):
    A = build_milnor(w)
    data = build_diagonal(w)
    for E in facs:
        D = solve_D(E, data)
        h0, h1, basis = hom_cohomology(E, E)
        assert oracle_tau(E, identity_morphism(E), A, dtensor=D) == chern(E, A)
        for parity, dim in ((0, h0), (1, h1)):
            for k in range(dim):
                alpha = basis.representative(parity, k)
                assert oracle_tau(E, alpha, A, dtensor=D) == tau(E, alpha, A)


def test_oracle_tau_on_scaled_morphisms():
    w = R2.parse("x^3 + x*y^2")
    E = koszul([R2.parse("x")], [R2.parse("x^2 + y^2")])
    A = build_milnor(w)
    D = solve_D(E)
    alpha = identity_morphism(E).scale(rational(3, 2))
    assert oracle_tau(E, alpha, A, dtensor=D) == tau(E, alpha, A)
    beta = MorphismCocycle.from_full(
        E, E, 0, tuple(tuple(R2.parse("y") * p for p in row) for row in alpha.full_matrix())
    )
    assert oracle_tau(E, beta, A, dtensor=D) == tau(E, beta, A)


def test_oracle_tau_rejects_open_morphisms():
    E = xn_fac(4, 2)
    A = build_milnor(R1.parse("x^4"))
    x = R1.parse("x")
    bad = MorphismCocycle(E, E, 1, (((x,),), ((x,),)))
    assert not bad.is_closed()
    with pytest.raises(ValueError, match="not closed"):
        oracle_tau(E, bad, A)


def test_oracle_tau_rejects_potential_mismatch():
    E = xn_fac(4, 2)
    A = build_milnor(R1.parse("x^2"))
    with pytest.raises(ValueError, match="potential mismatch"):
        oracle_tau(E, identity_morphism(E), A)


def test_chern_of_diagonal_frozen_values():
    c = chern_of_diagonal(R1.parse("x^2"))
    assert c.agree
    assert c.direct.value == c.direct.value.ring.parse("2")
    c = chern_of_diagonal(R2.parse("x^2 + y^2"))
    assert c.agree
    assert c.direct.value == c.direct.value.ring.parse("-4")


@pytest.mark.parametrize("w,facs", BATTERY)
def test_chern_of_diagonal_two_routes_agree(w, facs):
    assert chern_of_diagonal(w).agree


@pytest.mark.parametrize("w,facs", BATTERY)
def test_inverse_form(w, facs):
    assert inverse_form_check(w)


def test_inverse_form_smallest_cases():
    # x^2: Gram matrix [1/2], determinant reduces to 2
    assert inverse_form_check(R1.parse("x^2"))
    assert inverse_form_check(R2.parse("x^2 + y^2"))


@settings(deadline=None, max_examples=12)
@given(
    i=st.integers(min_value=1, max_value=3),
    n=st.integers(min_value=2, max_value=5),
)
def test_oracle_tau_random_power_factorizations(i, n):
    if i >= n:
        i, n = n - 1, n
    E = xn_fac(n, i)
    A = build_milnor(R1.parse("x^%d" % n))
    D = solve_D(E)
    h0, h1, basis = hom_cohomology(E, E)
    for parity, dim in ((0, h0), (1, h1)):
        for k in range(dim):
            alpha = basis.representative(parity, k)
            assert oracle_tau(E, alpha, A, dtensor=D) == tau(E, alpha, A)

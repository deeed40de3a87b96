"""Batch front end over a single self-contained session file.

A session is a JSON document naming one potential, its factorizations,
morphisms between them, and optionally a diagonal symmetry group or a
weight system for the graded index.  Every command is a pure function of
that file: load, compute, print.  Results go to standard output as plain
``key: value`` lines, or as JSON with sorted keys behind ``--json``.

Exit codes: 0 on success, 1 when ``verify --check`` finds a failed
identity (or a Cardy mismatch is detected), 2 on any input error.

Session schema::

    {
      "field": "rational" | {"cyclotomic_order": m},      # default rational
      "variables": ["x", "y"],
      "potential": "x^3 + x*y^2",
      "factorizations": {
        "E": {"koszul": {"a": ["x"], "b": ["x^2 + y^2"]},
              "rho": {"gen0": [["z", "0"], ["0", "1"]]},   # optional
              "degrees": {"even": [0], "odd": [1]}},        # optional
        "F": {"d0": [["x"]], "d1": [["x^2 + y^2"]]}
      },
      "morphisms": {
        "alpha": {"source": "E", "target": "E", "parity": 0,
                  "blocks": [[["1"]], [["1"]]]}
      },
      "group": {"cyclotomic_order": 2, "generators": [["1", "-1"]]},
      "weights": [1, 1]
    }

Scalars are written "p/q", or as expressions in "z", the primitive root
of the session's cyclotomic field; the output serialization
{"m": m, "coeffs": ["p/q", ...]} is accepted on input as well.  Morphism
blocks are (even-to-even, odd-to-odd) for parity 0 and
(even-to-odd, odd-to-even) for parity 1.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .equivariant import (
    DiagonalGroup,
    chi_equivariant,
    close_group,
    graded_chi,
    graded_to_equivariant,
    orbifold_hh_dimensions,
    sector,
)
from .homology import cardy_lhs, euler, hom_cohomology
from .invariants import (
    cardy_rhs,
    chern,
    chi_hrr,
    derivative_product,
    supertrace,
    tau,
)
from .mfcore import (
    EquivariantMF,
    MatFac,
    MorphismCocycle,
    as_matrix,
    identity_morphism,
    koszul,
)
from .milnor import MilnorRing, build_milnor, gram_matrix, hessian_class, residue_trace
from .oracle import chern_of_diagonal, inverse_form_check, oracle_tau, solve_D
from .poly import PolyRing, Polynomial
from .scalar import CyclotomicContext, Scalar


class SessionError(Exception):
    """Anything wrong with the input file or the requested names."""


@dataclass
class Session:
    ring: PolyRing
    context: CyclotomicContext | None
    w: Polynomial
    milnor: MilnorRing
    factorizations: dict[str, MatFac]
    rho_specs: dict[str, list]  # per factorization name, one matrix per generator
    degree_specs: dict[str, tuple]
    morphisms: dict[str, MorphismCocycle]
    group: DiagonalGroup | None
    weights: tuple[int, ...] | None
    names_in_order: list[str] = field(default_factory=list)


# --- scalar and polynomial input --------------------------------------------


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise SessionError("bad rational %r: %s" % (text, exc))


def parse_scalar(spec, context: CyclotomicContext | None) -> Scalar:
    """A scalar from "p/q", an expression in z, or {"m":..,"coeffs":[..]}."""
    if isinstance(spec, dict):
        try:
            m = int(spec["m"])
            coeffs = [_parse_fraction(c) for c in spec["coeffs"]]
        except (KeyError, TypeError) as exc:
            raise SessionError("bad scalar object %r: %s" % (spec, exc))
        if context is None or context.order != m:
            raise SessionError(
                "scalar of conductor %d outside the session field" % m
            )
        if len(coeffs) != context.degree:
            raise SessionError("scalar object has %d coefficients, expected %d"
                               % (len(coeffs), context.degree))
        return Scalar(context, tuple(coeffs))
    if not isinstance(spec, str):
        raise SessionError("scalar must be a string or object, got %r" % (spec,))
    zring = PolyRing(("z",), context)
    try:
        p = zring.parse(spec)
    except ValueError as exc:
        raise SessionError("bad scalar %r: %s" % (spec, exc))
    if context is None:
        if any(m[0] > 0 for m in p.terms):
            raise SessionError(
                "scalar %r uses z but the session field is rational" % spec
            )
        return p.coeff_of((0,))
    zeta = context.zeta()
    total = p.coeff_of((0,))
    for (e,), c in p.terms.items():
        if e > 0:
            total = total + c * zeta**e
    return total


def scalar_json(s: Scalar):
    if s.context is None or s.is_rational():
        return str(s.as_fraction())
    return {
        "m": s.context.order,
        "coeffs": [str(c) for c in s.coeffs],
    }


def _parse_poly(ring: PolyRing, text, what: str) -> Polynomial:
    if not isinstance(text, str):
        raise SessionError("%s must be a polynomial string, got %r" % (what, text))
    try:
        return ring.parse(text)
    except ValueError as exc:
        raise SessionError("%s: %s" % (what, exc))


def _parse_poly_matrix(ring: PolyRing, rows, what: str):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SessionError("%s must be a list of rows" % what)
    return as_matrix(
        [
            [_parse_poly(ring, entry, what) for entry in row]
            for row in rows
        ]
    )


# --- session loading --------------------------------------------------------


def _load_field(doc) -> int | None:
    spec = doc.get("field", "rational")
    if spec == "rational":
        order = None
    elif isinstance(spec, dict) and "cyclotomic_order" in spec:
        order = int(spec["cyclotomic_order"])
        if order < 1:
            raise SessionError("cyclotomic order must be positive")
    else:
        raise SessionError("field must be \"rational\" or {\"cyclotomic_order\": m}")
    group = doc.get("group")
    if group is not None:
        if not isinstance(group, dict):
            raise SessionError("group must be an object")
        g_order = group.get("cyclotomic_order")
        if g_order is not None:
            g_order = int(g_order)
            if order is None:
                order = g_order
            elif order != g_order:
                raise SessionError(
                    "group cyclotomic order %d does not match the session field order %d"
                    % (g_order, order)
                )
    if order == 1:
        # Q(zeta_1) is just the rationals
        order = None
    return order


def _load_factorization(ring: PolyRing, w: Polynomial, name: str, spec) -> MatFac:
    if not isinstance(spec, dict):
        raise SessionError("factorization %r must be an object" % name)
    if "koszul" in spec:
        kdata = spec["koszul"]
        try:
            a = [_parse_poly(ring, t, "factorization %r" % name) for t in kdata["a"]]
            b = [_parse_poly(ring, t, "factorization %r" % name) for t in kdata["b"]]
        except (KeyError, TypeError):
            raise SessionError(
                "factorization %r needs koszul data {\"a\": [...], \"b\": [...]}" % name
            )
        try:
            E = koszul(a, b)
        except ValueError as exc:
            raise SessionError("factorization %r: %s" % (name, exc))
    elif "d0" in spec and "d1" in spec:
        d0 = _parse_poly_matrix(ring, spec["d0"], "factorization %r" % name)
        d1 = _parse_poly_matrix(ring, spec["d1"], "factorization %r" % name)
        try:
            E = MatFac(ring, w, d0, d1)
            E.validate()
        except ValueError as exc:
            raise SessionError("factorization %r: %s" % (name, exc))
    else:
        raise SessionError(
            "factorization %r needs either koszul data or explicit d0/d1 blocks" % name
        )
    if E.w != w:
        raise SessionError(
            "factorization %r factors %s, not the session potential" % (name, E.w)
        )
    return E


def _load_morphism(session: Session, name: str, spec) -> MorphismCocycle:
    if not isinstance(spec, dict):
        raise SessionError("morphism %r must be an object" % name)
    try:
        source = session.factorizations[spec["source"]]
    except KeyError:
        raise SessionError("morphism %r: unknown source factorization" % name)
    try:
        target = session.factorizations[spec["target"]]
    except KeyError:
        raise SessionError("morphism %r: unknown target factorization" % name)
    parity = spec.get("parity")
    if parity not in (0, 1):
        raise SessionError("morphism %r: parity must be 0 or 1" % name)
    blocks = spec.get("blocks")
    if not isinstance(blocks, list) or len(blocks) != 2:
        raise SessionError("morphism %r: blocks must be a pair of matrices" % name)
    B0 = _parse_poly_matrix(session.ring, blocks[0], "morphism %r" % name)
    B1 = _parse_poly_matrix(session.ring, blocks[1], "morphism %r" % name)
    try:
        return MorphismCocycle(source, target, parity, (B0, B1))
    except ValueError as exc:
        raise SessionError("morphism %r: %s" % (name, exc))


def load_session(path: str) -> Session:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SessionError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise SessionError("cannot parse %s: %s" % (path, exc))
    if not isinstance(doc, dict):
        raise SessionError("session must be a JSON object")
    variables = doc.get("variables")
    if (
        not isinstance(variables, list)
        or not variables
        or not all(isinstance(v, str) for v in variables)
    ):
        raise SessionError("variables must be a nonempty list of names")
    if len(set(variables)) != len(variables):
        raise SessionError("variable names must be distinct")
    order = _load_field(doc)
    context = CyclotomicContext(order) if order else None
    ring = PolyRing(tuple(variables), context)
    w = _parse_poly(ring, doc.get("potential"), "potential")
    try:
        A = build_milnor(w)
    except ValueError as exc:
        raise SessionError("potential: %s" % exc)
    session = Session(
        ring=ring,
        context=context,
        w=w,
        milnor=A,
        factorizations={},
        rho_specs={},
        degree_specs={},
        morphisms={},
        group=None,
        weights=None,
    )
    group_doc = doc.get("group")
    if group_doc is not None:
        gens_doc = group_doc.get("generators")
        if not isinstance(gens_doc, list) or not gens_doc:
            raise SessionError("group needs a nonempty list of generators")
        gens = []
        for k, entry in enumerate(gens_doc):
            if not isinstance(entry, list) or len(entry) != len(variables):
                raise SessionError(
                    "group generator %d must list one scalar per variable" % k
                )
            gens.append(tuple(parse_scalar(t, context) for t in entry))
        try:
            session.group = close_group(len(variables), gens, context)
        except ValueError as exc:
            raise SessionError("group: %s" % exc)
    facs_doc = doc.get("factorizations", {})
    if not isinstance(facs_doc, dict):
        raise SessionError("factorizations must be an object of name: spec")
    for name in facs_doc:
        spec = facs_doc[name]
        E = _load_factorization(ring, w, name, spec)
        session.factorizations[name] = E
        session.names_in_order.append(name)
        rho_doc = spec.get("rho") if isinstance(spec, dict) else None
        if rho_doc is not None:
            if session.group is None:
                raise SessionError(
                    "factorization %r carries rho data but the session has no group"
                    % name
                )
            mats = []
            for k in range(len(session.group.generators)):
                key = "gen%d" % k
                if key not in rho_doc:
                    raise SessionError(
                        "factorization %r: rho needs a matrix for %s" % (name, key)
                    )
                rows = rho_doc[key]
                if not isinstance(rows, list):
                    raise SessionError(
                        "factorization %r: rho %s must be a matrix" % (name, key)
                    )
                mats.append(
                    tuple(
                        tuple(parse_scalar(t, context) for t in row) for row in rows
                    )
                )
            session.rho_specs[name] = mats
        deg_doc = spec.get("degrees") if isinstance(spec, dict) else None
        if deg_doc is not None:
            try:
                deg0 = tuple(int(d) for d in deg_doc["even"])
                deg1 = tuple(int(d) for d in deg_doc["odd"])
            except (KeyError, TypeError, ValueError):
                raise SessionError(
                    "factorization %r: degrees needs integer lists even/odd" % name
                )
            session.degree_specs[name] = (deg0, deg1)
    mors_doc = doc.get("morphisms", {})
    if not isinstance(mors_doc, dict):
        raise SessionError("morphisms must be an object of name: spec")
    for name in mors_doc:
        session.morphisms[name] = _load_morphism(session, name, mors_doc[name])
    weights_doc = doc.get("weights")
    if weights_doc is not None:
        if not isinstance(weights_doc, list) or len(weights_doc) != len(variables):
            raise SessionError("weights must list one integer per variable")
        session.weights = tuple(int(a) for a in weights_doc)
    return session


# --- lookups ----------------------------------------------------------------


def _get_fac(session: Session, name: str) -> MatFac:
    try:
        return session.factorizations[name]
    except KeyError:
        raise SessionError("unknown factorization %r" % name)


def _get_mor(session: Session, name: str) -> MorphismCocycle:
    try:
        return session.morphisms[name]
    except KeyError:
        raise SessionError("unknown morphism %r" % name)


def _require_endo(alpha: MorphismCocycle, E: MatFac, mname: str, ename: str):
    for side in (alpha.source, alpha.target):
        if side.d0 != E.d0 or side.d1 != E.d1:
            raise SessionError(
                "morphism %r is not an endomorphism of %r" % (mname, ename)
            )


def _equivariant(session: Session, name: str) -> EquivariantMF:
    if session.group is None:
        raise SessionError("this command needs a group in the session")
    if name not in session.rho_specs:
        raise SessionError("factorization %r has no rho data" % name)
    try:
        return EquivariantMF(
            session.factorizations[name], tuple(session.rho_specs[name])
        )
    except ValueError as exc:
        raise SessionError("factorization %r: %s" % (name, exc))


def _monomial_text(ring: PolyRing, m) -> str:
    return str(ring.monomial(m))


def _element_json(g):
    return [scalar_json(lam) for lam in g]


def _element_text(g) -> str:
    return "(" + ", ".join(str(lam) for lam in g) + ")"


# --- command handlers -------------------------------------------------------


def cmd_milnor(session: Session, args) -> dict:
    A = session.milnor
    G = gram_matrix(A)
    return {
        "mu": A.mu,
        "basis": [_monomial_text(session.ring, m) for m in A.basis],
        "gram": [[scalar_json(c) for c in row] for row in G],
    }


def cmd_chern(session: Session, args) -> dict:
    E = _get_fac(session, args.factorization)
    cls = chern(E, session.milnor)
    return {"class": str(cls.value), "parity": cls.parity}


def cmd_tau(session: Session, args) -> dict:
    E = _get_fac(session, args.factorization)
    alpha = _get_mor(session, args.morphism)
    _require_endo(alpha, E, args.morphism, args.factorization)
    try:
        cls = tau(E, alpha, session.milnor)
    except ValueError as exc:
        raise SessionError(str(exc))
    return {"class": str(cls.value), "parity": cls.parity}


def cmd_chi(session: Session, args) -> dict:
    E = _get_fac(session, args.factorization)
    F = _get_fac(session, args.other)
    value = chi_hrr(E, F, session.milnor)
    if not value.is_rational_integer():
        raise SessionError("index pairing is not an integer: %s" % value)
    return {"chi": int(value.as_fraction())}


def cmd_hom(session: Session, args) -> dict:
    E = _get_fac(session, args.factorization)
    F = _get_fac(session, args.other)
    h0, h1, _ = hom_cohomology(E, F)
    return {"h0": h0, "h1": h1}


def cmd_cardy(session: Session, args) -> dict:
    E = _get_fac(session, args.factorization)
    F = _get_fac(session, args.other)
    alpha = _get_mor(session, args.morphism)
    beta = _get_mor(session, args.other_morphism)
    _require_endo(alpha, E, args.morphism, args.factorization)
    _require_endo(beta, F, args.other_morphism, args.other)
    try:
        lhs = cardy_lhs(E, F, alpha, beta)
        rhs = cardy_rhs(E, F, alpha, beta, session.milnor)
    except ValueError as exc:
        raise SessionError(str(exc))
    if lhs != rhs:
        raise VerificationFailure(
            "cardy sides disagree: lhs %s, rhs %s" % (lhs, rhs)
        )
    return {"value": scalar_json(lhs)}


def cmd_sectors(session: Session, args) -> dict:
    if session.group is None:
        raise SessionError("this command needs a group in the session")
    out = []
    for g in session.group.elements:
        sec = sector(session.w, g)
        out.append(
            {
                "element": _element_json(g),
                "fixed": [session.ring.names[i] for i in sec.fixed_indices],
                "mu": sec.milnor.mu,
                "potential": str(sec.w_g),
            }
        )
    return {"sectors": out}


def cmd_equivariant_chi(session: Session, args) -> dict:
    E = _equivariant(session, args.factorization)
    F = _equivariant(session, args.other)
    try:
        value = chi_equivariant(E, F, session.group)
    except (ValueError, AssertionError) as exc:
        raise SessionError(str(exc))
    return {"chi": int(value.as_fraction())}


def cmd_orbifold_hh(session: Session, args) -> dict:
    if session.group is None:
        raise SessionError("this command needs a group in the session")
    try:
        sectors, even, odd = orbifold_hh_dimensions(session.w, session.group)
    except (ValueError, AssertionError) as exc:
        raise SessionError(str(exc))
    return {
        "sectors": [
            {"element": _element_json(g), "parity": parity, "dimension": dim}
            for g, parity, dim in sectors
        ],
        "even": even,
        "odd": odd,
    }


def cmd_graded_chi(session: Session, args) -> dict:
    if session.weights is None:
        raise SessionError("this command needs weights in the session")
    for name in (args.factorization, args.other):
        if name not in session.degree_specs:
            raise SessionError("factorization %r has no degrees data" % name)
    E = _get_fac(session, args.factorization)
    F = _get_fac(session, args.other)
    try:
        S = graded_to_equivariant(session.w, session.weights)
        value = graded_chi(
            S,
            E,
            session.degree_specs[args.factorization],
            F,
            session.degree_specs[args.other],
        )
    except (ValueError, AssertionError) as exc:
        raise SessionError(str(exc))
    return {"chi": int(value.as_fraction()), "doubled": S.doubled}


# --- verify -----------------------------------------------------------------


class VerificationFailure(Exception):
    pass


def _named_endomorphisms(session: Session, name: str):
    E = session.factorizations[name]
    out = []
    for mname in sorted(session.morphisms):
        f = session.morphisms[mname]
        if (
            f.source.d0 == E.d0
            and f.source.d1 == E.d1
            and f.target.d0 == E.d0
            and f.target.d1 == E.d1
            and f.is_closed()
        ):
            out.append(f)
    return out


def _check_hrr(session: Session) -> bool:
    for a in session.names_in_order:
        for b in session.names_in_order:
            E = session.factorizations[a]
            F = session.factorizations[b]
            if chi_hrr(E, F, session.milnor) != euler(E, F):
                return False
    return True


def _check_cardy(session: Session) -> bool:
    for a in session.names_in_order:
        E = session.factorizations[a]
        alphas = [identity_morphism(E)] + _named_endomorphisms(session, a)
        for b in session.names_in_order:
            F = session.factorizations[b]
            betas = [identity_morphism(F)] + _named_endomorphisms(session, b)
            for alpha in alphas:
                for beta in betas:
                    lhs = cardy_lhs(E, F, alpha, beta)
                    rhs = cardy_rhs(E, F, alpha, beta, session.milnor)
                    if lhs != rhs:
                        return False
    return True


def _check_oracle_tau(session: Session) -> bool:
    A = session.milnor
    for a in session.names_in_order:
        E = session.factorizations[a]
        D = solve_D(E)
        for alpha in [identity_morphism(E)] + _named_endomorphisms(session, a):
            if oracle_tau(E, alpha, A, dtensor=D) != tau(E, alpha, A):
                return False
    return True


def _check_permutation_invariance(session: Session) -> bool:
    A = session.milnor
    n = session.ring.n
    for a in session.names_in_order:
        E = session.factorizations[a]
        base = chern(E, A)
        for perm in permutations(range(n)):
            sign = _sign_to_descending(perm)
            got = A.project(supertrace(derivative_product(E, perm), E.r0))
            if got.value != base.scale(sign).value:
                return False
    return True


def _sign_to_descending(perm) -> int:
    target = sorted(perm, reverse=True)
    seq = list(perm)
    sign = 1
    for i, t in enumerate(target):
        j = seq.index(t)
        if j != i:
            seq[i], seq[j] = seq[j], seq[i]
            sign = -sign
    return sign


def _check_hessian_trace(session: Session) -> bool:
    A = session.milnor
    return residue_trace(hessian_class(A)) == A.mu


def cmd_verify(session: Session, args) -> dict:
    checks = [
        ("hrr", _check_hrr),
        ("cardy", _check_cardy),
        ("oracle-tau", _check_oracle_tau),
        ("chern-diagonal", lambda s: chern_of_diagonal(s.w).agree),
        ("inverse-form", lambda s: inverse_form_check(s.w)),
        ("permutation-invariance", _check_permutation_invariance),
        ("hessian-trace", _check_hessian_trace),
    ]
    results = {}
    for name, fn in checks:
        results[name] = bool(fn(session))
    payload = {"checks": results, "ok": all(results.values())}
    return payload


# --- output -----------------------------------------------------------------


def _scalar_cell(value) -> str:
    if isinstance(value, dict):
        ctx = CyclotomicContext(value["m"])
        coeffs = tuple(Fraction(c) for c in value["coeffs"])
        return str(Scalar(ctx, coeffs))
    return str(value)


def _print_human(command: str, payload: dict) -> None:
    if command == "milnor":
        print("mu: %d" % payload["mu"])
        print("basis: %s" % ", ".join(payload["basis"]))
        print("gram:")
        for row in payload["gram"]:
            print("  " + "  ".join(_scalar_cell(c) for c in row))
        return
    if command in ("chern", "tau"):
        print("class: %s" % payload["class"])
        print("parity: %d" % payload["parity"])
        return
    if command == "sectors":
        for k, sec in enumerate(payload["sectors"]):
            fixed = ", ".join(sec["fixed"]) if sec["fixed"] else "none"
            print(
                "sector %d: element (%s)  fixed %s  mu %d  potential %s"
                % (
                    k,
                    ", ".join(_scalar_cell(c) for c in sec["element"]),
                    fixed,
                    sec["mu"],
                    sec["potential"],
                )
            )
        return
    if command == "orbifold-hh":
        for k, sec in enumerate(payload["sectors"]):
            print(
                "sector %d: element (%s)  parity %d  dimension %d"
                % (
                    k,
                    ", ".join(_scalar_cell(c) for c in sec["element"]),
                    sec["parity"],
                    sec["dimension"],
                )
            )
        print("even: %d" % payload["even"])
        print("odd: %d" % payload["odd"])
        return
    if command == "verify":
        for name in (
            "hrr",
            "cardy",
            "oracle-tau",
            "chern-diagonal",
            "inverse-form",
            "permutation-invariance",
            "hessian-trace",
        ):
            print("%s: %s" % (name, "pass" if payload["checks"][name] else "fail"))
        return
    if command == "cardy":
        print("value: %s" % _scalar_cell(payload["value"]))
        return
    for key in sorted(payload):
        print("%s: %s" % (key, payload[key]))


# --- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # the shared flags are declared twice so they may appear on either
    # side of the subcommand; the suppressed defaults keep a flag given
    # before the subcommand from being reset afterwards
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=argparse.SUPPRESS, help="session JSON file")
    common.add_argument(
        "--json",
        action="store_true",
        default=argparse.SUPPRESS,
        help="emit JSON instead of plain text",
    )
    common.add_argument(
        "--check",
        action="store_true",
        default=argparse.SUPPRESS,
        help="make verify exit nonzero when an identity fails",
    )
    parser = argparse.ArgumentParser(
        prog="mfinv",
        description="Exact invariants of matrix factorizations from a session file.",
    )
    parser.add_argument("--input", default=None, help="session JSON file")
    parser.add_argument(
        "--json", action="store_true", help="emit JSON instead of plain text"
    )
    parser.add_argument(
        "--check",
        action="store_true",
        help="make verify exit nonzero when an identity fails",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("milnor", parents=[common], help="Milnor number, basis, Gram matrix")

    p = sub.add_parser("chern", parents=[common], help="Chern character of a factorization")
    p.add_argument("factorization")

    p = sub.add_parser("tau", parents=[common], help="boundary-bulk image of a morphism")
    p.add_argument("factorization")
    p.add_argument("morphism")

    p = sub.add_parser("chi", parents=[common], help="index pairing of two factorizations")
    p.add_argument("factorization")
    p.add_argument("other")

    p = sub.add_parser("hom", parents=[common], help="Hom cohomology dimensions")
    p.add_argument("factorization")
    p.add_argument("other")

    p = sub.add_parser("cardy", parents=[common], help="both sides of the Cardy pairing")
    p.add_argument("factorization")
    p.add_argument("other")
    p.add_argument("morphism")
    p.add_argument("other_morphism")

    sub.add_parser("sectors", parents=[common], help="fixed loci of the group elements")

    p = sub.add_parser(
        "equivariant-chi",
        parents=[common],
        help="orbifold index of two equivariant factorizations",
    )
    p.add_argument("factorization")
    p.add_argument("other")

    sub.add_parser(
        "orbifold-hh",
        parents=[common],
        help="orbifold Hochschild dimensions by sector",
    )

    p = sub.add_parser(
        "graded-chi", parents=[common], help="graded index from weights and degrees"
    )
    p.add_argument("factorization")
    p.add_argument("other")

    sub.add_parser("verify", parents=[common], help="run the identity suite on the session")
    return parser


HANDLERS = {
    "milnor": cmd_milnor,
    "chern": cmd_chern,
    "tau": cmd_tau,
    "chi": cmd_chi,
    "hom": cmd_hom,
    "cardy": cmd_cardy,
    "sectors": cmd_sectors,
    "equivariant-chi": cmd_equivariant_chi,
    "orbifold-hh": cmd_orbifold_hh,
    "graded-chi": cmd_graded_chi,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.input is None:
        print("error: --input is required", file=sys.stderr)
        return 2
    try:
        session = load_session(args.input)
        payload = HANDLERS[args.command](session, args)
    except SessionError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        _print_human(args.command, payload)
    if args.command == "verify" and args.check and not payload["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Deterministic identity suites over a parsed problem file.

Each suite draws seeded probes, evaluates the exact identities, and records
one result per identity.  The same seed always produces the same probes, the
same ordering, and hence byte-identical reports.  These functions back the
``verify`` command, and the test suite calls them directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .albvfile import Document
from .algebroid import cotangent_algebroid
from .bv import (
    TopConnection,
    connection_from_operator,
    curvature,
    divergence,
    generating_operator,
    operator_difference,
)
from .calculus import differential, lichnerowicz, schouten, schouten_oracle, bialgebroid_check
from .exterior import (
    A_SIDE,
    DUAL_SIDE,
    as_side,
    contract,
    contract_or_zero,
    frame_change_elem,
    graded_sum,
    pairing,
    star,
    star_inv,
    wedge,
)
from .homology import (
    boundary,
    duality_check,
    kb_betti,
    koszul_brylinski,
    lichnerowicz_betti,
    modular_relation_check,
    modular_vector_field,
    star_conjugation_check,
    unimodular_duality_check,
)
from .randgen import (
    random_elem,
    random_flat_form,
    random_frame_matrix,
    random_section,
)

__all__ = ["CheckResult", "SUITES", "run_suites"]

SUITES = ("core", "algebroid", "bv", "homology", "all")


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: str | None = None

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self):
        return {"name": self.name, "status": self.status, "witness": self.witness}

    def line(self) -> str:
        text = "%s: %s" % (self.name, "PASS" if self.ok else "FAIL")
        if self.witness:
            text += " (%s)" % self.witness
        return text


class _Session:
    def __init__(self, doc: Document, trials, seed, max_deg):
        self.doc = doc
        self.trials = trials
        self.seed = seed
        self.max_deg = max_deg
        self.algebroid = doc.build_algebroid(check=False)
        self.poisson = doc.build_poisson(check=False)
        self.connection = doc.build_connection(self.algebroid)
        self.volume = doc.build_volume(self.algebroid)
        self.results = []
        self.tables = []
        self.sign = None

    def rng(self, label) -> random.Random:
        return random.Random("%s:%s" % (self.seed, label))

    def record(self, name, failures):
        witness = None
        if failures:
            witness = failures[0]
            if not isinstance(witness, str):
                witness = str(witness)
        self.results.append(CheckResult(name, not failures, witness))

    def elems(self, rng, count, side=A_SIDE, degrees=None):
        a = self.algebroid
        out = []
        for _ in range(count):
            if degrees is None:
                deg = rng.randrange(a.rank + 1)
            else:
                deg = degrees[rng.randrange(len(degrees))]
            out.append(random_elem(rng, a, side, deg, self.max_deg))
        return out


def _residual_witness(tag, pos, residual):
    return "%s probe %d residual %s" % (tag, pos, residual)


# -- core: graded algebra of one frame ------------------------------------


def _suite_core(s: _Session):
    a = s.algebroid
    n = a.rank
    rng = s.rng("core")

    failures = []
    for pos in range(s.trials):
        u = s.elems(rng, 1)[0]
        v = s.elems(rng, 1)[0]
        sign = -1 if (u.degree * v.degree) % 2 else 1
        residual = wedge(u, v) - sign * wedge(v, u)
        if not residual.is_zero:
            failures.append(_residual_witness("symmetry", pos + 1, residual))
    s.record("wedge-graded-symmetry", failures)

    failures = []
    for pos in range(s.trials):
        u, v, w = s.elems(rng, 3)
        residual = wedge(wedge(u, v), w) - wedge(u, wedge(v, w))
        if not residual.is_zero:
            failures.append(_residual_witness("associativity", pos + 1, residual))
    s.record("wedge-associativity", failures)

    failures = []
    for pos in range(s.trials):
        k = rng.randrange(n + 1)
        t = rng.randrange(k + 1)
        theta = s.elems(rng, 1, DUAL_SIDE, [t])[0]
        omega = s.elems(rng, 1, DUAL_SIDE, [k - t])[0]
        v = s.elems(rng, 1, A_SIDE, [k])[0]
        residual = pairing(omega, contract(theta, v)) - pairing(wedge(theta, omega), v)
        if not residual.is_zero:
            failures.append(_residual_witness("adjunction", pos + 1, residual))
    s.record("contraction-wedge-adjunction", failures)

    failures = []
    if n >= 2:
        for pos in range(s.trials):
            theta = s.elems(rng, 1, DUAL_SIDE, [1])[0]
            v = s.elems(rng, 1, A_SIDE, [rng.randrange(2, n + 1)])[0]
            residual = contract(theta, contract(theta, v))
            if not residual.is_zero:
                failures.append(_residual_witness("square", pos + 1, residual))
    s.record("interior-product-square", failures)

    failures = []
    for pos in range(s.trials):
        u = s.elems(rng, 1)[0]
        omega = s.elems(rng, 1, DUAL_SIDE)[0]
        r1 = star(star_inv(u, s.volume), s.volume) - u
        r2 = star_inv(star(omega, s.volume), s.volume) - omega
        if not r1.is_zero or not r2.is_zero:
            failures.append("round trip probe %d" % (pos + 1))
    s.record("star-round-trip", failures)

    failures = []
    for pos in range(3):
        g = random_frame_matrix(rng, n)
        for _ in range(max(s.trials // 3, 1)):
            k = rng.randrange(n + 1)
            theta = s.elems(rng, 1, DUAL_SIDE, [k])[0]
            u = s.elems(rng, 1, A_SIDE, [k])[0]
            residual = pairing(
                frame_change_elem(g, theta), frame_change_elem(g, u)
            ) - pairing(theta, u)
            if not residual.is_zero:
                failures.append("frame %d residual %s" % (pos + 1, residual))
    s.record("frame-change-pairing-invariance", failures)


# -- algebroid: bracket and differential ----------------------------------


def _suite_algebroid(s: _Session):
    a = s.algebroid
    rng = s.rng("algebroid")

    report = a.validate()
    s.record("axioms", [] if report.ok else [report.lines()[-1]])

    failures = []
    for pos in range(s.trials):
        u, v = s.elems(rng, 2)
        sign = -1 if ((u.degree - 1) * (v.degree - 1)) % 2 else 1
        residual = graded_sum(schouten(a, u, v), sign * schouten(a, v, u))
        if not residual.is_zero:
            failures.append(_residual_witness("antisymmetry", pos + 1, residual))
    s.record("bracket-graded-antisymmetry", failures)

    failures = []
    for pos in range(s.trials):
        u, v, w = s.elems(rng, 3)
        sign = -1 if ((u.degree - 1) * (v.degree - 1)) % 2 else 1
        residual = graded_sum(
            schouten(a, u, schouten(a, v, w)),
            -schouten(a, schouten(a, u, v), w),
            (-sign) * schouten(a, v, schouten(a, u, w)),
        )
        if not residual.is_zero:
            failures.append(_residual_witness("jacobi", pos + 1, residual))
    s.record("bracket-graded-jacobi", failures)

    failures = []
    for pos in range(s.trials):
        u, v, w = s.elems(rng, 3)
        sign = -1 if ((u.degree - 1) * v.degree) % 2 else 1
        residual = graded_sum(
            schouten(a, u, wedge(v, w)),
            -wedge(schouten(a, u, v), w),
            (-sign) * wedge(v, schouten(a, u, w)),
        )
        if not residual.is_zero:
            failures.append(_residual_witness("derivation", pos + 1, residual))
    s.record("bracket-wedge-derivation", failures)

    failures = []
    for pos in range(s.trials):
        u, v = s.elems(rng, 2)
        residual = graded_sum(schouten(a, u, v), -schouten_oracle(a, u, v))
        if not residual.is_zero:
            failures.append(_residual_witness("oracle", pos + 1, residual))
    s.record("bracket-oracle-agreement", failures)

    failures = []
    for pos in range(s.trials):
        omega = s.elems(rng, 1, DUAL_SIDE)[0]
        residual = differential(a, differential(a, omega))
        if not residual.is_zero:
            failures.append(_residual_witness("square", pos + 1, residual))
    s.record("differential-squares-to-zero", failures)

    if s.poisson is not None and s.doc.kind == "tangent":
        dual = cotangent_algebroid(s.poisson, check=False)
        pairs = [
            (random_section(rng, a, s.max_deg), random_section(rng, a, s.max_deg))
            for _ in range(s.trials)
        ]
        outcome = bialgebroid_check(a, dual, pairs)
        s.record("bialgebroid-derivation", outcome["failures"])


# -- bv: generating operators ---------------------------------------------


def _suite_bv(s: _Session):
    a = s.algebroid
    conn = s.connection
    rng = s.rng("bv")

    failures = []
    for pos in range(s.trials):
        u, v = s.elems(rng, 2)
        sign = -1 if u.degree % 2 else 1
        bracket = schouten(a, u, v)
        expanded = graded_sum(
            generating_operator(conn, wedge(u, v)),
            -wedge(generating_operator(conn, u), v),
            (-sign) * wedge(u, generating_operator(conn, v)),
        )
        residual = graded_sum(bracket, (-sign) * expanded)
        if not residual.is_zero:
            failures.append(_residual_witness("generating", pos + 1, residual))
    s.record("generating-property", failures)

    r = curvature(conn)
    failures = []
    for pos in range(s.trials):
        u = s.elems(rng, 1)[0]
        twice = generating_operator(conn, generating_operator(conn, u))
        residual = graded_sum(twice, contract_or_zero(r, u))
        if not residual.is_zero:
            failures.append(_residual_witness("curvature", pos + 1, residual))
    s.record("square-is-curvature-contraction", failures)

    failures = []
    for pos in range(s.trials):
        theta = s.elems(rng, 1, DUAL_SIDE)[0]
        u = s.elems(rng, 1)[0]
        sign = -1 if theta.degree % 2 else 1
        lhs = contract_or_zero(theta, generating_operator(conn, u))
        rhs = graded_sum(
            sign * generating_operator(conn, contract_or_zero(theta, u)),
            contract_or_zero(differential(a, theta), u),
        )
        residual = graded_sum(lhs, -rhs)
        if not residual.is_zero:
            failures.append(_residual_witness("contraction", pos + 1, residual))
    s.record("operator-contraction-identity", failures)

    failures = []
    recovered = connection_from_operator(a, conn.operator())
    if recovered.alpha != conn.alpha:
        failures.append("recovered %s from %s" % (recovered.alpha, conn.alpha))
    for pos in range(5):
        flat = random_flat_form(rng, a, s.max_deg)
        other = TopConnection(a, flat)
        back = connection_from_operator(a, other.operator())
        if back.alpha != flat:
            failures.append("flat probe %d recovered %s" % (pos + 1, back.alpha))
    s.record("connection-operator-round-trip", failures)

    failures = []
    top = a.top()
    for pos in range(s.trials):
        x = random_section(rng, a, s.max_deg)
        lhs = schouten(a, x, top) - pairing(conn.alpha, x) * top
        rhs = divergence(conn, x) * top
        residual = lhs - rhs
        if not residual.is_zero:
            failures.append(_residual_witness("divergence", pos + 1, residual))
    s.record("divergence-identity", failures)

    flat = random_flat_form(rng, a, s.max_deg)
    shifted = TopConnection(a, conn.alpha + flat)
    probes = s.elems(rng, max(s.trials // 2, 4))
    outcome = operator_difference(a, shifted.operator(), conn.operator(), probes)
    failures = list(outcome["failures"])
    if outcome["alpha"] != -flat:
        failures.append("difference form %s, expected %s" % (outcome["alpha"], -flat))
    s.record("operator-difference-laws", failures)

    failures = []
    for pos in range(3):
        g = random_frame_matrix(rng, a.rank)
        moved = conn.frame_change(g)
        for _ in range(max(s.trials // 3, 1)):
            u = s.elems(rng, 1)[0]
            lhs = frame_change_elem(g, generating_operator(conn, u))
            rhs = generating_operator(moved, frame_change_elem(g, u))
            residual = graded_sum(lhs, -rhs)
            if not residual.is_zero:
                failures.append("frame %d residual %s" % (pos + 1, residual))
    s.record("operator-frame-naturality", failures)


# -- homology: boundaries and tables --------------------------------------


def _suite_homology(s: _Session):
    a = s.algebroid
    conn = s.connection
    rng = s.rng("homology")

    if curvature(conn).is_zero:
        failures = []
        for pos in range(s.trials):
            u = s.elems(rng, 1)[0]
            residual = boundary(conn, boundary(conn, u))
            if not residual.is_zero:
                failures.append(_residual_witness("square", pos + 1, residual))
        s.record("boundary-squares-to-zero", failures)

    outcome = star_conjugation_check(a, s.volume, s.elems(rng, s.trials // 2))
    s.record("star-conjugation", outcome["failures"])

    try:
        dual = duality_check(a, max_weight=2)
    except ValueError as exc:
        s.record("homology-cohomology-duality", [str(exc)])
    else:
        s.record(
            "homology-cohomology-duality",
            ["entry %s" % mm for mm in dual["mismatches"]],
        )
        s.tables.append(dual["homology"].to_json())
        s.tables.append(dual["cohomology"].to_json())

    pi = s.poisson
    if pi is None:
        return

    form_probes = [
        s.elems(rng, 1, DUAL_SIDE)[0] for _ in range(s.trials)
    ]

    failures = []
    for pos, omega in enumerate(form_probes):
        residual = koszul_brylinski(pi, koszul_brylinski(pi, omega))
        if not residual.is_zero:
            failures.append(_residual_witness("square", pos + 1, residual))
    s.record("kb-squares-to-zero", failures)

    nu = modular_vector_field(pi)
    closed = lichnerowicz(pi, nu)
    s.record(
        "modular-field-closed",
        [] if closed.is_zero else ["bracket with bivector is %s" % closed],
    )

    outcome = modular_relation_check(pi, form_probes)
    s.record("modular-relation", outcome["failures"])
    if outcome["sign"] is not None:
        s.sign = outcome["sign"]

    cot = cotangent_algebroid(pi, check=False)
    failures = []
    for pos in range(s.trials):
        w1 = s.elems(rng, 1, DUAL_SIDE)[0]
        w2 = s.elems(rng, 1, DUAL_SIDE)[0]
        sign = -1 if w1.degree % 2 else 1
        bracket = as_side(
            schouten(cot, as_side(w1, A_SIDE), as_side(w2, A_SIDE)), DUAL_SIDE
        )
        expanded = graded_sum(
            koszul_brylinski(pi, wedge(w1, w2)),
            -wedge(koszul_brylinski(pi, w1), w2),
            (-sign) * wedge(w1, koszul_brylinski(pi, w2)),
        )
        residual = graded_sum(bracket, (-sign) * expanded)
        if not residual.is_zero:
            failures.append(_residual_witness("kb-generating", pos + 1, residual))
    s.record("kb-generates-cotangent-bracket", failures)

    outcome = unimodular_duality_check(pi, max_weight=2)
    if outcome["skipped"]:
        s.record("unimodular-duality", [])
        s.results[-1].witness = "skipped: modular field %s" % outcome["modular_field"]
        s.tables.append(kb_betti(pi, 2).to_json())
        s.tables.append(lichnerowicz_betti(pi, 2).to_json())
    else:
        s.record(
            "unimodular-duality", ["entry %s" % mm for mm in outcome["mismatches"]]
        )
        s.tables.append(outcome["homology"].to_json())
        s.tables.append(outcome["cohomology"].to_json())


_SUITE_FUNCS = {
    "core": _suite_core,
    "algebroid": _suite_algebroid,
    "bv": _suite_bv,
    "homology": _suite_homology,
}


def run_suites(doc: Document, suite="all", trials=20, seed=0, max_deg=2):
    """Run one or all suites; returns (results, sign, tables)."""
    if suite not in SUITES:
        raise ValueError("unknown suite %r" % suite)
    session = _Session(doc, trials, seed, max_deg)
    names = [suite] if suite != "all" else ["core", "algebroid", "bv", "homology"]
    for name in names:
        _SUITE_FUNCS[name](session)
    return session.results, session.sign, session.tables

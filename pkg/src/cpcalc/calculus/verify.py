"""Verification of known calculi, factorization checks and ansatz rank."""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field as dc_field

from ..algebra.forms import form_add
from ..linalg import Echelon
from .ansatz import CASE_TERMS, CALCULI, TERM_NAMES, Ansatz, published_coefficients, published_relation
from .engine import CONDITION_ARITY, CalculusEngine, pf_add
from .projection import Projection, projection_for, relation_defects
from .solve import Context, _kl8_forms, condition_pforms, make_context, pf_rows

__all__ = [
    "CALCULUS_CASE",
    "VerifyReport",
    "IndependenceError",
    "verify_calculus",
    "factorization_check",
    "expand_ansatz",
    "ansatz_rank",
    "require_independent",
]

CALCULUS_CASE = {"gamma": "free", "gamma-tilde": "red1", "gamma-tilde-tilde": "red2"}


class IndependenceError(ValueError):
    pass


@dataclass
class VerifyReport:
    subject: str
    N: int
    mode: str
    convention: dict
    checks: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["failures"] = [list(map(str, f)) for f in self.failures]
        return d


def _conv_json(ctx: Context) -> dict:
    return {**ctx.convention.as_dict(), "fingerprint": ctx.convention.fingerprint()}


def expand_ansatz(ans: Ansatz, ijkl: tuple, ctx: Context) -> dict:
    """dx_ij . x_kl as a one-form for concrete coefficients."""
    eng = CalculusEngine(ctx.family, ctx.convention, ctx.sphere)
    eng.concrete(ans.values)
    return eng.rule(tuple(ijkl)).get((), {})


def _tuples(cond: str, N: int, full_limit: int, samples: int, seed: int):
    arity = CONDITION_ARITY[cond]
    if N ** arity <= full_limit:
        return list(itertools.product(range(1, N + 1), repeat=arity))
    rng = random.Random(seed * 31 + arity * 7 + N)
    out = []
    seen = set()
    while len(out) < samples:
        t = tuple(rng.randint(1, N) for _ in range(arity))
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def verify_calculus(calculus: str, N: int, mode: str = "sampled", q0=None, ansatz: Ansatz | None = None,
                    ctx: Context | None = None, full_limit: int = 1296, samples: int = 24, seed: int = 0,
                    printed_kl8: bool = False, conditions=None) -> VerifyReport:
    """Instantiate a known calculus and reduce every condition.

    All index tuples are used when there are at most ``full_limit`` of them,
    otherwise ``samples`` seeded random tuples.  ``ansatz`` overrides the
    published coefficients (negative controls).
    """
    if calculus not in CALCULI:
        raise ValueError(f"unknown calculus {calculus!r}")
    ctx = ctx or make_context(N, mode, q0)
    case = CALCULUS_CASE[calculus]
    ans = ansatz or published_coefficients(calculus, ctx.family)
    eng = CalculusEngine(ctx.family, ctx.convention, ctx.sphere)
    eng.concrete(ans.values)
    rep = VerifyReport(calculus, N, ctx.F.mode, _conv_json(ctx))
    proj = projection_for(case, eng.forms, published_relation(case, ctx.family))
    conds = list(conditions or ["kl1", "kl2", "kl3", "kl4", "kl5", "kl6", "kl7"])
    kl8 = None
    if proj is not None:
        bad = relation_defects(proj, case)
        rep.checks["relation"] = {"defects": len(bad)}
        rep.failures += [("relation",) + tuple(b) for b in bad]
        kl8 = _kl8_forms(case, proj, eng.forms, printed_kl8)
        if conditions is None:
            conds.append("kl8")
    for cond in conds:
        tuples = _tuples(cond, N, full_limit, samples, seed)
        nbad = 0
        for tp in tuples:
            if condition_pforms(eng, cond, tp, proj, kl8):
                nbad += 1
                if nbad <= 3:
                    rep.failures.append((cond, tp))
        rep.checks[cond] = {"tuples": len(tuples), "nonzero": nbad}
    return rep


def _rule_difference(eng_a, eng_b, ijkl):
    out: dict = {}
    pf_add(out, eng_a.rule(ijkl))
    pf_add(out, eng_b.rule(ijkl), -1)
    return out


def factorization_check(N: int, mode: str = "sampled", q0=None, ctx: Context | None = None) -> VerifyReport:
    """Quotient relations between the three calculi.

    tilde:        imposing the first relation family on the bimodule rule of
                  the free calculus gives the rule of the first quotient;
    tilde-tilde:  adding H = 0 to the first quotient gives the second one,
                  both for the relations and for the bimodule rule;
    identity:     the empty relation set changes nothing.
    """
    ctx = ctx or make_context(N, mode, q0)
    f = ctx.family
    engines = {}
    for calc in CALCULI:
        e = CalculusEngine(f, ctx.convention, ctx.sphere)
        e.concrete(published_coefficients(calc, f).values)
        engines[calc] = e
    forms = engines["gamma"].forms
    E1 = projection_for("red1", forms, published_relation("red1", f))
    E2 = projection_for("red2", forms, published_relation("red2", f))
    rep = VerifyReport("factorization", N, ctx.F.mode, _conv_json(ctx))
    rng = range(1, N + 1)
    counts = {"tilde": 0, "tilde-tilde": 0, "relations": 0, "identity": 0}
    for ijkl in itertools.product(rng, repeat=4):
        if E1.apply_pf(_rule_difference(engines["gamma"], engines["gamma-tilde"], ijkl)):
            rep.failures.append(("tilde", ijkl))
        counts["tilde"] += 1
        if E2.apply_pf(_rule_difference(engines["gamma-tilde"], engines["gamma-tilde-tilde"], ijkl)):
            rep.failures.append(("tilde-tilde", ijkl))
        counts["tilde-tilde"] += 1
        if _rule_difference(engines["gamma"], engines["gamma"], ijkl):
            rep.failures.append(("identity", ijkl))
        counts["identity"] += 1
    # every relation of the first quotient holds in the second
    for i, j in itertools.product(rng, repeat=2):
        if E2.apply(E1.relation(i, j)):
            rep.failures.append(("relations", (i, j)))
        counts["relations"] += 1
    if E2.apply(forms.H()):
        rep.failures.append(("relations", "H"))
    rep.checks = counts
    return rep


def _term_rows(eng: CalculusEngine, names, proj, N: int):
    for ijkl in itertools.product(range(1, N + 1), repeat=4):
        coords: dict = {}
        for n in names:
            form = eng.term_form(n, ijkl)
            if proj is not None:
                form = proj.apply(form)
            for k, v in form.items():
                coords.setdefault(k, {})[n] = v
        yield from coords.values()


def ansatz_rank(N: int, mode: str = "sampled", q0=None, case: str = "free", ctx: Context | None = None) -> int:
    """Rank of the ansatz terms as maps (i,j,k,l) -> one-forms, modulo the
    relations of the constraint setting."""
    ctx = ctx or make_context(N, mode, q0)
    names = CASE_TERMS[case]
    eng = CalculusEngine(ctx.family, ctx.convention, ctx.sphere, names)
    proj = None
    if case != "free":
        proj = projection_for(case, eng.forms, published_relation(case, ctx.family))
    ech = Echelon()
    for row in _term_rows(eng, names, proj, N):
        ech.add(row)
        if ech.rank == len(names):
            break
    return ech.rank


def require_independent(N: int, mode: str = "sampled", q0=None, case: str = "free",
                        ctx: Context | None = None) -> int:
    r = ansatz_rank(N, mode, q0, case, ctx)
    n = len(CASE_TERMS[case])
    if r < n:
        raise IndependenceError(f"independence fails: ansatz rank {r} < {n} at N={N}")
    return r

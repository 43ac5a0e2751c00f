"""Solving the necessary conditions for the ansatz coefficients.

Linear stage: kl1..kl5 (and kl8 in the reduced settings) are linear in the
unknowns and are row reduced exactly.  Quadratic stage: kl6 and kl7 are
imposed on the resulting affine family; linear consequences are fed back
into the linear system and the family is re-parametrized, repeatedly.
Anything left over is handed to a Groebner basis for its dimension.

All columns are ansatz names, so every intermediate description of the
solution set reads directly in the coefficients.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import asdict, dataclass, field as dc_field

from ..algebra.convention import Convention
from ..algebra.resolve import resolve_convention
from ..algebra.sphere import build_sphere
from ..coeff import make_field
from ..linalg import AffineSolution, Echelon
from ..rmatrix import build_family
from .ansatz import (
    CASE_TERMS,
    FREE_PARAMETERS,
    PARAMETER_ALIASES,
    TERM_NAMES,
    published_coefficients,
    published_relation,
)
from .engine import CONDITION_ARITY, CalculusEngine
from .projection import Projection, ProjectionError, solve_relation_coefficients
from .tuples import tuple_stream

__all__ = ["SolveReport", "solve_case", "SolveSettings", "Context", "make_context", "CASES",
           "PUBLISHED_FOR_CASE", "condition_pforms", "pf_rows"]

CASES = ("free", "red1", "red2")
PUBLISHED_FOR_CASE = {"free": "gamma", "red1": "gamma-tilde", "red2": "gamma-tilde-tilde"}
LINEAR_CONDITIONS = ("kl1", "kl2", "kl3", "kl4", "kl5")
QUADRATIC_CONDITIONS = ("kl7", "kl6")


@dataclass
class SolveSettings:
    seed: int = 0
    patience: int = 40
    quad_patience: int = 12
    quad_budget: int = 400
    confirm_tuples: int = 6
    exhaustive_limit: int = 1296
    kl8_exhaustive_limit: int = 256
    printed_kl8: bool = False


@dataclass
class Context:
    """Field, R family, resolved convention and sphere for one (N, q)."""

    N: int
    field: object
    family: object
    convention: Convention
    sphere: object

    @property
    def F(self):
        return self.field


def make_context(N: int, mode: str = "sampled", q0=None, convention: Convention | None = None) -> Context:
    F = make_field(mode, q0)
    f = build_family(N, F)
    conv = convention if convention is not None else resolve_convention(f)
    return Context(N, F, f, conv, build_sphere(f, conv))


@dataclass
class SolveReport:
    case: str
    N: int
    mode: str
    convention: dict
    coefficients: dict
    solution_dim: int
    paper_match: dict
    relation: dict = dc_field(default_factory=dict)
    parameters: dict = dc_field(default_factory=dict)
    paper_in_solution_set: bool = False
    samples: list = dc_field(default_factory=list)
    samples_agree: bool = True
    stats: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        if not self.samples_agree:
            return False
        if self.solution_dim == 0:
            return all(self.paper_match.values())
        if self.N < 6:
            return self.paper_in_solution_set
        return False

    def to_json(self) -> dict:
        return asdict(self)


# rows ---------------------------------------------------------------------

def _col(mono: tuple):
    if not mono:
        return None
    return mono[0] if len(mono) == 1 else mono


def pf_rows(pf: dict) -> list:
    """One polynomial row per form coordinate: {column: scalar}."""
    coords: dict = {}
    for mono, form in pf.items():
        c = _col(mono)
        for k, v in form.items():
            coords.setdefault(k, {})[c] = v
    return list(coords.values())


def condition_pforms(eng: CalculusEngine, cond: str, idx: tuple, proj: Projection | None,
                     kl8_forms=None) -> list:
    if cond == "kl8":
        rel, extra = kl8_forms
        out = eng.residual_kl8(rel, idx, extra)
    else:
        out = eng.residual(cond, idx)
    if proj is not None:
        out = [proj.apply_pf(p) for p in out]
    return [p for p in out if p]


def _kl8_forms(case, proj: Projection, forms, printed: bool):
    if case == "red1":
        if printed:
            short = Projection(forms, {k: v for k, v in proj.coeffs.items() if k in ("A", "B")})
            return short.relation, ()
        return proj.relation, ()
    base = Projection(forms, {k: v for k, v in proj.coeffs.items() if k in ("A", "B")})
    return base.relation, (forms.H(),)


# polynomial helpers (columns: name, (name, name) or None) ------------------

def _poly_from_row(row: dict) -> dict:
    out = {}
    for c, v in row.items():
        if c is None:
            out[()] = v
        elif isinstance(c, tuple):
            out[c] = v
        else:
            out[(c,)] = v
    return out


def _poly_sub(poly: dict, expr: dict, one) -> dict:
    """Substitute name -> {None | name: scalar} into a polynomial."""
    out: dict = {}

    def lin(n):
        e = expr.get(n)
        if e is None:
            return {(n,): one}
        return {(() if k is None else (k,)): v for k, v in e.items()}

    for mono, c in poly.items():
        acc = {(): c}
        for n in mono:
            nxt: dict = {}
            for m1, v1 in acc.items():
                for m2, v2 in lin(n).items():
                    m = tuple(sorted(m1 + m2))
                    x = nxt.get(m, 0) + v1 * v2
                    if x:
                        nxt[m] = x
                    else:
                        nxt.pop(m, None)
            acc = nxt
        for m, v in acc.items():
            x = out.get(m, 0) + v
            if x:
                out[m] = x
            else:
                out.pop(m, None)
    return out


def _poly_row(poly: dict) -> dict:
    return {_col(m): v for m, v in poly.items()}


def _poly_eval(poly: dict, values: dict):
    total = 0
    for mono, c in poly.items():
        t = c
        for n in mono:
            t = t * values.get(n, 0)
        total = total + t
    return total


def _variety_dim(polys: list, params: list, F) -> int:
    """Dimension of the common zero set; -1 when empty."""
    import sympy

    if not polys:
        return len(params)
    syms = {p: sympy.Symbol(p) for p in params}
    qs = sympy.Symbol("q")

    def to_sym(v):
        return sympy.sympify(F.text(v).replace("^", "**"), locals={"q": qs})

    exprs = []
    for poly in polys:
        e = 0
        for mono, c in poly.items():
            t = to_sym(c)
            for n in mono:
                t = t * syms[n]
            e += t
        exprs.append(sympy.expand(e))
    gens = [syms[p] for p in params]
    dom = "QQ" if F.mode == "sampled" else "QQ(q)"
    G = sympy.groebner(exprs, *gens, order="grevlex", domain=dom)
    if list(G.exprs) == [1]:
        return -1
    leads = []
    for g in G.polys:
        lm = g.monoms(order="grevlex")[0]
        leads.append({i for i, e in enumerate(lm) if e})
    best = 0
    for r in range(len(gens), 0, -1):
        for U in itertools.combinations(range(len(gens)), r):
            Us = set(U)
            if not any(ld <= Us for ld in leads):
                return r
    return best


# the solver ---------------------------------------------------------------

class _Run:
    def __init__(self, ctx: Context, case: str, settings: SolveSettings, log=None):
        self.ctx = ctx
        self.case = case
        self.st = settings
        self.log = log or (lambda *a: None)
        self.names = list(CASE_TERMS[case])
        free = FREE_PARAMETERS[case]
        order = {n: i for i, n in enumerate(self.names)}
        self.priority = lambda c: (c not in free, -order.get(c, 0)) if not isinstance(c, tuple) else (2,)
        self.eng = CalculusEngine(ctx.family, ctx.convention, ctx.sphere, self.names)
        self.F = ctx.F
        self.stats: dict = {"tuples": {}, "rank": {}}
        self.proj = None
        self.relation = {}
        self.kl8 = None

    def relation_stage(self):
        if self.case == "free":
            return
        r = solve_relation_coefficients(self.eng.forms, self.case)
        self.proj = r["projection"]
        self.relation = dict(self.proj.coeffs)
        if self.case == "red2":
            # the H-part only serves the projection; the relation is A, B and H = 0
            self.stats["h_part"] = {"kappa": self.F.text(r["h_part"]["kappa"]),
                                    "mu": self.F.text(r["h_part"]["mu"])}
            self.relation = {k: self.relation[k] for k in ("A", "B")}
        self.stats["relation_dim"] = r["dim"]
        defects = self.proj.idempotence_defects()
        self.stats["projection_idempotent"] = not defects
        self.kl8 = _kl8_forms(self.case, self.proj, self.eng.forms, self.st.printed_kl8)

    def linear_stage(self, conditions=None) -> Echelon:
        ech = Echelon(self.priority)
        self.eng.unknowns()
        conds = conditions or list(LINEAR_CONDITIONS) + (["kl8"] if self.case != "free" else [])
        N = self.ctx.N
        for cond in conds:
            arity = CONDITION_ARITY[cond]
            idle = 0
            used = 0
            limit = self.st.kl8_exhaustive_limit if cond == "kl8" else self.st.exhaustive_limit
            exhaustive = N ** arity <= limit
            for tp, structured in tuple_stream(arity, N, self.st.seed, limit):
                used += 1
                grew = False
                for pf in condition_pforms(self.eng, cond, tp, self.proj, self.kl8):
                    for row in pf_rows(pf):
                        grew |= ech.add(row)
                idle = 0 if grew else idle + 1
                if not exhaustive and (cond == "kl8" or not structured) and idle >= self.st.patience:
                    break
            self.stats["tuples"][cond] = used
            self.stats["rank"][cond] = ech.rank
            self.log(f"{cond}: {used} tuples, rank {ech.rank}")
        return ech

    def quadratic_stage(self, ech: Echelon) -> tuple:
        """Returns (linear echelon, leftover polynomials)."""
        N, F = self.ctx.N, self.F
        sol = AffineSolution(ech, self.names, F.one)
        polys: list = []
        if ech.inconsistent:
            return ech, polys
        self.eng.affine(sol.expr)
        budget = self.st.quad_budget
        idle = 0
        confirm = 0
        used = {c: 0 for c in QUADRATIC_CONDITIONS}
        for cond, tp in self._quad_stream():
            if budget <= 0:
                break
            budget -= 1
            used[cond] += 1
            changed = False
            new_polys = []
            for pf in condition_pforms(self.eng, cond, tp, self.proj):
                for row in pf_rows(pf):
                    new_polys.append(_poly_from_row(row))
            if new_polys:
                changed = self._absorb(ech, polys, new_polys)
            if ech.inconsistent:
                break
            sol = AffineSolution(ech, self.names, F.one)
            if changed:
                self.eng.affine(sol.expr)
                self.log(f"{cond}{tp}: linear rank {ech.rank}, free {sol.free}, nonlinear {len(polys)}")
                idle = 0
                confirm = 0
            else:
                idle += 1
            if sol.dim == 0 and not polys:
                confirm += 1
                if confirm >= self.st.confirm_tuples:
                    break
            elif idle >= self.st.quad_patience * max(1, sol.dim):
                break
        self.stats["tuples"].update(used)
        self.stats["rank"]["quadratic"] = ech.rank
        return ech, polys

    def _absorb(self, ech: Echelon, polys: list, new_polys: list) -> bool:
        """Add polynomial rows; move linear consequences into ``ech``."""
        F = self.F
        sol = AffineSolution(ech, self.names, F.one)
        qe = Echelon(lambda c: (isinstance(c, tuple), str(c)))
        for p in polys:
            qe.add(_poly_row(p))
        rank0 = qe.rank
        for p in new_polys:
            qe.add(_poly_row(_poly_sub(p, sol.expr, F.one)))
        if qe.inconsistent:
            ech.inconsistent = True
            return True
        lin_rows = [r for piv, r in qe.rows.items() if not isinstance(piv, tuple)]
        grew = False
        for r in lin_rows:
            grew |= ech.add(r)
        if grew:
            sol = AffineSolution(ech, self.names, F.one)
            rest = [_poly_sub(_poly_from_row(r), sol.expr, F.one)
                    for piv, r in qe.rows.items() if isinstance(piv, tuple)]
            polys[:] = []
            self._absorb(ech, polys, [p for p in rest if p])
            return True
        polys[:] = [_poly_from_row(r) for piv, r in qe.rows.items() if isinstance(piv, tuple)]
        return qe.rank != rank0

    def _quad_stream(self):
        """kl7 and kl6 tuples sharing a few leading (i,j) pairs, so that the
        cached products dx_ij x_st x_uv are reused."""
        import random

        N = self.ctx.N
        rng = random.Random(self.st.seed * 7919 + N)
        heads = [(1, N), (N, 1), (1, 1), (N, N), (1, 2), (2, 1)]
        heads = [h for h in heads if max(h) <= N]
        heads += [(i, j) for i in range(1, N + 1) for j in range(1, N + 1) if (i, j) not in heads]
        seen = set()
        for round_ in itertools.count():
            if round_ > 50 * N * N:
                return
            h = heads[(round_ // 8) % len(heads)]
            if round_ % 2 == 0:
                t = ("kl7", h + tuple(rng.randint(1, N) for _ in range(2)))
            else:
                t = ("kl6", h + tuple(rng.randint(1, N) for _ in range(4)))
            if t in seen:
                continue
            seen.add(t)
            yield t


def _text_affine(expr: dict, F, aliases: dict) -> str:
    parts = []
    const = expr.get(None, 0)
    for k, v in sorted(((k, v) for k, v in expr.items() if k is not None), key=lambda kv: kv[0]):
        parts.append(f"({F.text(v)})*{aliases.get(k, k)}")
    if const or not parts:
        parts.insert(0, F.text(const))
    return " + ".join(parts)


def _solve_one(ctx: Context, case: str, settings: SolveSettings, log=None) -> dict:
    run = _Run(ctx, case, settings, log)
    t0 = time.time()
    try:
        run.relation_stage()
    except ProjectionError as exc:
        # no consistent relation coefficients: nothing to solve
        run.stats["relation_error"] = str(exc)
        prel = published_relation(case, ctx.family)
        return {
            "run": run, "sol": None, "dim": -1, "polys": [], "values": None, "published": {},
            "inside": False, "relation": {}, "relation_match": {k: False for k in prel}, "pivots": [],
        }
    ech = run.linear_stage()
    lin_sol = AffineSolution(ech, run.names, ctx.F.one)
    run.stats["linear_free"] = list(lin_sol.free)
    ech, polys = run.quadratic_stage(ech)
    F = ctx.F
    sol = AffineSolution(ech, run.names, F.one)
    if ech.inconsistent:
        dim = -1
    elif polys:
        dim = _variety_dim(polys, sol.free, F)
    else:
        dim = sol.dim
    pub = published_coefficients(PUBLISHED_FOR_CASE[case], ctx.family)
    pub_vals = {n: pub.get(n) for n in run.names}
    # membership of the published point in the computed solution set
    inside = not ech.inconsistent
    if inside:
        at = sol.evaluate({p: pub_vals[p] for p in sol.free})
        inside = all(at[n] == pub_vals[n] for n in run.names)
        inside = inside and all(not _poly_eval(p, pub_vals) for p in polys)
    prel = published_relation(case, ctx.family)
    rel_match = {k: run.relation.get(k, 0) == v for k, v in prel.items()}
    values = sol.particular() if dim == 0 else None
    run.stats["seconds"] = round(time.time() - t0, 2)
    return {
        "run": run, "sol": sol, "dim": dim, "polys": polys, "values": values,
        "published": pub_vals, "inside": inside, "relation": run.relation,
        "relation_match": rel_match, "pivots": sorted(k for k in ech.rows if not isinstance(k, tuple)),
    }


def solve_case(case: str, N: int, mode: str = "sampled", qs=None, convention: Convention | None = None,
               settings: SolveSettings | None = None, log=None, contexts=None) -> SolveReport:
    """Solve the necessary conditions of one constraint setting.

    Never raises on an underdetermined system: the solution dimension is
    reported instead.  In sampled mode every q sample is solved separately
    and the pivot structure must agree.
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")
    settings = settings or SolveSettings()
    if contexts is None:
        if mode == "symbolic":
            contexts = [make_context(N, "symbolic", None, convention)]
        else:
            from gmpy2 import mpq

            qs = list(qs) if qs else [mpq(3, 2), mpq(2)]
            contexts = [make_context(N, "sampled", q0, convention) for q0 in qs]
    results = [_solve_one(ctx, case, settings, log) for ctx in contexts]
    first, ctx0 = results[0], contexts[0]
    F = ctx0.F
    aliases = PARAMETER_ALIASES[case]
    agree = all(r["dim"] == first["dim"] and r["pivots"] == first["pivots"] for r in results)
    coeffs: dict = {}
    match: dict = {}
    names = list(CASE_TERMS[case])
    for n in names:
        if first["dim"] == 0:
            coeffs[n] = F.text(first["values"][n])
            match[n] = all(r["values"][n] == r["published"][n] for r in results)
        else:
            coeffs[n] = _text_affine(first["sol"].expr[n], F, aliases) if first["dim"] > 0 else "none"
            match[n] = all(r["inside"] for r in results)
    for k, v in first["relation"].items():
        coeffs[k] = F.text(v)
    for k in first["relation_match"]:
        match[k] = all(r["relation_match"].get(k, False) for r in results)
    stats = dict(first["run"].stats)
    stats["nonlinear_rows"] = len(first["polys"])
    return SolveReport(
        case=case,
        N=N,
        mode=mode,
        convention={**ctx0.convention.as_dict(), "fingerprint": ctx0.convention.fingerprint()},
        coefficients=coeffs,
        solution_dim=first["dim"],
        paper_match=match,
        relation={k: F.text(v) for k, v in first["relation"].items()},
        parameters={p: aliases.get(p, p) for p in first["sol"].free} if first["dim"] > 0 else {},
        paper_in_solution_set=all(r["inside"] for r in results),
        samples=[c.F.label for c in contexts],
        samples_agree=agree,
        stats=stats,
    )

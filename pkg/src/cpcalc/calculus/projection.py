"""Left-module relations of the reduced settings as projections on one-forms.

The relation family dx_ij = A Y_ij + B T_ij + C x_ij H + D delta_ij q^(2j) H
(plus H = 0 in the most reduced setting) generates a submodule K of the
free module.  A left-linear idempotent E with kernel K decides equality in
the quotient: u == v iff E(u - v) == 0.
"""
from __future__ import annotations

import itertools

from ..algebra.forms import form_add
from ..algebra.sphere import poly_add
from ..linalg import AffineSolution, Echelon

__all__ = ["Projection", "solve_relation_coefficients", "ProjectionError", "h_part", "projection_for",
           "relation_defects"]


class ProjectionError(ValueError):
    pass


class Projection:
    """E(dx_ij) = A Y_ij + B T_ij + C x_ij H + D delta_ij q^(w j) H."""

    def __init__(self, forms, coeffs: dict):
        self.forms = forms
        self.coeffs = dict(coeffs)
        self._img: dict = {}
        self._mimg: dict = {}

    def formula(self, i, j) -> dict:
        fm, F = self.forms, self.forms.F
        c = self.coeffs
        out: dict = {}
        if c.get("A"):
            form_add(out, fm.Y(i, j), c["A"])
        if c.get("B"):
            form_add(out, fm.T(i, j), c["B"])
        if c.get("C"):
            form_add(out, fm.x_times(((i, j),), fm.H()), c["C"])
        if c.get("D") and i == j:
            form_add(out, fm.H(), c["D"] * F.qpow(fm.conv.delta * j))
        return out

    def image(self, uv) -> dict:
        hit = self._img.get(uv)
        if hit is None:
            hit = self._img[uv] = self.formula(*uv)
        return hit

    def _mono_image(self, uv, m) -> dict:
        key = (uv, m)
        hit = self._mimg.get(key)
        if hit is None:
            hit = self._mimg[key] = self.forms.left_mul({m: self.forms.F.one}, self.image(uv))
        return hit

    def apply(self, form: dict) -> dict:
        out: dict = {}
        for (uv, m), c in form.items():
            for k, v in self._mono_image(uv, m).items():
                x = out.get(k, 0) + c * v
                if x:
                    out[k] = x
                else:
                    out.pop(k, None)
        return out

    def apply_pf(self, pf: dict) -> dict:
        out = {}
        for k, form in pf.items():
            img = self.apply(form)
            if img:
                out[k] = img
        return out

    def relation(self, i, j) -> dict:
        """dx_ij - formula_ij, an element of the kernel."""
        out = dict(self.forms.dx(i, j))
        form_add(out, self.formula(i, j), -1)
        return out

    def idempotence_defects(self) -> list:
        N = self.forms.N
        bad = []
        for uv in itertools.product(range(1, N + 1), repeat=2):
            if uv == (N, N):
                continue
            img = self.image(uv)
            d = dict(self.apply(img))
            form_add(d, img, -1)
            if d:
                bad.append(uv)
        return bad


def _rows(lin: dict) -> list:
    """lin: unknown -> form (None = constant); one row per form key."""
    keys = set()
    for form in lin.values():
        keys |= set(form)
    rows = []
    for k in keys:
        r = {u: form[k] for u, form in lin.items() if k in form}
        if r:
            rows.append(r)
    return rows


def _lin_add(out: dict, u, form: dict, s=1):
    tgt = out.setdefault(u, {})
    form_add(tgt, form, s)


def solve_relation_coefficients(forms, case: str, tuples=None) -> dict:
    """Solve the consistency equations for the relation coefficients.

    red1: E(Y_ik) = Y_ik, E(T_ik) = T_ik and sum_i formula_ii = 0.
    red2: the same modulo the submodule generated by H, then E(H) = 0 fixes
    the H-part of the projection.
    Returns {"values", "dim", "projection"}.
    """
    F, N = forms.F, forms.N
    wL = forms.conv.sum_left
    H = forms.H()
    pairs = list(tuples) if tuples is not None else list(itertools.product(range(1, N + 1), repeat=2))
    names = ["A", "B", "C", "D"] if case == "red1" else ["A", "B"]
    basis_forms = {
        "A": lambda i, j: forms.Y(i, j),
        "B": lambda i, j: forms.T(i, j),
        "C": lambda i, j: forms.x_times(((i, j),), H),
        "D": lambda i, j: ({k: v * F.qpow(forms.conv.delta * j) for k, v in H.items()} if i == j else {}),
    }
    ech = Echelon(priority=lambda u: (isinstance(u, str) and u in names, str(u)))
    hwords = [()] + [((s, t),) for s in range(1, N + 1) for t in range(1, N + 1)]
    for tag, target in (("Y", forms.Y), ("T", forms.T)):
        for i, k in pairs:
            lin: dict = {}
            # E(target_ik) with the relation substituted for every dx
            for (uv, m), c in target(i, k).items():
                for n in names:
                    _lin_add(lin, n, forms.left_mul({m: c}, basis_forms[n](*uv)))
            _lin_add(lin, None, target(i, k), -1)
            if case == "red2":
                for w in hwords:
                    _lin_add(lin, (tag, i, k, w), forms.x_times(w, H))
            for r in _rows(lin):
                ech.add(r)
    lin = {}
    for i in range(1, N + 1):
        for n in names:
            _lin_add(lin, n, basis_forms[n](i, i))
    if case == "red2":
        for w in hwords:
            _lin_add(lin, ("trace", w), forms.x_times(w, H))
    for r in _rows(lin):
        ech.add(r)
    if ech.inconsistent:
        raise ProjectionError("relation coefficients: inconsistent system")
    sol = AffineSolution(ech, names, F.one)
    vals = sol.particular()
    determined = [n for n in names if set(sol.expr[n]) <= {None}]
    out = {"values": vals, "dim": len([n for n in names if n not in determined]), "determined": determined}
    if case == "red1":
        out["projection"] = Projection(forms, vals)
        return out
    kv, kdim = h_part(forms, vals["A"], vals["B"])
    out["h_part"] = kv
    out["h_part_dim"] = kdim
    out["projection"] = Projection(forms, {"A": vals["A"], "B": vals["B"], "C": kv["kappa"], "D": kv["mu"]})
    return out


def h_part(forms, A, B) -> tuple:
    """kappa, mu with E = A Y + B T + kappa x H + mu delta H killing H and
    the trace of the differentials; returns (values, solution dimension)."""
    F, N = forms.F, forms.N
    H = forms.H()
    k_ech = Echelon(priority=lambda u: (u in ("kappa", "mu"), str(u)))
    P0 = Projection(forms, {"A": A, "B": B})
    PC = Projection(forms, {"C": F.one})
    PD = Projection(forms, {"D": F.one})
    lin: dict = {}
    _lin_add(lin, None, P0.apply(H))
    _lin_add(lin, "kappa", PC.apply(H))
    _lin_add(lin, "mu", PD.apply(H))
    for r in _rows(lin):
        k_ech.add(r)
    lin = {}
    for i in range(1, N + 1):
        _lin_add(lin, None, P0.formula(i, i))
        _lin_add(lin, "kappa", PC.formula(i, i))
        _lin_add(lin, "mu", PD.formula(i, i))
    for r in _rows(lin):
        k_ech.add(r)
    if k_ech.inconsistent:
        raise ProjectionError("relation coefficients: no projection kills H")
    ks = AffineSolution(k_ech, ["kappa", "mu"], F.one)
    return ks.particular(), ks.dim


def projection_for(case: str, forms, relation: dict) -> Projection:
    """Projection of a setting with given relation coefficients."""
    if case == "free":
        return None
    if case == "red1":
        return Projection(forms, {k: relation[k] for k in ("A", "B", "C", "D")})
    kv, _ = h_part(forms, relation["A"], relation["B"])
    return Projection(forms, {"A": relation["A"], "B": relation["B"], "C": kv["kappa"], "D": kv["mu"]})


def relation_defects(proj: Projection, case: str) -> list:
    """Consistency of the relation family: E is idempotent and kills the
    trace of the differentials; in the first setting it fixes Y and T, in
    the H = 0 setting it kills H."""
    forms = proj.forms
    N = forms.N
    bad = []
    # with H in the kernel, Y and T are only fixed modulo the kernel, which
    # idempotence already covers
    pairs = itertools.product(range(1, N + 1), repeat=2) if case == "red1" else ()
    for i, k in pairs:
        for tag, g in (("Y", forms.Y(i, k)), ("T", forms.T(i, k))):
            d = dict(proj.apply(g))
            form_add(d, g, -1)
            if d:
                bad.append((tag, i, k))
    tr: dict = {}
    for i in range(1, N + 1):
        form_add(tr, proj.formula(i, i))
    if tr:
        bad.append(("trace",))
    if case == "red2" and proj.apply(forms.H()):
        bad.append(("H",))
    if proj.idempotence_defects():
        bad.append(("idempotence",))
    return bad

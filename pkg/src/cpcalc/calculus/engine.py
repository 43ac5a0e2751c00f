"""Evaluation of dx_ij . x_kl and the necessary conditions kl1..kl8.

A *PForm* is a one-form whose coefficients are polynomials in unknowns:
``{monomial: form}`` where a monomial is a sorted tuple of unknown names
(``()`` for the constant part).  With concrete coefficients only the ``()``
key occurs; during solving keys of degree one and two appear.
"""
from __future__ import annotations

from ..algebra.forms import FormSpace, form_add
from ..algebra.sphere import build_sphere, poly_add
from .ansatz import TERM_NAMES, term_tensors

__all__ = ["CalculusEngine", "pf_add", "pf_scale", "mono_mul", "CONDITION_ARITY", "CONDITIONS"]

CONDITION_ARITY = {"kl1": 2, "kl2": 2, "kl3": 2, "kl4": 4, "kl5": 4, "kl6": 6, "kl7": 4, "kl8": 4}
CONDITIONS = tuple(CONDITION_ARITY)


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(sorted(a + b))


def pf_add(out: dict, pf: dict, s=1) -> dict:
    for k, form in pf.items():
        tgt = out.setdefault(k, {})
        form_add(tgt, form, s)
        if not tgt:
            del out[k]
    return out


def pf_scale(pf: dict, s) -> dict:
    if not s:
        return {}
    return {k: {kk: s * v for kk, v in form.items()} for k, form in pf.items()}


def _by_dx(form: dict) -> dict:
    out: dict = {}
    for (uv, m), c in form.items():
        out.setdefault(uv, {})[m] = c
    return out


class CalculusEngine:
    """Rules dx_ij . x_kl for a coefficient map, plus condition residuals.

    ``coeffs`` maps each ansatz name to a polynomial ``{monomial: scalar}``;
    see :meth:`concrete`, :meth:`unknowns` and :meth:`affine` for the usual
    shapes.
    """

    def __init__(self, f, conv, sphere=None, names=TERM_NAMES):
        self.f = f
        self.conv = conv
        self.N = f.N
        self.F = f.field
        self.names = tuple(names)
        self.forms = FormSpace(sphere or build_sphere(f, conv), f, conv)
        self.S = self.forms.S
        self._index = {}
        for name, (T, nw) in term_tensors(f, conv, self.names).items():
            idx: dict = {}
            for key, v in T.entries.items():
                idx.setdefault(key[2 * nw:], []).append((key[: 2 * nw], v))
            self._index[name] = (idx, nw)
        self._term_cache: dict = {}
        self.coeffs: dict = {}
        self._rule_cache: dict = {}
        self._xx_cache: dict = {}
        self._rels = None

    # coefficient maps
    def concrete(self, values: dict) -> "CalculusEngine":
        self.set_coeffs({n: {(): v} for n, v in values.items() if v})
        return self

    def unknowns(self, names=None) -> "CalculusEngine":
        self.set_coeffs({n: {(n,): self.F.one} for n in (names or self.names)})
        return self

    def affine(self, exprs: dict) -> "CalculusEngine":
        """``exprs``: name -> {None or parameter: scalar}."""
        co = {}
        for n, e in exprs.items():
            p = {((() if k is None else (k,))): v for k, v in e.items() if v}
            if p:
                co[n] = p
        self.set_coeffs(co)
        return self

    def set_coeffs(self, coeffs: dict) -> None:
        unknown = set(coeffs) - set(self.names)
        if unknown:
            raise ValueError(f"coefficients outside the active ansatz: {sorted(unknown)}")
        self.coeffs = coeffs
        self._rule_cache = {}
        self._xx_cache = {}

    # building blocks
    def term_form(self, name: str, ijkl: tuple) -> dict:
        key = (name, ijkl)
        hit = self._term_cache.get(key)
        if hit is None:
            idx, nw = self._index[name]
            ents = []
            for w, v in idx.get(ijkl, ()):
                pairs = tuple((w[2 * n], w[2 * n + 1]) for n in range(nw - 1))
                ents.append((pairs, (w[-2], w[-1]), v))
            hit = self._term_cache[key] = self.forms.from_entries(ents)
        return hit

    def rule(self, ijkl: tuple) -> dict:
        """dx_ij . x_kl as a PForm."""
        ijkl = tuple(ijkl)
        hit = self._rule_cache.get(ijkl)
        if hit is not None:
            return hit
        out: dict = {}
        for name, poly in self.coeffs.items():
            tf = self.term_form(name, ijkl)
            if not tf:
                continue
            for mono, c in poly.items():
                pf_add(out, {mono: tf}, c)
        self._rule_cache[ijkl] = out
        return out

    def const(self, form: dict) -> dict:
        return {(): form} if form else {}

    def x_dx(self, i, j, k, l) -> dict:
        return self.const(self.forms.x_times(((i, j),), self.forms.dx(k, l)))

    def right_x(self, pf: dict, kl: tuple) -> dict:
        """(PForm) . x_kl, expanding each m dx_uv . x_kl through the rule."""
        out: dict = {}
        lm = self.forms.left_mul
        for mono, form in pf.items():
            for uv, poly in _by_dx(form).items():
                r = self.rule(uv + tuple(kl))
                for mono2, f2 in r.items():
                    pf_add(out, {mono_mul(mono, mono2): lm(poly, f2)})
        return out

    def dx_x_x(self, ijst: tuple, uv: tuple) -> dict:
        """dx_ij . x_st . x_uv, cached per coefficient map."""
        key = (tuple(ijst), tuple(uv))
        hit = self._xx_cache.get(key)
        if hit is None:
            hit = self._xx_cache[key] = self.right_x(self.rule(ijst), uv)
        return hit

    # conditions
    def residual(self, cond: str, idx: tuple) -> list:
        """Residual PForms of one condition at one index tuple."""
        F, N, conv = self.F, self.N, self.conv
        rng = range(1, N + 1)
        fm = self.forms
        if cond == "kl1":
            j, k = idx
            out: dict = {}
            for i in rng:
                pf_add(out, self.rule((i, i, j, k)), F.qpow(conv.sum_right * i))
            return [out]
        if cond == "kl2":
            i, j = idx
            out = {}
            for k in rng:
                pf_add(out, self.rule((i, j, k, k)), F.qpow(conv.sum_right * k))
            pf_add(out, self.const(fm.dx(i, j)), -1)
            return [out]
        if cond == "kl3":
            i, k = idx
            out = {}
            for j in rng:
                w = F.qpow(conv.sum_left * j)
                pf_add(out, self.x_dx(i, j, j, k), w)
                pf_add(out, self.rule((i, j, j, k)), w)
            pf_add(out, self.const(fm.dx(i, k)), -F.qpow(conv.implied_factor))
            return [out]
        if cond in ("kl4", "kl5"):
            T, lam = (self.f.RCPcm, F.q) if cond == "kl4" else (self.f.RCP, 1 / F.q)
            out = {}
            pf_add(out, self.rule(idx))
            pf_add(out, self.x_dx(*idx))
            for stuv, v in self._by_lower(T).get(tuple(idx), ()):
                pf_add(out, self.rule(stuv), -lam * v)
                pf_add(out, self.x_dx(*stuv), -lam * v)
            return [out]
        if cond == "kl6":
            i, j, k, l, m, n = idx
            res = []
            for T, lam in ((self.f.RCPm, 1 / F.q), (self.f.RCPc, F.q)):
                out = {}
                for stuv, v in self._by_lower(T).get((k, l, m, n), ()):
                    s, t, u, w = stuv
                    pf_add(out, self.dx_x_x((i, j, s, t), (u, w)), v)
                pf_add(out, self.dx_x_x((i, j, k, l), (m, n)), -lam)
                res.append(out)
            return res
        if cond == "kl7":
            i, j, k, l = idx
            out = {}
            for m in rng:
                pf_add(out, self.dx_x_x((i, j, k, m), (m, l)), F.qpow(conv.sum_left * m))
            pf_add(out, self.rule(idx), -F.qpow(conv.implied_factor))
            return [out]
        if cond == "kl8":
            raise ValueError("kl8 needs a left-module relation; use residual_kl8")
        raise ValueError(f"unknown condition {cond!r}")

    def residual_kl8(self, relation_form, idx: tuple, extra_forms=()) -> list:
        """(relation_ij) . x_kl for the relation form at (i,j), plus any
        additional relation forms (e.g. H) multiplied by x_kl."""
        i, j, k, l = idx
        out = [self.right_x(self.const(relation_form(i, j)), (k, l))]
        for g in extra_forms:
            out.append(self.right_x(self.const(g), (k, l)))
        return out

    def _by_lower(self, T) -> dict:
        key = id(T)
        if self._rels is None:
            self._rels = {}
        hit = self._rels.get(key)
        if hit is None:
            hit = {}
            for k, v in T.entries.items():
                hit.setdefault(k[4:], []).append((k[:4], v))
            self._rels[key] = hit
        return hit


"""Normal forms on the quantum sphere and the embedding x_ij -> z_i z*_j.

Monomials are stored as ``z*^b z^a`` (both factors in increasing index
order), encoded as one tuple ``b + a`` of 2N exponents.  The unit relation
is used to eliminate ``z*_1 z_1``, so normal monomials never carry both.

The commutation rules are parameterized by :class:`SphereRelations`;
:func:`build_sphere` decides the parameters by testing candidates against
the projective-space relations instead of taking them as input.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

__all__ = [
    "SphereRelations",
    "Sphere",
    "SphereError",
    "build_sphere",
    "hecke_zz_exponent",
    "poly_add",
]


class SphereError(ValueError):
    pass


@dataclass(frozen=True)
class SphereRelations:
    """Commutation data of the sphere generators.

    zz:     z_i z_j = q^zz z_j z_i for i < j
    ss:     z*_j z*_s = q^ss z*_s z*_j for j > s
    mixed:  z_m z*_l = q^mixed z*_l z_m for m != l
    z_l z*_l = z*_l z_l + kappa * sum_{s in D(l)} q^(weight*(l-s)) z*_s z_s
    with kappa = kappa_sign * (q^2 - 1) * q^kappa_shift and D(l) the indices
    above l (direction=+1) or below l (direction=-1).
    """

    zz: int = 1
    ss: int = 1
    mixed: int = 1
    kappa_sign: int = -1
    kappa_shift: int = 0
    direction: int = 1
    weight: int = 2

    def as_dict(self) -> dict:
        return asdict(self)


def poly_add(out: dict, m, c) -> None:
    v = out.get(m, 0) + c
    if v:
        out[m] = v
    else:
        out.pop(m, None)


class Sphere:
    """Sphere algebra over a field context, with cached monomial products."""

    def __init__(self, N: int, field, rel: SphereRelations, trace_weight: int = 0):
        self.N = N
        self.F = field
        self.rel = rel
        self.one_mono = (0,) * (2 * N)
        self.one = field.one
        q2 = field.qpow(2)
        kappa = rel.kappa_sign * (q2 - 1) * field.qpow(rel.kappa_shift)
        self._corr = {}
        for l in range(1, N + 1):
            ss = range(l + 1, N + 1) if rel.direction > 0 else range(1, l)
            self._corr[l] = [(s, kappa * field.qpow(rel.weight * (l - s))) for s in ss]
        # trace sum_i q^(w i) z_i z*_i rewritten as sum_s c_s z*_s z_s
        c = {s: field.qpow(trace_weight * s) for s in range(1, N + 1)}
        for i in range(1, N + 1):
            for s, k in self._corr[i]:
                c[s] = c[s] + field.qpow(trace_weight * i) * k
        if not c[1]:
            raise SphereError("sphere relations unresolved: unit relation has no z*_1 z_1 term")
        inv = 1 / c[1]
        self._unit_const = inv
        self._unit_terms = [(s, -c[s] * inv) for s in range(2, N + 1) if c[s]]
        self._zstar: dict = {}
        self._letter: dict = {}
        self._mm: dict = {}
        self._xw: dict = {}
        self._sw: dict = {}
        self._um: dict = {}
        self.zero_half = (0,) * N

    def qp(self, n):
        return self.F.qpow(n)

    # z^a z*_l = sum c z*_s z^aa
    def _zpow_zstar(self, a: tuple, l: int) -> dict:
        key = (a, l)
        hit = self._zstar.get(key)
        if hit is not None:
            return hit
        if not any(a):
            out = {(l, a): self.one}
            self._zstar[key] = out
            return out
        N, rel = self.N, self.rel
        m = max(i for i in range(N) if a[i])
        a1 = list(a)
        a1[m] -= 1
        a1 = tuple(a1)
        out: dict = {}

        def times_z(d, mm, coef):
            for (s, aa), c in d.items():
                e = sum(aa[mm + 1:])
                aa2 = list(aa)
                aa2[mm] += 1
                poly_add(out, (s, tuple(aa2)), c * coef * self.qp(-rel.zz * e))

        if m != l - 1:
            times_z(self._zpow_zstar(a1, l), m, self.qp(rel.mixed))
        else:
            times_z(self._zpow_zstar(a1, l), m, self.one)
            for s, k in self._corr[l]:
                times_z(self._zpow_zstar(a1, s), s - 1, k)
        self._zstar[key] = out
        return out

    def _reduce_unit(self, d: dict) -> dict:
        N, rel = self.N, self.rel
        out: dict = {}
        stack = list(d.items())
        while stack:
            mono, c = stack.pop()
            b, a = mono[:N], mono[N:]
            if not (b[0] and a[0]):
                poly_add(out, mono, c)
                continue
            base = c * self.qp(-rel.ss * sum(b[1:]))
            b2 = list(b)
            b2[0] -= 1
            a2 = list(a)
            a2[0] -= 1
            stack.append((tuple(b2) + tuple(a2), base * self._unit_const))
            for s, k in self._unit_terms:
                f = self.qp(rel.ss * sum(b2[s:]) - rel.zz * sum(a2[: s - 1]))
                b3 = list(b2)
                b3[s - 1] += 1
                a3 = list(a2)
                a3[s - 1] += 1
                stack.append((tuple(b3) + tuple(a3), base * k * f))
        return out

    def mono_times_letter(self, mono: tuple, letter: tuple) -> dict:
        key = (mono, letter)
        hit = self._letter.get(key)
        if hit is not None:
            return hit
        N, rel = self.N, self.rel
        b, a = mono[:N], mono[N:]
        kind, idx = letter
        out: dict = {}
        if kind == "z":
            a2 = list(a)
            a2[idx - 1] += 1
            out[b + tuple(a2)] = self.qp(-rel.zz * sum(a[idx:]))
        else:
            for (s, aa), c in self._zpow_zstar(a, idx).items():
                b2 = list(b)
                b2[s - 1] += 1
                poly_add(out, tuple(b2) + aa, c * self.qp(rel.ss * sum(b[s:])))
        out = self._reduce_unit(out)
        self._letter[key] = out
        return out

    def letters(self, mono: tuple) -> list:
        N = self.N
        b, a = mono[:N], mono[N:]
        return [("s", i + 1) for i in range(N) for _ in range(b[i])] + [
            ("z", i + 1) for i in range(N) for _ in range(a[i])
        ]

    def mono_mul_letters(self, m1: tuple, m2: tuple) -> dict:
        """Product by appending the letters of m2 one at a time (slow path)."""
        d = {m1: self.one}
        for L in self.letters(m2):
            d = self.mul_letter(d, L)
        return d

    def _swap(self, a: tuple, b: tuple) -> dict:
        # z^a z*^b as sum of c z*^b' z^a', before unit reduction
        key = (a, b)
        hit = self._sw.get(key)
        if hit is not None:
            return hit
        N, ss = self.N, self.rel.ss
        d = {(self.zero_half, a): self.one}
        for l in range(1, N + 1):
            for _ in range(b[l - 1]):
                nd: dict = {}
                for (bb, aa), c in d.items():
                    for (s, a2), c2 in self._zpow_zstar(aa, l).items():
                        b2 = list(bb)
                        b2[s - 1] += 1
                        poly_add(nd, (tuple(b2), a2), c * c2 * self.qp(ss * sum(bb[s:])))
                d = nd
        self._sw[key] = d
        return d

    def _unit_mono(self, mono: tuple) -> dict:
        hit = self._um.get(mono)
        if hit is None:
            hit = self._um[mono] = self._reduce_unit({mono: self.one})
        return hit

    def mono_mul(self, m1: tuple, m2: tuple) -> dict:
        key = (m1, m2)
        hit = self._mm.get(key)
        if hit is not None:
            return hit
        N, rel = self.N, self.rel
        b1, a1 = m1[:N], m1[N:]
        b2, a2 = m2[:N], m2[N:]
        out: dict = {}
        for (bp, ap), c in self._swap(a1, b2).items():
            # z*^b1 z*^bp and z^ap z^a2 only q-commute into normal order
            e = 0
            acc = 0
            for s in range(N - 1, -1, -1):
                e += rel.ss * bp[s] * acc
                acc += b1[s]
            acc = 0
            for i in range(N - 1, -1, -1):
                e -= rel.zz * a2[i] * acc
                acc += ap[i]
            mono = tuple(x + y for x, y in zip(b1, bp)) + tuple(x + y for x, y in zip(ap, a2))
            f = c * self.qp(e)
            for m, v in self._unit_mono(mono).items():
                poly_add(out, m, f * v)
        self._mm[key] = out
        return out

    def mul_letter(self, d: dict, letter: tuple) -> dict:
        out: dict = {}
        for m, c in d.items():
            for m2, c2 in self.mono_times_letter(m, letter).items():
                poly_add(out, m2, c * c2)
        return out

    def mul(self, A: dict, B: dict) -> dict:
        out: dict = {}
        for m1, c1 in A.items():
            for m2, c2 in B.items():
                for m, c in self.mono_mul(m1, m2).items():
                    poly_add(out, m, c1 * c2 * c)
        return out

    def word(self, letters) -> dict:
        d = {self.one_mono: self.one}
        for L in letters:
            d = self.mul_letter(d, L)
        return d

    def x_word(self, pairs) -> dict:
        """Image of x_{i1 j1} ... x_{in jn}."""
        pairs = tuple(tuple(p) for p in pairs)
        hit = self._xw.get(pairs)
        if hit is not None:
            return hit
        if not pairs:
            out = {self.one_mono: self.one}
        else:
            i, j = pairs[-1]
            out = self.mul_letter(self.mul_letter(self.x_word(pairs[:-1]), ("z", i)), ("s", j))
        self._xw[pairs] = out
        return out

    def embed(self, elem: dict) -> dict:
        """Image of a projective-space element given as word -> coefficient."""
        out: dict = {}
        for w, c in elem.items():
            for m, v in self.x_word(w).items():
                poly_add(out, m, c * v)
        return out


def hecke_zz_exponent(f) -> int:
    """Exponent e with z_i z_j = q^e z_j z_i (i<j) on the q-eigenspace of R.

    R^{st}_{kl} z_s z_t = q z_k z_l is rewritten in ordered monomials for
    each sign choice; exactly one must make every relation vanish.
    """
    F, N = f.field, f.N
    good = []
    for e in (1, -1):
        ok = True
        for k, l in itertools.product(range(1, N + 1), repeat=2):
            acc: dict = {}
            for (s, t, kk, ll), v in f.R.entries.items():
                if (kk, ll) != (k, l):
                    continue
                a, b, c = _order(s, t, e, F)
                poly_add(acc, (a, b), v * c)
            a, b, c = _order(k, l, e, F)
            poly_add(acc, (a, b), -F.q * c)
            if acc:
                ok = False
                break
        if ok:
            good.append(e)
    if len(good) != 1:
        raise SphereError(f"sphere relations unresolved: Hecke eigenspace gives exponents {good}")
    return good[0]


def _order(s, t, e, F):
    # z_s z_t in increasing order: for s > t, z_t z_s = q^e z_s z_t so z_s z_t = q^-e z_t z_s
    if s <= t:
        return s, t, F.one
    return t, s, F.qpow(-e)


def _candidates(zz: int):
    for ss, mixed, ks, kshift, direction, weight in itertools.product(
        (1, -1), (1, -1), (-1, 1), (0, -2), (1, -1), (2, -2)
    ):
        yield SphereRelations(zz, ss, mixed, ks, kshift, direction, weight)


def sphere_residuals(f, rel: SphereRelations, cp_relations: list, trace_weight: int = 0) -> dict:
    """Images of the projective relations (trace relation shifted by the unit)."""
    try:
        S = Sphere(f.N, f.field, rel, trace_weight)
    except SphereError as exc:
        return {"construction": str(exc)}
    bad = {}
    for n, r in enumerate(cp_relations):
        img = S.embed(r)
        if img:
            bad[n] = len(img)
    return bad


def build_sphere(f, conv, cp_relations: list | None = None) -> Sphere:
    """Resolve the sphere commutation data and return the engine.

    The zz-sector comes from the Hecke eigenspace; the other parameters are
    searched over a finite candidate set and accepted when every relation of
    the projective space (including trace = 1) maps to zero.  Exactly one
    candidate must survive.
    """
    from .cp import build_cp_relations

    zz = hecke_zz_exponent(f)
    rels = cp_relations if cp_relations is not None else build_cp_relations(f, conv)
    survivors = []
    report = {}
    for rel in _candidates(zz):
        bad = sphere_residuals(f, rel, rels, conv.sum_right)
        report[rel] = bad
        if not bad:
            survivors.append(rel)
    if len(survivors) != 1:
        lines = [f"{r.as_dict()}: {len(b)} residuals" for r, b in report.items()]
        raise SphereError(
            f"sphere relations unresolved: {len(survivors)} surviving candidates\n" + "\n".join(lines)
        )
    return Sphere(f.N, f.field, survivors[0], conv.sum_right)

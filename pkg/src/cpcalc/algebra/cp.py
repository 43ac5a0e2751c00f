"""The projective space as a filtered quotient of the free algebra on x_ij.

Words are tuples of index pairs; an element is a dict word -> coefficient.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field

from ..linalg import Echelon

__all__ = [
    "build_cp_relations",
    "QuotientBasis",
    "quotient_basis",
    "normal_form",
    "word_product",
    "elem_add",
    "SliceTooLarge",
    "MAX_SLICE_ENTRIES",
]

MAX_SLICE_ENTRIES = 5_000_000


class SliceTooLarge(MemoryError):
    pass


def elem_add(out: dict, w, c) -> None:
    v = out.get(w, 0) + c
    if v:
        out[w] = v
    else:
        out.pop(w, None)


def word_product(u: tuple, e: dict, v: tuple) -> dict:
    return {u + w + v: c for w, c in e.items()}


def build_cp_relations(f, conv) -> list:
    """Quadratic relations for every (i,j,k,l), then the trace relation last.

    RCPm^{stuv}_{ijkl} x_st x_uv - q^-1 x_ij x_kl and the same with RCPc and
    q; trace: sum_i q^(w i) x_ii - 1.
    """
    F, N = f.field, f.N
    qi = 1 / F.q
    out = []
    for T, lam in ((f.RCPm, qi), (f.RCPc, F.q)):
        by: dict = {}
        for key, v in T.entries.items():
            by.setdefault(key[4:], []).append((key[:4], v))
        for ijkl in itertools.product(range(1, N + 1), repeat=4):
            e: dict = {}
            for (s, t, u, w), v in by.get(ijkl, []):
                elem_add(e, ((s, t), (u, w)), v)
            i, j, k, l = ijkl
            elem_add(e, ((i, j), (k, l)), -lam)
            out.append(e)
    tr: dict = {}
    for i in range(1, N + 1):
        elem_add(tr, ((i, i),), F.qpow(conv.sum_right * i))
    elem_add(tr, (), -F.one)
    out.append(tr)
    return out


def _word_key(w: tuple):
    return (len(w), w)


def _degree(e: dict) -> int:
    return max((len(w) for w in e), default=0)


@dataclass
class QuotientBasis:
    """Basis words of the degree <= k slice and the reduction of every other word."""

    N: int
    k: int
    words: list
    reduction: dict = dc_field(repr=False)  # pivot word -> {basis word: coeff}
    label: str = ""

    @property
    def dim(self) -> int:
        return len(self.words)

    @property
    def pivots(self) -> list:
        return sorted(self.reduction, key=_word_key)

    def to_json(self, text) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "label": self.label,
            "words": [list(map(list, w)) for w in self.words],
            "reduction": [
                [list(map(list, p)), [[list(map(list, w)), text(c)] for w, c in sorted(r.items(), key=lambda t: _word_key(t[0]))]]
                for p, r in sorted(self.reduction.items(), key=lambda t: _word_key(t[0]))
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, parse) -> "QuotientBasis":
        tw = lambda w: tuple(tuple(p) for p in w)
        red = {tw(p): {tw(w): parse(c) for w, c in r} for p, r in obj["reduction"]}
        return cls(obj["N"], obj["k"], [tw(w) for w in obj["words"]], red, obj.get("label", ""))

    def dumps(self, text) -> str:
        return json.dumps(self.to_json(text), sort_keys=True)


def quotient_basis(relations: list, k: int, N: int, label: str = "") -> QuotientBasis:
    """Row-reduce the degree <= k slice of the two-sided ideal.

    The slice is spanned by u * r * v for relations r and words u, v with
    total degree <= k.  Pivots are taken on the largest word in graded
    lexicographic order, so basis words are the smallest survivors.
    """
    if k > 3:
        raise ValueError("degree bound above 3 is not supported")
    gens = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]
    words_by_len = {n: list(itertools.product(gens, repeat=n)) for n in range(k + 1)}
    estimate = sum(
        len(r) * len(words_by_len[a]) * len(words_by_len[b])
        for r in relations
        for a in range(k + 1)
        for b in range(k + 1 - a)
        if a + b + _degree(r) <= k
    )
    if estimate > MAX_SLICE_ENTRIES:
        raise SliceTooLarge(f"ideal slice too large: about {estimate} nonzero entries (limit {MAX_SLICE_ENTRIES})")
    ech = Echelon(priority=_word_key)
    for r in relations:
        d = _degree(r)
        for a in range(k + 1 - d):
            for b in range(k + 1 - d - a):
                for u in words_by_len[a]:
                    for v in words_by_len[b]:
                        ech.add(word_product(u, r, v))
    reduction = {}
    for p, row in ech.rows.items():
        reduction[p] = {w: -c for w, c in row.items() if w != p}
    basis = [w for n in range(k + 1) for w in words_by_len[n] if w not in reduction]
    return QuotientBasis(N, k, basis, reduction, label)


def normal_form(e: dict, basis: QuotientBasis) -> dict:
    out: dict = {}
    for w, c in e.items():
        if len(w) > basis.k:
            raise ValueError(f"degree overflow: word of length {len(w)} above bound {basis.k}")
        r = basis.reduction.get(w)
        if r is None:
            elem_add(out, w, c)
        else:
            for w2, c2 in r.items():
                elem_add(out, w2, c * c2)
    return out

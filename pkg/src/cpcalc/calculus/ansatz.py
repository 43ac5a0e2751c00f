"""The 27-term ansatz for dx_ij . x_kl and the published coefficient sets.

Every term is a contraction recipe: operands drawn from the R-matrix family
and a few elementary tensors, with output axes (word pairs..., i, j, k, l).
The last word pair is the differential, the ones before it are x factors.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..algebra.forms import block_tensors
from ..tensor import ContractionPlan, Tensor, contract

__all__ = [
    "TERM_NAMES",
    "RED1_TERMS",
    "RED2_TERMS",
    "CASE_TERMS",
    "FREE_PARAMETERS",
    "Ansatz",
    "term_recipes",
    "term_tensors",
    "published_coefficients",
    "published_relation",
    "CALCULI",
]

TERM_NAMES = (
    "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9",
    "e1", "e2", "e3", "e4",
    "f1", "f2", "f3", "f4", "f5",
    "b1", "b2", "b3", "b4", "b5", "b6",
    "g1", "g2", "c",
)
RED2_TERMS = ("a5", "a6", "a7", "a8", "e1", "e2", "e3", "e4", "b1", "b2", "b3", "b4")
RED1_TERMS = (
    "a5", "a6", "a7", "a8", "a9", "f5", "e1", "e2", "e3", "e4",
    "b1", "b2", "b3", "b4", "b5", "b6", "g1", "g2", "c",
)
CASE_TERMS = {"free": TERM_NAMES, "red1": RED1_TERMS, "red2": RED2_TERMS}

# unknowns kept free (lowest pivot priority) so underdetermined reports
# read in the customary parameters
FREE_PARAMETERS = {
    "free": ("a4", "a5", "a6", "a9", "b1", "b3", "b5", "f1", "c"),
    "red1": ("a7", "a8", "a9", "b1", "b3", "b6", "c"),
    "red2": ("a5", "a6"),
}
PARAMETER_ALIASES = {
    "free": {"a4": "alpha", "a5": "beta", "a6": "gamma", "a9": "delta1", "b1": "delta2",
             "b3": "delta3", "b5": "epsilon", "f1": "zeta", "c": "c"},
    "red1": {n: n for n in ("a7", "a8", "a9", "b1", "b3", "b6", "c")},
    "red2": {"a5": "alpha", "a6": "beta"},
}

CALCULI = ("gamma", "gamma-tilde", "gamma-tilde-tilde")

_W1 = "pruv"
_W2 = "mnpruv"
_W3 = "mnyzpruv"


def term_recipes(conv) -> dict:
    """name -> (word labels, [(operand key, labels), ...])."""
    M = "RCPm" if conv.middle == "Rm" else "RCP"
    return {
        "a1": (_W1, [("D", "pi"), ("D", "rj"), ("D", "uk"), ("D", "vl")]),
        "a2": (_W1, [("RCPm", "pruvijkl")]),
        "a3": (_W1, [("RCPc", "pruvijkl")]),
        "a4": (_W1, [(M, "pruvwxyz"), ("RCPc", "wxyzijkl")]),
        "a5": (_W1, [("D", "jk"), ("Y", "pruvil")]),
        "a6": (_W1, [("D", "jk"), ("T", "pruvil")]),
        "a7": (_W1, [("Rr", "abjk"), ("RmK", "pcia"), ("Rc", "cvbl"), ("DL", "ru")]),
        "a8": (_W1, [("Rr", "prab"), ("Rrm", "uvbc"), ("RlX", "adij"), ("Rlm", "dckl")]),
        "a9": (_W1, [("D", "jk"), ("Dd", "il"), ("H", "pruv")]),
        "e1": (_W1, [("Dd", "ij"), ("Y", "pruvkl")]),
        "e2": (_W1, [("Dd", "ij"), ("T", "pruvkl")]),
        "e3": (_W1, [("Dd", "kl"), ("Y", "pruvij")]),
        "e4": (_W1, [("Dd", "kl"), ("T", "pruvij")]),
        "f1": ("uv", [("D", "jk"), ("D", "ui"), ("D", "vl")]),
        "f2": ("uv", [("Rr", "abjk"), ("RmK", "ucia"), ("Rc", "cvbl")]),
        "f3": ("uv", [("Dd", "ij"), ("D", "uk"), ("D", "vl")]),
        "f4": ("uv", [("Dd", "kl"), ("D", "ui"), ("D", "vj")]),
        "f5": (_W1, [("Dd", "ij"), ("Dd", "kl"), ("H", "pruv")]),
        "b1": (_W2, [("D", "mi"), ("D", "nj"), ("Y", "pruvkl")]),
        "b2": (_W2, [("RCPc", "mnstijkl"), ("Y", "pruvst")]),
        "b3": (_W2, [("D", "mi"), ("D", "nj"), ("T", "pruvkl")]),
        "b4": (_W2, [(M, "mnstijkl"), ("T", "pruvst")]),
        "b5": (_W2, [("D", "jk"), ("D", "mi"), ("D", "nl"), ("H", "pruv")]),
        "b6": (_W2, [("Rr", "abjk"), ("RmK", "mcia"), ("Rc", "cnbl"), ("H", "pruv")]),
        "g1": (_W2, [("Dd", "ij"), ("D", "mk"), ("D", "nl"), ("H", "pruv")]),
        "g2": (_W2, [("Dd", "kl"), ("D", "mi"), ("D", "nj"), ("H", "pruv")]),
        "c": (_W3, [("D", "mi"), ("D", "nj"), ("D", "yk"), ("D", "zl"), ("H", "pruv")]),
    }


def _operands(f, conv) -> dict:
    N, F = f.N, f.field
    blocks = block_tensors(f, conv)
    wdelta = lambda e: Tensor((N, N), {(a, a): F.qpow(e * a) for a in range(1, N + 1)}, check=False)
    return {
        "RCP": f.RCP, "RCPm": f.RCPm, "RCPc": f.RCPc, "RCPcm": f.RCPcm,
        "Rr": f.Rr, "Rc": f.Rc, "Rrm": f.Rrm, "Rlm": f.Rlm,
        "RmK": f.Rm.weight_axis(1, lambda c: F.qpow(conv.twist * c)),
        "RlX": f.Rl.weight_axis(1, lambda d: F.qpow(conv.crossing * d)),
        "Y": blocks["Y"], "T": blocks["T"], "H": blocks["H"],
        "D": blocks["delta"], "Dd": wdelta(conv.delta), "DL": wdelta(conv.sum_left),
    }


def term_tensors(f, conv, names=TERM_NAMES) -> dict:
    """name -> (Tensor with axes word + ijkl, number of word pairs)."""
    ops = _operands(f, conv)
    out = {}
    for name, (word, facs) in term_recipes(conv).items():
        if name not in names:
            continue
        plan = ContractionPlan.of([labs for _, labs in facs], word + "ijkl")
        out[name] = (contract([ops[k] for k, _ in facs], plan), len(word) // 2)
    return out


@dataclass
class Ansatz:
    """Coefficient assignment; names not listed are zero."""

    values: dict = dc_field(default_factory=dict)

    def get(self, name):
        return self.values.get(name, 0)

    def corrupted(self, name: str, new_value) -> "Ansatz":
        v = dict(self.values)
        v[name] = new_value
        return Ansatz(v)


def published_coefficients(calculus: str, f) -> Ansatz:
    F, N = f.field, f.N
    q = F.q
    k = f.consts
    if calculus == "gamma":
        return Ansatz({"a2": 1 / q, "a3": q, "a4": F.one, "b1": -F.one, "b2": -q, "b3": -q,
                       "b4": -F.one, "c": q * q + 1})
    if calculus == "gamma-tilde":
        si = k.s_i
        return Ansatz({
            "b4": F.qpow(-2), "b2": F.qpow(3),
            "b5": -F.qpow(2 * N + 2) / si, "b6": -F.qpow(-1) / si,
            "g1": -F.qpow(-2) / si, "c": -F.qpow(-2) * k.s_iv / si,
        })
    if calculus == "gamma-tilde-tilde":
        return Ansatz({"b4": F.qpow(-2), "b2": F.qpow(3)})
    raise ValueError(f"unknown calculus {calculus!r}")


def published_relation(case: str, f) -> dict:
    """Coefficients A, B, C, D of the left-module relation."""
    F = f.field
    k = f.consts
    if case == "red1":
        return {"A": F.qpow(2), "B": F.qpow(-1), "C": -k.s_ii / k.s_i, "D": -F.one / k.s_i}
    if case == "red2":
        return {"A": F.qpow(2), "B": F.qpow(-1)}
    return {}

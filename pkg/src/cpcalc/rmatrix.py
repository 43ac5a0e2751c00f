"""The braided R-matrix of SU_q(N), its index-permuted relatives and q-constants."""
from __future__ import annotations

from dataclasses import dataclass

from .coeff import SymbolicField
from .tensor import ContractionPlan, Tensor, contract, delta, identity

__all__ = [
    "RFamily",
    "QConstants",
    "build_R",
    "build_family",
    "perturb",
    "check_identities",
    "qconstants",
]


def build_R(N: int, field=None) -> Tensor:
    """R^{ij}_{kl}: 1 for i=l!=k=j, q on the diagonal, q - 1/q for i=k<j=l."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    F = field or SymbolicField()
    q = F.q
    gap = q - 1 / q
    out = {}
    for i in range(1, N + 1):
        out[(i, i, i, i)] = q
        for j in range(1, N + 1):
            if i != j:
                out[(i, j, j, i)] = F.one
            if i < j:
                out[(i, j, i, j)] = gap
    return Tensor([N] * 4, out, check=False)


def perturb(R: Tensor, idx=(1, 1, 1, 1), amount=1) -> Tensor:
    """Copy of ``R`` with one entry shifted (negative control)."""
    out = dict(R.entries)
    v = out.get(tuple(idx), 0) + amount
    if v:
        out[tuple(idx)] = v
    else:
        out.pop(tuple(idx), None)
    return Tensor(R.shape, out, check=False)


@dataclass(frozen=True)
class QConstants:
    s_plus: object
    s_i: object
    s_ii: object
    s_iii: object
    s_iv: object


def qconstants(N: int, field=None) -> QConstants:
    F = field or SymbolicField()
    s = F.zero
    for i in range(N):
        s = s + F.qpow(2 * i)
    si = s - 1
    sii = si - F.qpow(2)
    siii = sii - F.qpow(4)
    siv = siii - F.qpow(6)
    return QConstants(s, si, sii, siii, siv)


@dataclass
class RFamily:
    N: int
    field: object
    R: Tensor
    Rm: Tensor
    Rc: Tensor
    Rl: Tensor
    Rr: Tensor
    Rcm: Tensor
    Rlm: Tensor
    Rrm: Tensor
    RCP: Tensor
    RCPm: Tensor
    RCPc: Tensor
    RCPcm: Tensor
    consts: QConstants

    @property
    def mode(self) -> str:
        return self.field.mode


def _rl(T: Tensor, F) -> Tensor:
    # Xl^{ij}_{kl} = q^{2l-2i} T^{jl}_{ik}; entry T^{ab}_{cd} lands at i=c, j=a, k=d, l=b
    out = {}
    for (a, b, c, d), v in T.entries.items():
        out[(c, a, d, b)] = F.qpow(2 * b - 2 * c) * v
    return Tensor(T.shape, out, check=False)


def _rc(T: Tensor) -> Tensor:
    # Xc^{ij}_{kl} = T^{lk}_{ji}; entry T^{ab}_{cd} lands at i=d, j=c, k=b, l=a
    return Tensor(T.shape, {(d, c, b, a): v for (a, b, c, d), v in T.entries.items()}, check=False)


def _rr(T: Tensor) -> Tensor:
    # Xr^{ij}_{kl} = T^{ki}_{lj}; entry T^{ab}_{cd} lands at i=b, j=d, k=a, l=c
    return Tensor(T.shape, {(b, d, a, c): v for (a, b, c, d), v in T.entries.items()}, check=False)


_RCP_PLAN = ContractionPlan.of([("t", "u", "a", "b"), ("s", "a", "i", "c"), ("c", "b", "j", "k"), ("v", "l")],
                               "stuvijkl")
_RCPC_PLAN = ContractionPlan.of([("t", "u", "a", "b"), ("b", "v", "c", "l"), ("a", "c", "j", "k"), ("s", "i")],
                                "stuvijkl")


def build_family(N: int, field=None, R: Tensor | None = None) -> RFamily:
    """All twelve tensors.  Passing ``R`` rebuilds the family from a given matrix."""
    F = field or SymbolicField()
    if R is None:
        R = build_R(N, F)
    elif N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    gap = F.q - 1 / F.q
    Rm = R - identity(N, 4, F.one).scale(gap)
    Rc, Rl, Rr = _rc(R), _rl(R, F), _rr(R)
    Rcm, Rlm, Rrm = _rc(Rm), _rl(Rm, F), _rr(Rm)
    d = delta(N, F.one)
    RCP = contract([Rlm, R, Rr, d], _RCP_PLAN)
    RCPm = contract([Rlm, Rm, Rr, d], _RCP_PLAN)
    RCPc = contract([Rlm, Rc, Rr, d], _RCPC_PLAN)
    RCPcm = contract([Rlm, Rcm, Rr, d], _RCPC_PLAN)
    return RFamily(N, F, R, Rm, Rc, Rl, Rr, Rcm, Rlm, Rrm, RCP, RCPm, RCPc, RCPcm, qconstants(N, F))


def _matmul4(A: Tensor, B: Tensor) -> Tensor:
    return contract([A, B], ContractionPlan.of(["ijab", "abkl"], "ijkl"))


def _braid_sides(R: Tensor, N: int, one):
    d = delta(N, one)
    R12 = contract([R, d], ContractionPlan.of(["abde", "cf"], "abcdef"))
    R23 = contract([d, R], ContractionPlan.of(["ad", "bcef"], "abcdef"))
    prod = ContractionPlan.of(["abcghi", "ghidef"], "abcdef")
    lhs = contract([contract([R12, R23], prod), R12], prod)
    rhs = contract([contract([R23, R12], prod), R23], prod)
    return lhs, rhs


def check_identities(f: RFamily) -> list[dict]:
    """Inverse, Hecke and braid checks as machine-readable report rows."""
    F, N = f.field, f.N
    I = identity(N, 4, F.one)
    inv = _matmul4(f.R, f.Rm) == I and _matmul4(f.Rm, f.R) == I
    q = F.q
    hecke = _matmul4(f.R - I.scale(q), f.R + I.scale(1 / q)).nnz() == 0
    lhs, rhs = _braid_sides(f.R, N, F.one)
    rows = [
        ("inverse", inv),
        ("hecke", hecke),
        ("braid", lhs == rhs),
    ]
    return [{"identity": name, "N": N, "mode": F.label, "pass": bool(ok)} for name, ok in rows]

"""Sparse multi-index tensors with named-axis contraction.

Indices are 1-based.  A tensor stores only its nonzero entries, keyed by
index tuples.  Entry values are whatever scalar carrier the active field
uses (rationals or :class:`~cpcalc.coeff.QScalar`).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Tensor",
    "ContractionPlan",
    "ContractionError",
    "contract",
    "einsum",
    "as_matrix",
    "from_matrix",
    "identity",
    "delta",
    "TENSOR_FORMAT_VERSION",
]

TENSOR_FORMAT_VERSION = 1


class ContractionError(ValueError):
    pass


class Tensor:
    """Sparse tensor: ``shape`` plus a dict of nonzero entries."""

    __slots__ = ("shape", "entries")

    def __init__(self, shape: Sequence[int], entries: dict | None = None, *, check: bool = True):
        self.shape = tuple(int(d) for d in shape)
        entries = {} if entries is None else entries
        if check:
            clean = {}
            r = len(self.shape)
            for idx, v in entries.items():
                idx = tuple(int(i) for i in idx)
                if len(idx) != r or any(not 1 <= i <= d for i, d in zip(idx, self.shape)):
                    raise ContractionError(f"index {idx} outside shape {self.shape}")
                if v:
                    clean[idx] = v
            entries = clean
        self.entries = entries

    @classmethod
    def from_function(cls, shape: Sequence[int], fn) -> "Tensor":
        out = {}
        for idx in itertools.product(*(range(1, d + 1) for d in shape)):
            v = fn(*idx)
            if v:
                out[idx] = v
        return cls(shape, out, check=False)

    @property
    def rank(self) -> int:
        return len(self.shape)

    def nnz(self) -> int:
        return len(self.entries)

    def get(self, *idx):
        return self.entries.get(tuple(idx), 0)

    def __getitem__(self, idx):
        return self.entries.get(tuple(idx), 0)

    def items(self):
        return self.entries.items()

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, frozenset(self.entries.items())))

    def __add__(self, other: "Tensor") -> "Tensor":
        if self.shape != other.shape:
            raise ContractionError("contraction shape: cannot add tensors of different shape")
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Tensor(self.shape, out, check=False)

    def __neg__(self):
        return Tensor(self.shape, {k: -v for k, v in self.entries.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Tensor":
        if not c:
            return Tensor(self.shape)
        return Tensor(self.shape, {k: c * v for k, v in self.entries.items()}, check=False)

    def map_values(self, fn) -> "Tensor":
        out = {}
        for k, v in self.entries.items():
            w = fn(v)
            if w:
                out[k] = w
        return Tensor(self.shape, out, check=False)

    def permute(self, axes: Sequence[int]) -> "Tensor":
        """Reorder axes: new axis ``n`` is old axis ``axes[n]``."""
        axes = list(axes)
        if sorted(axes) != list(range(self.rank)):
            raise ContractionError("contraction shape: invalid axis permutation")
        shape = [self.shape[a] for a in axes]
        return Tensor(shape, {tuple(k[a] for a in axes): v for k, v in self.entries.items()}, check=False)

    def weight_axis(self, axis: int, fn) -> "Tensor":
        """Multiply every entry by ``fn(index along axis)``."""
        out = {}
        for k, v in self.entries.items():
            w = v * fn(k[axis])
            if w:
                out[k] = w
        return Tensor(self.shape, out, check=False)

    def __repr__(self):
        return f"Tensor(shape={self.shape}, nnz={len(self.entries)})"

    # serialization
    def to_json(self, text) -> dict:
        """Versioned envelope with sorted (index, value-text) triplets."""
        return {
            "format": "cpcalc.tensor",
            "version": TENSOR_FORMAT_VERSION,
            "shape": list(self.shape),
            "entries": [[list(k), text(self.entries[k])] for k in sorted(self.entries)],
        }

    @classmethod
    def from_json(cls, obj: dict, parse) -> "Tensor":
        if obj.get("format") != "cpcalc.tensor" or obj.get("version") != TENSOR_FORMAT_VERSION:
            raise ValueError("unsupported tensor envelope")
        return cls(obj["shape"], {tuple(k): parse(v) for k, v in obj["entries"]})

    def dumps(self, text) -> str:
        return json.dumps(self.to_json(text), sort_keys=True)


@dataclass(frozen=True)
class ContractionPlan:
    """Operand axis labels and output order for an Einstein summation."""

    inputs: tuple
    output: tuple

    @classmethod
    def parse(cls, spec: str) -> "ContractionPlan":
        """Parse ``"ab,bc->ac"`` (one character per label)."""
        if "->" not in spec:
            raise ContractionError("contraction shape: plan needs '->'")
        lhs, rhs = spec.replace(" ", "").split("->")
        return cls(tuple(tuple(p) for p in lhs.split(",")), tuple(rhs))

    @classmethod
    def of(cls, inputs: Iterable[Sequence], output: Sequence) -> "ContractionPlan":
        return cls(tuple(tuple(x) for x in inputs), tuple(output))

    @property
    def summed(self) -> frozenset:
        allowed = set(self.output)
        return frozenset(l for labs in self.inputs for l in labs if l not in allowed)

    def validate(self) -> None:
        counts: dict = {}
        for labs in self.inputs:
            if len(set(labs)) != len(labs):
                raise ContractionError("contraction shape: repeated label within one operand")
            for l in labs:
                counts[l] = counts.get(l, 0) + 1
        if len(set(self.output)) != len(self.output):
            raise ContractionError("contraction shape: repeated output label")
        for l in self.output:
            if counts.get(l) != 1:
                raise ContractionError(f"contraction shape: output label {l!r} must occur exactly once")
        for l, c in counts.items():
            if l not in self.output and c != 2:
                raise ContractionError(f"contraction shape: summed label {l!r} occurs {c} times")


def _pair(A: Tensor, la: list, B: Tensor, lb: list):
    shared = [l for l in la if l in lb]
    ia = [la.index(l) for l in shared]
    ib = [lb.index(l) for l in shared]
    ka = [n for n, l in enumerate(la) if l not in shared]
    kb = [n for n, l in enumerate(lb) if l not in shared]
    out_labels = [la[n] for n in ka] + [lb[n] for n in kb]
    shape = [A.shape[n] for n in ka] + [B.shape[n] for n in kb]
    index: dict = {}
    for key, v in B.entries.items():
        index.setdefault(tuple(key[n] for n in ib), []).append((tuple(key[n] for n in kb), v))
    res: dict = {}
    get = res.get
    for key, v in A.entries.items():
        rows = index.get(tuple(key[n] for n in ia))
        if not rows:
            continue
        fa = tuple(key[n] for n in ka)
        for fb, w in rows:
            k2 = fa + fb
            res[k2] = get(k2, 0) + v * w
    return Tensor(shape, {k: v for k, v in res.items() if v}, check=False), out_labels


def contract(operands: Sequence[Tensor], plan: ContractionPlan) -> Tensor:
    """Einstein summation over the labels not in ``plan.output``.

    Pairs are contracted greedily, always picking the connected pair with
    the smallest estimated result size.
    """
    plan.validate()
    if len(operands) != len(plan.inputs):
        raise ContractionError("contraction shape: operand count does not match plan")
    dims: dict = {}
    for t, labs in zip(operands, plan.inputs):
        if t.rank != len(labs):
            raise ContractionError(f"contraction shape: rank {t.rank} vs labels {labs}")
        for d, l in zip(t.shape, labs):
            if dims.setdefault(l, d) != d:
                raise ContractionError(f"contraction shape: dimension mismatch on label {l!r}")
    facs = [(t, list(l)) for t, l in zip(operands, plan.inputs)]
    while len(facs) > 1:
        best = None
        for x in range(len(facs)):
            for y in range(x + 1, len(facs)):
                shared = set(facs[x][1]) & set(facs[y][1])
                if not shared:
                    continue
                red = 1
                for l in shared:
                    red *= dims[l]
                cost = facs[x][0].nnz() * facs[y][0].nnz() / red
                if best is None or cost < best[0]:
                    best = (cost, x, y)
        if best is None:
            # only disconnected pieces remain: outer products, smallest first
            order = sorted(range(len(facs)), key=lambda n: facs[n][0].nnz())
            x, y = sorted(order[:2])
        else:
            _, x, y = best
        A, la = facs[x]
        B, lb = facs[y]
        C, lc = _pair(A, la, B, lb)
        facs = [f for n, f in enumerate(facs) if n not in (x, y)] + [(C, lc)]
    T, labs = facs[0]
    if list(labs) == list(plan.output):
        return T
    return T.permute([labs.index(l) for l in plan.output])


def einsum(spec: str, *operands: Tensor) -> Tensor:
    return contract(operands, ContractionPlan.parse(spec))


def _flat(idx: Sequence[int], dims: Sequence[int]) -> int:
    r = 0
    for i, d in zip(idx, dims):
        r = r * d + (i - 1)
    return r + 1


def _unflat(n: int, dims: Sequence[int]) -> tuple:
    n -= 1
    out = []
    for d in reversed(dims):
        out.append(n % d + 1)
        n //= d
    return tuple(reversed(out))


def as_matrix(t: Tensor, row_axes: Sequence[int], col_axes: Sequence[int]) -> Tensor:
    """Flatten to a 2-axis tensor; row/column multi-indices in lexicographic order."""
    row_axes, col_axes = list(row_axes), list(col_axes)
    if sorted(row_axes + col_axes) != list(range(t.rank)):
        raise ContractionError("contraction shape: row/column axes must partition the axes")
    rd = [t.shape[a] for a in row_axes]
    cd = [t.shape[a] for a in col_axes]
    nr = 1
    for d in rd:
        nr *= d
    nc = 1
    for d in cd:
        nc *= d
    out = {}
    for k, v in t.entries.items():
        out[(_flat([k[a] for a in row_axes], rd), _flat([k[a] for a in col_axes], cd))] = v
    return Tensor((nr, nc), out, check=False)


def from_matrix(m: Tensor, shape: Sequence[int], row_axes: Sequence[int], col_axes: Sequence[int]) -> Tensor:
    """Inverse of :func:`as_matrix`."""
    shape = list(shape)
    rd = [shape[a] for a in row_axes]
    cd = [shape[a] for a in col_axes]
    out = {}
    for (r, c), v in m.entries.items():
        idx = [0] * len(shape)
        for a, i in zip(row_axes, _unflat(r, rd)):
            idx[a] = i
        for a, i in zip(col_axes, _unflat(c, cd)):
            idx[a] = i
        out[tuple(idx)] = v
    return Tensor(shape, out, check=False)


def identity(N: int, rank: int, one=1) -> Tensor:
    """Identity on the N**(rank/2) space: delta between axis n and axis n + rank/2."""
    if rank % 2:
        raise ContractionError("contraction shape: identity needs an even rank")
    h = rank // 2
    out = {}
    for idx in itertools.product(range(1, N + 1), repeat=h):
        out[idx + idx] = one
    return Tensor([N] * rank, out, check=False)


def delta(N: int, one=1) -> Tensor:
    return identity(N, 2, one)

"""Left module of one-forms sum m_uv dx_uv over the projective space.

Coefficients m_uv live in the sphere normal form (the embedding is
injective), so a one-form is a dict ``((u, v), sphere monomial) -> scalar``.
The trace of the differentials vanishes, so dx_NN is always eliminated in
favour of the other diagonal differentials.
"""
from __future__ import annotations

from ..tensor import ContractionPlan, Tensor, contract
from .sphere import poly_add

__all__ = ["FormSpace", "block_tensors", "proportional", "form_add", "form_scale"]


def form_add(out: dict, other: dict, s=1) -> dict:
    for k, v in other.items():
        poly_add(out, k, s * v)
    return out


def form_scale(a: dict, s) -> dict:
    if not s:
        return {}
    return {k: s * v for k, v in a.items()}


def proportional(a: dict, b: dict):
    """Scalar c with a == c*b, or None.  Both zero gives 0."""
    if not b:
        return 0 if not a else None
    if set(a) != set(b):
        return None
    k0 = next(iter(b))
    c = a[k0] / b[k0]
    for k, v in b.items():
        if a[k] != c * v:
            return None
    return c


def _wdelta(N, field, e):
    return Tensor((N, N), {(a, a): field.qpow(e * a) for a in range(1, N + 1)}, check=False)


def block_tensors(f, conv) -> dict:
    """Coefficient tensors of the elementary one-forms.

    ``Y`` and ``T`` have axes (x-pair, dx-pair, i, j); ``H`` has axes
    (x-pair, dx-pair).
    """
    N, F = f.N, f.field
    one = F.one
    Y = {}
    H = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            H[(i, j, j, i)] = F.qpow(conv.invariant_form * j)
            for s in range(1, N + 1):
                Y[(i, s, s, j, i, j)] = F.qpow(conv.sum_left * s)
    T = contract(
        [f.Rlm, f.Rm, f.Rc],
        ContractionPlan.of([("t", "u", "b", "c"), ("s", "b", "i", "a"), ("c", "v", "a", "j")], "stuvij"),
    )
    return {
        "Y": Tensor([N] * 6, Y, check=False),
        "T": T,
        "H": Tensor([N] * 4, H, check=False),
        "delta": Tensor((N, N), {(a, a): one for a in range(1, N + 1)}, check=False),
        "wdelta": _wdelta(N, F, conv.delta),
    }


class FormSpace:
    """One-form arithmetic over a resolved sphere engine."""

    def __init__(self, sphere, f, conv):
        self.S = sphere
        self.f = f
        self.conv = conv
        self.N = f.N
        self.F = f.field
        self.blocks = block_tensors(f, conv)
        N, F = self.N, self.F
        # dx_NN = -sum_{i<N} q^(w (i-N)) dx_ii from the differentiated trace relation
        self._trace_elim = [((i, i), -F.qpow(conv.sum_right * (i - N))) for i in range(1, N)]
        self._slices: dict = {}
        self._cache: dict = {}

    # construction
    def add_term(self, out: dict, uv: tuple, mono: tuple, c) -> None:
        if uv == (self.N, self.N):
            for uv2, w in self._trace_elim:
                poly_add(out, (uv2, mono), c * w)
        else:
            poly_add(out, (uv, mono), c)

    def add_poly_dx(self, out: dict, poly: dict, uv: tuple, c=1) -> None:
        for m, v in poly.items():
            self.add_term(out, uv, m, c * v)

    def dx(self, i, j) -> dict:
        out: dict = {}
        self.add_term(out, (i, j), self.S.one_mono, self.F.one)
        return out

    def from_entries(self, entries) -> dict:
        """``entries``: iterable of (x-pairs, dx-pair, coeff)."""
        out: dict = {}
        for pairs, uv, c in entries:
            self.add_poly_dx(out, self.S.x_word(pairs), uv, c)
        return out

    def _slice(self, name: str, nfree: int):
        hit = self._slices.get(name)
        if hit is None:
            hit = {}
            for key, v in self.blocks[name].entries.items():
                hit.setdefault(key[len(key) - nfree:], []).append((key[: len(key) - nfree], v))
            self._slices[name] = hit
        return hit

    def _block(self, name, ij):
        key = (name, ij)
        hit = self._cache.get(key)
        if hit is None:
            ents = []
            for w, v in self._slice(name, len(ij)).get(ij, []):
                ents.append((((w[0], w[1]),), (w[2], w[3]), v))
            hit = self._cache[key] = self.from_entries(ents)
        return hit

    def Y(self, i, j) -> dict:
        return self._block("Y", (i, j))

    def T(self, i, j) -> dict:
        return self._block("T", (i, j))

    def H(self) -> dict:
        return self._block("H", ())

    # arithmetic
    def left_mul(self, poly: dict, form: dict) -> dict:
        out: dict = {}
        mm = self.S.mono_mul
        for (uv, m), c in form.items():
            for m1, c1 in poly.items():
                for m2, c2 in mm(m1, m).items():
                    poly_add(out, (uv, m2), c * c1 * c2)
        return out

    def x_times(self, pairs, form: dict) -> dict:
        return self.left_mul(self.S.x_word(pairs), form)

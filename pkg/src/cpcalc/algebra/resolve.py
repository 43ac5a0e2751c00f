"""Deciding the weights of the abbreviated sums by consistency checks."""
from __future__ import annotations

import itertools

from ..repdecomp import dim, pi
from .convention import Convention, ConventionError
from .cp import build_cp_relations, normal_form, quotient_basis
from .forms import FormSpace, form_add, proportional
from .sphere import SphereError, build_sphere

__all__ = ["resolve_convention", "implied_relation_factor", "harmonic_dim", "CANDIDATE_EXPONENTS"]

CANDIDATE_EXPONENTS = (-2, 0, 2)


def harmonic_dim(N: int, k: int) -> int:
    return sum(dim(pi(m, N), N) for m in range(k + 1))


def implied_relation_factor(f, basis, sum_left: int):
    """lambda with sum_j q^(w j) x_ij x_jk = lambda x_ik modulo the ideal, or None."""
    F, N = f.field, f.N
    lam = None
    for i, k in itertools.product(range(1, N + 1), repeat=2):
        e = {((i, j), (j, k)): F.qpow(sum_left * j) for j in range(1, N + 1)}
        lhs = normal_form(e, basis)
        rhs = normal_form({((i, k),): F.one}, basis)
        c = proportional(lhs, rhs)
        if c is None or (lam is not None and c != lam):
            return None
        lam = c
    return lam


def _pattern_check(forms: FormSpace, wL: int, wd: int) -> dict:
    """Expected factors when sum_j q^(wL j) x_ij (.)_jk is applied to each
    building block: Y -> q^-2 Y_ik, T -> q^-1 x_ik H, xH -> q^-2 x_ik H,
    delta-weighted H -> x_ik H."""
    F, N, S = forms.F, forms.N, forms.S
    H = forms.H()
    found = {"Y": set(), "T": set(), "xH": set(), "dH": set()}
    for i, k in itertools.product(range(1, N + 1), repeat=2):
        xH = forms.x_times(((i, k),), H)
        accY: dict = {}
        accT: dict = {}
        accX: dict = {}
        accD: dict = {}
        for j in range(1, N + 1):
            w = F.qpow(wL * j)
            form_add(accY, forms.x_times(((i, j),), forms.Y(j, k)), w)
            form_add(accT, forms.x_times(((i, j),), forms.T(j, k)), w)
            form_add(accX, forms.x_times(((i, j), (j, k)), H), w)
            if j == k:
                form_add(accD, forms.x_times(((i, j),), H), w * F.qpow(wd * k))
        found["Y"].add(proportional(accY, forms.Y(i, k)))
        found["T"].add(proportional(accT, xH))
        found["xH"].add(proportional(accX, xH))
        found["dH"].add(proportional(accD, xH))
    want = {"Y": F.qpow(-2), "T": F.qpow(-1), "xH": F.qpow(-2), "dH": F.one}
    return {n: found[n] == {want[n]} for n in want}


def resolve_convention(f, base: Convention | None = None) -> Convention:
    """Return the unique weight law passing all checks.

    (a) the implied quadratic relation lies in the ideal at degree 2;
    (b) the trace relation keeps the harmonic quotient dimensions, so its
        derivative is the unweighted trace of the differentials;
    (c) the left sums of the building blocks reproduce the expected factor
        pattern used when solving the left-module relations.
    Raises ConventionError with the check matrix otherwise.
    """
    base = base or Convention()
    N = f.N
    want = harmonic_dim(N, 2)
    matrix = []
    survivors = []
    bases = {}
    for wR in CANDIDATE_EXPONENTS:
        rels = build_cp_relations(f, Convention(sum_right=wR))
        bases[wR] = quotient_basis(rels, 2, N)
    forms_by = {}
    for wL, wR, wd in itertools.product(CANDIDATE_EXPONENTS, repeat=3):
        B = bases[wR]
        row = {"sum_left": wL, "sum_right": wR, "delta": wd, "quotient_dim": B.dim}
        lam = implied_relation_factor(f, B, wL)
        row["a"] = lam is not None
        row["implied_factor"] = f.field.text(lam) if lam is not None else None
        row["b"] = B.dim == want
        row["c"] = False
        if row["a"] and row["b"]:
            conv = Convention(
                sum_left=wL, sum_right=wR, delta=wd, invariant_form=base.invariant_form,
                twist=base.twist, crossing=base.crossing, middle=base.middle,
            )
            try:
                key = (wL, wR)
                if key not in forms_by:
                    forms_by[key] = FormSpace(build_sphere(f, conv), f, conv)
                checks = _pattern_check(forms_by[key], wL, wd)
                row.update({f"c_{k}": v for k, v in checks.items()})
                row["c"] = all(checks.values())
            except SphereError as exc:
                row["c_error"] = str(exc).splitlines()[0]
        matrix.append(row)
        if row["a"] and row["b"] and row["c"]:
            survivors.append((row, lam))
    if len(survivors) != 1:
        raise ConventionError(f"convention unresolved: {len(survivors)} candidates pass", matrix)
    row, lam = survivors[0]
    F = f.field
    exp = None
    for e in range(-6, 7):
        if lam == F.qpow(e):
            exp = e
    if exp is None:
        raise ConventionError("convention unresolved: implied factor is not a power of q", matrix)
    return Convention(
        sum_left=row["sum_left"], sum_right=row["sum_right"], delta=row["delta"],
        invariant_form=base.invariant_form, twist=base.twist, crossing=base.crossing,
        middle=base.middle, implied_factor=exp,
    )

"""Acceptance suite: one group of tests per criterion.

Run it on its own with ``python3 tests/test_acceptance.py`` or
``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.  The N = 6 classification runs dominate the
runtime (roughly half an hour in total).
"""
import time

import pytest
from gmpy2 import mpq

from cpcalc.algebra.convention import Convention, ConventionError
from cpcalc.algebra.cp import build_cp_relations, quotient_basis
from cpcalc.algebra.resolve import harmonic_dim, implied_relation_factor, resolve_convention
from cpcalc.calculus import factorization_check, published_coefficients, solve_case, verify_calculus
from cpcalc.calculus.solve import Context, SolveSettings, _Run, make_context
from cpcalc.coeff import make_field
from cpcalc.repdecomp import Frame, decomp_dim, dim, lr_tensor, morphism_count, pi, pi_tower
from cpcalc.rmatrix import build_family, check_identities, perturb
from oracles import weyl_dim

SAMPLES = (mpq(3, 2), mpq(2))
CALCS = ("gamma", "gamma-tilde", "gamma-tilde-tilde")


def criterion(number, title):
    return pytest.mark.criterion(number, title)


def _sums(q, N):
    s = sum(q ** (2 * i) for i in range(N))
    si = s - 1
    return s, si, si - q ** 2


@pytest.fixture(scope="module")
def n6():
    return [make_context(6, "sampled", q) for q in SAMPLES]


# 1 ----------------------------------------------------------------------------

C1 = criterion(1, "R-matrix inverse, Hecke and braid identities")


@C1
def test_rmatrix_suite():
    t0 = time.time()
    rows = []
    for N in (2, 3, 4):
        rows += check_identities(build_family(N, make_field("symbolic")))
    for N in (5, 6):
        for q in SAMPLES:
            rows += check_identities(build_family(N, make_field("sampled", q)))
    elapsed = time.time() - t0
    assert len(rows) == 3 * 3 + 3 * 4
    assert all(r["pass"] for r in rows), [r for r in rows if not r["pass"]]
    assert elapsed < 60, elapsed


# 2 ----------------------------------------------------------------------------

C2 = criterion(2, "representation decompositions and morphism counts at N = 5")


@C2
def test_representation_dimensions():
    t0 = time.time()
    tower = pi_tower(5, 2)
    assert [dim(f, 5) for f in tower] == [1, 24, 200]
    adj = pi(1, 5)
    square = lr_tensor(adj, adj, 5)
    assert decomp_dim(square, 5) == 576
    assert sum(m * weyl_dim(f.rows, 5) for f, m in square.items()) == 576
    assert morphism_count(5)["after_trace_condition"] == 27
    assert time.time() - t0 < 10


@C2
@pytest.mark.xfail(strict=True, reason="the shared 75-dimensional summand at k = 1 makes the count 6, not 5")
def test_common_summands_per_degree():
    assert morphism_count(5)["per_k_common"] == [2, 5, 4, 1, 0]


# 3 ----------------------------------------------------------------------------

C3 = criterion(3, "quotient algebra dimensions, implied relation, unique convention")


@C3
@pytest.mark.parametrize("N,mode", [(2, "symbolic"), (3, "symbolic"), (4, "sampled")])
def test_quotient_dimension(N, mode):
    t0 = time.time()
    f = build_family(N, make_field(mode, SAMPLES[0] if mode == "sampled" else None))
    conv = resolve_convention(f)
    assert isinstance(conv, Convention)
    B = quotient_basis(build_cp_relations(f, conv), 2, N)
    assert B.dim == harmonic_dim(N, 2) == 1 + dim(pi(1, N), N) + dim(pi(2, N), N)
    factor = implied_relation_factor(f, B, conv.sum_left)
    assert factor == f.field.qpow(-2)
    if (N, mode) == (3, "symbolic"):
        assert time.time() - t0 < 300


# 4 ----------------------------------------------------------------------------

C4 = criterion(4, "free case at N = 6")


@C4
def test_free_case_at_n6(n6):
    t0 = time.time()
    rep = solve_case("free", 6, contexts=n6)
    elapsed = time.time() - t0
    assert rep.solution_dim == 0 and rep.samples_agree
    q = SAMPLES[0]
    expected = dict(a1=0, a2=1 / q, a3=q, a4=1, b1=-1, b2=-q, b3=-q, b4=-1, c=q * q + 1)
    got = {n: mpq(v) for n, v in rep.coefficients.items()}
    assert {n: got[n] for n in expected} == expected
    assert all(v == 0 for n, v in got.items() if n not in expected)
    assert all(rep.paper_match.values())
    assert elapsed < 1800, elapsed


# 5 ----------------------------------------------------------------------------

C5 = criterion(5, "first relation case at N = 6")


@C5
def test_first_relation_case_at_n6(n6):
    rep = solve_case("red1", 6, contexts=n6)
    assert rep.solution_dim == 0 and rep.samples_agree
    q = SAMPLES[0]
    _, si, sii = _sums(q, 6)
    want = {"A": q ** 2, "B": 1 / q, "C": -sii / si, "D": -1 / si}
    assert {k: mpq(v) for k, v in rep.relation.items()} == want
    assert all(rep.paper_match.values()), rep.paper_match
    got = {n: mpq(v) for n, v in rep.coefficients.items()}
    assert all(got[n] == 0 for n in ("a7", "a8", "b1", "b3", "a9", "g2"))


@C5
def test_intermediate_zeros_at_n6(n6):
    """Left/right conditions plus the relation-compatibility condition
    already force these coefficients to zero, before any trace condition."""
    run = _Run(n6[0], "red1", SolveSettings())
    run.relation_stage()
    ech = run.linear_stage(["kl4", "kl5", "kl8"])
    zeros = ("a7", "a8", "b1", "b3", "a9", "g2")
    assert {n: ech.reduce({n: 1}) == {} for n in zeros} == dict.fromkeys(zeros, True)


# 6 ----------------------------------------------------------------------------

C6 = criterion(6, "second relation case")


@C6
def test_second_relation_case_unique_at_n6(n6):
    rep = solve_case("red2", 6, contexts=n6)
    assert rep.solution_dim == 0 and rep.samples_agree
    got = {n: mpq(v) for n, v in rep.coefficients.items()}
    assert got["a5"] == 0 and got["a6"] == 0
    assert all(rep.paper_match.values()), rep.paper_match


@C6
@pytest.mark.parametrize("N", [3, 4])
def test_second_relation_case_contains_published_point(N):
    rep = solve_case("red2", N, qs=SAMPLES)
    assert rep.paper_in_solution_set and rep.samples_agree


# 7 ----------------------------------------------------------------------------

C7 = criterion(7, "published calculi and factorization")


@C7
@pytest.mark.parametrize("N,mode", [(2, "symbolic"), (3, "sampled"), (4, "sampled")])
def test_published_calculi_pass(N, mode):
    ctx = make_context(N, mode, SAMPLES[0] if mode == "sampled" else None)
    for calc in CALCS:
        rep = verify_calculus(calc, N, ctx=ctx)
        assert rep.passed, (calc, rep.failures)
    rep = factorization_check(N, ctx=ctx)
    assert rep.passed, rep.failures


# 8 ----------------------------------------------------------------------------

C8 = criterion(8, "negative controls")


@C8
def test_perturbed_r_breaks_identities():
    f = build_family(3, make_field("symbolic"))
    bad = build_family(3, f.field, perturb(f.R))
    assert not all(r["pass"] for r in check_identities(bad))


@C8
def test_corrupted_multiplicity_breaks_dimension_count():
    square = dict(lr_tensor(pi(1, 5), pi(1, 5), 5))
    square[Frame((2, 2, 1))] = square.get(Frame((2, 2, 1)), 0) + 1
    assert decomp_dim(square, 5) != 576


@C8
def test_perturbed_r_breaks_algebra():
    F = make_field("sampled", SAMPLES[0])
    f = build_family(2, F, perturb(build_family(2, F).R, (1, 2, 2, 1), mpq(1, 5)))
    B = quotient_basis(build_cp_relations(f, Convention()), 2, 2)
    assert B.dim != harmonic_dim(2, 2)
    with pytest.raises(ConventionError):
        resolve_convention(f)


@C8
@pytest.mark.parametrize("calc,name", [("gamma", "c"), ("gamma-tilde", "b6"), ("gamma-tilde-tilde", "b2")])
def test_corrupted_coefficient_fails_verification(calc, name):
    ctx = make_context(2, "symbolic")
    ans = published_coefficients(calc, ctx.family)
    bad = ans.corrupted(name, ans.get(name) + ctx.F.qpow(2))
    assert not verify_calculus(calc, 2, ctx=ctx, ansatz=bad).passed


@C8
def test_perturbed_r_fails_classification():
    ctx = make_context(3, "sampled", SAMPLES[0])
    f = build_family(3, ctx.F, perturb(ctx.family.R, (1, 2, 2, 1), mpq(1, 5)))
    rep = solve_case("red2", 3, contexts=[Context(3, ctx.F, f, ctx.convention, ctx.sphere)])
    assert not rep.ok
    assert not rep.paper_in_solution_set


# 9 ----------------------------------------------------------------------------

C9 = criterion(9, "sphere restrictions (stretch milestone)")


@C9
@pytest.mark.parametrize("N", [2, 3])
def test_sphere_relations_resolved(N):
    ctx = make_context(N, "sampled", SAMPLES[0])
    rel = ctx.sphere.rel.as_dict()
    assert rel
    for r in build_cp_relations(ctx.family, ctx.convention):
        assert ctx.sphere.embed(r) == {}


@C9
def test_family_restrictions():
    pytest.skip("deferred: restricting the seven calculus families to the sphere is not implemented")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", *sys.argv[1:]]))

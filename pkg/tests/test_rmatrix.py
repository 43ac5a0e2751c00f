import time

import pytest
from gmpy2 import mpq

from cpcalc.coeff import make_field
from cpcalc.rmatrix import build_family, build_R, check_identities, perturb, qconstants
from oracles import r_family, rcp_bruteforce

FAMILY_NAMES = ("R", "Rm", "Rc", "Rl", "Rr", "Rcm", "Rlm", "Rrm")


@pytest.mark.parametrize("N", [2, 3, 4])
def test_family_matches_casewise_definition(N, families):
    q0 = mpq(3, 2)
    f = families(N)
    want = r_family(N, q0)
    for name in FAMILY_NAMES:
        assert getattr(f, name).entries == want[name], name


@pytest.mark.parametrize("which", ["RCP", "RCPm", "RCPc", "RCPcm"])
def test_composite_products_match_loops(which, families):
    f = families(3)
    assert getattr(f, which).entries == rcp_bruteforce(3, mpq(3, 2), which)


def test_symbolic_and_sampled_agree(families):
    fs = families(3, "symbolic")
    fp = families(3)
    for name in FAMILY_NAMES + ("RCP", "RCPc"):
        lifted = {k: fp.field.lift(v) for k, v in getattr(fs, name).entries.items()}
        assert lifted == getattr(fp, name).entries, name


@pytest.mark.parametrize("N", [2, 3, 4])
def test_identities_symbolic(N, families):
    rows = check_identities(families(N, "symbolic"))
    assert {r["identity"] for r in rows} == {"inverse", "hecke", "braid"}
    assert all(r["pass"] for r in rows), rows
    assert all(r["mode"] == "symbolic" and r["N"] == N for r in rows)


@pytest.mark.parametrize("N", [5, 6])
@pytest.mark.parametrize("q", [mpq(3, 2), mpq(2)])
def test_identities_sampled(N, q):
    rows = check_identities(build_family(N, make_field("sampled", q)))
    assert all(r["pass"] for r in rows), rows


@pytest.mark.parametrize("idx", [(1, 1, 1, 1), (1, 2, 2, 1), (1, 2, 1, 2), (2, 1, 1, 2)])
def test_perturbed_entry_breaks_an_identity(idx):
    F = make_field("sampled", mpq(3, 2))
    R = perturb(build_R(3, F), idx, mpq(1, 7))
    rows = check_identities(build_family(3, F, R))
    assert not all(r["pass"] for r in rows)


def test_rejects_small_N():
    with pytest.raises(ValueError):
        build_R(1)


def test_q_constants():
    F = make_field("symbolic")
    k = qconstants(3, F)
    q = F.q
    assert k.s_plus == 1 + q ** 2 + q ** 4
    assert k.s_i == q ** 2 + q ** 4
    assert k.s_ii == q ** 4
    assert k.s_iii == 0
    assert k.s_iv == -q ** 6

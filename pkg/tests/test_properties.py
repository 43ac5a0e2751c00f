"""Randomized invariants."""
import itertools

from gmpy2 import mpq
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cpcalc.algebra.convention import Convention
from cpcalc.algebra.cp import build_cp_relations, normal_form, quotient_basis
from cpcalc.algebra.sphere import build_sphere
from cpcalc.coeff import QScalar, make_field, parse_qscalar, render
from cpcalc.linalg import Echelon
from cpcalc.repdecomp import Frame, dim, lr_tensor
from cpcalc.rmatrix import build_family
from cpcalc.tensor import Tensor, einsum
from oracles import dense_einsum

FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small_rat = st.builds(lambda a, b: mpq(a, b), st.integers(-6, 6), st.integers(1, 4))
laurent = st.dictionaries(st.integers(-3, 3), small_rat, max_size=3).map(QScalar.laurent)


@st.composite
def qfraction(draw):
    num = draw(laurent)
    den = draw(laurent.filter(bool))
    return num / den


@FAST
@given(qfraction(), qfraction(), qfraction())
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    if a:
        assert a * a.inverse() == 1


@FAST
@given(qfraction())
def test_render_parse_round_trip(a):
    assert parse_qscalar(render(a)) == a


@FAST
@given(qfraction(), qfraction(), st.sampled_from([mpq(3, 2), mpq(5, 7), mpq(-2)]))
def test_evaluation_is_a_homomorphism(a, b, q0):
    try:
        ea, eb = a.eval(q0), b.eval(q0)
    except ArithmeticError:
        return
    assert (a * b).eval(q0) == ea * eb
    assert (a - b).eval(q0) == ea - eb


@st.composite
def sparse_tensor(draw, rank, N=3):
    keys = list(itertools.product(range(1, N + 1), repeat=rank))
    chosen = draw(st.lists(st.sampled_from(keys), max_size=8, unique=True))
    vals = draw(st.lists(small_rat, min_size=len(chosen), max_size=len(chosen)))
    return Tensor([N] * rank, dict(zip(chosen, vals)))


@FAST
@given(sparse_tensor(3), sparse_tensor(2), sparse_tensor(3))
def test_contraction_agrees_with_dense(a, b, c):
    spec = "abc,cd,dbe->ae"
    assert einsum(spec, a, b, c).entries == dense_einsum(spec, [a.entries, b.entries, c.entries], 3)


frames = st.lists(st.integers(0, 3), min_size=1, max_size=3).map(lambda r: Frame(tuple(sorted(r, reverse=True))))


@FAST
@given(frames, frames, st.integers(3, 4))
def test_products_preserve_dimension(a, b, N):
    d = lr_tensor(a, b, N)
    assert sum(m * dim(f, N) for f, m in d.items()) == dim(a, N) * dim(b, N)


@FAST
@given(st.lists(st.dictionaries(st.sampled_from("abcde"), small_rat, max_size=4), max_size=6), st.randoms())
def test_echelon_rank_ignores_row_order(rows, rnd):
    e1 = Echelon()
    e1.extend(rows)
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    e2 = Echelon()
    e2.extend(shuffled)
    assert e1.rank == e2.rank
    for r in rows:
        assert e2.reduce(r) == {}


_F = make_field("sampled", mpq(3, 2))
_f2 = build_family(2, _F)
_B2 = quotient_basis(build_cp_relations(_f2, Convention()), 2, 2)
_S3 = build_sphere(build_family(3, _F), Convention())
_gens2 = [(i, j) for i in (1, 2) for j in (1, 2)]
_gens3 = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]


@FAST
@given(st.dictionaries(st.lists(st.sampled_from(_gens2), max_size=2).map(tuple), small_rat, max_size=5))
def test_normal_form_idempotent(e):
    e = {k: v for k, v in e.items() if v}
    n = normal_form(e, _B2)
    assert normal_form(n, _B2) == n
    assert set(n) <= set(_B2.words)


@FAST
@given(st.lists(st.sampled_from(_gens3), min_size=3, max_size=3))
def test_sphere_product_associative(ws):
    a, b, c = (_S3.x_word((w,)) for w in ws)
    assert _S3.mul(_S3.mul(a, b), c) == _S3.mul(a, _S3.mul(b, c))
    assert _S3.mul(_S3.mul(a, b), c) == _S3.x_word(tuple(ws))

from itertools import product

import pytest

from hopfbrat.bundles import build, build_case1, build_case2, build_case3
from hopfbrat.exactnum import ONE
from hopfbrat.galois import (
    CoactionError,
    SubalgebraInclusion,
    case1_T,
    case2_R,
    case3_u,
    coaction_from_action,
    coinvariants,
    galois_verdict,
    relative_tensor,
    span_equal,
    tensor,
    ver_sharp,
)
from hopfbrat.hopf import FiniteAbelianGroup, FnHopfAlgebra
from hopfbrat.linalg import add_into, rank, vec_equal
from hopfbrat.multimatrix import BlockPartition, MultiMatrixAlgebra, embed_case1, embed_case3


def small_counterexample():
    # M1 + M1 inside M1 + M2, (a, b) -> (a, diag(a, b))
    P = MultiMatrixAlgebra((1, 2))
    A = [{(0, 0, 0): ONE, (1, 0, 0): ONE}, {(1, 1, 1): ONE}]
    return P, A


def test_counterexample_dimension():
    P, A = small_counterexample()
    assert relative_tensor(P, A).dim == 13
    v = galois_verdict(SubalgebraInclusion(P, A))
    assert v.dims == (13, None)
    assert not v.is_hopf_galois
    assert v.obstruction == "13 not divisible by 5"


def test_counterexample_with_hopf_algebra():
    P, A = small_counterexample()
    H = FnHopfAlgebra(FiniteAbelianGroup((3,)))
    v = galois_verdict(SubalgebraInclusion(P, A, H))
    assert v.dims == (13, 15) and not v.is_hopf_galois


@pytest.mark.parametrize(
    "case,params,dims",
    [(1, {"lengths": (1, 1)}, (8, 8)), (2, {"k": 1, "n": 2}, (16, 16)), (3, {"dims": (1,), "n": 3}, (9, 9))],
)
def test_verdict_examples(case, params, dims):
    v = build(case, params).verdict()
    assert v.is_hopf_galois and v.dims == dims and v.rank == dims[0]


def test_preimages_map_to_one_tensor_delta():
    b = build_case1((2, 1))
    v = b.verdict()
    rt = relative_tensor(b.P, coinvariants(b.coaction))
    for g, t in v.preimages.items():
        img = {}
        for k, c in t.items():
            add_into(img, ver_sharp(b.coaction, {k: ONE}), c)
        assert vec_equal(img, {(u, g): c for u, c in b.P.one().items()})
    assert set(v.preimages) == set(b.H.basis)
    assert all(k in rt.basis for t in v.preimages.values() for k in t)


@pytest.mark.parametrize("b", [build_case1((2, 1)), build_case2(1, 2), build_case3(MultiMatrixAlgebra((1, 2)), 2)])
def test_coaction_is_multiplicative_and_unital(b):
    c, P = b.coaction, b.P
    # Delta_R(1) = 1 (x) 1 and 1 in C[G] is the sum of all delta_g
    assert vec_equal(c.delta_r(P.one()), {(u, g): x for g in b.H.basis for u, x in P.one().items()})
    for u, v in product(P.basis(), P.basis()):
        lhs = c.delta_r(P.mul({u: ONE}, {v: ONE}))
        rhs = {}
        for (x, g), s in c.delta_r({u: ONE}).items():
            for (y, h), t in c.delta_r({v: ONE}).items():
                if g == h:  # product in C[G] of delta functions
                    for w, r in P.mul({x: ONE}, {y: ONE}).items():
                        add_into(rhs, {(w, g): s * t * r})
        assert vec_equal(lhs, rhs)


def test_canonical_map_is_left_module_map():
    b = build_case2(1, 2)
    P = b.P
    for p, u, v in product(P.basis(), P.basis(), P.basis()):
        lhs = ver_sharp(b.coaction, tensor(P.mul({p: ONE}, {u: ONE}), {v: ONE}))
        rhs = {}
        for (w, g), c in ver_sharp(b.coaction, {(u, v): ONE}).items():
            for x, d in P.mul({p: ONE}, {w: ONE}).items():
                add_into(rhs, {(x, g): c * d})
        assert vec_equal(lhs, rhs)


def test_invalid_action_rejected():
    P = MultiMatrixAlgebra((2,))
    H = FnHopfAlgebra(FiniteAbelianGroup((2,)))
    # transpose is an anti-homomorphism, not an algebra map
    with pytest.raises(CoactionError):
        coaction_from_action(P, H, lambda g, u: {(0, u[2], u[1]) if g[0] else u: ONE})


def _check_oracle(P, A, oracle):
    rt = relative_tensor(P, A)
    for row in rt.relations.rows.values():
        img = {}
        for (u, v), c in row.items():
            add_into(img, oracle(u, v), c)
        assert img == {}, "oracle does not respect a quotient relation"
    images = [oracle(u, v) for u, v in product(P.basis(), P.basis())]
    assert rank(images) == rt.dim


@pytest.mark.parametrize("lengths", [(1, 1), (2, 1), (1, 1, 1), (2, 2)])
def test_case1_T_oracle(lengths):
    part = BlockPartition(lengths)
    P = MultiMatrixAlgebra((part.m,))
    _check_oracle(P, embed_case1(part).image_basis(), lambda u, v: case1_T(lengths, u, v))


@pytest.mark.parametrize("k,n", [(1, 2), (1, 3), (2, 2)])
def test_case2_R_oracle(k, n):
    b = build_case2(k, n)
    _check_oracle(b.P, b.A, lambda u, v: case2_R(k, n, u, v))


@pytest.mark.parametrize("dims,n", [((1,), 2), ((1,), 3), ((2,), 2), ((1, 2), 2)])
def test_case3_u_oracle(dims, n):
    B = MultiMatrixAlgebra(dims)
    e = embed_case3(B, n)
    _check_oracle(e.target, e.image_basis(), lambda u, v: case3_u(dims, n, u, v))


def test_span_equal():
    assert span_equal([{1: ONE}, {2: ONE}], [{1: ONE, 2: ONE}, {1: ONE, 2: -ONE}])
    assert not span_equal([{1: ONE}], [{2: ONE}])

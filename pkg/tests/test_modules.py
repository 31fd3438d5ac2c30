import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from profgrp.catalog import build, carmichael_presentation
from profgrp.field import GF
from profgrp.linalg import inverse, rank
from profgrp.meataxe import (NotIrreducibleError, chop, composition_factors, count_irreducibles, endo_degree,
                             heart, irreducibles, irreducibles_report, is_irreducible, isomorphic)
from profgrp.modules import (GModule, direct_sum, dual, fixed_points, hom_dim, hom_space, is_homomorphism,
                             permutation_module, regular_module, tensor, trivial_module, wedge2)
from profgrp.perm_group import Permutation, PermGroup
from profgrp.presentations import check_homomorphism

A5 = build("alt:5").group
C3 = PermGroup([Permutation.from_cycles([[0, 1, 2]], 3)])
F2, F3, F5 = GF(2), GF(3), GF(5)


def faithful_c3():
    return GModule(C3, F2, 2, [np.array([[0, 1], [1, 1]])], "L")


def dims(mods):
    return sorted(M.dim for M in mods)


def test_constructions_dimensions():
    assert permutation_module(A5, F2).dim == 5
    assert regular_module(C3, F2).dim == 3
    assert trivial_module(A5, F3).dim == 1
    M = permutation_module(A5, F3)
    assert wedge2(M).dim == 10 and tensor(M, M).dim == 25 and dual(M).dim == 5
    assert wedge2(faithful_c3()).dim == 1
    T = trivial_module(A5, F2)
    assert all(np.array_equal(A, B) for A, B in zip(dual(T).dense_action(), T.dense_action()))


def test_modules_are_valid_representations():
    G = build("carmichael:3")
    P = carmichael_presentation(3)
    for M in [permutation_module(G.group, F2), wedge2(permutation_module(G.group, F3)),
              dual(heart(permutation_module(G.group, F5)))]:
        assert M.is_valid()
        mats = M.dense_action()
        ident = np.eye(M.dim, dtype=np.int64)
        assert check_homomorphism(P, mats, mul=M.field.matmul, identity=ident,
                                  inv=lambda A, F=M.field: inverse(A, F),
                                  is_identity=lambda A, I=ident: np.array_equal(A, I))


def test_tensor_of_conjugate_f4_modules():
    F4 = GF(2, 2)
    irr = irreducibles(A5, F4)
    two = [M for M in irr if M.dim == 2]
    assert len(two) == 2
    assert tensor(two[0], two[1]).dim == 4


def test_heart_examples():
    assert heart(permutation_module(A5, F2)).dim == 4
    assert heart(permutation_module(build("alt:6").group, F2)).dim == 4
    assert heart(permutation_module(build("alt:7").group, GF(7))).dim == 5


def test_heart_needs_transitive_and_irreducible():
    G = PermGroup([Permutation.from_cycles([[0, 1]], 4), Permutation.from_cycles([[2, 3]], 4)])
    with pytest.raises(ValueError):
        heart(permutation_module(G, F3))
    # the regular action of C4 is transitive but not 2-transitive
    C4 = PermGroup([Permutation.from_cycles([[0, 1, 2, 3]], 4)])
    with pytest.raises(NotIrreducibleError):
        heart(permutation_module(C4, F3))


def test_hom_space_examples():
    T = trivial_module(A5, F2)
    assert hom_dim(T, T) == 1
    H = heart(permutation_module(A5, F2))
    assert hom_dim(H, H) == 1
    L = faithful_c3()
    HS = hom_space(L, L)
    assert HS.dim == 2
    assert all(is_homomorphism(L, L, B) for B in HS.basis)


def test_fixed_points_examples():
    assert len(fixed_points(permutation_module(A5, F2))) == 1
    assert len(fixed_points(heart(permutation_module(A5, F2)))) == 0
    assert len(fixed_points(trivial_module(A5, F5))) == 1


def test_chop_examples():
    assert is_irreducible(trivial_module(A5, F2))
    assert dims(chop(permutation_module(A5, F2))) == [1, 4]
    factors = composition_factors(regular_module(A5, F2))
    distinct = sorted((X.dim, endo_degree(X)) for X, _ in factors)
    assert distinct == [(1, 1), (4, 1), (4, 2)]
    # Wedderburn count over the splitting field: sum of (dim / e) * dim multiplicities
    assert sum(X.dim * k for X, k in factors) == 60


def test_irreducible_examples():
    assert dims(irreducibles(C3, F2)) == [1, 2]
    assert dims(irreducibles(A5, F2)) == [1, 4, 4]
    irr5 = irreducibles(A5, F5)
    assert dims(irr5) == [1, 3, 5]
    assert sum(M.dim ** 2 // endo_degree(M) for M in irr5) <= 60


def test_irreducibles_bound_and_report():
    rep = irreducibles_report(A5, F3)
    assert rep.complete and rep.expected_count == count_irreducibles(A5, F3) == len(rep.modules)
    assert rep.modules[0].name == "irr:0" and rep.sources[0] == "trivial"
    with pytest.raises(OverflowError):
        irreducibles(A5, F2, bound=30)


def test_isomorphic_detects_conjugation():
    M = permutation_module(A5, F3)
    rng = np.random.default_rng(3)
    while True:
        S = F3.random((5, 5), rng)
        if rank(S, F3) == 5:
            break
    Si = inverse(S, F3)
    N = GModule(A5, F3, 5, [F3.matmul(F3.matmul(Si, A), S) for A in M.dense_action()])
    assert isomorphic(M, N)
    # over F3 the permutation module of degree 5 splits as trivial + heart
    assert isomorphic(M, direct_sum(trivial_module(A5, F3), heart(permutation_module(A5, F3))))
    _, four, four_f4 = irreducibles(A5, F2)
    assert four.dim == four_f4.dim == 4 and not isomorphic(four, four_f4)


SMALL = ["alt:4", "sym:3", "alt:5", "q8", "dihedral:4", "frob:21"]


@st.composite
def random_modules(draw):
    spec = draw(st.sampled_from(SMALL))
    cg = build(spec)
    p = draw(st.sampled_from([2, 3]))
    F = GF(p)
    irr = irreducibles(cg.group, F)
    a = draw(st.sampled_from(irr))
    b = draw(st.sampled_from(irr))
    how = draw(st.sampled_from(["tensor", "sum", "perm", "dual-tensor"]))
    if how == "tensor":
        M = tensor(a, b)
    elif how == "sum":
        M = direct_sum(a, b)
    elif how == "perm":
        M = tensor(a, permutation_module(cg.group, F))
    else:
        M = tensor(dual(a), b)
    return cg, irr, M


@given(random_modules(), st.integers(0, 1000))
def test_chop_additive_and_complete(case, seed):
    cg, irr, M = case
    factors = chop(M, seed)
    assert sum(X.dim for X in factors) == M.dim
    for X in factors:
        assert is_irreducible(X, seed + 1)
        assert any(isomorphic(X, Y, irreducible=True) for Y in irr)


@given(random_modules())
def test_hom_dim_dual_symmetry(case):
    cg, irr, M = case
    for N in irr[:2]:
        assert hom_dim(M, N) == hom_dim(dual(N), dual(M))


@given(st.sampled_from(SMALL + ["sl2:4", "psl2:5"]), st.sampled_from([2, 3, 5]), st.integers(1, 10**6))
def test_chop_multiset_seed_stable(spec, p, seed):
    G = build(spec).group
    if G.order() > 60:
        G = build("alt:4").group
    R = regular_module(G, GF(p))
    a = sorted((X.dim, endo_degree(X)) for X in chop(R, 0))
    b = sorted((X.dim, endo_degree(X)) for X in chop(R, seed))
    assert a == b

import random
import threading

import pytest

from tatebv.complexes import (DComplex, GroupComplex, WindowError, class_of_index,
                              differential_triples, dim_degree)
from tatebv.groups import preset_group, whole_group


def test_dim_degree(s3):
    C2 = preset_group("cyclic", 2)
    assert dim_degree(C2, 0) == 2
    assert dim_degree(s3, 2) == 150
    assert dim_degree(s3, -3) == 150


def test_coboundary_degree0_abelian_vanishes():
    C2 = preset_group("cyclic", 2)
    dc = DComplex(C2, 3, (-2, 2))
    for h in range(2):
        assert dc.differential(dc.element(0, {((), h): 1})).is_zero()


def test_coboundary_degree1_c2_mod2():
    C2 = preset_group("cyclic", 2)
    dc = DComplex(C2, 2, (-2, 3))
    for h in range(2):
        assert dc.differential(dc.element(1, {((1,), h): 1})).is_zero()


def test_boundary_example_s3(s3_complex):
    # (e,(a,b)) |-> (a,(b)) - (e,(ab)) + (b,(a))
    x = s3_complex.element(-3, {(0, (1, 3)): 1})
    dx = s3_complex.differential(x, signed=False)
    assert dx.coeffs == {(1, (3,)): 1, (0, (4,)): 2, (3, (1,)): 1}


def test_boundary_abelian_degree1():
    C2 = preset_group("cyclic", 2)
    dc = DComplex(C2, 2, (-3, 2))
    assert dc.differential(dc.element(-2, {(0, (1,)): 1}), signed=False).is_zero()


def test_trace(s3_complex, s3):
    tau_a = s3_complex.differential(s3_complex.element(-1, {(1, ()): 1}), signed=False)
    assert tau_a.is_zero()  # 3a + 3a2 = 0 mod 3
    tau_e = s3_complex.differential(s3_complex.element(-1, {(0, ()): 1}), signed=False)
    assert tau_e.is_zero()  # |G| e = 6 e = 0 mod 3
    dc5 = DComplex(s3, 5, (-2, 1))
    tau_e5 = dc5.differential(dc5.element(-1, {(0, ()): 1}), signed=False)
    assert tau_e5.coeffs == {((), 0): 6 % 5}


def test_signed_squares_to_zero(s3_complex):
    rng = random.Random(0)
    for d in range(-5, 4):
        for _ in range(25):
            e = s3_complex.random_element(d, rng, 3)
            assert s3_complex.differential(s3_complex.differential(e)).is_zero()


def test_d_squared_exhaustive_small():
    C2 = preset_group("cyclic", 2)
    dc = DComplex(C2, 2, (-4, 4))
    for d in range(-4, 3):
        for key in dc.basis(d):
            e = dc.element(d, {key: 1})
            assert dc.differential(dc.differential(e)).is_zero()


def test_class_of_index(s3, s3_cd):
    assert class_of_index(s3_cd, 0, ((), 3)) == s3_cd.class_of[3]
    assert class_of_index(s3_cd, -1, (1, ())) == s3_cd.class_of[1]
    # chain (b, (a)): class of a*b = ab
    assert class_of_index(s3_cd, -2, (3, (1,))) == s3_cd.class_of[s3.mult[1][3]]


def test_class_grading_of_differential(s3_complex, s3_cd):
    for d in range(-3, 3):
        for key in s3_complex.basis(d)[:: max(1, len(s3_complex.basis(d)) // 25)]:
            cls = class_of_index(s3_cd, d, key)
            img = s3_complex.differential(s3_complex.element(d, {key: 1}))
            assert all(class_of_index(s3_cd, d + 1, k) == cls for k in img.coeffs)


def test_dimension_bookkeeping(s3, s3_cd, s3_complex):
    for d in range(-3, 3):
        per_class = {}
        for key in s3_complex.basis(d):
            per_class[class_of_index(s3_cd, d, key)] = \
                per_class.get(class_of_index(s3_cd, d, key), 0) + 1
        assert sum(per_class.values()) == dim_degree(s3, d)


def test_group_complex_c2():
    C2sub = whole_group(preset_group("cyclic", 2))
    over2 = GroupComplex(C2sub, 2)
    # norm map = 2 = 0 mod 2; all differentials vanish on 1-dim spaces
    for n in range(-4, 4):
        assert over2.cohomology(n).dim == 1
    over3 = GroupComplex(C2sub, 3)
    for n in range(-4, 4):
        assert over3.cohomology(n).dim == 0
    # norm map at -1 is multiplication by |H| mod p
    e = over3.element(-1, {(): 1})
    assert over3.differential(e, signed=False).coeffs == {(): 2}


def test_group_complex_c3():
    H = whole_group(preset_group("cyclic", 3))
    cplx = GroupComplex(H, 3)
    for n in range(-4, 4):
        assert cplx.cohomology(n).dim == 1


def test_group_complex_d_squared(d4):
    cplx = GroupComplex(whole_group(d4), 2)
    rng = random.Random(1)
    for d in range(-3, 3):
        for _ in range(10):
            e = cplx.random_element(d, rng, 3)
            assert cplx.differential(cplx.differential(e)).is_zero()


def test_cohomology_dims(s3, s3_complex):
    assert s3_complex.cohomology(0).dim == 2
    C2 = preset_group("cyclic", 2)
    dc2 = DComplex(C2, 2, (-5, 4))
    assert [dc2.cohomology(n).dim for n in range(-4, 4)] == [2] * 8
    dc3 = DComplex(C2, 3, (-5, 4))
    assert [dc3.cohomology(n).dim for n in range(-4, 4)] == [0] * 8


def test_cohomology_vanishes_coprime_order():
    # p does not divide |G|: every Tate group in the window vanishes
    G = preset_group("symmetric", 3)
    dc = DComplex(G, 5, (-3, 3))
    for n in range(-2, 3):
        assert dc.cohomology(n).dim == 0


def test_window_errors(s3):
    dc = DComplex(s3, 3, (-2, 2))
    with pytest.raises(WindowError):
        dc.basis(3)
    with pytest.raises(WindowError):
        dc.cohomology(2)  # boundary degree needs margin
    with pytest.raises(WindowError):
        DComplex(s3, 3, (2, 2))


def test_matrix_matches_operator(s3_complex):
    rng = random.Random(2)
    for d in (-2, 0, 1):
        M = s3_complex.matrix(d)
        idx = s3_complex.index(d)
        tgt = s3_complex.basis(d + 1)
        for _ in range(5):
            e = s3_complex.random_element(d, rng, 3)
            vec = M.apply({idx[k]: v for k, v in e.coeffs.items()})
            direct = s3_complex.differential(e)
            assert direct.coeffs == {tgt[i]: v for i, v in vec.items()}


def test_project_rejects_non_cocycle(s3_complex):
    space = s3_complex.cohomology(1)
    rng = random.Random(3)
    found = False
    for _ in range(20):
        e = s3_complex.random_element(1, rng, 2)
        if not s3_complex.differential(e).is_zero():
            found = True
            with pytest.raises(ValueError):
                space.project(e)
            break
    assert found


def test_representatives_are_cocycles(s3_complex):
    for n in (-2, -1, 0, 1):
        space = s3_complex.cohomology(n)
        for i in range(space.dim):
            rep = space.representative(i)
            assert s3_complex.differential(rep).is_zero()
            coords = space.project(rep)
            assert coords == [1 if j == i else 0 for j in range(space.dim)]


def test_differential_triples(s3):
    dc = DComplex(s3, 3, (-1, 1))
    rows = list(differential_triples(dc, [0]))
    M = dc.matrix(0)
    assert rows == [(0, i, j, v) for (i, j, v) in M.triples()]


def test_concurrent_cohomology(s3):
    dc = DComplex(s3, 3, (-2, 2))
    results = []

    def work():
        results.append(dc.cohomology(0))

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r is results[0] for r in results)

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadext.errors import PreconditionError, VerificationError
from quadext.exactlin import Mat, kernel_basis, unit_vec
from quadext.extensions import (
    ISOTROPIC,
    MIXED,
    NONDEGENERATE,
    build_central_extension,
    classify_kernel,
    cocycle_derivation_convert,
    cocycle_from_derivations,
    cocycle_witness,
    derivations_from_cocycle,
    extension_geometry,
    fitting_split_extension,
    geometry_report,
    isotropic_kernel_geometry,
    make_kernel_dual_isotropic,
    reduce_mixed_kernel,
    split_extension_metric,
    splitting_map,
)
from quadext.liealg import (
    block_diag,
    QuadraticLieAlgebra,
    is_centroid,
    is_hom,
    skew_derivation_basis,
    sl2,
    verify_quadratic,
)
from quadext.nilpotent2 import builtin_example, extension_fixtures, n6, oscillator
from quadext.suite import geometry_suite, random_inner_fixtures

FIXTURES = {f.name: f for f in extension_fixtures()}

# name -> (n, r, kernel class, Fitting index m of T, splits)
EXPECTED = {
    "G9": (6, 3, ISOTROPIC, 2, False),
    "G9e0": (6, 3, ISOTROPIC, 2, False),
    "cotext(3)": (3, 3, ISOTROPIC, 1, False),
    "cotext(2)": (2, 2, ISOTROPIC, 1, True),
    "reductive(3)": (6, 3, ISOTROPIC, 1, False),
    "reductive(1)": (4, 1, ISOTROPIC, 1, True),
    "mixed": (4, 2, MIXED, 1, True),
    "mixed-abelian": (2, 2, MIXED, 1, True),
    "sl2-inner": (3, 1, NONDEGENERATE, 0, True),
    "N6-inner": (6, 1, NONDEGENERATE, 0, True),
    "oscillator-trivial": (4, 1, NONDEGENERATE, 0, True),
    "G9+sl2-inner": (9, 4, MIXED, 2, False),
}


def test_every_fixture_is_listed():
    assert set(FIXTURES) == set(EXPECTED)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_fixture_classification(name):
    f = FIXTURES[name]
    n, r, tag, m, splits = EXPECTED[name]
    geom = extension_geometry(f.ext, f.form)
    assert (f.ext.n, f.ext.r) == (n, r)
    assert classify_kernel(geom, f.ext).tag == tag
    assert geom.m == m
    assert (splitting_map(f.ext) is not None) == splits


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_fixture_geometry_identities(name):
    f = FIXTURES[name]
    assert geometry_suite(f.ext, f.form) == []


def test_random_inner_fixtures_geometry():
    for name, ext, B in random_inner_fixtures(seed=3, count=9):
        assert verify_quadratic(ext.total, B).ok, name
        assert geometry_suite(ext, B) == [], name
        assert splitting_map(ext) is not None


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15, deadline=None)
def test_random_inner_extensions_hold_every_identity(seed):
    for name, ext, B in random_inner_fixtures(seed=seed, count=3):
        assert geometry_suite(ext, B) == [], name


@given(st.sampled_from(["sl2", "N6", "oscillator(1)"]), st.integers(0, 10 ** 6), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_cocycle_derivation_roundtrip(name, seed, r):
    f = builtin_example(name)
    base = QuadraticLieAlgebra(f.algebra, f.form)
    rng = random.Random(seed)
    basis = skew_derivation_basis(base)
    n = base.dim
    Ds = []
    for _ in range(r):
        D = Mat.zeros(n, n)
        for b in basis:
            D = D + b.scale(rng.randint(-2, 2))
        Ds.append(D)
    thetas = cocycle_from_derivations(base, Ds)
    for th in thetas:
        assert th.T == -th
        assert cocycle_witness(base.alg, th) is None
    assert derivations_from_cocycle(base, thetas) == Ds
    assert cocycle_derivation_convert(base, derivations=Ds) == thetas
    assert cocycle_derivation_convert(base, theta=thetas) == Ds
    ext = build_central_extension(base, Ds)
    assert ext.total.dim == n + r
    # V is central and the projection onto g is a morphism
    for v in ext.V().vectors():
        assert ext.total.ad(v).is_zero()


def test_non_derivation_rejected():
    base = sl2()
    with pytest.raises(VerificationError):
        build_central_extension(base, [Mat.identity(3)])


def test_non_skew_derivation_rejected():
    base = sl2()
    # a derivation of the abelian algebra that is not skew for the identity metric
    from quadext.liealg import LieAlgebra

    ab = QuadraticLieAlgebra(LieAlgebra.abelian(2), Mat.identity(2))
    with pytest.raises(VerificationError, match="skew"):
        build_central_extension(ab, [Mat.from_rows([[1, 0], [0, 0]])])


def test_non_cocycle_rejected():
    # every skew form on sl2 is a cocycle, so use N6 with θ(a1, b1) = 1
    base = n6()
    rows = [[0] * 6 for _ in range(6)]
    rows[0][3], rows[3][0] = 1, -1
    th = Mat.from_rows(rows)
    assert cocycle_witness(base.alg, th) == (0, 1, 2)
    with pytest.raises(VerificationError):
        derivations_from_cocycle(base, [th])


def test_splitting_map_reproduces_cocycle():
    f = FIXTURES["sl2-inner"]
    tau = splitting_map(f.ext)
    g = f.ext.base.alg
    th = f.ext.cocycle()[0]
    for j in range(3):
        for k in range(3):
            assert (tau @ g.bracket_basis(j, k))[0] == th[j, k]


def test_outer_extension_does_not_split():
    assert splitting_map(FIXTURES["G9"].ext) is None


def test_invalid_metric_on_G_rejected():
    f = FIXTURES["G9"]
    with pytest.raises(VerificationError):
        extension_geometry(f.ext, Mat.identity(9))


def test_geometry_report_is_clean_on_g9():
    f = FIXTURES["G9"]
    geom = extension_geometry(f.ext, f.form)
    assert all(v is None for v in geometry_report(f.ext, geom).values())
    n = f.ext.n
    # T is nilpotent of index 2 and lands in the centroid of g
    assert geom.T @ geom.T == Mat.zeros(n, n)
    assert is_centroid(f.ext.base.alg, geom.T)


def test_nondegenerate_fitting_split():
    f = FIXTURES["N6-inner"]
    geom = extension_geometry(f.ext, f.form)
    fs = fitting_split_extension(geom, f.ext)
    assert fs.n_ideal.dim == 0 and fs.q.dim == 6
    assert fs.nondegenerate_split is not None
    assert verify_quadratic(f.ext.base.alg, fs.bar_B_g).ok


def test_fitting_split_on_direct_sum():
    f = FIXTURES["G9+sl2-inner"]
    geom = extension_geometry(f.ext, f.form)
    fs = fitting_split_extension(geom, f.ext)
    # sl2 is the invertible part, the G9 base is the nilpotent part
    assert fs.q.dim == 3 and fs.n_ideal.dim == 6
    assert fs.m == 2
    assert verify_quadratic(fs.q_algebra.alg, fs.q_algebra.form).ok


def test_mixed_reduction():
    f = FIXTURES["mixed"]
    geom = extension_geometry(f.ext, f.form)
    red = reduce_mixed_kernel(f.ext, geom)
    assert red.radical.dim == 1
    assert red.sub_extension.r == 1
    assert classify_kernel(red.sub_geometry, red.sub_extension).tag == ISOTROPIC
    assert is_hom(red.sub_extension.total, f.ext.total, red.embedding)
    assert red.U.dim + red.U_perp.dim == f.ext.dim


def test_wrong_kernel_class_is_precondition_error():
    iso = FIXTURES["G9"]
    geom = extension_geometry(iso.ext, iso.form)
    with pytest.raises(PreconditionError):
        reduce_mixed_kernel(iso.ext, geom)
    nd = FIXTURES["sl2-inner"]
    geom = extension_geometry(nd.ext, nd.form)
    with pytest.raises(PreconditionError):
        isotropic_kernel_geometry(geom, nd.ext)
    with pytest.raises(PreconditionError):
        make_kernel_dual_isotropic(geom, nd.ext)


@pytest.mark.parametrize("name", ["G9", "G9e0", "cotext(3)", "reductive(3)", "reductive(1)"])
def test_isotropic_geometry_and_dual_metric(name):
    f = FIXTURES[name]
    geom = extension_geometry(f.ext, f.form)
    iso = isotropic_kernel_geometry(geom, f.ext)
    n, r = f.ext.n, f.ext.r
    assert iso.ker_T.dim == r
    assert iso.a_perp.dim == n - r
    assert is_hom(iso.base_as_extension.total, f.ext.base.alg, iso.change_of_basis)
    Q, Bbar = make_kernel_dual_isotropic(geom, f.ext)
    assert is_centroid(f.ext.total, Q)
    assert verify_quadratic(f.ext.total, Bbar).ok
    A = [f.ext.embed(a) for a in geom.a]
    for x in A:
        for y in A:
            assert sum(p * q for p, q in zip(y, Bbar @ x)) == 0
    bar = extension_geometry(f.ext, Bbar)
    assert kernel_basis(bar.h).dim == r


def test_split_extension_metric_is_invariant():
    base = n6()
    ext, B = split_extension_metric(base, [unit_vec(6, 1), unit_vec(6, 4)], block_diag(base.form, Mat.identity(2)))
    assert verify_quadratic(ext.total, B).ok
    geom = extension_geometry(ext, B)
    assert classify_kernel(geom, ext).tag == NONDEGENERATE


def test_trivial_extension_of_oscillator():
    q = oscillator(1)
    ext = build_central_extension(q, [Mat.zeros(4, 4)])
    assert ext.cocycle()[0].is_zero()
    assert splitting_map(ext) is not None

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle as O
from quadext.errors import InputError, VerificationError
from quadext.exactlin import Mat, Subspace, unit_vec
from quadext.liealg import (
    LieAlgebra,
    QuadraticLieAlgebra,
    center,
    centroid_basis,
    change_basis,
    derivation_basis,
    descending_series,
    find_invariant_metric,
    inner_witness,
    invariant_forms,
    is_centroid,
    is_derivation,
    is_hom,
    is_ideal,
    is_skew,
    jacobi_witness,
    killing_form,
    skew_derivation_basis,
    sl2,
    structure_report,
    transport_form,
    upper_series,
    verify_quadratic,
)
from quadext.nilpotent2 import builtin_example, heisenberg

# dimensions computed with the sympy reference in tests/oracle.py
FROZEN = {
    #                der, skew der, centroid, invariant forms, lower central series
    "sl2": (3, 3, 1, 1, [3]),
    "N6": (18, 11, 10, 7, [6, 3, 0]),
    "oscillator(1)": (5, 3, 2, 2, [4, 3]),
    "G9": (22, 14, 11, 8, [9, 6, 3, 0]),
    "cotangent(3)": (18, 11, 10, 7, [6, 3, 0]),
    "reductive(3)": (21, 14, 11, 8, [9, 6, 3]),
}


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_frozen_dimensions(name):
    f = builtin_example(name)
    der, sder, cen, inv, lcs = FROZEN[name]
    assert len(derivation_basis(f.algebra)) == der
    assert len(skew_derivation_basis(QuadraticLieAlgebra(f.algebra, f.form))) == sder
    assert len(centroid_basis(f.algebra)[0]) == cen
    assert len(invariant_forms(f.algebra)) == inv
    assert [s.dim for s in descending_series(f.algebra)] == lcs


@pytest.mark.parametrize("name", ["sl2", "N6", "oscillator(1)"])
def test_dimensions_against_reference(name):
    a = builtin_example(name).algebra
    assert len(derivation_basis(a)) == O.derivation_dim(a)
    assert len(centroid_basis(a)[0]) == O.centroid_dim(a)
    assert len(invariant_forms(a)) == O.invariant_form_dim(a)


def test_sl2_trace_form_and_killing():
    s = sl2()
    assert s.form == Mat.from_rows([[0, 0, 4], [0, 8, 0], [4, 0, 0]])
    assert killing_form(s.alg) == s.form
    assert structure_report(s.alg).is_perfect
    assert center(s.alg).dim == 0


def test_heisenberg_structure():
    h = heisenberg(1)
    rep = structure_report(h)
    assert rep.nilpotency_class == 2
    assert rep.center == Subspace.span(3, [unit_vec(3, 2)])
    assert [u.dim for u in upper_series(h)][:2] == [1, 3]


def test_broken_jacobi_rejected_with_witness():
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    # [e1,e2] = e3, [e2,e3] = e2 violates Jacobi on (e1, e2, e3)
    for i, j, k, v in ((2, 0, 1, 1), (1, 1, 2, 1)):
        c[i][j][k] = v
        c[i][k][j] = -v
    alg = LieAlgebra(c, validate=False)
    assert jacobi_witness(alg) is not None
    with pytest.raises(VerificationError):
        LieAlgebra(c)


def test_non_skew_tensor_rejected():
    c = [[[0, 0], [0, 0]], [[0, 1], [0, 0]]]
    with pytest.raises(VerificationError):
        LieAlgebra(c)


def test_bad_shape_is_input_error():
    with pytest.raises(InputError):
        LieAlgebra([[[0]]], labels=["a", "b"])
    with pytest.raises(InputError):
        verify_quadratic(sl2().alg, Mat.identity(2))


def test_verify_quadratic_reports_each_failure():
    s = sl2()
    rep = verify_quadratic(s.alg, Mat.identity(3))
    assert rep.symmetric_ok and rep.nondegenerate_ok and not rep.invariant_ok
    assert "invariant" in rep.witnesses
    rep = verify_quadratic(s.alg, Mat.zeros(3, 3))
    assert not rep.nondegenerate_ok
    rep = verify_quadratic(s.alg, Mat.from_rows([[0, 1, 4], [0, 8, 0], [4, 0, 0]]))
    assert not rep.symmetric_ok
    with pytest.raises(VerificationError):
        QuadraticLieAlgebra(s.alg, Mat.identity(3))


def test_inner_witness():
    s = sl2()
    D = s.alg.ad((1, 2, 3))
    w = inner_witness(s.alg, D)
    assert w is not None and s.alg.ad(w) == D
    h = heisenberg(1)
    # x -> x is an outer derivation of heis(1) when hbar -> hbar
    D = Mat.diag([1, 0, 1])
    assert is_derivation(h, D)
    assert inner_witness(h, D) is None


def test_ideals_and_center_of_n6():
    n6 = builtin_example("N6").algebra
    b = Subspace.span(6, [unit_vec(6, 3 + i) for i in range(3)])
    assert center(n6) == b
    assert is_ideal(n6, b)
    assert not is_ideal(n6, Subspace.span(6, [unit_vec(6, 0)]))


def test_find_invariant_metric():
    assert find_invariant_metric(sl2().alg) is not None
    assert find_invariant_metric(heisenberg(1)) is None


@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9), st.sampled_from(["sl2", "N6", "oscillator(1)"]))
@settings(max_examples=30, deadline=None)
def test_change_of_basis_transports_quadratic_structure(entries, name):
    f = builtin_example(name)
    n = f.algebra.dim
    rng = random.Random(sum(entries))
    P = Mat.identity(n)
    for _ in range(3):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            E = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            E[i][j] = entries[(i + j) % 9]
            P = P @ Mat.from_rows(E)
    new = change_basis(f.algebra, P)
    assert is_hom(new, f.algebra, P)
    assert verify_quadratic(new, transport_form(f.form, P)).ok


@given(st.sampled_from(["sl2", "N6", "oscillator(1)", "G9"]), st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_solved_maps_satisfy_their_defining_identities(name, seed):
    f = builtin_example(name)
    rng = random.Random(seed)
    n = f.algebra.dim

    def combo(ms):
        M = Mat.zeros(n, n)
        for m in ms:
            M = M + m.scale(rng.randint(-2, 2))
        return M

    D = combo(skew_derivation_basis(QuadraticLieAlgebra(f.algebra, f.form)))
    assert is_derivation(f.algebra, D) and is_skew(f.form, D)
    G = combo(centroid_basis(f.algebra)[0])
    assert is_centroid(f.algebra, G)
    B = combo(invariant_forms(f.algebra))
    assert B.is_symmetric()
    assert verify_quadratic(f.algebra, B).invariant_ok

from __future__ import annotations

import itertools

import pytest

from quadext.doublecentral import g_metric_existence
from quadext.errors import InputError, PreconditionError, VerificationError
from quadext.exactlin import Mat, Subspace, unit_vec
from quadext.extensions import (
    ISOTROPIC,
    classify_kernel,
    extension_geometry,
    splitting_map,
)
from quadext.liealg import (
    LieAlgebra,
    QuadraticLieAlgebra,
    center,
    inner_witness,
    is_centroid,
    sl2,
    structure_report,
    verify_quadratic,
)
from quadext.nilpotent2 import (
    N6_REFERENCE_A,
    TwoStepData,
    builtin_example,
    cotangent_extension,
    g9,
    g9_derivations,
    g9_metric,
    heisenberg,
    heisenberg_family,
    hyperbolic,
    levi_civita,
    matrix_algebra_to_extension,
    mu_from_geometry,
    n6,
    n6_bases,
    oscillator,
    reductive_extension,
    two_step_algebra,
    two_step_to_matrix_algebra,
)


def reference_A():
    return [Mat.from_rows(M) for M in N6_REFERENCE_A]


# ---------------------------------------------------------------- N6 and G9


def test_n6_matrices_equal_the_reference_ones():
    data, alg, rep = two_step_to_matrix_algebra(n6(), *n6_bases(), mu=Mat.identity(3))
    assert list(data.A) == reference_A()
    assert rep["closure"] and rep["jacobi"] and rep["invariant"]
    assert rep["perfect"] and rep["centerless"]


def test_reference_matrices_close_under_commutator():
    A = reference_A()
    for i in range(3):
        s, s2 = (i + 1) % 3, (i + 2) % 3
        assert A[i] @ A[s] - A[s] @ A[i] == A[s2]


def test_matrix_algebra_is_sl2_like():
    _, alg, _ = two_step_to_matrix_algebra(n6(), *n6_bases(), mu=Mat.identity(3))
    assert alg.form == Mat.identity(3)
    a = alg.algebra
    # simple of dimension 3: perfect, centerless, one invariant form up to scale
    rep = structure_report(a)
    assert rep.is_perfect and rep.center.dim == 0
    from quadext.liealg import invariant_forms

    assert len(invariant_forms(a)) == len(invariant_forms(sl2().alg)) == 1


def test_g9_reproduced_from_two_step_data():
    A = reference_A()
    data = TwoStepData(3, tuple(A), Mat.identity(3), Mat.identity(3), tuple(A))
    ext, BG, geom = matrix_algebra_to_extension(data)
    assert list(ext.derivations) == g9_derivations()
    assert BG == g9_metric()
    ref, Bref = g9()
    assert ext.total.c == ref.total.c


def test_g9_is_three_step_and_quadratic():
    ext, B = g9()
    assert ext.total.dim == 9
    assert verify_quadratic(ext.total, B).ok
    assert structure_report(ext.total).nilpotency_class == 3


def test_g9_derivations_not_inner_and_no_splitting():
    ext, _ = g9()
    g = ext.base.alg
    b = Subspace.span(6, [unit_vec(6, 3 + i) for i in range(3)])
    for D in ext.derivations:
        assert inner_witness(g, D) is None
        # an inner derivation would land in [g, g] = b
        assert not all(b.contains(D.col(j)) for j in range(6))
    assert splitting_map(ext) is None


def test_g9_geometry():
    ext, B = g9()
    geom = extension_geometry(ext, B)
    assert classify_kernel(geom, ext).tag == ISOTROPIC
    assert geom.T @ geom.T == Mat.zeros(6, 6)
    assert is_centroid(ext.base.alg, geom.T)
    assert mu_from_geometry(geom, n6_bases()[0]) == Mat.identity(3)


def test_g9_e0_variant():
    f = builtin_example("G9e0")
    ref, _ = g9()
    assert f.ext.total.dim == 9
    assert f.ext.total.c != ref.total.c
    assert verify_quadratic(f.ext.total, f.form).ok


def test_n6_center_is_b():
    q = n6()
    assert center(q.alg) == Subspace.span(6, [unit_vec(6, 3 + i) for i in range(3)])
    assert structure_report(q.alg).nilpotency_class == 2


def test_mu_search_finds_identity_for_n6():
    _, _, rep = two_step_to_matrix_algebra(n6(), *n6_bases())
    assert rep["mu_source"] == "identity"


def test_abelian_is_rejected_as_two_step():
    q = QuadraticLieAlgebra(LieAlgebra.abelian(4), hyperbolic(2))
    with pytest.raises(PreconditionError):
        two_step_to_matrix_algebra(q, [unit_vec(4, 0), unit_vec(4, 1)], [unit_vec(4, 2), unit_vec(4, 3)])


def test_wrong_bases_rejected():
    q = n6()
    a, b = n6_bases()
    with pytest.raises(PreconditionError):
        two_step_to_matrix_algebra(q, b, a)
    with pytest.raises(PreconditionError):
        two_step_to_matrix_algebra(q, a[:2], b)


def g2_form():
    """The G2 3-form on Q^7 as a totally skew tensor."""
    terms = [((0, 1, 2), 1), ((0, 3, 4), 1), ((0, 5, 6), 1), ((1, 3, 5), 1),
             ((1, 4, 6), -1), ((2, 3, 6), -1), ((2, 4, 5), -1)]
    t = [[[0] * 7 for _ in range(7)] for _ in range(7)]
    for idx, s in terms:
        for perm in itertools.permutations(range(3)):
            sign = 1
            for x, y in itertools.combinations(range(3), 2):
                if perm[x] > perm[y]:
                    sign = -sign
            i, j, k = (idx[p] for p in perm)
            t[i][j][k] = s * sign
    return t


def test_g2_three_form_has_no_lie_matrix_algebra():
    t = g2_form()
    A = tuple(Mat(7, 7, [[t[i][j][k] for k in range(7)] for i in range(7)]) for j in range(7))
    I = Mat.identity(7)
    data = TwoStepData(7, A, I, I, tuple(Mat.zeros(7, 7) for _ in range(7)))
    assert data.invariant_failures() == {}
    g = two_step_algebra(data)
    _, alg, rep = two_step_to_matrix_algebra(g, [unit_vec(14, i) for i in range(7)], [unit_vec(14, 7 + i) for i in range(7)], mu=I)
    assert not rep["closure"]
    assert rep["closure_witness"] == (0, 1)
    assert not rep["jacobi"]
    with pytest.raises(VerificationError):
        matrix_algebra_to_extension(data)


def test_invalid_two_step_data_rejected():
    A = reference_A()
    bad = TwoStepData(3, (A[0], A[0], A[2]), Mat.identity(3), Mat.identity(3), tuple(Mat.zeros(3, 3) for _ in range(3)))
    fails = bad.invariant_failures()
    assert "A_independent" in fails
    with pytest.raises(VerificationError):
        matrix_algebra_to_extension(bad)


# ---------------------------------------------------------------- Heisenberg


def test_heisenberg_structure_m1():
    h = heisenberg(1)
    assert h.bracket(unit_vec(3, 0), unit_vec(3, 1)) == (0, 0, 1)
    assert center(h).dim == 1
    with pytest.raises(InputError):
        heisenberg(0)


@pytest.mark.parametrize("m", [1, 2])
def test_oscillator_is_quadratic(m):
    q = oscillator(m)
    assert q.dim == 2 * m + 2
    assert verify_quadratic(q.alg, q.form).ok
    assert q.labels[0] == "D" and q.labels[-1] == "hbar"


def test_oscillator_quotient_is_not_quadratic():
    fam = heisenberg_family(1, with_derivation=True)
    assert fam.oscillator is not None and fam.g_alg.dim == 3
    assert g_metric_existence(fam.dce).verdict == "No"
    from quadext.liealg import find_invariant_metric

    assert find_invariant_metric(fam.g_alg) is None


def test_invalid_rotation_rejected():
    with pytest.raises(InputError):
        heisenberg_family(1, D=Mat.identity(2))
    with pytest.raises(InputError):
        heisenberg_family(1, D=Mat.zeros(2, 2))
    with pytest.raises(InputError):
        heisenberg_family(1, D=Mat.identity(3))


def test_custom_rotation():
    D = Mat.from_rows([[0, -2], [1, 0]])
    q = heisenberg_family(1, D=D).oscillator
    assert verify_quadratic(q.alg, q.form).ok


# ---------------------------------------------------------- reductive, cotangent


def test_reductive_r1_needs_zero_alpha():
    with pytest.raises(VerificationError):
        reductive_extension(sl2(), 1, [[[1]]])
    ext, B = reductive_extension(sl2(), 1)
    assert verify_quadratic(ext.total, B).ok
    assert splitting_map(ext) is not None


def test_reductive_levi_civita():
    ext, B = reductive_extension(sl2(), 3, levi_civita())
    assert ext.total.dim == 9
    assert verify_quadratic(ext.total, B).ok
    assert splitting_map(ext) is None


def test_cotangent_zero_is_abelian_hyperbolic():
    zero = [[[0] * 2 for _ in range(2)] for _ in range(2)]
    q = cotangent_extension(2, zero)
    assert q.form == hyperbolic(2)
    assert all(x == 0 for plane in q.alg.c for row in plane for x in row)


def test_cotangent_levi_civita_is_n6():
    q = cotangent_extension(3)
    ref = n6()
    assert q.alg.c == ref.alg.c
    assert q.form == ref.form


def test_cotangent_rejects_non_cyclic():
    omega = [[[0, 0], [1, 0]], [[-1, 0], [0, 0]]]
    with pytest.raises(VerificationError):
        cotangent_extension(2, omega)


# ---------------------------------------------------------------- fixtures


def test_worked_examples_are_tagged():
    assert builtin_example("N6").tags["source"] == "worked example"
    assert builtin_example("G9").tags["source"] == "worked example"


def test_unknown_example_rejected():
    with pytest.raises(InputError):
        builtin_example("nope")


@pytest.mark.parametrize(
    "name, dim",
    [("sl2", 3), ("abelian(3)", 3), ("heis(2)", 5), ("oscillator(1)", 4), ("cotangent(2)", 4),
     ("cotext(3)", 6), ("reductive(3)", 9), ("mixed", 6), ("N6-inner", 7)],
)
def test_builtin_dimensions(name, dim):
    assert builtin_example(name).algebra.dim == dim


def test_nilradical_tags_are_ideals():
    from quadext.liealg import is_ideal

    for name in ("G9", "N6", "cotext(3)", "heis(1)"):
        f = builtin_example(name)
        idx = [f.algebra.labels.index(x) for x in f.tags["nilradical"]]
        n = f.algebra.dim
        sp = Subspace.span(n, [unit_vec(n, i) for i in idx])
        assert is_ideal(f.algebra, sp)

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadext.doublecentral import (
    DoubleExtensionContext,
    _dce_tensors,
    as_central_extension,
    build_double_central_extension,
    check_context,
    extract_double_data,
    g_metric_existence,
    heisenberg_invariant_forms,
    roundtrip_matches,
)
from quadext.errors import VerificationError
from quadext.exactlin import Mat, unit_vec
from quadext.extensions import extension_geometry
from quadext.liealg import (
    LieAlgebra,
    QuadraticLieAlgebra,
    is_hom,
    skew_derivation_basis,
    sl2,
    verify_quadratic,
)
from quadext.nilpotent2 import builtin_example, hyperbolic, oscillator_dce


def empty_h():
    return QuadraticLieAlgebra(LieAlgebra.abelian(0), Mat.zeros(0, 0))


def test_trivial_context_gives_hyperbolic_plane():
    dce = build_double_central_extension(DoubleExtensionContext.make(empty_h(), 1))
    assert dce.total.dim == 2
    assert all(x == 0 for plane in dce.total.alg.c for row in plane for x in row)
    assert dce.total.form == hyperbolic(1)
    v = g_metric_existence(dce)
    assert v.verdict == "Yes"
    assert v.B_g.shape == (1, 1) and v.B_g[0, 0] != 0


def test_sl2_context_violating_bracket_condition():
    s = sl2()
    phi = [s.alg.ad(unit_vec(3, 0)), s.alg.ad(unit_vec(3, 2))]
    rep = check_context(DoubleExtensionContext.make(s, 2, phi))
    assert rep.checks["phi_skew_derivation"] is None
    assert rep.checks["phi_bracket_inner"] is not None
    with pytest.raises(VerificationError, match="phi_bracket_inner"):
        build_double_central_extension(DoubleExtensionContext.make(s, 2, phi))


def test_sl2_context_repaired_by_psi():
    # [ad e, ad f] = ad h, so Ψ(a1, a2) = h fixes the bracket condition
    s = sl2()
    phi = [s.alg.ad(unit_vec(3, 0)), s.alg.ad(unit_vec(3, 2))]
    h = (0, 1, 0)
    psi = [[(0, 0, 0), h], [(0, -1, 0), (0, 0, 0)]]
    ctx = DoubleExtensionContext.make(s, 2, phi, psi)
    rep = check_context(ctx)
    assert rep.ok, rep.failures()
    dce = build_double_central_extension(ctx)
    assert verify_quadratic(dce.total.alg, dce.total.form).ok


def test_non_skew_phi_rejected():
    h = QuadraticLieAlgebra(LieAlgebra.abelian(2), Mat.identity(2))
    rep = check_context(DoubleExtensionContext.make(h, 1, [Mat.diag([1, 0])]))
    assert rep.checks["phi_skew_derivation"] == 0


def test_non_cyclic_omega_rejected():
    omega = [[[0, 0], [1, 0]], [[-1, 0], [0, 0]]]
    rep = check_context(DoubleExtensionContext.make(empty_h(), 2, omega=omega))
    assert rep.checks["omega_cyclic"] is not None


# ---------------------------------------------------------------- random contexts


def random_context(seed: int) -> DoubleExtensionContext:
    rng = random.Random(seed)
    h = rng.choice([sl2(), QuadraticLieAlgebra(LieAlgebra.abelian(2), Mat.identity(2)), empty_h()])
    p = h.dim
    r = rng.randint(1, 2)
    basis = skew_derivation_basis(h) if p else []
    phi = []
    for _ in range(r):
        D = Mat.zeros(p, p)
        for b in basis:
            if rng.random() < 0.4:
                D = D + b.scale(rng.randint(-1, 1))
        phi.append(D)
    psi = [[(0,) * p for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            v = tuple(rng.choice([0, 0, 1, -1]) for _ in range(p))
            psi[i][j] = v
            psi[j][i] = tuple(-x for x in v)
    omega = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            for k in range(r):
                x = rng.choice([0, 0, 1, -1])
                omega[i][j][k] = x
                omega[j][i][k] = -x
    return DoubleExtensionContext.make(h, r, phi, psi, omega)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=120, deadline=None)
def test_context_conditions_match_quadratic_structure(seed):
    """The context checks pass exactly when the raw bracket and form are quadratic."""
    ctx = random_context(seed)
    c, B, _ = _dce_tensors(ctx)
    raw = verify_quadratic(LieAlgebra(c, validate=False), B)
    assert check_context(ctx).ok == raw.ok


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_valid_random_contexts_build(seed):
    ctx = random_context(seed)
    if not check_context(ctx).ok:
        return
    dce = build_double_central_extension(ctx)
    N = dce.total.dim
    for v in dce.a_star().vectors():
        assert dce.total.alg.ad(v).is_zero()
    proj = Mat.identity(N).submatrix(range(dce.r + dce.p), range(N))
    assert is_hom(dce.total.alg, dce.g_alg, proj)


# ---------------------------------------------------------------- extraction


@pytest.mark.parametrize("name", ["G9", "G9e0", "cotext(3)", "cotext(2)", "reductive(3)", "reductive(1)"])
def test_extraction_roundtrip(name):
    f = builtin_example(name)
    geom = extension_geometry(f.ext, f.form)
    ex = extract_double_data(f.ext, geom)
    assert check_context(ex.context).ok
    assert roundtrip_matches(f.ext, ex)
    assert ex.context.r == f.ext.r
    assert ex.context.p == f.ext.n - f.ext.r


def test_g9_extraction_and_metric_on_g():
    f = builtin_example("G9")
    ex = extract_double_data(f.ext, extension_geometry(f.ext, f.form))
    assert ex.context.p == 3
    v = g_metric_existence(ex.dce)
    assert v.verdict == "Yes"
    assert verify_quadratic(ex.dce.g_alg, v.B_g).ok
    ext, BG = as_central_extension(ex.dce, v.B_g)
    assert ext.total.c == ex.dce.total.alg.c
    assert verify_quadratic(ext.total, BG).ok


def test_oscillator_quotient_has_no_metric():
    # a ⊕ h here is the Heisenberg algebra extended by a derivation, not quadratic
    v = g_metric_existence(oscillator_dce(1))
    assert v.verdict == "No"
    assert v.certificate["method"] in ("S = 0", "image bound", "grid")


def test_metric_existence_is_seed_stable():
    f = builtin_example("G9")
    ex = extract_double_data(f.ext, extension_geometry(f.ext, f.form))
    a = g_metric_existence(ex.dce, seed=5)
    b = g_metric_existence(ex.dce, seed=5)
    assert a.verdict == b.verdict and a.B_g == b.B_g


@pytest.mark.parametrize("m, count", [(1, 3), (2, 10), (3, 21)])
def test_heisenberg_forms_kill_hbar(m, count):
    # every symmetric form on V pulled back to h_m is invariant: m(2m + 1) of them
    forms = heisenberg_invariant_forms(m)
    assert len(forms) == count == m * (2 * m + 1)
    hb = unit_vec(2 * m + 1, 2 * m)
    for B in forms:
        assert not any(B @ hb)

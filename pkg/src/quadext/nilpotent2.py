"""2-step nilpotent quadratic algebras, the matrix algebra 𝒜, and the fixture zoo.

Fixture basis orders (fixed, all comparisons are entry-for-entry):

- N6: a1, a2, a3, b1, b2, b3
- G9: a1, a2, a3, b1, b2, b3, v1, v2, v3
- heis(m): x1..xm, y1..ym, hbar
- oscillator(m): D, x1..xm, y1..ym, hbar
- cotangent(r): a1..ar, a1*..ar*
- reductive: e, h, f, c1..cr, v1..vr
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError, PreconditionError, VerificationError
from .exactlin import Mat, Subspace, block, dot, unit_vec
from .extensions import (
    CentralExtension,
    ExtensionGeometry,
    build_central_extension,
    direct_sum_extensions,
    extension_geometry,
    split_extension_metric,
)
from .liealg import (
    LieAlgebra,
    QuadraticLieAlgebra,
    block_diag,
    center,
    direct_sum,
    is_centroid,
    sl2,
    structure_report,
    verify_quadratic,
)

ZERO = Fraction(0)


def hyperbolic(r: int) -> Mat:
    """[[0, I], [I, 0]] of size 2r."""
    I = Mat.identity(r)
    Z = Mat.zeros(r, r)
    return block([[Z, I], [I, Z]]) if r else Mat.zeros(0, 0)


def levi_civita() -> list:
    """ε[i][j][k] for i, j, k in 0..2."""
    eps = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j, k), s in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1), ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
        eps[i][j][k] = s
    return eps


def cyclic_skew_witness(t) -> tuple | None:
    """First (i,j,k) violating t_ijk = t_jki and t_ijk = -t_ikj."""
    r = len(t)
    for i, j, k in itertools.product(range(r), repeat=3):
        if Fraction(t[i][j][k]) != Fraction(t[j][k][i]) or Fraction(t[i][j][k]) != -Fraction(t[i][k][j]):
            return (i, j, k)
    return None


# ---------------------------------------------------------------- data types

@dataclass
class TwoStepData:
    r: int
    A: tuple  # A[j][i, k] = α_ijk
    lam: Mat
    mu: Mat
    e: tuple  # e[j][i, k] = e_ijk, totally skew

    def alpha(self, i: int, j: int, k: int) -> Fraction:
        return self.A[j][i, k]

    def invariant_failures(self) -> dict:
        r = self.r
        out = {}
        flat = Mat.from_rows([[M[i, k] for i in range(r) for k in range(r)] for M in self.A], cols=r * r)
        if flat.rank() != r:
            out["A_independent"] = "A_1..A_r are linearly dependent"
        alpha = [[[self.alpha(i, j, k) for k in range(r)] for j in range(r)] for i in range(r)]
        w = next(
            ((i, j, k) for i, j, k in itertools.product(range(r), repeat=3)
             if alpha[i][j][k] != alpha[k][i][j] or alpha[i][j][k] != -alpha[k][j][i]),
            None,
        )
        if w is not None:
            out["alpha_cyclic"] = w
        if self.mu @ self.lam != Mat.identity(r):
            out["mu_lambda_inverse"] = "mu * lambda != I"
        if not self.mu.is_symmetric():
            out["mu_symmetric"] = "mu is not symmetric"
        et = [[[self.e[j][i, k] for k in range(r)] for j in range(r)] for i in range(r)]
        w = cyclic_skew_witness(et)
        if w is not None:
            out["e_cyclic"] = w
        return out


@dataclass
class MatrixAlgebraA:
    basis: tuple  # the A_j
    mu: Mat
    c: tuple  # c[i][j][k] = (μ A_j)[i, k]
    form: Mat  # B_𝒜 = μ^{-1}
    closure_witness: tuple | None
    jacobi_ok: bool
    invariant_ok: bool
    algebra: LieAlgebra | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bracket_matrix(self, j: int, k: int) -> Mat:
        """A_j μ A_k - A_k μ A_j computed in gl(r)."""
        Aj, Ak = self.basis[j], self.basis[k]
        return Aj @ self.mu @ Ak - Ak @ self.mu @ Aj


def _matrix_algebra(A: Sequence[Mat], mu: Mat) -> MatrixAlgebraA:
    r = len(A)
    c = tuple(tuple(tuple((mu @ A[j])[i, k] for k in range(r)) for j in range(r)) for i in range(r))
    closure = None
    for j, k in itertools.product(range(r), repeat=2):
        lhs = A[j] @ mu @ A[k] - A[k] @ mu @ A[j]
        rhs = Mat.zeros(r, r)
        for i in range(r):
            if c[i][j][k]:
                rhs = rhs + A[i].scale(c[i][j][k])
        if lhs != rhs:
            closure = (j, k)
            break
    alg = LieAlgebra(c, [f"A{i + 1}" for i in range(r)], validate=False)
    from .liealg import jacobi_witness, skew_witness

    jac = skew_witness(alg) is None and jacobi_witness(alg) is None
    try:
        form = mu.inverse()
    except ZeroDivisionError:
        raise PreconditionError("mu is singular") from None
    inv_ok = jac and verify_quadratic(alg, form).ok
    return MatrixAlgebraA(tuple(A), mu, c, form, closure, jac, inv_ok, alg if jac else None)


def _mu_candidates(r: int):
    yield "identity", Mat.identity(r)
    yield "-identity", Mat.identity(r).scale(-1)
    if r <= 6:
        for signs in itertools.product((1, -1), repeat=r):
            if all(s == 1 for s in signs) or all(s == -1 for s in signs):
                continue
            yield f"diag{signs}", Mat.diag(signs)


# ---------------------------------------------------------- (⇒) direction

def _two_step_preconditions(g: QuadraticLieAlgebra, a_basis, b_basis) -> None:
    n = g.dim
    r = len(a_basis)
    if len(b_basis) != r or n != 2 * r:
        raise PreconditionError(f"need dim g = 2r with r = |a| = |b|; got dim {n}, |a| = {r}, |b| = {len(b_basis)}")
    if Mat.from_cols(list(a_basis) + list(b_basis), rows=n).rank() != n:
        raise PreconditionError("a and b bases do not span g")
    bsp = Subspace.span(n, b_basis)
    C = center(g.alg)
    D = structure_report(g.alg).derived_ideal
    if C != bsp:
        raise PreconditionError(f"b != C(g) (dim C(g) = {C.dim})")
    if D != bsp:
        raise PreconditionError(f"b != [g,g] (dim [g,g] = {D.dim})")
    for i in range(r):
        for j in range(r):
            if g.B(a_basis[i], a_basis[j]):
                raise PreconditionError(f"a is not isotropic: B(a{i + 1}, a{j + 1}) != 0")
            if g.B(b_basis[i], b_basis[j]):
                raise PreconditionError(f"b is not isotropic: B(b{i + 1}, b{j + 1}) != 0")
            if g.B(a_basis[i], b_basis[j]) != (1 if i == j else 0):
                raise PreconditionError(f"B(a{i + 1}, b{j + 1}) != delta")


def two_step_to_matrix_algebra(g: QuadraticLieAlgebra, a_basis, b_basis, mu: Mat | None = None, e=None):
    """Extract the A_j of a 2-step nilpotent quadratic g = a ⊕ b and test a μ.

    Args:
        g: the quadratic Lie algebra.
        a_basis: vectors a_1..a_r.
        b_basis: vectors b_1..b_r with B(a_i, b_j) = δ_ij.
        mu: candidate symmetric invertible matrix; if None a small candidate
            set (±identity, diagonal sign patterns) is searched.
        e: optional totally skew tensor stored as matrices e_j; defaults to 0.

    Returns:
        (TwoStepData, MatrixAlgebraA, report dict)
    """
    _two_step_preconditions(g, a_basis, b_basis)
    r = len(a_basis)
    # α_ijk = B(a_i, [a_j, a_k]) since b is dual to a
    A = tuple(
        Mat(r, r, [[g.B(a_basis[i], g.bracket(a_basis[j], a_basis[k])) for k in range(r)] for i in range(r)])
        for j in range(r)
    )
    if e is None:
        e = tuple(Mat.zeros(r, r) for _ in range(r))
    else:
        e = tuple(x if isinstance(x, Mat) else Mat.from_rows(x) for x in e)
    if mu is not None:
        tried = [("given", mu)]
    else:
        tried = list(_mu_candidates(r))
    chosen = None
    for src, m in tried:
        if not m.is_symmetric() or m.rank() != r:
            continue
        alg = _matrix_algebra(A, m)
        if chosen is None:
            chosen = (src, m, alg)
        if alg.closure_witness is None and alg.invariant_ok:
            chosen = (src, m, alg)
            break
    if chosen is None:
        raise PreconditionError("mu must be symmetric and invertible")
    src, m, alg = chosen
    data = TwoStepData(r, A, m.inverse(), m, e)
    fails = data.invariant_failures()
    report = {
        "mu_source": src,
        "A_independent": "A_independent" not in fails,
        "alpha_cyclic": "alpha_cyclic" not in fails,
        "closure": alg.closure_witness is None,
        "closure_witness": alg.closure_witness,
        "jacobi": alg.jacobi_ok,
        "invariant": alg.invariant_ok,
        "perfect": False,
        "centerless": False,
    }
    if alg.algebra is not None:
        rep = structure_report(alg.algebra)
        report["perfect"] = rep.is_perfect
        report["centerless"] = rep.center.dim == 0
    return data, alg, report


def mu_from_geometry(geom: ExtensionGeometry, a_basis) -> Mat:
    """μ = λ^{-1} with λ_ij = B_g(T a_i, a_j), read off an existing metric."""
    Bg = geom.ext.base.form
    r = len(a_basis)
    lam = Mat(r, r, [[dot(geom.T @ a_basis[i], Bg @ a_basis[j]) for j in range(r)] for i in range(r)])
    return lam.inverse()


# ---------------------------------------------------------- (⇐) direction

def two_step_algebra(data: TwoStepData) -> QuadraticLieAlgebra:
    """g = a ⊕ b with [a_j, a_k] = Σ α_ijk b_i and the hyperbolic form."""
    r = data.r
    n = 2 * r
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.product(range(r), repeat=3):
        c[r + i][j][k] = data.alpha(i, j, k)
    labels = [f"a{i + 1}" for i in range(r)] + [f"b{i + 1}" for i in range(r)]
    return QuadraticLieAlgebra(LieAlgebra(c, labels), hyperbolic(r))


def matrix_algebra_to_extension(data: TwoStepData):
    """Central extension with V isotropic built from (A_j, μ, e_j).

    Returns:
        (ext, B_G, geom); geom has passed every geometry check.
    """
    fails = data.invariant_failures()
    if fails:
        raise VerificationError(f"two-step data invalid: {', '.join(fails)}", fails)
    alg = _matrix_algebra(data.A, data.mu)
    if alg.closure_witness is not None or not alg.jacobi_ok:
        raise VerificationError(
            "the 𝒜-bracket is not a Lie bracket; no invariant metric with V isotropic exists",
            alg.closure_witness,
        )
    r = data.r
    n = 2 * r
    N = n + r
    g = two_step_algebra(data)
    Z = Mat.zeros(r, r)
    mu, lam = data.mu, data.lam
    Ds = [block([[mu @ Aj, Z], [ej, Aj @ mu]]) for Aj, ej in zip(data.A, data.e)]
    T = block([[Z, Z], [lam, Z]])
    # h: a_j -> 0, b_j -> Σ μ_ij a_i, v_j -> b_j
    h = block([[Z, mu, Z], [Z, Z, Mat.identity(r)]])
    top = h.T @ g.form  # N x n
    BG = top.hstack(top.submatrix(range(n, N), range(n)).T.vstack(Mat.zeros(r, r)))
    labels = list(g.labels) + [f"v{i + 1}" for i in range(r)]
    ext = build_central_extension(g, Ds, labels=labels)
    geom = extension_geometry(ext, BG)
    if geom.T != T or geom.h != h:
        raise VerificationError("recovered T or h differ from the prescribed ones")
    if T @ T != Mat.zeros(n, n) or not is_centroid(g.alg, T):
        raise VerificationError("T is not a square-zero centroid element")
    return ext, BG, geom


# ---------------------------------------------------------------- Heisenberg

def symplectic_J(m: int) -> Mat:
    """ω(x, y) = xᵀ J y with ω(x_i, y_i) = 1."""
    I = Mat.identity(m)
    Z = Mat.zeros(m, m)
    return block([[Z, I], [I.scale(-1), Z]])


def default_rotation(m: int) -> Mat:
    """x_i -> y_i, y_i -> -x_i."""
    I = Mat.identity(m)
    Z = Mat.zeros(m, m)
    return block([[Z, I.scale(-1)], [I, Z]])


def heisenberg(m: int) -> LieAlgebra:
    if m < 1:
        raise InputError("m must be >= 1")
    n = 2 * m + 1
    labels = [f"x{i + 1}" for i in range(m)] + [f"y{i + 1}" for i in range(m)] + ["hbar"]
    return LieAlgebra.from_brackets(n, {(i, m + i): {n - 1: 1} for i in range(m)}, labels)


def _check_D(m: int, D: Mat) -> None:
    if D.shape != (2 * m, 2 * m):
        raise InputError(f"D must be {2 * m} x {2 * m}")
    if D.rank() != 2 * m:
        raise InputError("D must be invertible on V_m (Ker D = F hbar)")
    J = symplectic_J(m)
    if not (D.T @ J + J @ D).is_zero():
        raise InputError("D is not ω-skew: ω(Dx, y) != -ω(x, Dy)")


@dataclass
class HeisenbergFamily:
    m: int
    heis: LieAlgebra
    D: Mat | None = None
    oscillator: QuadraticLieAlgebra | None = None
    g_alg: LieAlgebra | None = None  # F D ⊕ V_m
    theta: Mat | None = None  # cocycle of oscillator -> g with values in F hbar
    dce: object = None


def oscillator_dce(m: int, D: Mat | None = None):
    """h_m[D] as a double central extension of the abelian V_m by a = F D."""
    from .doublecentral import DoubleExtensionContext, build_double_central_extension

    D = default_rotation(m) if D is None else D
    _check_D(m, D)
    BV = D.inverse().T @ symplectic_J(m)
    vlabels = [f"x{i + 1}" for i in range(m)] + [f"y{i + 1}" for i in range(m)]
    h_alg = QuadraticLieAlgebra(LieAlgebra.abelian(2 * m, vlabels), BV)
    ctx = DoubleExtensionContext.make(h_alg, 1, [D])
    return build_double_central_extension(ctx)


def oscillator(m: int, D: Mat | None = None) -> QuadraticLieAlgebra:
    dce = oscillator_dce(m, D)
    labels = ["D"] + list(dce.total.labels[1:-1]) + ["hbar"]
    return QuadraticLieAlgebra(LieAlgebra(dce.total.alg.c, labels), dce.total.form)


def heisenberg_family(m: int, D: Mat | None = None, with_derivation: bool = False) -> HeisenbergFamily:
    heis = heisenberg(m)
    if D is None and not with_derivation:
        return HeisenbergFamily(m, heis)
    D = default_rotation(m) if D is None else D
    dce = oscillator_dce(m, D)
    osc = oscillator(m, D)
    d = 2 * m + 1
    J = symplectic_J(m)
    theta = Mat(d, d, [[J[i - 1, j - 1] if i and j else ZERO for j in range(d)] for i in range(d)])
    g_alg = LieAlgebra(dce.g_alg.c, ["D"] + list(heis.labels[:-1]))
    return HeisenbergFamily(m, heis, D, osc, g_alg, theta, dce)


# ------------------------------------------------------ cotangent, reductive

def cotangent_extension(r: int, omega=None) -> QuadraticLieAlgebra:
    """a ⊕ a* with [a_i, a_j] = Σ_k ω[i][j][k] a_k* and the hyperbolic form."""
    from .doublecentral import DoubleExtensionContext, build_double_central_extension

    if omega is None:
        omega = levi_civita() if r == 3 else [[[0] * r for _ in range(r)] for _ in range(r)]
    w = cyclic_skew_witness(omega)
    if w is not None:
        raise VerificationError("omega is not cyclic and skew", w)
    h0 = QuadraticLieAlgebra(LieAlgebra([]), Mat.zeros(0, 0))
    dce = build_double_central_extension(DoubleExtensionContext.make(h0, r, None, None, omega))
    return dce.total


def reductive_extension(s: QuadraticLieAlgebra | None, r: int, alpha=None):
    """G = s ⊕ C ⊕ V with D_j(c_k) = Σ α_ijk c_i; s = None gives the abelian base.

    Returns:
        (ext, B_G) with B_G = B_s ⊥ hyperbolic(C, V).
    """
    if alpha is None:
        alpha = [[[0] * r for _ in range(r)] for _ in range(r)]
    if len(alpha) != r:
        raise InputError("alpha must be r x r x r")
    w = cyclic_skew_witness(alpha)
    if w is not None:
        raise VerificationError("alpha is not cyclic and skew", w)
    p = s.dim if s is not None else 0
    clabels = [f"c{i + 1}" for i in range(r)]
    C = LieAlgebra.abelian(r, clabels)
    if s is not None:
        base = QuadraticLieAlgebra(direct_sum(s, C), block_diag(s.form, Mat.identity(r)))
    else:
        base = QuadraticLieAlgebra(C, Mat.identity(r))
    Ds = []
    for j in range(r):
        Mj = Mat(r, r, [[Fraction(alpha[i][j][k]) for k in range(r)] for i in range(r)])
        Ds.append(block_diag(Mat.zeros(p, p), Mj) if p else Mj)
    ext = build_central_extension(base, Ds, labels=list(base.labels) + [f"v{i + 1}" for i in range(r)])
    BG = block_diag(s.form, hyperbolic(r)) if s is not None else hyperbolic(r)
    return ext, BG


# ------------------------------------------------------------------ N6 / G9

def _sigma(i: int) -> int:
    return (i + 1) % 3


def n6() -> QuadraticLieAlgebra:
    """[a_i, a_σ(i)] = b_σ²(i), B(a_j, b_k) = δ_jk."""
    br = {}
    for i in range(3):
        j, k = i, _sigma(i)
        val = {3 + _sigma(_sigma(i)): 1}
        if j < k:
            br[(j, k)] = val
        else:
            br[(k, j)] = {t: -x for t, x in val.items()}
    labels = ["a1", "a2", "a3", "b1", "b2", "b3"]
    return QuadraticLieAlgebra(LieAlgebra.from_brackets(6, br, labels), hyperbolic(3))


def g9_derivations() -> list[Mat]:
    """D_i(a_i) = D_i(b_i) = 0, D_i(b_σ(i)) = -D_σ(i)(b_i) = b_σ²(i),
    D_i(a_σ(i)) = -D_σ(i)(a_i) = a_σ²(i) + b_σ²(i)."""
    cols = [[[ZERO] * 6 for _ in range(6)] for _ in range(3)]  # cols[D][input][output]
    for i in range(3):
        s, s2 = _sigma(i), _sigma(_sigma(i))
        cols[i][3 + s][3 + s2] += 1
        cols[s][3 + i][3 + s2] -= 1
        cols[i][s][s2] += 1
        cols[i][s][3 + s2] += 1
        cols[s][i][s2] -= 1
        cols[s][i][3 + s2] -= 1
    return [Mat.from_cols(c, rows=6) for c in cols]


def g9_metric() -> Mat:
    """B_G(b_i, b_j) = B_G(a_i, v_j) = δ_ij, all other pairings 0."""
    rows = [[ZERO] * 9 for _ in range(9)]
    for i in range(3):
        rows[3 + i][3 + i] = Fraction(1)
        rows[i][6 + i] = Fraction(1)
        rows[6 + i][i] = Fraction(1)
    return Mat(9, 9, rows)


def g9() -> tuple[CentralExtension, Mat]:
    g = n6()
    labels = list(g.labels) + ["v1", "v2", "v3"]
    return build_central_extension(g, g9_derivations(), labels=labels), g9_metric()


N6_REFERENCE_A = (
    ((0, 0, 0), (0, 0, -1), (0, 1, 0)),
    ((0, 0, 1), (0, 0, 0), (-1, 0, 0)),
    ((0, -1, 0), (1, 0, 0), (0, 0, 0)),
)


def n6_bases():
    g = n6()
    return [unit_vec(6, i) for i in range(3)], [unit_vec(6, 3 + i) for i in range(3)]


# --------------------------------------------------------------- mixed cases

def mixed_abelian() -> tuple[CentralExtension, Mat]:
    """Abelian Q^2 extended trivially by Q^2; B_G pairs e1-v1, e2·e2 = v2·v2 = 1."""
    base = QuadraticLieAlgebra(LieAlgebra.abelian(2, ["e1", "e2"]), Mat.identity(2))
    ext = build_central_extension(base, [Mat.zeros(2, 2)] * 2, labels=["e1", "e2", "v1", "v2"])
    B = Mat.from_rows([[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]])
    return ext, B


def mixed_sl2() -> tuple[CentralExtension, Mat]:
    """sl2 ⊕ Fc extended by D_1 = ad(h), D_2 = ad(e); V ∩ V⊥ = F v1."""
    s = sl2()
    base = QuadraticLieAlgebra(direct_sum(s, LieAlgebra.abelian(1, ["c"])), block_diag(s.form, Mat.identity(1)))
    tail = Mat.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]])  # on (c, v1, v2)
    B_split = block_diag(s.form, tail)
    return split_extension_metric(base, [unit_vec(4, 1), unit_vec(4, 0)], B_split)


# ------------------------------------------------------------- fixture table

@dataclass
class Fixture:
    name: str
    algebra: LieAlgebra
    form: Mat | None
    ext: CentralExtension | None = None
    tags: dict = field(default_factory=dict)

    @property
    def B_G(self) -> Mat | None:
        return self.form if self.ext is not None else None


def _ext_fixture(name: str, ext: CentralExtension, B: Mat, **tags) -> Fixture:
    if not verify_quadratic(ext.total, B).ok:
        raise VerificationError(f"fixture {name}: metric fails")
    return Fixture(name, ext.total, B, ext, tags)


def _qla_fixture(name: str, q: QuadraticLieAlgebra, **tags) -> Fixture:
    return Fixture(name, q.alg, q.form, None, tags)


def _names(alg: LieAlgebra, idx) -> list[str]:
    return [alg.labels[i] for i in idx]


def builtin_example(name: str) -> Fixture:
    """Named fixtures: N6, G9, G9e0, sl2, abelian(n), heis(m), oscillator(m),
    cotangent(r), cotext(r), reductive, reductive(r), mixed, mixed-abelian, sl2-inner,
    N6-inner, oscillator-trivial."""
    key = name.strip()
    mt = re.fullmatch(r"([A-Za-z0-9_-]+?)(?:\((\d+)\))?", key)
    if not mt:
        raise InputError(f"unknown example {name!r}")
    base, arg = mt.group(1), mt.group(2)
    low = base.lower()
    k = int(arg) if arg is not None else None
    if low == "n6":
        q = n6()
        return _qla_fixture("N6", q, nilradical=list(q.labels), source="worked example")
    if low == "g9":
        ext, B = g9()
        return _ext_fixture("G9", ext, B, nilradical=list(ext.total.labels), source="worked example")
    if low == "g9e0":
        data, _, _ = two_step_to_matrix_algebra(n6(), *n6_bases(), mu=Mat.identity(3))
        ext, B, _ = matrix_algebra_to_extension(data)
        return _ext_fixture("G9e0", ext, B, nilradical=list(ext.total.labels), source="e = 0 variant")
    if low == "sl2":
        return _qla_fixture("sl2", sl2(), nilradical=[])
    if low == "abelian":
        n = 2 if k is None else k
        a = LieAlgebra.abelian(n)
        return Fixture(f"abelian({n})", a, Mat.identity(n), None, {"nilradical": list(a.labels)})
    if low == "heis":
        m = 1 if k is None else k
        h = heisenberg(m)
        return Fixture(f"heis({m})", h, None, None, {"nilradical": list(h.labels)})
    if low == "oscillator":
        m = 1 if k is None else k
        return _qla_fixture(f"oscillator({m})", oscillator(m))
    if low == "cotangent":
        r = 3 if k is None else k
        q = cotangent_extension(r)
        return _qla_fixture(f"cotangent({r})", q, nilradical=list(q.labels))
    if low == "cotext":
        r = 3 if k is None else k
        alpha = levi_civita() if r == 3 else None
        ext, B = reductive_extension(None, r, alpha)
        return _ext_fixture(f"cotext({r})", ext, B, nilradical=list(ext.total.labels))
    if low == "reductive":
        r = 3 if k is None else k
        alpha = levi_civita() if r == 3 else None
        ext, B = reductive_extension(sl2(), r, alpha)
        return _ext_fixture(f"reductive({r})", ext, B, base_nilradical=_names(ext.base.alg, range(3, 3 + r)))
    if low == "mixed":
        ext, B = mixed_sl2()
        return _ext_fixture("mixed", ext, B, base_nilradical=["c"])
    if low == "mixed-abelian":
        ext, B = mixed_abelian()
        return _ext_fixture("mixed-abelian", ext, B)
    if low == "sl2-inner":
        s = sl2()
        ext, B = split_extension_metric(s, [unit_vec(3, 1)], block_diag(s.form, Mat.identity(1)))
        return _ext_fixture("sl2-inner", ext, B, base_nilradical=[])
    if low == "n6-inner":
        q = n6()
        ext, B = split_extension_metric(q, [unit_vec(6, 0)], block_diag(q.form, Mat.identity(1)))
        return _ext_fixture("N6-inner", ext, B, nilradical=list(ext.total.labels))
    if low == "oscillator-trivial":
        q = oscillator(1)
        ext = build_central_extension(q, [Mat.zeros(4, 4)], labels=list(q.labels) + ["v1"])
        return _ext_fixture("oscillator-trivial", ext, block_diag(q.form, Mat.identity(1)))
    raise InputError(f"unknown example {name!r}")


EXTENSION_FIXTURES = (
    "G9", "G9e0", "cotext(3)", "cotext(2)", "reductive(3)", "reductive(1)",
    "mixed", "mixed-abelian", "sl2-inner", "N6-inner", "oscillator-trivial",
)


def extension_fixtures() -> list[Fixture]:
    """Every built-in extension carrying a metric, plus a direct sum of two of them."""
    out = [builtin_example(n) for n in EXTENSION_FIXTURES]
    g9f = out[0]
    sl = builtin_example("sl2-inner")
    ext, B = direct_sum_extensions(g9f.ext, g9f.form, sl.ext, sl.form)
    out.append(_ext_fixture("G9+sl2-inner", ext, B))
    return out

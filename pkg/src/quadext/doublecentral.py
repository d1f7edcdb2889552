"""Double central extensions a ⊕ h ⊕ a*.

Coordinates on the total space are (a_1..a_r, h_1..h_p, a*_1..a*_r).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InternalConsistencyError, VerificationError
from .exactlin import Mat, Subspace, Vec, dot, image_basis, kernel_basis, nullspace, unit_vec
from .extensions import (
    ISOTROPIC,
    CentralExtension,
    ExtensionGeometry,
    _require,
    build_central_extension,
    derivations_from_cocycle,
    extension_geometry,
    make_kernel_dual_isotropic,
)
from .liealg import (
    LieAlgebra,
    QuadraticLieAlgebra,
    _centroid_equations,
    _symmetric_equations,
    _to_mats,
    block_diag,
    change_basis,
    invariant_forms,
    is_hom,
    is_skew,
    is_derivation,
)

ZERO = Fraction(0)

# exact grid search is used while (dim g + 1) ** dim S stays below this
GRID_BUDGET = 4096
DEFAULT_SEED = 0


@dataclass
class DoubleExtensionContext:
    h_alg: QuadraticLieAlgebra
    r: int
    phi: tuple  # r maps h -> h
    psi: tuple  # psi[i][j] = Ψ(a_i, a_j) as an h-vector
    omega: tuple  # omega[i][j][k] = ω(a_i, a_j)(a_k)

    @property
    def p(self) -> int:
        return self.h_alg.dim

    @classmethod
    def make(cls, h_alg, r, phi=None, psi=None, omega=None) -> "DoubleExtensionContext":
        p = h_alg.dim
        if phi is None:
            phi = [Mat.zeros(p, p) for _ in range(r)]
        if psi is None:
            psi = [[(ZERO,) * p for _ in range(r)] for _ in range(r)]
        if omega is None:
            omega = [[[0] * r for _ in range(r)] for _ in range(r)]
        return cls(
            h_alg,
            r,
            tuple(phi),
            tuple(tuple(tuple(Fraction(x) for x in psi[i][j]) for j in range(r)) for i in range(r)),
            tuple(tuple(tuple(Fraction(x) for x in omega[i][j]) for j in range(r)) for i in range(r)),
        )

    def Phi(self, x: Sequence, y: Sequence) -> Vec:
        """Φ(x,y)(a_i) = B_h(φ(a_i)x, y), as coordinates in a*."""
        return tuple(self.h_alg.B(self.phi[i] @ x, y) for i in range(self.r))

    def chi(self, i: int, x: Sequence) -> Vec:
        """χ(a_i, x)(a_j) = -B_h(Ψ(a_i, a_j), x)."""
        return tuple(-self.h_alg.B(self.psi[i][j], x) for j in range(self.r))

    def psi_of(self, a: Sequence, b: Sequence) -> Vec:
        p = self.p
        out = [ZERO] * p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        for s in range(p):
                            out[s] += x * y * self.psi[i][j][s]
        return tuple(out)

    def phi_of(self, a: Sequence) -> Mat:
        M = Mat.zeros(self.p, self.p)
        for i, x in enumerate(a):
            if x:
                M = M + self.phi[i].scale(x)
        return M

    def chi_of(self, a: Sequence, x: Sequence) -> Vec:
        return tuple(-self.h_alg.B(self.psi_of(a, unit_vec(self.r, j)), x) for j in range(self.r))


@dataclass
class ContextReport:
    checks: dict
    Phi: tuple  # Phi[s][t] = Φ(h_s, h_t) in a* coordinates
    chi: tuple  # chi[i][s] = χ(a_i, h_s)

    @property
    def ok(self) -> bool:
        return all(v is None for v in self.checks.values())

    def failures(self) -> dict:
        return {k: v for k, v in self.checks.items() if v is not None}


def check_context(ctx: DoubleExtensionContext) -> ContextReport:
    r, p = ctx.r, ctx.p
    h = ctx.h_alg
    Ea = [unit_vec(r, i) for i in range(r)]
    Eh = [unit_vec(p, s) for s in range(p)]
    checks: dict = {}
    if len(ctx.phi) != r or any(P.shape != (p, p) for P in ctx.phi):
        raise VerificationError("phi must be r maps of shape p x p")
    checks["phi_skew_derivation"] = next(
        (i for i, P in enumerate(ctx.phi) if not (is_derivation(h.alg, P) and is_skew(h.form, P))), None
    )
    checks["psi_skew"] = next(
        ((i, j) for i in range(r) for j in range(i, r) if ctx.psi[i][j] != tuple(-x for x in ctx.psi[j][i])), None
    )
    # [φ(a),φ(b)] = ad_h Ψ(a,b)
    bad = None
    for i, j in itertools.combinations(range(r), 2):
        if ctx.phi[i] @ ctx.phi[j] - ctx.phi[j] @ ctx.phi[i] != h.alg.ad(ctx.psi[i][j]):
            bad = (i, j)
            break
    checks["phi_bracket_inner"] = bad
    # cyclic sum of φ(a)Ψ(b,c) vanishes
    bad = None
    for i, j, k in itertools.product(range(r), repeat=3):
        s = [a + b + c for a, b, c in zip(ctx.phi[i] @ ctx.psi[j][k], ctx.phi[j] @ ctx.psi[k][i], ctx.phi[k] @ ctx.psi[i][j])]
        if any(s):
            bad = (i, j, k)
            break
    checks["cyclic_phi_psi"] = bad
    # cyclic sum of χ(a, Ψ(b,c)) vanishes
    bad = None
    for i, j, k in itertools.product(range(r), repeat=3):
        s = [a + b + c for a, b, c in zip(ctx.chi(i, ctx.psi[j][k]), ctx.chi(j, ctx.psi[k][i]), ctx.chi(k, ctx.psi[i][j]))]
        if any(s):
            bad = (i, j, k)
            break
    checks["cyclic_chi_psi"] = bad
    # ω skew and ω(a,b)(c) = ω(b,c)(a)
    bad = None
    om = ctx.omega
    for i, j, k in itertools.product(range(r), repeat=3):
        if om[i][j][k] != -om[j][i][k] or om[i][j][k] != om[j][k][i]:
            bad = (i, j, k)
            break
    checks["omega_cyclic"] = bad
    Phi = tuple(tuple(ctx.Phi(Eh[s], Eh[t]) for t in range(p)) for s in range(p))
    chi = tuple(tuple(ctx.chi(i, Eh[s]) for s in range(p)) for i in range(r))
    return ContextReport(checks, Phi, chi)


@dataclass
class DoubleCentralExtension:
    context: DoubleExtensionContext
    total: QuadraticLieAlgebra
    g_alg: LieAlgebra  # a ⊕ h with the induced bracket

    @property
    def r(self) -> int:
        return self.context.r

    @property
    def p(self) -> int:
        return self.context.p

    def a_star(self) -> Subspace:
        N = self.total.dim
        return Subspace.span(N, [unit_vec(N, self.r + self.p + i) for i in range(self.r)])


def _dce_tensors(ctx: DoubleExtensionContext):
    r, p = ctx.r, ctx.p
    N = 2 * r + p
    gdim = r + p
    c = [[[ZERO] * N for _ in range(N)] for _ in range(N)]
    h = ctx.h_alg
    Eh = [unit_vec(p, s) for s in range(p)]

    def put(i, j, vec_h, vec_astar):
        for s in range(p):
            x = vec_h[s] if vec_h else 0
            if x:
                c[r + s][i][j] += x
                c[r + s][j][i] -= x
        for k in range(r):
            x = vec_astar[k] if vec_astar else 0
            if x:
                c[gdim + k][i][j] += x
                c[gdim + k][j][i] -= x

    for i in range(r):
        for j in range(i + 1, r):
            put(i, j, ctx.psi[i][j], ctx.omega[i][j])
    for i in range(r):
        for s in range(p):
            put(i, r + s, ctx.phi[i] @ Eh[s], ctx.chi(i, Eh[s]))
    for s in range(p):
        for t in range(s + 1, p):
            put(r + s, r + t, h.alg.bracket_basis(s, t), ctx.Phi(Eh[s], Eh[t]))
    B = [[ZERO] * N for _ in range(N)]
    for s in range(p):
        for t in range(p):
            B[r + s][r + t] = h.form[s, t]
    for i in range(r):
        B[i][gdim + i] = Fraction(1)
        B[gdim + i][i] = Fraction(1)
    gc = [[[c[i][j][k] for k in range(gdim)] for j in range(gdim)] for i in range(gdim)]
    return c, Mat(N, N, B), gc


def _labels(ctx: DoubleExtensionContext):
    return [f"a{i + 1}" for i in range(ctx.r)] + list(ctx.h_alg.labels) + [f"a{i + 1}*" for i in range(ctx.r)]


def build_double_central_extension(ctx: DoubleExtensionContext) -> DoubleCentralExtension:
    rep = check_context(ctx)
    if not rep.ok:
        name, wit = next(iter(rep.failures().items()))
        raise VerificationError(f"not a context: {name} fails", wit)
    c, B, gc = _dce_tensors(ctx)
    total = QuadraticLieAlgebra(LieAlgebra(c, _labels(ctx)), B)
    g_alg = LieAlgebra(gc, _labels(ctx)[: ctx.r + ctx.p])
    dce = DoubleCentralExtension(ctx, total, g_alg)
    # a* central, projection G -> g is a morphism
    N = total.dim
    gdim = ctx.r + ctx.p
    for k in range(ctx.r):
        if not total.alg.ad(unit_vec(N, gdim + k)).is_zero():
            raise InternalConsistencyError("a* is not central")
    proj = Mat.identity(N).submatrix(range(gdim), range(N))
    if not is_hom(total.alg, g_alg, proj):
        raise InternalConsistencyError("G -> a ⊕ h is not a morphism")
    return dce


def as_central_extension(dce: DoubleCentralExtension, B_g: Mat) -> tuple[CentralExtension, Mat]:
    """View G as a central extension of (a ⊕ h, B_g) by a*; returns (ext, B_G).

    The coordinates of ext.total agree with those of dce.total.
    """
    gdim = dce.r + dce.p
    base = QuadraticLieAlgebra(dce.g_alg, B_g)
    c = dce.total.alg.c
    thetas = [Mat(gdim, gdim, [[c[gdim + a][j][k] for k in range(gdim)] for j in range(gdim)]) for a in range(dce.r)]
    Ds = derivations_from_cocycle(base, thetas)
    ext = build_central_extension(base, Ds, labels=dce.total.labels)
    if ext.total.c != dce.total.alg.c:
        raise InternalConsistencyError("central extension view does not reproduce the bracket")
    return ext, dce.total.form


# ---------------------------------------------------------------- extraction

@dataclass
class Extraction:
    context: DoubleExtensionContext
    Omega: Mat  # G coordinates -> (a, h, a*) coordinates
    metric: Mat  # the metric on G for which a is isotropic (B̄_G)
    Q: Mat
    dce: DoubleCentralExtension
    h_basis: Mat  # columns: basis of Im T inside g
    xi: Mat  # xi[i][j] = B̄_G(a_i, v_j)


def extract_double_data(ext: CentralExtension, geom: ExtensionGeometry) -> Extraction:
    _require(geom, ext, ISOTROPIC)
    n, r = ext.n, ext.r
    N = n + r
    Q, Bbar = make_kernel_dual_isotropic(geom, ext)
    gb = extension_geometry(ext, Bbar)
    g = ext.base.alg
    A = list(gb.a)
    hsp = image_basis(gb.T)
    Hb = hsp.basis
    hv = hsp.vectors()
    p = hsp.dim
    if p != n - r:
        raise InternalConsistencyError(f"dim Im T = {p}, expected {n - r}")
    emb = [ext.embed(x) for x in hv]
    B_h = Mat(p, p, [[dot(x, Bbar @ y) for y in emb] for x in emb])
    hc = [[[ZERO] * p for _ in range(p)] for _ in range(p)]
    for s in range(p):
        for t in range(s + 1, p):
            co = hsp.coordinates(g.bracket(hv[s], hv[t]))
            if co is None:
                raise InternalConsistencyError("Im T is not a subalgebra")
            for u in range(p):
                hc[u][s][t] = co[u]
                hc[u][t][s] = -co[u]
    h_alg = QuadraticLieAlgebra(LieAlgebra(hc, [f"h{s + 1}" for s in range(p)]), B_h)
    phi = []
    for i in range(r):
        cols = [hsp.coordinates(g.bracket(A[i], x)) for x in hv]
        if any(cc is None for cc in cols):
            raise InternalConsistencyError("[a, Im T] leaves Im T")
        phi.append(Mat.from_cols(cols, rows=p) if p else Mat.zeros(0, 0))
    psi = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            co = hsp.coordinates(g.bracket(A[i], A[j]))
            if co is None:
                raise InternalConsistencyError("[a, a] leaves Im T")
            psi[i][j] = co
    Bg = ext.base.form
    omega = [[[dot(ext.derivations[k] @ A[i], Bg @ A[j]) for k in range(r)] for j in range(r)] for i in range(r)]
    ctx = DoubleExtensionContext.make(h_alg, r, phi, psi, omega)
    dce = build_double_central_extension(ctx)
    # xi(v_j)(a_i) = B̄(a_i, v_j)
    xi = Mat(r, r, [[dot(ext.embed(A[i]), Bbar @ unit_vec(N, n + j)) for j in range(r)] for i in range(r)])
    P = Mat.from_cols([ext.embed(a) for a in A] + emb + [unit_vec(N, n + j) for j in range(r)], rows=N)
    Omega = block_diag(Mat.identity(r), Mat.identity(p), xi) @ P.inverse()
    if not is_hom(ext.total, dce.total.alg, Omega):
        raise InternalConsistencyError("Omega is not a Lie morphism")
    if Omega.T @ dce.total.form @ Omega != Bbar:
        raise InternalConsistencyError("Omega is not an isometry")
    return Extraction(ctx, Omega, Bbar, Q, dce, Hb, xi)


def roundtrip_matches(ext: CentralExtension, ex: Extraction) -> bool:
    """Structure tensor and form of G equal those of the rebuilt algebra pulled back by Ω."""
    # the columns of Ω are the images of G's basis vectors
    pulled = change_basis(ex.dce.total.alg, ex.Omega)
    return pulled.c == ext.total.c and ex.Omega.T @ ex.dce.total.form @ ex.Omega == ex.metric


# -------------------------------------------------------- metric existence

@dataclass
class MetricVerdict:
    verdict: str  # "Yes" | "No" | "Inconclusive"
    L: Mat | None = None
    B_g: Mat | None = None
    trials: int = 0
    seed: int = DEFAULT_SEED
    certificate: dict = field(default_factory=dict)


def _space_S(dce: DoubleCentralExtension) -> list[Mat]:
    """{L ∈ Γ_{B_G}(G) : L(a*) = 0}."""
    G = dce.total
    N = G.dim
    gdim = dce.r + dce.p
    eqs = _centroid_equations(G.alg) + _symmetric_equations(G.form)
    for i in range(N):
        for j in range(gdim, N):
            eqs.append({i * N + j: Fraction(1)})
    return _to_mats(nullspace(eqs, N * N), N)


def g_metric_existence(dce: DoubleCentralExtension, seed: int = DEFAULT_SEED, trials: int = 64) -> MetricVerdict:
    """Does a ⊕ h (with the induced bracket) carry an invariant metric?

    Searches S = {L symmetric centroid of G with L(a*) = 0} for an L whose
    restriction to a ⊕ h is injective. "No" is only returned when it is
    proved: either S restricted to a ⊕ h has no full-rank member on the
    grid {0..d}^s (d = dim g, s = dim S), which by the grid lemma for
    polynomials of degree <= d in each variable means every d x d minor
    vanishes identically, or the column span of all of S is already too
    small.
    """
    G = dce.total
    N = G.dim
    d = dce.r + dce.p
    S = _space_S(dce)
    s = len(S)
    rest = [L.submatrix(range(N), range(d)) for L in S]

    def success(L, used, how):
        Bg = (L.T @ G.form).submatrix(range(d), range(d))
        QuadraticLieAlgebra(dce.g_alg, Bg)  # raises if not an invariant metric
        if kernel_basis(L) != dce.a_star():
            raise InternalConsistencyError("Ker L != a*")
        return MetricVerdict("Yes", L, Bg, used, seed, {"method": how, "dim_S": s})

    if d == 0:
        return MetricVerdict("Yes", Mat.zeros(N, N), Mat.zeros(0, 0), 0, seed, {"method": "empty"})
    if s == 0:
        return MetricVerdict("No", trials=0, seed=seed, certificate={"method": "S = 0", "dim_S": 0})
    # every combination has image inside the joint column span
    stacked = rest[0]
    for M in rest[1:]:
        stacked = stacked.hstack(M)
    row_rank = stacked.rank()
    if row_rank < d:
        return MetricVerdict(
            "No", trials=0, seed=seed,
            certificate={"method": "image bound", "dim_S": s, "max_rank_bound": row_rank, "needed": d},
        )
    used = 0
    for idx, M in enumerate(rest):
        used += 1
        if M.rank() == d:
            return success(S[idx], used, "basis element")
    if (d + 1) ** s <= GRID_BUDGET:
        best = 0
        for pt in itertools.product(range(d + 1), repeat=s):
            used += 1
            M = _combo(rest, pt)
            rk = M.rank()
            if rk == d:
                return success(_combo(S, pt), used, "grid")
            best = max(best, rk)
        return MetricVerdict(
            "No", trials=used, seed=seed,
            certificate={"method": "grid", "grid": f"{{0..{d}}}^{s}", "dim_S": s, "max_rank": best, "needed": d},
        )
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        used += 1
        pt = [rng.randint(-10 * d, 10 * d) for _ in range(s)]
        M = _combo(rest, pt)
        rk = M.rank()
        if rk == d:
            return success(_combo(S, pt), used, "random")
        best = max(best, rk)
    return MetricVerdict("Inconclusive", trials=used, seed=seed, certificate={"dim_S": s, "max_rank_seen": best, "needed": d})


def _combo(ms: list[Mat], coeffs) -> Mat:
    out = None
    for M, c in zip(ms, coeffs):
        if c:
            t = M.scale(c)
            out = t if out is None else out + t
    return out if out is not None else Mat.zeros(ms[0].rows, ms[0].cols)


def heisenberg_invariant_forms(m: int) -> list[Mat]:
    """Basis of the symmetric invariant forms of h_m; each must kill ℏ."""
    from .nilpotent2 import heisenberg

    alg = heisenberg(m)
    forms = invariant_forms(alg)
    hb = unit_vec(alg.dim, alg.dim - 1)
    for B in forms:
        if any(B @ hb):
            raise InternalConsistencyError("invariant form on the Heisenberg algebra does not kill hbar")
    return forms

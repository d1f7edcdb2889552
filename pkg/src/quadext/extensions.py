"""Central extensions of quadratic Lie algebras and the maps h, k, T, L.

Coordinates on the total algebra G are (e_1..e_n, v_1..v_r): the first n
are the base g, the last r span the kernel V.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import InternalConsistencyError, PreconditionError, VerificationError
from .exactlin import (
    Mat,
    Subspace,
    Vec,
    dot,
    fitting_index,
    image_basis,
    kernel_basis,
    kernel_vectors,
    solve_sparse,
    unit_vec,
    vsub,
    zero_vec,
)
from .liealg import (
    LieAlgebra,
    QuadraticLieAlgebra,
    block_diag,
    center,
    descending_series,
    direct_sum,
    inner_witness,
    is_centroid,
    is_hom,
    is_ideal,
    upper_series,
    verify_quadratic,
)

ZERO = Fraction(0)

NONDEGENERATE = "NonDegenerate"
ISOTROPIC = "Isotropic"
MIXED = "Mixed"


# ------------------------------------------------------------------ building

def derivation_witness(alg: LieAlgebra, D: Mat):
    n = alg.dim
    E = [unit_vec(n, i) for i in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            lhs = D @ alg.bracket_basis(j, k)
            rhs = tuple(a + b for a, b in zip(alg.bracket(D.col(j), E[k]), alg.bracket(E[j], D.col(k))))
            if lhs != rhs:
                return (j, k)
    return None


def skew_pair_witness(B: Mat, D: Mat):
    S = D.T @ B + B @ D
    for i in range(S.rows):
        for j in range(i, S.cols):
            if S[i, j]:
                return (i, j)
    return None


def cocycle_from_derivations(base: QuadraticLieAlgebra, derivations: Sequence[Mat]) -> list[Mat]:
    """Θ_i[j][k] = B_g(D_i e_j, e_k)."""
    return [D.T @ base.form for D in derivations]


def cocycle_witness(alg: LieAlgebra, theta: Mat):
    """First triple breaking θ([x,y],z) + θ([y,z],x) + θ([z,x],y) = 0."""
    n = alg.dim
    E = [unit_vec(n, i) for i in range(n)]

    def th(u, w):
        return dot(u, theta @ w)

    for a, b, c in combinations(range(n), 3):
        s = th(alg.bracket_basis(a, b), E[c]) + th(alg.bracket_basis(b, c), E[a]) + th(alg.bracket_basis(c, a), E[b])
        if s:
            return (a, b, c)
    return None


def derivations_from_cocycle(base: QuadraticLieAlgebra, thetas: Sequence[Mat]) -> list[Mat]:
    """Inverse of :func:`cocycle_from_derivations`: D_i = B_g^{-1} Θ_i^T."""
    n = base.dim
    Binv = base.form.inverse()
    out = []
    for idx, th in enumerate(thetas):
        if th.shape != (n, n):
            raise VerificationError("cocycle component has the wrong shape", idx)
        w = next(((j, k) for j in range(n) for k in range(j, n) if th[j, k] != -th[k, j]), None)
        if w is not None:
            raise VerificationError(f"cocycle component {idx} is not skew", w)
        w = cocycle_witness(base.alg, th)
        if w is not None:
            raise VerificationError(f"cocycle component {idx} fails the 2-cocycle identity", w)
        out.append(Binv @ th.T)
    return out


def cocycle_derivation_convert(base: QuadraticLieAlgebra, *, theta=None, derivations=None):
    if (theta is None) == (derivations is None):
        raise ValueError("pass exactly one of theta= or derivations=")
    if theta is not None:
        return derivations_from_cocycle(base, theta)
    for i, D in enumerate(derivations):
        _check_skew_derivation(base, D, i)
    return cocycle_from_derivations(base, derivations)


def _check_skew_derivation(base: QuadraticLieAlgebra, D: Mat, idx: int) -> None:
    if D.shape != (base.dim, base.dim):
        raise VerificationError(f"D_{idx + 1} has shape {D.shape}", idx)
    w = derivation_witness(base.alg, D)
    if w is not None:
        raise VerificationError(f"D_{idx + 1} is not a derivation", w)
    w = skew_pair_witness(base.form, D)
    if w is not None:
        raise VerificationError(f"D_{idx + 1} is not skew for the form", w)


@dataclass
class CentralExtension:
    base: QuadraticLieAlgebra
    derivations: tuple
    total: LieAlgebra

    @property
    def n(self) -> int:
        return self.base.dim

    @property
    def r(self) -> int:
        return len(self.derivations)

    @property
    def dim(self) -> int:
        return self.n + self.r

    def cocycle(self) -> list[Mat]:
        return cocycle_from_derivations(self.base, self.derivations)

    def V(self) -> Subspace:
        N = self.dim
        return Subspace.span(N, [unit_vec(N, self.n + i) for i in range(self.r)])

    def g_part(self) -> Subspace:
        N = self.dim
        return Subspace.span(N, [unit_vec(N, j) for j in range(self.n)])

    def embed(self, x: Sequence) -> Vec:
        return tuple(x) + zero_vec(self.r)

    def embed_v(self, v: Sequence) -> Vec:
        return zero_vec(self.n) + tuple(v)


def build_central_extension(base: QuadraticLieAlgebra, derivations: Sequence[Mat], labels=None) -> CentralExtension:
    """[x+u, y+v] = [x,y]_g + sum_i B_g(D_i x, y) v_i."""
    n = base.dim
    for i, D in enumerate(derivations):
        _check_skew_derivation(base, D, i)
    r = len(derivations)
    N = n + r
    c = [[[ZERO] * N for _ in range(N)] for _ in range(N)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i][j][k] = base.alg.c[i][j][k]
    for a, th in enumerate(cocycle_from_derivations(base, derivations)):
        for j in range(n):
            for k in range(n):
                c[n + a][j][k] = th[j, k]
    if labels is None:
        labels = list(base.labels) + [f"v{i + 1}" for i in range(r)]
    total = LieAlgebra(c, labels)
    return CentralExtension(base, tuple(derivations), total)


def splitting_map(ext: CentralExtension) -> Mat | None:
    """τ: g -> V with θ(x,y) = τ([x,y]_g), or None if the sequence does not split.

    The answer is cross-checked against inner_witness on every D_i.
    """
    n, r = ext.n, ext.r
    alg = ext.base.alg
    rows = []
    for a, th in enumerate(ext.cocycle()):
        for j in range(n):
            for k in range(j + 1, n):
                coeffs = {a * n + p: alg.c[p][j][k] for p in range(n) if alg.c[p][j][k]}
                if coeffs or th[j, k]:
                    rows.append((coeffs, th[j, k]))
    sol = solve_sparse(rows, r * n)
    inner = all(inner_witness(alg, D) is not None for D in ext.derivations)
    if (sol is not None) != inner:
        raise InternalConsistencyError(
            f"splitting map {'found' if sol is not None else 'missing'} but derivations inner={inner}"
        )
    if sol is None:
        return None
    return Mat(r, n, [sol[a * n:(a + 1) * n] for a in range(r)])


# ------------------------------------------------------------------ geometry

@dataclass
class ExtensionGeometry:
    B_G: Mat
    h: Mat  # n x (n+r)
    k: Mat  # (n+r) x n
    T: Mat
    R: Mat
    a: tuple
    w: tuple
    L: Mat
    m: int
    ext: CentralExtension = field(repr=False)

    def rho(self, x: Sequence) -> Mat:
        """ρ(x)(y) = h([x,y]_G) for x in G, y in g; returned as an n x n matrix."""
        ext = self.ext
        n = ext.n
        X = tuple(x) if len(x) == ext.dim else ext.embed(x)
        cols = [self.h @ ext.total.bracket(X, ext.embed(unit_vec(n, j))) for j in range(n)]
        return Mat.from_cols(cols, rows=n)

    def delta_bracket(self, x: Sequence, y: Sequence) -> Vec:
        ext = self.ext
        return self.h @ ext.total.bracket(ext.embed(x), ext.embed(y))

    @property
    def A(self) -> Mat:
        """n x r matrix with columns a_i."""
        return Mat.from_cols(self.a, rows=self.ext.n) if self.a else Mat.zeros(self.ext.n, 0)


def extension_geometry(ext: CentralExtension, B_G: Mat, check: bool = True) -> ExtensionGeometry:
    rep = verify_quadratic(ext.total, B_G)
    if not rep.ok:
        bad = [k for k in ("symmetric_ok", "nondegenerate_ok", "invariant_ok") if not getattr(rep, k)]
        raise VerificationError(f"B_G is not an invariant metric on G: {', '.join(bad)}", rep.witnesses)
    n, r = ext.n, ext.r
    N = n + r
    Bg = ext.base.form
    h = Bg.inverse() @ B_G.submatrix(range(n), range(N))
    k = B_G.inverse() @ Bg.vstack(Mat.zeros(r, n))
    T = k.submatrix(range(n), range(n))
    R = k.submatrix(range(n, N), range(n))
    K = kernel_vectors(h)
    if len(K) != r:
        raise InternalConsistencyError(f"Ker h has dim {len(K)}, expected {r}")
    a: tuple = ()
    w: tuple = ()
    if r:
        Km = Mat.from_cols(K, rows=N)
        M = Km.T @ B_G.submatrix(range(N), range(n, N))
        C = M.inverse().T
        Nn = Km @ C
        a = tuple(Nn.col(i)[:n] for i in range(r))
        w = tuple(Nn.col(i)[n:] for i in range(r))
    L = k.hstack(Mat.zeros(N, r))
    m = fitting_index(T)[0]
    geom = ExtensionGeometry(B_G, h, k, T, R, a, w, L, m, ext)
    if check:
        bad = {name: wit for name, wit in geometry_report(ext, geom).items() if wit is not None}
        if bad:
            raise InternalConsistencyError(f"geometry invariants failed: {bad}")
    return geom


def _first_bad(pairs):
    for idx, ok in pairs:
        if not ok:
            return idx
    return None


def geometry_report(ext: CentralExtension, geom: ExtensionGeometry) -> dict:
    """Check every structural identity. Maps name -> None (ok) or a witness."""
    n, r = ext.n, ext.r
    N = n + r
    G = ext.total
    g = ext.base.alg
    Bg = ext.base.form
    BG = geom.B_G
    h, k, T, L = geom.h, geom.k, geom.T, geom.L
    En = [unit_vec(n, i) for i in range(n)]
    EN = [unit_vec(N, i) for i in range(N)]
    out: dict = {}

    out["h_k_identity"] = None if h @ k == Mat.identity(n) else "h k != Id"
    # B_G(X, y) = B_g(h X, y) for X in G, y in g
    out["h_adjoint"] = None if BG.submatrix(range(N), range(n)) == h.T @ Bg else "B_G(X,y) != B_g(hX,y)"
    # B_G(k x, Y) = B_g(x, pi_g Y)
    out["k_adjoint"] = None if k.T @ BG == Bg.hstack(Mat.zeros(n, r)) else "B_G(kx,Y) != B_g(x,Y_g)"
    gperp = ext.g_part().orthocomplement(BG)
    out["ker_h_is_g_perp"] = None if kernel_basis(h) == gperp else "Ker h != g-perp"
    Vperp = ext.V().orthocomplement(BG)
    out["im_k_is_V_perp"] = None if image_basis(k) == Vperp else "Im k != V-perp"
    kc = k.col_list()
    out["k_equivariant"] = _first_bad(
        ((j, l), k @ g.bracket_basis(j, l) == G.bracket(kc[j], EN[l])) for j in range(n) for l in range(n)
    )
    Tsym = T.T @ Bg == Bg @ T
    out["T_in_sym_centroid"] = None if (is_centroid(g, T) and Tsym) else "T not in Gamma_B(g)"
    out["ker_T_in_center"] = None if center(g).contains_subspace(kernel_basis(T)) else "Ker T not central"
    out["T_D_commute"] = _first_bad(
        (i, T @ D == D @ T == g.ad(geom.a[i])) for i, D in enumerate(ext.derivations)
    )
    # pi_g = T h + A (B_G(., v_i))_i
    A = geom.A
    rhs = T @ h + (A @ BG.submatrix(range(n, N), range(N)) if r else Mat.zeros(n, N))
    out["reconstruction"] = None if rhs == Mat.identity(n).hstack(Mat.zeros(n, r)) else "x != T h(x+v) + sum B(x+v,v_i) a_i"
    dual = all(
        dot(tuple(geom.a[i]) + tuple(geom.w[i]), BG @ EN[n + j]) == (1 if i == j else 0)
        for i in range(r)
        for j in range(r)
    )
    out["dual_normalization"] = None if dual else "B_G(a_i+w_i, v_j) != delta"
    Lsym = L.T @ BG == BG @ L
    out["L_in_sym_centroid"] = None if (is_centroid(G, L) and Lsym) else "L not in Gamma_B(G)"
    out["ker_L_is_V"] = None if kernel_basis(L) == ext.V() else "Ker L != V"
    if r:
        mL = fitting_index(L)[0]
        out["fitting_L"] = None if mL == geom.m + 1 else f"fitting index of L is {mL}, T gives m={geom.m}"
    # h([x,y]_G) = [h x, y]_g + sum_i B_G(x, v_i) D_i y
    hc = h.col_list()
    bad = None
    for s in range(N):
        if bad:
            break
        coef = [BG[s, n + i] for i in range(r)]
        for t in range(n):
            lhs = h @ G.bracket_basis(s, t)
            rr = list(g.bracket(hc[s], En[t]))
            for i, D in enumerate(ext.derivations):
                if coef[i]:
                    col = D.col(t)
                    for p in range(n):
                        rr[p] += coef[i] * col[p]
            if lhs != tuple(rr):
                bad = (s, t)
                break
    out["h_bracket_identity"] = bad
    # h([x,[y,z]_G]_G) = [x, h([y,z]_G)]_g
    bad = None
    for y, z in combinations(range(N), 2):
        yz = G.bracket_basis(y, z)
        hyz = h @ yz
        for x in range(n):
            if h @ G.bracket(EN[x], yz) != g.bracket(En[x], hyz):
                bad = (x, y, z)
                break
        if bad:
            break
    out["h_double_bracket"] = bad
    rhos = [geom.rho(e) for e in En]
    bad = None
    for x in range(n):
        if not (T @ rhos[x] == rhos[x] @ T == g.ad_basis()[x]):
            bad = ("T rho", x)
            break
    out["T_rho_is_ad"] = bad
    bad = None
    for x, y in combinations(range(n), 2):
        lhs = geom.rho(g.bracket_basis(x, y))
        if lhs != rhos[x] @ T @ rhos[y] - rhos[y] @ T @ rhos[x]:
            bad = (x, y)
            break
    out["delta_bracket_identity"] = bad
    # g^l ⊆ Im T^l, Ker T^l ⊆ C_l(g)
    ds = descending_series(g)
    us = upper_series(g)
    top = max(len(ds), len(us), geom.m) + 1
    bad = None
    Tl = Mat.identity(n)
    for l in range(1, top + 1):
        Tl = Tl @ T
        gl = ds[min(l, len(ds) - 1)]
        Cl = us[min(l - 1, len(us) - 1)]
        if not image_basis(Tl).contains_subspace(gl):
            bad = ("g^l not in Im T^l", l)
            break
        if not Cl.contains_subspace(kernel_basis(Tl)):
            bad = ("Ker T^l not in C_l", l)
            break
    out["series_containment"] = bad
    # conditional: T != 0 and equal kernels of all D_i  =>  D_i inner
    bad = None
    if r and not T.is_zero():
        kers = [kernel_basis(D) for D in ext.derivations]
        if all(kk == kers[0] for kk in kers):
            for i, D in enumerate(ext.derivations):
                if inner_witness(g, D) is None:
                    bad = i
                    break
    out["equal_kernels_inner"] = bad
    return out


# ------------------------------------------------------------ kernel class

@dataclass
class KernelClass:
    tag: str
    v_cap_vperp: Subspace


def classify_kernel(geom: ExtensionGeometry, ext: CentralExtension) -> KernelClass:
    V = ext.V()
    cap = V.intersection(V.orthocomplement(geom.B_G))
    if cap.dim == 0:
        tag = NONDEGENERATE
    elif cap.dim == ext.r:
        tag = ISOTROPIC
    else:
        tag = MIXED
    if (geom.T.rank() == ext.n) != (tag == NONDEGENERATE):
        raise InternalConsistencyError(f"T invertible={geom.T.rank() == ext.n} but kernel class is {tag}")
    return KernelClass(tag, cap)


def _require(geom, ext, tag):
    kc = classify_kernel(geom, ext)
    if kc.tag != tag:
        raise PreconditionError(f"kernel class is {kc.tag}, this needs {tag}")
    return kc


# ---------------------------------------------------------- mixed reduction

@dataclass
class MixedReduction:
    U: Subspace
    U_perp: Subspace
    radical: Subspace
    projection: Mat  # B_G-orthogonal projection onto U
    p_basis: Mat  # columns x - P(x) for the base basis
    p_algebra: QuadraticLieAlgebra
    sub_extension: CentralExtension
    sub_metric: Mat
    embedding: Mat  # sub_extension.total coordinates -> G coordinates
    sub_geometry: ExtensionGeometry


def reduce_mixed_kernel(ext: CentralExtension, geom: ExtensionGeometry) -> MixedReduction:
    kc = _require(geom, ext, MIXED)
    n, r = ext.n, ext.r
    N = n + r
    BG = geom.B_G
    G = ext.total
    rad = kc.v_cap_vperp
    # complement of the radical inside V, spanned by standard v's
    vcoords = Subspace.span(r, [v[n:] for v in rad.vectors()])
    U = Subspace.span(N, [ext.embed_v(u) for u in vcoords.complement_basis()])
    Ub = U.basis
    gram = Ub.T @ BG @ Ub
    # over Q an orthonormal basis of U may not exist, so project with the Gram inverse
    P = Ub @ gram.inverse() @ Ub.T @ BG
    Uperp = U.orthocomplement(BG)
    if not (is_ideal(G, U) and is_ideal(G, Uperp)):
        raise InternalConsistencyError("U or U-perp is not an ideal")
    if U.intersection(Uperp).dim or (U + Uperp).dim != N:
        raise InternalConsistencyError("G is not U-perp (+) U")
    if (Uperp.basis.T @ BG @ Uperp.basis).rank() != Uperp.dim:
        raise InternalConsistencyError("U-perp is degenerate")
    if V_cap(ext, Uperp) != rad:
        raise InternalConsistencyError("V ∩ U-perp differs from V ∩ V-perp")

    EN = [unit_vec(N, i) for i in range(N)]
    p_cols = [vsub(EN[j], P @ EN[j]) for j in range(n)]
    rad_vecs = rad.vectors()
    Phi = Mat.from_cols(p_cols + rad_vecs, rows=N)
    span_phi = Subspace.span(N, Phi.col_list())
    if span_phi != Uperp or Phi.rank() != n + len(rad_vecs):
        raise InternalConsistencyError("p ⊕ (V ∩ V-perp) does not span U-perp")
    # p-bracket [x', y']_p = [x,y]_g - P([x,y]_g), expressed in the p basis
    pb = Mat.from_cols(p_cols, rows=N)
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for l in range(j + 1, n):
            z = ext.embed(ext.base.alg.bracket_basis(j, l))
            zp = vsub(z, P @ z)
            coords = _coords(pb, zp)
            for i in range(n):
                c[i][j][l] = coords[i]
                c[i][l][j] = -coords[i]
    p_alg = LieAlgebra(c, [f"p({x})" for x in ext.base.labels])
    p_quad = QuadraticLieAlgebra(p_alg, ext.base.form)
    if p_alg.c != ext.base.alg.c:
        raise InternalConsistencyError("p is not isomorphic to g through x -> x - P(x)")
    # the new cocycle is the V∩V⊥-component of [x', y']_G
    rr = len(rad_vecs)
    thetas = [[[ZERO] * n for _ in range(n)] for _ in range(rr)]
    for j in range(n):
        for l in range(j + 1, n):
            coords = _coords(Phi, G.bracket(p_cols[j], p_cols[l]))
            if tuple(coords[:n]) != p_alg.bracket_basis(j, l):
                raise InternalConsistencyError("U-perp bracket does not project onto the p bracket")
            for a in range(rr):
                thetas[a][j][l] = coords[n + a]
                thetas[a][l][j] = -coords[n + a]
    Ds = derivations_from_cocycle(p_quad, [Mat(n, n, t) for t in thetas])
    sub = build_central_extension(p_quad, Ds)
    if not is_hom(sub.total, G, Phi):
        raise InternalConsistencyError("embedding of the sub-extension is not a Lie morphism")
    sub_metric = Phi.T @ BG @ Phi
    sub_geom = extension_geometry(sub, sub_metric)
    return MixedReduction(U, Uperp, rad, P, pb, p_quad, sub, sub_metric, Phi, sub_geom)


def V_cap(ext: CentralExtension, W: Subspace) -> Subspace:
    return ext.V().intersection(W)


def _coords(basis: Mat, v: Sequence) -> Vec:
    from .exactlin import solve

    x = solve(basis, v)
    if x is None:
        raise InternalConsistencyError("vector outside the expected span")
    return x


# -------------------------------------------------------------- Fitting split

@dataclass
class FittingSplit:
    q: Subspace
    n_ideal: Subspace
    m: int
    image_L: Subspace
    kernel_L: Subspace
    sigma: Mat  # T|_q in q coordinates
    lambda_isometry: Mat  # q coordinates -> G coordinates
    q_algebra: QuadraticLieAlgebra  # q with the form B_g(σ^{-1}x, y)
    inner_q: tuple  # q_i in q coordinates with D_i|_q = ad_q(q_i)
    nondegenerate_split: Mat | None = None  # (g ⊕ V) -> G when T is invertible
    bar_B_g: Mat | None = None


def _nondeg(W: Subspace, B: Mat) -> bool:
    return (W.basis.T @ B @ W.basis).rank() == W.dim


def fitting_split_extension(geom: ExtensionGeometry, ext: CentralExtension) -> FittingSplit:
    n, r = ext.n, ext.r
    N = n + r
    g = ext.base.alg
    G = ext.total
    Bg, BG = ext.base.form, geom.B_G
    m = geom.m
    Tm = geom.T ** m
    q = image_basis(Tm)
    nn = kernel_basis(Tm)

    def fail(msg):
        raise InternalConsistencyError(f"Fitting split: {msg}")

    if not (is_ideal(g, q) and is_ideal(g, nn)):
        fail("q or n is not an ideal")
    if q.intersection(nn).dim or q.dim + nn.dim != n:
        fail("g != q ⊕ n")
    if q.dim and nn.dim and not (q.basis.T @ Bg @ nn.basis).is_zero():
        fail("q and n are not orthogonal")
    if not (_nondeg(q, Bg) and _nondeg(nn, Bg)):
        fail("q or n is degenerate")
    Lm1 = geom.L ** (m + 1)
    imL = image_basis(Lm1)
    kerL = kernel_basis(Lm1)
    if not (is_ideal(G, imL) and is_ideal(G, kerL)):
        fail("Im/Ker L^(m+1) not ideals")
    if imL.dim and kerL.dim and not (imL.basis.T @ BG @ kerL.basis).is_zero():
        fail("Im L^(m+1) and Ker L^(m+1) are not orthogonal")
    if imL.intersection(kerL).dim or imL.dim + kerL.dim != N:
        fail("G != Im L^(m+1) ⊕ Ker L^(m+1)")
    n_plus_V = Subspace.span(N, [ext.embed(x) for x in nn.vectors()]) + ext.V()
    if kerL != n_plus_V:
        fail("Ker L^(m+1) != n ⊕ V")

    d = q.dim
    Qb = q.basis
    qv = Qb.col_list()
    S = Mat.from_cols([q.coordinates(geom.T @ x) for x in qv], rows=d) if d else Mat.zeros(0, 0)
    Sinv = S.inverse() if d else S
    Lam = geom.k @ Qb @ Sinv if d else Mat.zeros(N, 0)
    # q as an algebra in its own coordinates
    c = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
    for j in range(d):
        for l in range(j + 1, d):
            co = q.coordinates(g.bracket(qv[j], qv[l]))
            for i in range(d):
                c[i][j][l] = co[i]
                c[i][l][j] = -co[i]
    q_alg = LieAlgebra(c)
    Bq = (Qb @ Sinv).T @ Bg @ Qb if d else Mat.zeros(0, 0)
    q_quad = QuadraticLieAlgebra(q_alg, Bq)
    if d:
        if not is_hom(q_alg, G, Lam):
            fail("Lambda is not a Lie morphism")
        if Lam.T @ BG @ Lam != Bq:
            fail("Lambda is not an isometry")
        if image_basis(Lam) != imL:
            fail("Im Lambda != Im L^(m+1)")
    inner = []
    QN = Qb.hstack(nn.basis)
    for i, D in enumerate(ext.derivations):
        if not (q.is_invariant(D) and nn.is_invariant(D)):
            fail(f"D_{i + 1} does not preserve q and n")
        co = _coords(QN, geom.a[i])
        qi = Sinv @ co[:d] if d else ()
        adq = q_alg.ad(qi) if d else Mat.zeros(0, 0)
        Dq = Mat.from_cols([q.coordinates(D @ x) for x in qv], rows=d) if d else Mat.zeros(0, 0)
        if adq != Dq:
            fail(f"D_{i + 1}|q is not ad_q(q_{i + 1})")
        inner.append(qi)

    split = None
    barB = None
    if geom.T.rank() == n:
        barB = geom.T.inverse().T @ Bg
        QuadraticLieAlgebra(g, barB)
        V = ext.V()
        Psi = (geom.k @ geom.T.inverse()).hstack(V.basis)
        src = direct_sum(g, LieAlgebra.abelian(r))
        if not is_hom(src, G, Psi) or Psi.rank() != N:
            fail("g ⊕ V -> G is not an isomorphism")
        BV = V.basis.T @ BG @ V.basis
        if Psi.T @ BG @ Psi != block_diag(barB, BV):
            fail("g ⊕ V -> G is not an isometry")
        split = Psi
    return FittingSplit(q, nn, m, imL, kerL, S, Lam, q_quad, tuple(inner), split, barB)


# -------------------------------------------------------------- isotropic

@dataclass
class IsotropicGeometry:
    E: Mat
    F: Mat
    a_space: Subspace
    a_perp: Subspace
    ker_T: Subspace
    a_perp_algebra: QuadraticLieAlgebra
    base_as_extension: CentralExtension
    change_of_basis: Mat  # (a_perp basis | Ker T basis) -> g


def isotropic_kernel_geometry(geom: ExtensionGeometry, ext: CentralExtension) -> IsotropicGeometry:
    _require(geom, ext, ISOTROPIC)
    n, r = ext.n, ext.r
    N = n + r
    g = ext.base.alg
    Bg = ext.base.form
    T = geom.T
    hg = geom.h.submatrix(range(n), range(n))
    hV = geom.h.submatrix(range(n), range(n, N))
    E = T @ hg
    F = hg @ T
    aspace = Subspace.span(n, geom.a)
    imT = image_basis(T)
    kerT = kernel_basis(T)
    aperp = aspace.orthocomplement(Bg)

    def fail(msg):
        raise InternalConsistencyError(f"isotropic geometry: {msg}")

    if E @ E != E or kernel_basis(E) != aspace or image_basis(E) != imT:
        fail("E is not the projection onto Im T along a")
    if F @ F != F or kernel_basis(F) != kerT or image_basis(F) != aperp:
        fail("F is not the projection onto a-perp along Ker T")
    if image_basis(hV) != kerT or hV.rank() != r:
        fail("h|V is not a bijection onto Ker T")
    if T @ geom.h @ geom.k != T or T @ hg @ T != T:
        fail("T h T != T")
    imT_G = Subspace.span(N, [ext.embed(x) for x in imT.vectors()])
    if imT.dim and not (imT_G.basis.T @ geom.B_G @ ext.V().basis).is_zero():
        fail("B_G(Im T, V) != 0")
    if r > center(g).dim:
        fail("r exceeds dim C(g)")
    # E + (projection onto a along Im T) = Id
    if aspace.dim + imT.dim != n or aspace.intersection(imT).dim:
        fail("g != a ⊕ Im T")

    Ab = aperp.basis
    Kb = kerT.basis
    p = aperp.dim
    av = Ab.col_list()
    c = [[[ZERO] * p for _ in range(p)] for _ in range(p)]
    for j in range(p):
        for l in range(j + 1, p):
            co = aperp.coordinates(F @ g.bracket(av[j], av[l]))
            for i in range(p):
                c[i][j][l] = co[i]
                c[i][l][j] = -co[i]
    ap_alg = LieAlgebra(c, [f"w{i + 1}" for i in range(p)])
    ap_form = Ab.T @ T.T @ Bg @ Ab if p else Mat.zeros(0, 0)
    ap_quad = QuadraticLieAlgebra(ap_alg, ap_form)
    # zeta(x, y) = (1 - F)[x, y]_g in Ker T coordinates
    I = Mat.identity(n)
    thetas = [[[ZERO] * p for _ in range(p)] for _ in range(r)]
    for j in range(p):
        for l in range(j + 1, p):
            z = (I - F) @ g.bracket(av[j], av[l])
            co = kerT.coordinates(z)
            for a in range(r):
                thetas[a][j][l] = co[a]
                thetas[a][l][j] = -co[a]
    Ds = derivations_from_cocycle(ap_quad, [Mat(p, p, t) for t in thetas])
    base_ext = build_central_extension(ap_quad, Ds)
    Pch = Ab.hstack(Kb)
    if Pch.rank() != n or not is_hom(base_ext.total, g, Pch):
        fail("g is not the central extension of a-perp by Ker T")
    return IsotropicGeometry(E, F, aspace, aperp, kerT, ap_quad, base_ext, Pch)


def make_kernel_dual_isotropic(geom: ExtensionGeometry, ext: CentralExtension) -> tuple[Mat, Mat]:
    """(Q, B̄_G) with B̄_G(x,y) = B_G(Qx,y) and a isotropic for B̄_G."""
    _require(geom, ext, ISOTROPIC)
    n, r = ext.n, ext.r
    N = n + r
    BG = geom.B_G
    A = [ext.embed(a) for a in geom.a]
    imT = [ext.embed(x) for x in image_basis(geom.T).vectors()]
    Vb = [unit_vec(N, n + i) for i in range(r)]
    P = Mat.from_cols(A + imT + Vb, rows=N)
    if P.rank() != N:
        raise InternalConsistencyError("G != a ⊕ Im T ⊕ V")
    images = []
    for ai in A:
        img = list(ai)
        for l in range(r):
            img[n + l] -= dot(ai, BG @ A[l])
        images.append(tuple(img))
    Q = Mat.from_cols(images + imT + Vb, rows=N) @ P.inverse()
    if not is_centroid(ext.total, Q) or Q.T @ BG != BG @ Q or Q.rank() != N:
        raise InternalConsistencyError("Q is not an invertible symmetric centroid element")
    Bbar = Q.T @ BG
    bar = extension_geometry(ext, Bbar)
    for x in A:
        for y in A:
            if dot(x, Bbar @ y):
                raise InternalConsistencyError("a is not isotropic for the new metric")
    if kernel_basis(bar.h) != Subspace.span(N, A):
        raise InternalConsistencyError("Ker h-bar != a")
    return Q, Bbar


# ------------------------------------------------------------- fixture tools

def split_extension_metric(base: QuadraticLieAlgebra, a_list: Sequence[Sequence], B_split: Mat):
    """Extension by inner derivations D_i = ad(a_i) with a transported metric.

    B_split is an invariant metric on the direct sum g ⊕ V (V abelian). The
    map x + v -> x + τ(x) + v with τ(x) = sum_i B_g(a_i, x) v_i is an
    isomorphism onto the extension; B_split is pushed forward along it.
    """
    n = base.dim
    r = len(a_list)
    ext = build_central_extension(base, [base.alg.ad(a) for a in a_list])
    N = n + r
    rows = [[ZERO] * N for _ in range(N)]
    for i in range(N):
        rows[i][i] = Fraction(1)
    for i, a in enumerate(a_list):
        tau = base.form @ a
        for j in range(n):
            rows[n + i][j] = tau[j]
    phi = Mat(N, N, rows)
    pinv = phi.inverse()
    return ext, pinv.T @ B_split @ pinv


def direct_sum_extensions(e1: CentralExtension, B1: Mat, e2: CentralExtension, B2: Mat):
    """(g1 ⊕ g2) extended by V1 ⊕ V2, with the block metric."""
    n1, r1, n2, r2 = e1.n, e1.r, e2.n, e2.r
    base = QuadraticLieAlgebra(direct_sum(e1.base, e2.base), block_diag(e1.base.form, e2.base.form))
    Ds = []
    for D in e1.derivations:
        Ds.append(block_diag(D, Mat.zeros(n2, n2)))
    for D in e2.derivations:
        Ds.append(block_diag(Mat.zeros(n1, n1), D))
    ext = build_central_extension(base, Ds)
    # coordinates: g1, g2, V1, V2 ; B1 is on (g1, V1), B2 on (g2, V2)
    order1 = list(range(n1)) + list(range(n1 + n2, n1 + n2 + r1))
    order2 = list(range(n1, n1 + n2)) + list(range(n1 + n2 + r1, n1 + n2 + r1 + r2))
    N = n1 + n2 + r1 + r2
    rows = [[ZERO] * N for _ in range(N)]
    for Bm, order in ((B1, order1), (B2, order2)):
        for i, a in enumerate(order):
            for j, b in enumerate(order):
                rows[a][b] = Bm[i, j]
    return ext, Mat(N, N, rows)

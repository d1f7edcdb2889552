"""Lie algebras given by structure constants, and quadratic structures on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import InputError, VerificationError
from .exactlin import (
    Mat,
    Subspace,
    Vec,
    dot,
    kernel_basis,
    nullspace,
    q,
    rref,
    solve_sparse,
    unit_vec,
    zero_vec,
)

ZERO = Fraction(0)


class LieAlgebra:
    """Structure constants c[i][j][k] = coefficient of e_i in [e_j, e_k].

    Skew-symmetry and Jacobi are checked here unless ``validate=False``
    (used only by the verifier, which wants to report witnesses itself).
    """

    def __init__(self, c, labels: Sequence[str] | None = None, validate: bool = True):
        n = len(c)
        try:
            cc = tuple(tuple(tuple(q(x) for x in c[i][j]) for j in range(n)) for i in range(n))
        except (TypeError, IndexError) as e:
            raise InputError(f"structure tensor is not n x n x n: {e}") from None
        if any(len(cc[i][j]) != n for i in range(n) for j in range(n)):
            raise InputError("structure tensor is not n x n x n")
        self.dim = n
        self.c = cc
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(n))
        if len(self.labels) != n:
            raise InputError("label count does not match dimension")
        # sparse table (j,k) -> [(i, c_ijk)]
        tab: dict[tuple[int, int], list[tuple[int, Fraction]]] = {}
        for i in range(n):
            for j in range(n):
                row = cc[i][j]
                for k in range(n):
                    if row[k]:
                        tab.setdefault((j, k), []).append((i, row[k]))
        self._tab = tab
        self._ad: list[Mat] | None = None
        if validate:
            w = skew_witness(self)
            if w is not None:
                raise VerificationError("structure constants are not skew-symmetric", w)
            w = jacobi_witness(self)
            if w is not None:
                raise VerificationError("Jacobi identity fails", w)

    @classmethod
    def from_brackets(cls, n: int, brackets: dict, labels=None, validate: bool = True) -> "LieAlgebra":
        """Build from {(j, k): vector or {i: coeff}} for j < k (other pairs implied)."""
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (j, k), val in brackets.items():
            items = val.items() if isinstance(val, dict) else enumerate(val)
            for i, x in items:
                x = q(x)
                c[i][j][k] += x
                c[i][k][j] -= x
        return cls(c, labels, validate)

    @classmethod
    def abelian(cls, n: int, labels=None) -> "LieAlgebra":
        return cls([[[0] * n for _ in range(n)] for _ in range(n)], labels)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, labels={list(self.labels)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def bracket_basis(self, j: int, k: int) -> Vec:
        v = [ZERO] * self.dim
        for i, x in self._tab.get((j, k), ()):
            v[i] = x
        return tuple(v)

    def bracket(self, x: Sequence, y: Sequence) -> Vec:
        n = self.dim
        out = [ZERO] * n
        xs = [(j, a) for j, a in enumerate(x) if a]
        ys = [(k, b) for k, b in enumerate(y) if b]
        for j, a in xs:
            for k, b in ys:
                t = self._tab.get((j, k))
                if t:
                    ab = a * b
                    for i, v in t:
                        out[i] += ab * v
        return tuple(out)

    def ad_basis(self) -> list[Mat]:
        if self._ad is None:
            n = self.dim
            self._ad = [Mat(n, n, [[self.c[i][j][k] for k in range(n)] for i in range(n)]) for j in range(n)]
        return self._ad

    def ad(self, x: Sequence) -> Mat:
        n = self.dim
        rows = [[ZERO] * n for _ in range(n)]
        for j, a in enumerate(x):
            if a:
                for i in range(n):
                    cij = self.c[i][j]
                    r = rows[i]
                    for k in range(n):
                        if cij[k]:
                            r[k] += a * cij[k]
        return Mat(n, n, rows)

    def is_abelian(self) -> bool:
        return not self._tab


def skew_witness(alg: LieAlgebra):
    n = alg.dim
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                if alg.c[i][j][k] != -alg.c[i][k][j]:
                    return (i, j, k)
    return None


def jacobi_residual(alg: LieAlgebra, x, y, z) -> Vec:
    b = alg.bracket
    t1 = b(x, b(y, z))
    t2 = b(y, b(z, x))
    t3 = b(z, b(x, y))
    return tuple(a + c + d for a, c, d in zip(t1, t2, t3))


def jacobi_witness(alg: LieAlgebra):
    n = alg.dim
    E = [unit_vec(n, i) for i in range(n)]
    for j, k, l in combinations(range(n), 3):
        if any(jacobi_residual(alg, E[j], E[k], E[l])):
            return (j, k, l)
    return None


def bilinear(B: Mat, x: Sequence, y: Sequence) -> Fraction:
    return dot(x, B @ y)


# ------------------------------------------------------------------ quadratic

@dataclass
class QuadraticReport:
    jacobi_ok: bool
    skew_ok: bool
    symmetric_ok: bool
    nondegenerate_ok: bool
    invariant_ok: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.jacobi_ok and self.skew_ok and self.symmetric_ok and self.nondegenerate_ok and self.invariant_ok


def invariance_witness(alg: LieAlgebra, B: Mat):
    """First basis triple (i,j,k) with B([e_i,e_j],e_k) != B(e_i,[e_j,e_k])."""
    n = alg.dim
    # M_j = B ad(e_j); invariance <=> ad(e_j)^T B + B ad(e_j) = 0 for all j
    ads = alg.ad_basis()
    for j in range(n):
        S = ads[j].T @ B + B @ ads[j]
        for i in range(n):
            for k in range(n):
                if S[i, k]:
                    # B([e_j,e_i],e_k) + B(e_i,[e_j,e_k]) != 0  ->  triple (i, j, k) for B([x,y],z)=B(x,[y,z])
                    return (i, j, k)
    return None


def verify_quadratic(alg: LieAlgebra, form: Mat) -> QuadraticReport:
    n = alg.dim
    if form.shape != (n, n):
        raise InputError(f"form has shape {form.shape}, algebra has dim {n}")
    w: dict = {}
    sw = skew_witness(alg)
    if sw is not None:
        w["skew"] = sw
    jw = jacobi_witness(alg) if sw is None else None
    if jw is not None:
        w["jacobi"] = jw
    sym = form.is_symmetric()
    if not sym:
        w["symmetric"] = next((i, j) for i in range(n) for j in range(n) if form[i, j] != form[j, i])
    nondeg = form.rank() == n
    if not nondeg:
        w["nondegenerate"] = kernel_basis(form).vectors()[0]
    iw = invariance_witness(alg, form) if sw is None else None
    if iw is not None:
        w["invariant"] = iw
    return QuadraticReport(jw is None and sw is None, sw is None, sym, nondeg, iw is None and sw is None, w)


class QuadraticLieAlgebra:
    """A Lie algebra with a symmetric, non-degenerate, invariant form (checked)."""

    def __init__(self, alg: LieAlgebra, form: Mat):
        rep = verify_quadratic(alg, form)
        if not rep.ok:
            bad = [k for k in ("skew_ok", "jacobi_ok", "symmetric_ok", "nondegenerate_ok", "invariant_ok") if not getattr(rep, k)]
            raise VerificationError(f"not a quadratic Lie algebra: {', '.join(bad)} failed", rep.witnesses)
        self.alg = alg
        self.form = form

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def labels(self):
        return self.alg.labels

    def bracket(self, x, y) -> Vec:
        return self.alg.bracket(x, y)

    def B(self, x, y) -> Fraction:
        return bilinear(self.form, x, y)

    def __repr__(self) -> str:
        return f"QuadraticLieAlgebra(dim={self.dim})"


# ------------------------------------------------------------------ structure

def bracket_space(alg: LieAlgebra, A: Subspace, Bsp: Subspace) -> Subspace:
    """span [A, B]."""
    vs = [alg.bracket(a, b) for a in A.vectors() for b in Bsp.vectors()]
    return Subspace.span(alg.dim, vs)


def center(alg: LieAlgebra) -> Subspace:
    n = alg.dim
    if n == 0:
        return Subspace.zero(0)
    ads = alg.ad_basis()
    # z central <=> ad(e_k) z = 0 for every k
    big = ads[0]
    for A in ads[1:]:
        big = big.vstack(A)
    return kernel_basis(big)


def centralizer_chain_step(alg: LieAlgebra, C: Subspace) -> Subspace:
    """{x : [x, g] ⊆ C}."""
    n = alg.dim
    P = C.annihilator_rows()
    if P.rows == 0:
        return Subspace.full(n)
    eqs = []
    for A in alg.ad_basis():
        # [x, e_k] = -ad(e_k) x ; need P ad(e_k) x = 0
        PA = P @ A
        for r in PA.row_list():
            if any(r):
                eqs.append({i: v for i, v in enumerate(r) if v})
    return Subspace.span(n, nullspace(eqs, n))


@dataclass
class StructureReport:
    center: Subspace
    descending_series: list
    upper_series: list
    nilpotency_class: int | None
    derived_ideal: Subspace
    is_perfect: bool


def descending_series(alg: LieAlgebra) -> list[Subspace]:
    """g^0 = g, g^l = [g, g^(l-1)], up to the first repeat."""
    g = Subspace.full(alg.dim)
    out = [g]
    while True:
        nxt = bracket_space(alg, g, out[-1])
        if nxt == out[-1]:
            return out
        out.append(nxt)


def upper_series(alg: LieAlgebra) -> list[Subspace]:
    """C_1 = center, C_k = {x : [x,g] ⊆ C_(k-1)}, up to stabilization."""
    out = [center(alg)]
    while True:
        nxt = centralizer_chain_step(alg, out[-1])
        if nxt == out[-1]:
            return out
        out.append(nxt)


def structure_report(alg: LieAlgebra) -> StructureReport:
    ds = descending_series(alg)
    cls = len(ds) - 1 if ds[-1].dim == 0 else None
    derived = ds[1] if len(ds) > 1 else ds[0]
    return StructureReport(
        center=center(alg),
        descending_series=ds,
        upper_series=upper_series(alg),
        nilpotency_class=cls,
        derived_ideal=derived,
        is_perfect=derived.dim == alg.dim,
    )


def derived_algebra(alg: LieAlgebra) -> Subspace:
    g = Subspace.full(alg.dim)
    return bracket_space(alg, g, g)


def is_ideal(alg: LieAlgebra, I: Subspace) -> bool:
    return all(I.contains(alg.bracket(unit_vec(alg.dim, j), v)) for j in range(alg.dim) for v in I.vectors())


# ------------------------------------------------------- linear map systems

def _var(p: int, r: int, n: int) -> int:
    return p * n + r


def _centroid_equations(alg: LieAlgebra) -> list[dict]:
    """T[e_j,e_k] = [T e_j, e_k], unknown T[p][r] at index p*n + r."""
    n = alg.dim
    c = alg.c
    eqs = []
    for j in range(n):
        for k in range(n):
            for i in range(n):
                e: dict[int, Fraction] = {}
                for p in range(n):
                    x = c[p][j][k]
                    if x:
                        e[_var(i, p, n)] = e.get(_var(i, p, n), 0) + x
                    y = c[i][p][k]
                    if y:
                        e[_var(p, j, n)] = e.get(_var(p, j, n), 0) - y
                e = {a: b for a, b in e.items() if b}
                if e:
                    eqs.append(e)
    return eqs


def _symmetric_equations(B: Mat) -> list[dict]:
    """B(Tx,y) = B(x,Ty) i.e. T^T B - B T = 0."""
    n = B.rows
    eqs = []
    for a in range(n):
        for b in range(a + 1, n):
            e: dict[int, Fraction] = {}
            for s in range(n):
                # (T^T B)[a][b] = sum_s T[s][a] B[s][b]; (B T)[a][b] = sum_s B[a][s] T[s][b]
                if B[s, b]:
                    e[_var(s, a, n)] = e.get(_var(s, a, n), 0) + B[s, b]
                if B[a, s]:
                    e[_var(s, b, n)] = e.get(_var(s, b, n), 0) - B[a, s]
            e = {x: y for x, y in e.items() if y}
            if e:
                eqs.append(e)
    return eqs


def _skew_equations(B: Mat) -> list[dict]:
    """B(Dx,y) + B(x,Dy) = 0 i.e. D^T B + B D = 0."""
    n = B.rows
    eqs = []
    for a in range(n):
        for b in range(a, n):
            e: dict[int, Fraction] = {}
            for s in range(n):
                if B[s, b]:
                    e[_var(s, a, n)] = e.get(_var(s, a, n), 0) + B[s, b]
                if B[a, s]:
                    e[_var(s, b, n)] = e.get(_var(s, b, n), 0) + B[a, s]
            e = {x: y for x, y in e.items() if y}
            if e:
                eqs.append(e)
    return eqs


def _derivation_equations(alg: LieAlgebra) -> list[dict]:
    n = alg.dim
    c = alg.c
    eqs = []
    for j in range(n):
        for k in range(j + 1, n):
            for i in range(n):
                e: dict[int, Fraction] = {}
                for p in range(n):
                    x = c[p][j][k]
                    if x:
                        e[_var(i, p, n)] = e.get(_var(i, p, n), 0) + x
                    y = c[i][p][k]
                    if y:
                        e[_var(p, j, n)] = e.get(_var(p, j, n), 0) - y
                    z = c[i][j][p]
                    if z:
                        e[_var(p, k, n)] = e.get(_var(p, k, n), 0) - z
                e = {a: b for a, b in e.items() if b}
                if e:
                    eqs.append(e)
    return eqs


def _to_mats(sols, n: int) -> list[Mat]:
    return [Mat(n, n, [s[i * n:(i + 1) * n] for i in range(n)]) for s in sols]


def centroid_basis(alg: LieAlgebra, form: Mat | None = None):
    """Basis of Γ(g), and of its form-symmetric part when a form is given."""
    n = alg.dim
    eqs = _centroid_equations(alg)
    gamma = _to_mats(nullspace(eqs, n * n), n)
    gsym = None
    if form is not None:
        gsym = _to_mats(nullspace(eqs + _symmetric_equations(form), n * n), n)
    return gamma, gsym


def is_centroid(alg: LieAlgebra, T: Mat) -> bool:
    n = alg.dim
    for j in range(n):
        Tj = T.col(j)
        for k in range(n):
            if T @ alg.bracket_basis(j, k) != alg.bracket(Tj, unit_vec(n, k)):
                return False
    return True


def is_derivation(alg: LieAlgebra, D: Mat) -> bool:
    n = alg.dim
    E = [unit_vec(n, i) for i in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            lhs = D @ alg.bracket_basis(j, k)
            rhs = tuple(a + b for a, b in zip(alg.bracket(D.col(j), E[k]), alg.bracket(E[j], D.col(k))))
            if lhs != rhs:
                return False
    return True


def is_skew(B: Mat, D: Mat) -> bool:
    return (D.T @ B + B @ D).is_zero()


def derivation_basis(alg: LieAlgebra) -> list[Mat]:
    n = alg.dim
    return _to_mats(nullspace(_derivation_equations(alg), n * n), n)


def skew_derivation_basis(qa: QuadraticLieAlgebra) -> list[Mat]:
    """Basis of Der(g) ∩ o(B)."""
    n = qa.dim
    eqs = _derivation_equations(qa.alg) + _skew_equations(qa.form)
    return _to_mats(nullspace(eqs, n * n), n)


def inner_witness(alg: LieAlgebra, D: Mat) -> Vec | None:
    """a with ad(a) = D, free variables zero; None when D is outer."""
    n = alg.dim
    # ad(a)[i][k] = sum_j a_j c[i][j][k]
    rows = []
    for i in range(n):
        for k in range(n):
            coeffs = {j: alg.c[i][j][k] for j in range(n) if alg.c[i][j][k]}
            rhs = D[i, k]
            if coeffs or rhs:
                rows.append((coeffs, rhs))
    return solve_sparse(rows, n)


def invariant_forms(alg: LieAlgebra) -> list[Mat]:
    """Basis of symmetric bilinear forms with B([x,y],z) = B(x,[y,z])."""
    n = alg.dim
    idx = {}
    for a in range(n):
        for b in range(a, n):
            idx[(a, b)] = len(idx)

    def var(a, b):
        return idx[(a, b) if a <= b else (b, a)]

    eqs = []
    for j in range(n):
        for k in range(j + 1, n):
            for l in range(n):
                e: dict[int, Fraction] = {}
                # sum_p c[p][j][k] B[p][l] - sum_p B[j][p] c[p][k][l]
                for p in range(n):
                    x = alg.c[p][j][k]
                    if x:
                        v = var(p, l)
                        e[v] = e.get(v, 0) + x
                    y = alg.c[p][k][l]
                    if y:
                        v = var(j, p)
                        e[v] = e.get(v, 0) - y
                e = {a: b for a, b in e.items() if b}
                if e:
                    eqs.append(e)
    out = []
    for s in nullspace(eqs, len(idx)):
        out.append(Mat(n, n, [[s[var(a, b)] for b in range(n)] for a in range(n)]))
    return out


def find_invariant_metric(alg: LieAlgebra, seed: int = 0, trials: int = 32) -> Mat | None:
    """Search the space of invariant forms for a non-degenerate one.

    Returns None if none was found; that is not a proof of non-existence,
    except when all forms share a radical vector (then none exists).
    """
    import random

    forms = invariant_forms(alg)
    if not forms:
        return None if alg.dim else Mat.zeros(0, 0)
    n = alg.dim
    # every combination has rows inside the joint row span
    stacked = forms[0]
    for f in forms[1:]:
        stacked = stacked.hstack(f)
    if stacked.rank() < n:
        return None
    for m in forms:
        if m.rank() == n:
            return m
    flat = [[x for row in f.row_list() for x in row] for f in forms]
    rng = random.Random(seed)
    for t in range(trials + 1):
        coeffs = [1] * len(forms) if t == 0 else [rng.randint(-9, 9) for _ in forms]
        vals = [sum((c * f[i] for c, f in zip(coeffs, flat) if c and f[i]), ZERO) for i in range(n * n)]
        m = Mat(n, n, [vals[i * n:(i + 1) * n] for i in range(n)])
        if m.rank() == n:
            return m
    return None


def transport_form(B: Mat, P: Mat) -> Mat:
    """Form B expressed in new coordinates x = P x'  (returns P^T B P)."""
    return P.T @ B @ P


def change_basis(alg: LieAlgebra, P: Mat, labels=None) -> LieAlgebra:
    """Structure constants in the basis given by the columns of P."""
    n = alg.dim
    Pinv = P.inverse()
    cols = P.col_list()
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            v = Pinv @ alg.bracket(cols[j], cols[k])
            for i in range(n):
                if v[i]:
                    c[i][j][k] = v[i]
                    c[i][k][j] = -v[i]
    return LieAlgebra(c, labels)


def is_hom(src: LieAlgebra, dst: LieAlgebra, M: Mat) -> bool:
    """M [x,y]_src = [Mx, My]_dst on basis pairs."""
    cols = M.col_list()
    for j in range(src.dim):
        for k in range(j + 1, src.dim):
            if M @ src.bracket_basis(j, k) != dst.bracket(cols[j], cols[k]):
                return False
    return True


def sl2() -> QuadraticLieAlgebra:
    """sl2 in the basis (e, h, f) with the trace form B(h,h)=8, B(e,f)=4."""
    alg = LieAlgebra.from_brackets(
        3, {(1, 0): {0: 2}, (1, 2): {2: -2}, (0, 2): {1: 1}}, labels=("e", "h", "f")
    )
    B = Mat.from_rows([[0, 0, 4], [0, 8, 0], [4, 0, 0]])
    return QuadraticLieAlgebra(alg, B)


def killing_form(alg: LieAlgebra) -> Mat:
    ads = alg.ad_basis()
    n = alg.dim
    return Mat(n, n, [[_trace(ads[i] @ ads[j]) for j in range(n)] for i in range(n)])


def _trace(M: Mat) -> Fraction:
    return sum((M[i, i] for i in range(M.rows)), ZERO)


def direct_sum(*parts: QuadraticLieAlgebra | LieAlgebra) -> LieAlgebra:
    n = sum(p.dim for p in parts)
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    off = 0
    labels = []
    for p in parts:
        a = p.alg if isinstance(p, QuadraticLieAlgebra) else p
        m = a.dim
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    c[off + i][off + j][off + k] = a.c[i][j][k]
        labels += list(a.labels)
        off += m
    return LieAlgebra(c, labels)


def block_diag(*ms: Mat) -> Mat:
    n = sum(m.rows for m in ms)
    out = [[ZERO] * n for _ in range(n)]
    off = 0
    for m in ms:
        for i in range(m.rows):
            for j in range(m.cols):
                out[off + i][off + j] = m[i, j]
        off += m.rows
    return Mat(n, n, out)

"""Exact rational linear algebra.

Everything here works over ``fractions.Fraction``.  Matrices are small and
dense; large sparse linear systems (centroids, derivations, invariant forms)
go through :func:`nullspace` / :func:`solve_sparse`, which eliminate on
dict rows instead.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction
Vec = tuple  # tuple of Fraction


def q(x) -> Fraction:
    """Coerce ints, strings like "3/4" and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted, use Fraction or 'p/q' strings")
    return Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(q(x) for x in xs)


def zero_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def unit_vec(n: int, i: int) -> Vec:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def vadd(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Sequence) -> Vec:
    c = q(c)
    return tuple(c * a for a in u)


def dot(u: Sequence, v: Sequence) -> Fraction:
    s = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def is_zero_vec(u: Sequence) -> bool:
    return not any(u)


class Mat:
    """Immutable dense matrix of Fractions.

    A linear map is stored by columns: column j holds the image of the j-th
    basis vector, so ``M @ v`` applies the map.
    """

    __slots__ = ("rows", "cols", "_d")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence]):
        self.rows = rows
        self.cols = cols
        d = tuple(tuple(q(x) for x in r) for r in data)
        if len(d) != rows or any(len(r) != cols for r in d):
            raise ValueError(f"shape mismatch for {rows}x{cols} matrix")
        self._d = d

    # -- constructors
    @classmethod
    def from_rows(cls, data: Sequence[Sequence], cols: int | None = None) -> "Mat":
        data = list(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_cols(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Mat":
        columns = list(columns)
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        z = (Fraction(0),) * cols
        m = object.__new__(cls)
        m.rows, m.cols, m._d = rows, cols, (z,) * rows
        return m

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [unit_vec(n, i) for i in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> "Mat":
        n = len(entries)
        return cls(n, n, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    # -- access
    def __getitem__(self, ij):
        i, j = ij
        return self._d[i][j]

    def row(self, i: int) -> Vec:
        return self._d[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self._d)

    def row_list(self) -> list[Vec]:
        return list(self._d)

    def col_list(self) -> list[Vec]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Mat":
        return Mat(self.cols, self.rows, [self.col(j) for j in range(self.cols)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.shape == other.shape and self._d == other._d

    def __hash__(self):
        return hash((self.rows, self.cols, self._d))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._d)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._d)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    # -- arithmetic
    def __add__(self, other: "Mat") -> "Mat":
        _same(self, other)
        return Mat(self.rows, self.cols, [vadd(a, b) for a, b in zip(self._d, other._d)])

    def __sub__(self, other: "Mat") -> "Mat":
        _same(self, other)
        return Mat(self.rows, self.cols, [vsub(a, b) for a, b in zip(self._d, other._d)])

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [tuple(-x for x in r) for r in self._d])

    def scale(self, c) -> "Mat":
        return Mat(self.rows, self.cols, [vscale(c, r) for r in self._d])

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            oc = [other.col(j) for j in range(other.cols)]
            return Mat(self.rows, other.cols, [[dot(r, c) for c in oc] for r in self._d])
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError(f"cannot apply {self.shape} matrix to vector of length {len(v)}")
        return tuple(dot(r, v) for r in self._d)

    def apply(self, v: Sequence) -> Vec:
        return self @ v

    def __pow__(self, k: int) -> "Mat":
        if not self.is_square() or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        out = Mat.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat(len(rows), len(cols), [[self._d[i][j] for j in cols] for i in rows])

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise ValueError("hstack row mismatch")
        return Mat(self.rows, self.cols + other.cols, [a + b for a, b in zip(self._d, other._d)])

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise ValueError("vstack column mismatch")
        return Mat(self.rows + other.rows, self.cols, self._d + other._d)

    # -- derived quantities
    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "Mat":
        return inverse(self)

    def det(self) -> Fraction:
        return det(self)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._d]


def _same(a: Mat, b: Mat) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def block(blocks: Sequence[Sequence[Mat]]) -> Mat:
    """Assemble a block matrix from a grid of Mats."""
    out = None
    for brow in blocks:
        r = brow[0]
        for m in brow[1:]:
            r = r.hstack(m)
        out = r if out is None else out.vstack(r)
    return out


# ---------------------------------------------------------------- elimination

def _rref_lists(a: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place Gauss-Jordan on a list of row lists. Returns pivot columns."""
    pivots: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r >= nrows:
            break
        p = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            a[r] = [x / piv for x in a[r]]
        pr = a[r]
        nz = [j for j in range(c, ncols) if pr[j] != 0]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f != 0:
                    ri = a[i]
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(M: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form.

    Pivot choice is the leftmost column with a nonzero entry, taking the
    first nonzero row at or below the current one.

    Returns:
        (R, pivots) where pivots are the pivot columns in increasing order.
    """
    a = [list(r) for r in M.row_list()]
    piv = _rref_lists(a, M.cols)
    return Mat(M.rows, M.cols, a), piv


def rank(M: Mat) -> int:
    return M.rank()


def _kernel_from_rref(R: list[Sequence[Fraction]], piv: list[int], ncols: int) -> list[Vec]:
    free = [j for j in range(ncols) if j not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(tuple(v))
    return basis


def kernel_vectors(M: Mat) -> list[Vec]:
    R, piv = rref(M)
    return _kernel_from_rref(R.row_list(), piv, M.cols)


def kernel_basis(M: Mat) -> "Subspace":
    return Subspace.span(M.cols, kernel_vectors(M))


def image_basis(M: Mat) -> "Subspace":
    return Subspace.span(M.rows, M.col_list())


def solve(M: Mat, b: Sequence) -> Vec | None:
    """Some x with Mx = b (free variables set to zero), or None."""
    b = vec(b)
    if len(b) != M.rows:
        raise ValueError("right-hand side has the wrong length")
    aug = M.hstack(Mat.from_cols([b], rows=M.rows)) if M.rows else Mat.zeros(0, M.cols + 1)
    R, piv = rref(aug)
    if M.cols in piv:
        return None
    x = [Fraction(0)] * M.cols
    for i, p in enumerate(piv):
        x[p] = R[i, M.cols]
    return tuple(x)


def inverse(M: Mat) -> Mat:
    if not M.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = M.rows
    R, piv = rref(M.hstack(Mat.identity(n)))
    if piv[:n] != list(range(n)) or (n and len(piv) < n):
        raise ZeroDivisionError("matrix is singular")
    return R.submatrix(range(n), range(n, 2 * n))


def det(M: Mat) -> Fraction:
    if not M.is_square():
        raise ValueError("det of a non-square matrix")
    a = [list(r) for r in M.row_list()]
    n = M.rows
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return d


# ------------------------------------------------------------ sparse systems

def _sparse_rref(rows: list[dict[int, Fraction]]) -> tuple[list[dict[int, Fraction]], list[int]]:
    # incremental elimination; rows are dicts col -> value
    basis: dict[int, dict[int, Fraction]] = {}  # pivot col -> normalized row
    for row in rows:
        r = {k: v for k, v in row.items() if v}
        # reduce by existing pivots until no pivot column remains
        while r:
            hit = None
            for c in r:
                if c in basis:
                    hit = c
                    break
            if hit is None:
                break
            f = r[hit]
            for c, v in basis[hit].items():
                nv = r.get(c, 0) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        # back substitute into existing rows
        for c0, br in basis.items():
            f = br.get(p)
            if f:
                for c, v in r.items():
                    nv = br.get(c, 0) - f * v
                    if nv:
                        br[c] = nv
                    else:
                        br.pop(c, None)
        basis[p] = r
    piv = sorted(basis)
    return [basis[p] for p in piv], piv


def nullspace(equations: Iterable[dict[int, Fraction]], nvars: int) -> list[Vec]:
    """Basis of solutions of a homogeneous system given as sparse rows.

    The basis is the standard one read off the RREF: one vector per free
    variable, with that variable set to 1 and the other free variables 0.
    """
    R, piv = _sparse_rref(list(equations))
    pset = set(piv)
    out = []
    for f in range(nvars):
        if f in pset:
            continue
        v = [Fraction(0)] * nvars
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            x = row.get(f)
            if x:
                v[p] = -x
        out.append(tuple(v))
    return out


def solve_sparse(equations: Sequence[tuple[dict[int, Fraction], Fraction]], nvars: int) -> Vec | None:
    """Solve sum(row[c]*x[c]) = rhs for all rows. Free variables are set to 0."""
    rows = []
    for coeffs, rhs in equations:
        r = dict(coeffs)
        if rhs:
            r[nvars] = -q(rhs)  # row . (x, 1) = 0
        rows.append(r)
    R, piv = _sparse_rref(rows)
    if nvars in piv:
        return None
    x = [Fraction(0)] * nvars
    for row, p in zip(R, piv):
        x[p] = -row.get(nvars, Fraction(0))
    return tuple(x)


# ------------------------------------------------------------------ subspaces

class Subspace:
    """A subspace of F^n, basis kept in canonical (reduced) form.

    The basis columns are the rows of the RREF of any spanning set, so two
    Subspace objects are equal exactly when they are the same subspace.
    """

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, basis: Mat, _pivots=None):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._pivots = _pivots

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vs = [vec(v) for v in vectors]
        for v in vs:
            if len(v) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        if not vs:
            return cls(ambient_dim, Mat.zeros(ambient_dim, 0), [])
        R, piv = rref(Mat.from_rows(vs, cols=ambient_dim))
        cols = [R.row(i) for i in range(len(piv))]
        return cls(ambient_dim, Mat.from_cols(cols, rows=ambient_dim), piv)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls.span(n, [])

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls.span(n, [unit_vec(n, i) for i in range(n)])

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[Vec]:
        return self.basis.col_list()

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in {self.ambient_dim})"

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence) -> Vec | None:
        # canonical basis: coordinates are the entries at pivot positions
        v = vec(v)
        if self._pivots is None:
            return solve(self.basis, v)
        c = tuple(v[p] for p in self._pivots)
        back = self.basis @ c if self.dim else zero_vec(self.ambient_dim)
        return c if back == v else None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient_dim, self.vectors() + other.vectors())

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        M = self.basis.hstack(-other.basis)
        ker = kernel_vectors(M)
        A = self.basis
        return Subspace.span(self.ambient_dim, [A @ k[: self.dim] for k in ker])

    def orthocomplement(self, form: Mat) -> "Subspace":
        n = self.ambient_dim
        if self.dim == 0:
            return Subspace.full(n)
        return kernel_basis(self.basis.T @ form)

    def annihilator_rows(self) -> Mat:
        """Rows spanning {p : p . v = 0 for all v in self}."""
        if self.dim == 0:
            return Mat.identity(self.ambient_dim)
        ann = kernel_vectors(self.basis.T)
        return Mat.from_rows(ann, cols=self.ambient_dim) if ann else Mat.zeros(0, self.ambient_dim)

    def image(self, M: Mat) -> "Subspace":
        return Subspace.span(M.rows, [M @ v for v in self.vectors()])

    def is_invariant(self, M: Mat) -> bool:
        return all(self.contains(M @ v) for v in self.vectors())

    def complement_basis(self) -> list[Vec]:
        """Standard basis vectors at the non-pivot positions; they span a complement."""
        piv = set(self._pivots if self._pivots is not None else rref(self.basis.T)[1])
        return [unit_vec(self.ambient_dim, j) for j in range(self.ambient_dim) if j not in piv]


def subspace_ops(A: Subspace, B: Subspace, form: Mat | None = None):
    """(A + B, A ∩ B, A⊥ w.r.t. form or None)."""
    if A.ambient_dim != B.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    perp = A.orthocomplement(form) if form is not None else None
    return A + B, A.intersection(B), perp


def fitting_index(T: Mat) -> tuple[int, Subspace, Subspace]:
    """Least m >= 0 with rank T^m = rank T^(m+1), plus Im T^m and Ker T^m."""
    if not T.is_square():
        raise ValueError("fitting_index needs a square matrix")
    n = T.rows
    P = Mat.identity(n)
    r = n
    m = 0
    while True:
        P2 = P @ T
        r2 = P2.rank()
        if r2 == r:
            break
        P, r, m = P2, r2, m + 1
    return m, image_basis(P), kernel_basis(P)

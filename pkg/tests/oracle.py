"""Independent reference computations with sympy, used only by the tests."""
from __future__ import annotations

import itertools

import sympy as sp


def tensor(alg):
    n = alg.dim
    return [[[sp.Rational(alg.c[i][j][k].numerator, alg.c[i][j][k].denominator) for k in range(n)] for j in range(n)] for i in range(n)]


def sym_matrix(M):
    return sp.Matrix(M.rows, M.cols, lambda i, j: sp.Rational(M[i, j].numerator, M[i, j].denominator))


def jacobi_ok(alg) -> bool:
    c = tensor(alg)
    n = alg.dim
    for a, b, d in itertools.combinations(range(n), 3):
        for m in range(n):
            s = 0
            for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
                s += sum(c[p][x][y] * c[m][p][z] for p in range(n))
            if s != 0:
                return False
    return True


def derivation_dim(alg, skew_form=None) -> int:
    """dim of {D : D[x,y] = [Dx,y] + [x,Dy]} (optionally also B-skew)."""
    n = alg.dim
    c = tensor(alg)
    X = sp.Matrix(n, n, lambda i, j: sp.Symbol(f"d_{i}_{j}"))
    eqs = []
    for j, k in itertools.combinations(range(n), 2):
        for i in range(n):
            lhs = sum(X[i, p] * c[p][j][k] for p in range(n))
            rhs = sum(c[i][p][k] * X[p, j] + c[i][j][p] * X[p, k] for p in range(n))
            eqs.append(lhs - rhs)
    if skew_form is not None:
        B = sym_matrix(skew_form)
        eqs += list(X.T * B + B * X)
    return n * n - _rank(eqs, list(X))


def centroid_dim(alg) -> int:
    n = alg.dim
    c = tensor(alg)
    X = sp.Matrix(n, n, lambda i, j: sp.Symbol(f"g_{i}_{j}"))
    eqs = []
    for j, k in itertools.product(range(n), repeat=2):
        for i in range(n):
            # Γ[e_j, e_k] = [Γ e_j, e_k]
            lhs = sum(X[i, p] * c[p][j][k] for p in range(n))
            rhs = sum(c[i][p][k] * X[p, j] for p in range(n))
            eqs.append(lhs - rhs)
    return n * n - _rank(eqs, list(X))


def invariant_form_dim(alg) -> int:
    n = alg.dim
    c = tensor(alg)
    S = sp.Matrix(n, n, lambda i, j: sp.Symbol(f"b_{min(i, j)}_{max(i, j)}"))
    eqs = []
    for i, j, k in itertools.product(range(n), repeat=3):
        lhs = sum(c[p][i][j] * S[p, k] for p in range(n))
        rhs = sum(c[p][j][k] * S[i, p] for p in range(n))
        eqs.append(lhs - rhs)
    syms = sorted(S.free_symbols, key=str)
    return len(syms) - _rank(eqs, syms)


def _rank(eqs, syms) -> int:
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return 0
    M, _ = sp.linear_eq_to_matrix(eqs, syms)
    return M.rank()


def lower_central_dims(alg) -> list[int]:
    n = alg.dim
    c = tensor(alg)
    cur = sp.eye(n)
    dims = [n]
    while True:
        vecs = []
        for col in range(cur.cols):
            v = cur[:, col]
            for k in range(n):
                vecs.append(sp.Matrix([sum(v[j] * c[i][j][k] for j in range(n)) for i in range(n)]))
        M = sp.Matrix.hstack(*vecs) if vecs else sp.zeros(n, 0)
        r = M.rank()
        if r == dims[-1]:
            return dims
        dims.append(r)
        if r == 0:
            return dims
        cur = M.columnspace()
        cur = sp.Matrix.hstack(*cur)

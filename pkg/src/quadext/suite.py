"""The eight acceptance checks, shared by the CLI and the test-suite.

Each check returns a CriterionResult; ``details`` carries the evidence.
"""
from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction
from dataclasses import dataclass, field

from .doublecentral import extract_double_data, g_metric_existence, heisenberg_invariant_forms, roundtrip_matches
from .exactlin import Mat, Subspace, unit_vec
from .extensions import (
    ISOTROPIC,
    MIXED,
    NONDEGENERATE,
    build_central_extension,
    classify_kernel,
    extension_geometry,
    fitting_split_extension,
    geometry_report,
    reduce_mixed_kernel,
    splitting_map,
)
from .liealg import (
    LieAlgebra,
    QuadraticLieAlgebra,
    block_diag,
    direct_sum,
    find_invariant_metric,
    inner_witness,
    is_centroid,
    is_hom,
    is_ideal,
    skew_derivation_basis,
    sl2,
    structure_report,
    verify_quadratic,
)
from .nilpotent2 import (
    N6_REFERENCE_A,
    builtin_example,
    cotangent_extension,
    extension_fixtures,
    g9,
    g9_metric,
    heisenberg_family,
    levi_civita,
    n6,
    n6_bases,
    oscillator,
    reductive_extension,
    two_step_to_matrix_algebra,
)

EXACT_NO = ("S = 0", "image bound", "grid")


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = "" if self.passed else f" ({'; '.join(str(f) for f in self.failures[:3])})"
        return f"[{tag}] criterion {self.number}: {self.title} [{self.seconds:.2f}s]{extra}"


class _Collector:
    def __init__(self):
        self.failures: list = []
        self.details: dict = {}

    def check(self, cond, msg):
        if not cond:
            self.failures.append(msg)
        return bool(cond)


def _timed(number, title, fn, budget=None) -> CriterionResult:
    col = _Collector()
    t0 = time.perf_counter()
    try:
        fn(col)
    except Exception as e:  # a crash is a failure, reported with its type
        col.failures.append(f"{type(e).__name__}: {e}")
    dt = time.perf_counter() - t0
    if budget is not None and dt >= budget:
        col.failures.append(f"runtime {dt:.2f}s exceeds {budget}s")
    col.details["budget_seconds"] = budget
    return CriterionResult(number, title, not col.failures, dt, col.details, col.failures)


# ---------------------------------------------------------------- 1

def _c1(col: _Collector) -> None:
    ext, B = g9()
    col.check(B == g9_metric(), "G9 metric differs from the reference one")
    col.check(verify_quadratic(ext.total, B).ok, "G9 with B_G is not quadratic")
    cls = structure_report(ext.total).nilpotency_class
    col.details["nilpotency_class"] = cls
    col.check(cls == 3, f"nilpotency class {cls} != 3")
    col.check(splitting_map(ext) is None, "G9 splits")
    for i, D in enumerate(ext.derivations):
        col.check(inner_witness(ext.base.alg, D) is None, f"D_{i + 1} is inner")
    data, A, rep = two_step_to_matrix_algebra(n6(), *n6_bases(), mu=Mat.identity(3))
    for j in range(3):
        col.check(data.A[j] == Mat.from_rows(N6_REFERENCE_A[j]), f"A_{j + 1} differs from the reference matrix")
    for i in range(3):
        s, s2 = (i + 1) % 3, (i + 2) % 3
        col.check(A.bracket_matrix(i, s) == data.A[s2], f"[A_{i + 1}, A_{s + 1}] != A_{s2 + 1}")
        col.check(tuple(A.c[t][i][s] for t in range(3)) == unit_vec(3, s2), "structure constants of 𝒜 disagree")
    col.check(A.dim == 3 and A.algebra is not None, "𝒜 is not a 3-dim Lie algebra")
    col.check(rep["perfect"] and rep["centerless"], "𝒜 not perfect and centerless")
    col.check(A.invariant_ok and A.form.rank() == 3, "B_𝒜 is not an invariant metric")
    col.details["two_step_report"] = rep


# ---------------------------------------------------------------- 2

def splitting_bases() -> list[tuple[str, QuadraticLieAlgebra]]:
    out = []
    for n in range(1, 5):
        out.append((f"abelian({n})", QuadraticLieAlgebra(LieAlgebra.abelian(n), Mat.identity(n))))
    out.append(("sl2", sl2()))
    out.append(("cotangent(2)", cotangent_extension(2)))
    out.append(("oscillator(1)", oscillator(1)))
    out.append(("N6", n6()))
    return out


def splitting_battery(seed: int = 0, random_per_base: int = 3):
    """(base name, base, derivation tuple) for r = 1, 2."""
    rng = random.Random(seed)
    for name, base in splitting_bases():
        sd = skew_derivation_basis(base)
        cands = [(D,) for D in sd]
        cands += [pair for pair in itertools.combinations(sd, 2)]
        for _ in range(random_per_base):
            if not sd:
                break
            for r in (1, 2):
                tup = []
                for _ in range(r):
                    M = Mat.zeros(base.dim, base.dim)
                    for D in sd:
                        M = M + D.scale(rng.randint(-3, 3))
                    tup.append(M)
                cands.append(tuple(tup))
        # inner derivations carry a metric by construction
        for j in range(base.dim):
            ad = base.alg.ad(unit_vec(base.dim, j))
            if not ad.is_zero():
                cands.append((ad,))
        for D in cands:
            yield name, base, D


def _c2(col: _Collector) -> None:
    total = with_metric = 0
    for name, base, Ds in splitting_battery():
        total += 1
        ext = build_central_extension(base, list(Ds))
        B = find_invariant_metric(ext.total, seed=0)
        if B is None:
            continue
        with_metric += 1
        tau = splitting_map(ext)
        if not col.check(tau is not None, f"{name}: metric found but no splitting"):
            continue
        alg = base.alg
        n = base.dim
        for a, th in enumerate(ext.cocycle()):
            for j, k in itertools.combinations(range(n), 2):
                rhs = sum((tau[a, p] * alg.c[p][j][k] for p in range(n)), Fraction(0))
                col.check(th[j, k] == rhs, f"{name}: θ != τ∘[,] at {(a, j, k)}")
    col.details["extensions"] = total
    col.details["with_metric"] = with_metric
    col.check(with_metric > 0, "battery found no extension with a metric")


# ---------------------------------------------------------------- 3

def _c3(col: _Collector) -> None:
    seen = {}
    for f in extension_fixtures():
        ext, B = f.ext, f.form
        geom = extension_geometry(ext, B)
        kc = classify_kernel(geom, ext)
        inv = geom.T.rank() == ext.n
        seen[f.name] = kc.tag
        col.check(inv == (kc.tag == NONDEGENERATE), f"{f.name}: T invertible={inv} but class {kc.tag}")
        if not inv:
            continue
        fs = fitting_split_extension(geom, ext)
        barB = geom.T.inverse().T @ ext.base.form
        col.check(fs.bar_B_g == barB, f"{f.name}: B̄_g != B_g(T^-1 ., .)")
        col.check(verify_quadratic(ext.base.alg, barB).ok, f"{f.name}: B̄_g is not an invariant metric")
        Psi = fs.nondegenerate_split
        r = ext.r
        Vb = ext.V().basis
        BV = Vb.T @ B @ Vb
        split_alg = direct_sum(ext.base.alg, LieAlgebra.abelian(r))
        col.check(Psi is not None and Psi.rank() == ext.dim, f"{f.name}: no split isomorphism")
        col.check(is_hom(split_alg, ext.total, Psi), f"{f.name}: split map is not a morphism")
        col.check(Psi.T @ B @ Psi == block_diag(barB, BV), f"{f.name}: split map is not an isometry")
    col.details["classes"] = seen
    col.check(NONDEGENERATE in seen.values() and ISOTROPIC in seen.values(), "fixture set lacks a class")


# ---------------------------------------------------------------- 4

def random_inner_fixtures(seed: int = 0, count: int = 6):
    """Inner-derivation extensions of sl2, N6, oscillator(1) with random data."""
    from .extensions import split_extension_metric

    rng = random.Random(seed)
    bases = [sl2(), n6(), oscillator(1)]
    for t in range(count):
        base = bases[t % len(bases)]
        n = base.dim
        r = rng.randint(1, 2)
        a_list = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(r)]
        while True:
            rows = [[rng.randint(-2, 2) for _ in range(r)] for _ in range(r)]
            S = Mat.from_rows(rows)
            S = S + S.T
            if S.rank() == r:
                break
        ext, B = split_extension_metric(base, a_list, block_diag(base.form, S))
        yield f"random-inner-{t}", ext, B


def geometry_suite(ext, B) -> list[str]:
    """Names of failed geometry identities, including the Fitting split."""
    geom = extension_geometry(ext, B, check=False)
    bad = [k for k, v in geometry_report(ext, geom).items() if v is not None]
    try:
        fs = fitting_split_extension(geom, ext)
    except Exception as e:
        return bad + [f"fitting split: {e}"]
    if fs.m + 1 != _fitting_index(geom.L):
        bad.append("fitting index of L != m + 1")
    if not is_centroid(ext.total, geom.L) or geom.L.T @ B != B @ geom.L:
        bad.append("L not in the symmetric centroid")
    if not (is_ideal(ext.base.alg, fs.q) and is_ideal(ext.base.alg, fs.n_ideal)):
        bad.append("q or n is not an ideal")
    if fs.q.dim and fs.n_ideal.dim and not (fs.q.basis.T @ ext.base.form @ fs.n_ideal.basis).is_zero():
        bad.append("q and n are not orthogonal")
    Lam = fs.lambda_isometry
    if fs.q.dim and Lam.T @ B @ Lam != fs.q_algebra.form:
        bad.append("Λ is not an isometry")
    return bad


def _fitting_index(M: Mat) -> int:
    from .exactlin import fitting_index

    return fitting_index(M)[0]


def _c4(col: _Collector) -> None:
    cases = [(f.name, f.ext, f.form) for f in extension_fixtures()]
    cases += list(random_inner_fixtures())
    for name, ext, B in cases:
        bad = geometry_suite(ext, B)
        col.check(not bad, f"{name}: {', '.join(bad)}")
    col.details["cases"] = len(cases)


# ---------------------------------------------------------------- 5

def _c5(col: _Collector) -> None:
    required = {"G9", "cotext(3)", "reductive(3)"}
    done = set()
    for f in extension_fixtures():
        geom = extension_geometry(f.ext, f.form)
        if classify_kernel(geom, f.ext).tag != ISOTROPIC:
            continue
        ex = extract_double_data(f.ext, geom)
        col.check(roundtrip_matches(f.ext, ex), f"{f.name}: roundtrip mismatch")
        col.details[f.name] = {"p": ex.context.p, "r": ex.context.r}
        done.add(f.name)
    col.check(required <= done, f"isotropic fixtures missing: {sorted(required - done)}")


# ---------------------------------------------------------------- 6

def _c6(col: _Collector) -> None:
    for m in (1, 2, 3):
        forms = heisenberg_invariant_forms(m)
        hb = unit_vec(2 * m + 1, 2 * m)
        col.check(all(not any(B @ hb) for B in forms), f"m={m}: a form does not kill hbar")
        fam = heisenberg_family(m, with_derivation=True)
        v = g_metric_existence(fam.dce)
        col.check(v.verdict == "No", f"m={m}: verdict {v.verdict}")
        col.check(v.certificate.get("method") in EXACT_NO, f"m={m}: certificate {v.certificate}")
        col.details[f"m={m}"] = {"forms": len(forms), "verdict": v.verdict, "certificate": v.certificate}


# ---------------------------------------------------------------- 7

def _c7(col: _Collector) -> None:
    ext, B = reductive_extension(sl2(), 3, levi_civita())
    col.check(verify_quadratic(ext.total, B).ok, "G is not quadratic")
    geom = extension_geometry(ext, B)
    col.check(classify_kernel(geom, ext).tag == ISOTROPIC, "V is not isotropic")
    Vb = ext.V().basis
    col.check((Vb.T @ B @ Vb).is_zero(), "B_G(V, V) != 0")
    bad = geometry_suite(ext, B)
    col.check(not bad, f"geometry: {bad}")
    idx = list(range(3, 9))
    cot = cotangent_extension(3, levi_civita())
    sub = [[[ext.total.c[i][j][k] for k in idx] for j in idx] for i in idx]
    col.check(sub == [[list(r) for r in m] for m in cot.alg.c], "C ⊕ V bracket differs from the cotangent one")
    col.check(B.submatrix(idx, idx) == cot.form, "C ⊕ V form differs from the cotangent one")
    CV = Subspace.span(9, [unit_vec(9, i) for i in idx])
    col.check(is_ideal(ext.total, CV), "C ⊕ V is not an ideal")
    col.check(B.submatrix(range(3), idx).is_zero(), "s is not orthogonal to C ⊕ V")


# ---------------------------------------------------------------- 8

def _c8(col: _Collector) -> None:
    for name in ("mixed", "mixed-abelian"):
        f = builtin_example(name)
        ext, B = f.ext, f.form
        geom = extension_geometry(ext, B)
        kc = classify_kernel(geom, ext)
        rad = kc.v_cap_vperp
        col.check(kc.tag == MIXED and rad.dim == 1 and ext.r == 2, f"{name}: not a dim 1 < 2 mixed case")
        mr = reduce_mixed_kernel(ext, geom)
        for W, label in ((mr.U, "U"), (mr.U_perp, "U-perp")):
            col.check((W.basis.T @ B @ W.basis).rank() == W.dim, f"{name}: {label} degenerate")
            col.check(is_ideal(ext.total, W), f"{name}: {label} not an ideal")
        col.check((mr.U.basis.T @ B @ mr.U_perp.basis).is_zero(), f"{name}: U not orthogonal to U-perp")
        sub = mr.sub_extension
        emb_V = Subspace.span(ext.dim, [mr.embedding @ v for v in sub.V().vectors()])
        col.check(emb_V == rad, f"{name}: sub-extension kernel != V ∩ V-perp")
        col.check(mr.sub_metric == mr.embedding.T @ B @ mr.embedding, f"{name}: sub metric is not the restriction")
        bad = geometry_suite(sub, mr.sub_metric)
        col.check(not bad, f"{name}: sub geometry {bad}")
        col.details[name] = {"U": mr.U.dim, "radical": rad.dim, "sub_r": sub.r}


CRITERIA = (
    (1, "G9 end-to-end and the matrix algebra of N6", _c1, 1.0),
    (2, "splitting for kernels of dimension <= 2", _c2, 10.0),
    (3, "T invertible iff non-degenerate kernel", _c3, None),
    (4, "geometry identities on every fixture", _c4, None),
    (5, "double central extension roundtrip", _c5, None),
    (6, "Heisenberg negative result", _c6, 5.0),
    (7, "reductive construction", _c7, None),
    (8, "mixed-kernel reduction", _c8, None),
)


def run_criterion(number: int) -> CriterionResult:
    for num, title, fn, budget in CRITERIA:
        if num == number:
            return _timed(num, title, fn, budget)
    raise KeyError(number)


def run_suite() -> list[CriterionResult]:
    # sequential, in declaration order
    return [_timed(num, title, fn, budget) for num, title, fn, budget in CRITERIA]

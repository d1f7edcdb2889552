"""Command-line front end.

Exit codes: 0 all checks pass, 1 verification failure, 2 input error,
3 inconclusive metric-existence search.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .doublecentral import (
    DEFAULT_SEED,
    build_double_central_extension,
    check_context,
    extract_double_data,
    g_metric_existence,
    roundtrip_matches,
)
from .errors import InputError, PreconditionError, VerificationError
from .exactlin import Mat, unit_vec
from .extensions import (
    ISOTROPIC,
    MIXED,
    CentralExtension,
    build_central_extension,
    classify_kernel,
    extension_geometry,
    fitting_split_extension,
    geometry_report,
    reduce_mixed_kernel,
)
from .fileformat import (
    AlgebraFile,
    algebra_from_json,
    algebra_to_json,
    context_from_json,
    context_to_json,
    maps_from_json,
    mat_from_json,
    mat_to_json,
    metric_from_json,
    read_json,
    to_jsonable,
    write_json,
)
from .liealg import (
    LieAlgebra,
    QuadraticLieAlgebra,
    jacobi_witness,
    skew_witness,
    structure_report,
    verify_quadratic,
)
from .nilpotent2 import builtin_example, two_step_to_matrix_algebra

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class Report:
    def __init__(self, command: Sequence[str]):
        self.command = list(command)
        self.checks: dict = {}
        self.data: dict = {}
        self.inconclusive = False

    def check(self, name: str, witness=None, ok: bool | None = None) -> None:
        """Record a check; ``witness`` None means it passed unless ``ok`` says otherwise."""
        passed = (witness is None) if ok is None else ok
        self.checks[name] = {"ok": passed, "witness": witness}

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    def exit_code(self) -> int:
        if not self.ok:
            return EXIT_FAIL
        return EXIT_INCONCLUSIVE if self.inconclusive else EXIT_OK

    def to_json(self) -> dict:
        return {"command": self.command, "ok": self.ok, "checks": to_jsonable(self.checks), "data": to_jsonable(self.data)}

    def to_text(self) -> str:
        lines = []
        for name, c in self.checks.items():
            if c["ok"]:
                lines.append(f"ok    {name}")
            else:
                lines.append(f"FAIL  {name}: {json.dumps(to_jsonable(c['witness']))}")
        for k, v in self.data.items():
            lines.append(f"{k}: {json.dumps(to_jsonable(v))}")
        return "\n".join(lines)


# ---------------------------------------------------------------- loaders

def _load_algebra(path: str) -> AlgebraFile:
    return algebra_from_json(read_json(path), path)


def _quadratic(af: AlgebraFile, rep: Report) -> QuadraticLieAlgebra | None:
    if af.form is None:
        raise InputError(f"{af.name or 'algebra'}: a form is required")
    q = verify_quadratic(af.algebra, af.form)
    if not q.ok:
        for k in ("skew_ok", "jacobi_ok", "symmetric_ok", "nondegenerate_ok", "invariant_ok"):
            rep.check(f"base {k[:-3]}", q.witnesses.get(k[:-3]), getattr(q, k))
        return None
    return QuadraticLieAlgebra(LieAlgebra(af.algebra.c, af.algebra.labels), af.form)


def extension_tags(ext: CentralExtension) -> dict:
    return {
        "extension": {
            "n": ext.n,
            "base_form": mat_to_json(ext.base.form),
            "derivations": [mat_to_json(D) for D in ext.derivations],
        }
    }


def _extension_from_file(af: AlgebraFile, deriv_path: str | None, rep: Report) -> CentralExtension | None:
    """Either a base file plus --derivations, or a total file tagged with its extension data."""
    if deriv_path is not None:
        base = _quadratic(af, rep)
        if base is None:
            return None
        Ds = maps_from_json(read_json(deriv_path), deriv_path)
        return build_central_extension(base, Ds)
    tag = af.tags.get("extension")
    if not isinstance(tag, dict):
        raise InputError("no --derivations given and the file carries no extension tag")
    n = tag.get("n")
    if not isinstance(n, int) or not 0 <= n <= af.dim:
        raise InputError("tags.extension.n: expected an integer in range")
    c = [[[af.algebra.c[i][j][k] for k in range(n)] for j in range(n)] for i in range(n)]
    Bg = mat_from_json(tag.get("base_form"), "tags.extension.base_form", (n, n))
    Ds = [mat_from_json(D, f"tags.extension.derivations[{t}]", (n, n)) for t, D in enumerate(tag.get("derivations") or [])]
    if n + len(Ds) != af.dim:
        raise InputError("tags.extension: n + number of derivations != dim")
    base = QuadraticLieAlgebra(LieAlgebra(c, af.algebra.labels[:n]), Bg)
    ext = build_central_extension(base, Ds, labels=af.algebra.labels)
    if ext.total.c != af.algebra.c:
        raise VerificationError("the bracket in the file does not match its extension data")
    return ext


def _parse_mu(text: str, r: int) -> Mat | None:
    if text in ("search", "auto"):
        return None
    if text == "identity":
        return Mat.identity(r)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = read_json(text)
    if isinstance(doc, dict):
        doc = doc.get("form") or doc.get("matrix")
    return mat_from_json(doc, "--mu", (r, r))


# ---------------------------------------------------------------- commands

def cmd_verify(args, rep: Report) -> None:
    af = _load_algebra(args.file)
    alg = af.algebra
    rep.check("skew", skew_witness(alg))
    jw = jacobi_witness(alg)
    rep.check("jacobi", jw)
    if af.form is not None:
        q = verify_quadratic(alg, af.form)
        rep.check("symmetric", q.witnesses.get("symmetric"), q.symmetric_ok)
        rep.check("nondegenerate", q.witnesses.get("nondegenerate"), q.nondegenerate_ok)
        rep.check("invariant", q.witnesses.get("invariant"), q.invariant_ok)
    if jw is None and skew_witness(alg) is None:
        sr = structure_report(LieAlgebra(alg.c, alg.labels))
        rep.data["dim"] = alg.dim
        rep.data["nilpotency_class"] = sr.nilpotency_class
        rep.data["center_dim"] = sr.center.dim
        rep.data["derived_dim"] = sr.derived_ideal.dim
        rep.data["perfect"] = sr.is_perfect


def _geometry(rep: Report, ext: CentralExtension, B: Mat):
    q = verify_quadratic(ext.total, B)
    rep.check("metric invariant", q.witnesses.get("invariant"), q.invariant_ok)
    rep.check("metric nondegenerate", q.witnesses.get("nondegenerate"), q.nondegenerate_ok)
    rep.check("metric symmetric", q.witnesses.get("symmetric"), q.symmetric_ok)
    if not q.ok:
        return None
    geom = extension_geometry(ext, B, check=False)
    for name, w in geometry_report(ext, geom).items():
        rep.check(f"geometry {name}", w)
    return geom


def cmd_extend(args, rep: Report) -> None:
    af = _load_algebra(args.file)
    base = _quadratic(af, rep)
    if base is None:
        return
    Ds = maps_from_json(read_json(args.derivations), args.derivations)
    ext = build_central_extension(base, Ds)
    rep.check("jacobi", jacobi_witness(ext.total))
    rep.data["dim"] = ext.dim
    B = None
    if args.metric:
        B = metric_from_json(read_json(args.metric), args.metric)
        geom = _geometry(rep, ext, B)
        if geom is not None:
            rep.data["kernel_class"] = classify_kernel(geom, ext).tag
    if args.emit:
        write_json(args.emit, algebra_to_json(af.name + "-ext", ext.total, B, extension_tags(ext)))


def cmd_classify(args, rep: Report) -> None:
    af = _load_algebra(args.file)
    ext = _extension_from_file(af, args.derivations, rep)
    if ext is None:
        return
    B = metric_from_json(read_json(args.metric), args.metric) if args.metric else af.form
    if B is None:
        raise InputError("a metric is required (--metric or a form in the file)")
    geom = _geometry(rep, ext, B)
    if geom is None:
        return
    kc = classify_kernel(geom, ext)
    rep.data["kernel_class"] = kc.tag
    rep.data["dim_V_cap_V_perp"] = kc.v_cap_vperp.dim
    rep.data["T_rank"] = geom.T.rank()
    fs = fitting_split_extension(geom, ext)
    rep.data["fitting"] = {"m": fs.m, "dim_q": fs.q.dim, "dim_n": fs.n_ideal.dim}
    if fs.bar_B_g is not None:
        rep.data["bar_B_g"] = fs.bar_B_g
    if kc.tag == MIXED:
        mr = reduce_mixed_kernel(ext, geom)
        rep.data["mixed_reduction"] = {"dim_U": mr.U.dim, "dim_U_perp": mr.U_perp.dim, "sub_r": mr.sub_extension.r}


def cmd_double_extend(args, rep: Report) -> None:
    ctx = context_from_json(read_json(args.file), args.file)
    cr = check_context(ctx)
    for name, w in cr.checks.items():
        rep.check(name, w)
    if not cr.ok:
        return
    dce = build_double_central_extension(ctx)
    q = verify_quadratic(dce.total.alg, dce.total.form)
    rep.check("quadratic", None, q.ok)
    rep.data["dim"] = dce.total.dim
    if args.metric_existence:
        v = g_metric_existence(dce, seed=args.seed, trials=args.trials)
        rep.data["g_metric"] = {"verdict": v.verdict, "trials": v.trials, "seed": v.seed, "certificate": v.certificate}
        if v.B_g is not None:
            rep.data["g_metric"]["B_g"] = v.B_g
        rep.inconclusive = v.verdict == "Inconclusive"
    if args.emit:
        write_json(args.emit, algebra_to_json("double-extension", dce.total.alg, dce.total.form))


def cmd_extract(args, rep: Report) -> None:
    af = _load_algebra(args.file)
    ext = _extension_from_file(af, args.derivations, rep)
    if ext is None:
        return
    B = metric_from_json(read_json(args.metric), args.metric) if args.metric else af.form
    if B is None:
        raise InputError("a metric is required (--metric or a form in the file)")
    geom = _geometry(rep, ext, B)
    if geom is None:
        return
    tag = classify_kernel(geom, ext).tag
    if tag != ISOTROPIC:
        raise PreconditionError(f"kernel class is {tag}, extraction needs {ISOTROPIC}")
    ex = extract_double_data(ext, geom)
    rep.check("roundtrip", None, roundtrip_matches(ext, ex))
    rep.data["r"] = ex.context.r
    rep.data["p"] = ex.context.p
    rep.data["Omega"] = ex.Omega
    if args.emit:
        write_json(args.emit, context_to_json(ex.context))


def cmd_two_step(args, rep: Report) -> None:
    af = _load_algebra(args.file)
    g = _quadratic(af, rep)
    if g is None:
        return
    n = g.dim
    if n % 2:
        raise PreconditionError(f"dim g = {n} is odd")
    r = n // 2
    a = [unit_vec(n, i) for i in range(r)]
    b = [unit_vec(n, r + i) for i in range(r)]
    data, A, report = two_step_to_matrix_algebra(g, a, b, mu=_parse_mu(args.mu, r))
    for key in ("A_independent", "alpha_cyclic", "closure", "jacobi", "invariant", "perfect", "centerless"):
        rep.check(key, report.get("closure_witness") if key == "closure" else None, bool(report[key]))
    rep.data["mu_source"] = report["mu_source"]
    rep.data["mu"] = data.mu
    rep.data["A"] = list(data.A)


def cmd_example(args, rep: Report) -> None:
    f = builtin_example(args.name)
    rep.data["name"] = f.name
    rep.data["dim"] = f.algebra.dim
    rep.data["labels"] = list(f.algebra.labels)
    rep.check("jacobi", jacobi_witness(f.algebra))
    if f.form is not None:
        rep.check("quadratic", None, verify_quadratic(f.algebra, f.form).ok)
    sr = structure_report(f.algebra)
    rep.data["nilpotency_class"] = sr.nilpotency_class
    rep.data["center_dim"] = sr.center.dim
    if args.emit:
        tags = dict(f.tags)
        tags["fixture"] = f.name
        if f.ext is not None:
            tags.update(extension_tags(f.ext))
        write_json(args.emit, algebra_to_json(f.name, f.algebra, f.form, tags))
        rep.data["emitted"] = args.emit


def cmd_paper_suite(args, rep: Report) -> None:
    from .suite import run_suite

    for res in run_suite():
        rep.check(f"criterion {res.number}: {res.title}", None if res.passed else res.failures, res.passed)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for randomized search (default {DEFAULT_SEED})")
    p = argparse.ArgumentParser(prog="quadext", description="Exact checks for quadratic Lie algebras and their central extensions.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="verify an algebra file")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("extend", parents=[common], help="build a central extension")
    s.add_argument("file")
    s.add_argument("--derivations", required=True)
    s.add_argument("--metric")
    s.add_argument("--emit")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("classify", parents=[common], help="classify the kernel of an extension")
    s.add_argument("file")
    s.add_argument("--derivations")
    s.add_argument("--metric")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("double-extend", parents=[common], help="build a double central extension")
    s.add_argument("file")
    s.add_argument("--metric-existence", action="store_true")
    s.add_argument("--trials", type=int, default=64)
    s.add_argument("--emit")
    s.set_defaults(func=cmd_double_extend)

    s = sub.add_parser("extract", parents=[common], help="extract double-extension data")
    s.add_argument("file")
    s.add_argument("--derivations")
    s.add_argument("--metric")
    s.add_argument("--emit")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("two-step", parents=[common], help="matrix algebra of a 2-step nilpotent algebra")
    s.add_argument("file")
    s.add_argument("--mu", default="search", help="'identity', 'search', a JSON matrix, or a file")
    s.set_defaults(func=cmd_two_step)

    s = sub.add_parser("example", parents=[common], help="build a named fixture")
    s.add_argument("name")
    s.add_argument("--emit")
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("paper-suite", parents=[common], help="run the acceptance checks")
    s.set_defaults(func=cmd_paper_suite)
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    rep = Report(argv)
    try:
        args.func(args, rep)
    except (InputError, PreconditionError) as e:
        rep.check("input", str(e), False)
        _emit(rep, args, out)
        return EXIT_INPUT
    except VerificationError as e:
        rep.check("verification", {"message": str(e), "witness": getattr(e, "witness", None)}, False)
        _emit(rep, args, out)
        return EXIT_FAIL
    _emit(rep, args, out)
    return rep.exit_code()


def _emit(rep: Report, args, out) -> None:
    if getattr(args, "json", False):
        out.write(json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n")
    else:
        out.write(rep.to_text() + "\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

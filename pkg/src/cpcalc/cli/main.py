"""Command-line driver.

Exit codes: 0 pass, 1 verification failure, 2 bad configuration,
3 convention (or sphere relations) unresolved, 4 cache error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from ..algebra.convention import Convention, ConventionError
from ..algebra.cp import build_cp_relations, quotient_basis
from ..algebra.resolve import harmonic_dim, implied_relation_factor, resolve_convention
from ..algebra.sphere import SphereError, build_sphere
from ..coeff import CoeffError, check_sample, make_field, parse_rat
from ..repdecomp import Frame, FrameError, decomp_json, lr_tensor, morphism_count, pi, pi_tower, dim
from ..rmatrix import build_family, build_R, check_identities, perturb
from .cache import CACHE_ENV, ENGINE_VERSION, Cache, CacheError, CacheKey, relation_hash
from .render import markdown

__all__ = ["main", "RunConfig", "ConfigError", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_UNRESOLVED, EXIT_CACHE = 0, 1, 2, 3, 4
DEFAULT_SAMPLES = ("3/2", "2")
CALCULUS_FLAGS = {"gamma": "gamma", "gamma-tilde": "gamma-tilde", "gamma-tilde-tilde": "gamma-tilde-tilde"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    N: int = 3
    mode: str = "sampled"
    samples: list = dc_field(default_factory=lambda: [mpq(3, 2), mpq(2)])
    degree: int = 2
    case: str | None = None
    cache_dir: str | None = None
    fmt: str = "json"

    def validate(self) -> "RunConfig":
        if self.N < 2:
            raise ConfigError(f"N must be at least 2, got {self.N}")
        if self.mode not in ("symbolic", "sampled"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not 0 <= self.degree <= 3:
            raise ConfigError(f"truncation degree must be between 0 and 3, got {self.degree}")
        for s in self.samples:
            check_sample(s)
        if self.mode == "sampled" and not self.samples:
            raise ConfigError("sampled mode needs at least one q sample")
        return self

    def fields(self) -> list:
        if self.mode == "symbolic":
            return [make_field("symbolic")]
        return [make_field("sampled", s) for s in self.samples]


def _config(args) -> RunConfig:
    try:
        samples = [parse_rat(s) for s in (args.q or DEFAULT_SAMPLES)]
    except (ValueError, ZeroDivisionError, CoeffError) as exc:
        raise ConfigError(f"bad q sample: {exc}") from exc
    cfg = RunConfig(
        N=args.N, mode=args.mode, samples=samples, degree=getattr(args, "degree", 2),
        case=getattr(args, "case", None), cache_dir=args.cache_dir or os.environ.get(CACHE_ENV),
        fmt=args.format,
    )
    try:
        return cfg.validate()
    except CoeffError as exc:
        raise ConfigError(str(exc)) from exc


# helpers ------------------------------------------------------------------

def _key(kind, cfg, F, degree=0, fingerprint="-", rel="-") -> CacheKey:
    mode = F.label if F.mode == "sampled" else "symbolic"
    return CacheKey(kind, cfg.N, degree, mode, fingerprint, rel, ENGINE_VERSION)


def _convention(cfg, F, cache: Cache) -> Convention:
    """Resolved convention, cached per (N, field)."""
    key = _key("convention", cfg, F, 2, "candidates", relation_hash(["sum_left", "sum_right", "delta"]))

    def build():
        f = build_family(cfg.N, F)
        try:
            return {"convention": resolve_convention(f).as_dict()}
        except ConventionError as exc:
            return {"error": str(exc), "matrix": exc.matrix}

    payload = cache.fetch(key, build)
    if "error" in payload:
        raise ConventionError(payload["error"], payload.get("matrix"))
    return Convention.from_dict(payload["convention"])


def _emit(kind, obj, cfg, out) -> None:
    if cfg.fmt == "markdown":
        out.write(markdown(kind, obj))
    else:
        out.write(json.dumps(obj, indent=2, sort_keys=False, default=str) + "\n")


def _conv_json(conv: Convention) -> dict:
    return {**conv.as_dict(), "fingerprint": conv.fingerprint()}


# subcommands --------------------------------------------------------------

def cmd_rmatrix(args, cfg, cache, out) -> int:
    rows = []
    for F in cfg.fields():
        R = build_R(cfg.N, F)
        if args.perturb:
            R = perturb(R)
        for r in check_identities(build_family(cfg.N, F, R)):
            r["mode"] = F.mode
            r["sample"] = str(F.q0) if F.mode == "sampled" else None
            rows.append(r)
    _emit("rmatrix", rows, cfg, out)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FAIL


def _frame(text: str) -> Frame:
    try:
        return Frame(tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip()))
    except ValueError as exc:
        raise ConfigError(f"bad frame {text!r}") from exc


def cmd_rep(args, cfg, cache, out) -> int:
    N = cfg.N
    if args.action == "decompose":
        frames = [_frame(t) for t in args.frame] if args.frame else [pi(1, N), pi(1, N)]
        if len(frames) != 2:
            raise ConfigError("decompose takes exactly two --frame values")
        a, b = (f.canonical(N) for f in frames)
        _emit("rep", decomp_json(lr_tensor(a, b, N), N), cfg, out)
    elif args.action == "tower":
        _emit("rep", [{"frame": list(f.rows), "mult": 1, "dim": dim(f, N)} for f in pi_tower(N, args.degree)],
              cfg, out)
    else:
        _emit("rep", morphism_count(N), cfg, out)
    return EXIT_OK


def cmd_algebra(args, cfg, cache, out) -> int:
    status = EXIT_OK
    reports = []
    for F in cfg.fields():
        conv = _convention(cfg, F, cache)
        f = build_family(cfg.N, F)
        rels = build_cp_relations(f, conv)
        rh = relation_hash([{str(w): F.text(c) for w, c in r.items()} for r in rels])
        key = _key("quotient", cfg, F, cfg.degree, conv.fingerprint(), rh)
        payload = cache.fetch(key, lambda: quotient_basis(rels, cfg.degree, cfg.N).to_json(F.text))
        from ..algebra.cp import QuotientBasis

        B = QuotientBasis.from_json(payload, F.parse)
        want = harmonic_dim(cfg.N, cfg.degree)
        report = {
            "N": cfg.N, "mode": F.label, "degree": cfg.degree, "quotient_dim": B.dim, "harmonic_dim": want,
            "convention": _conv_json(conv),
        }
        if cfg.degree >= 2:
            lam = implied_relation_factor(f, B, conv.sum_left)
            report["implied_relation_factor"] = F.text(lam) if lam is not None else None
        sphere = build_sphere(f, conv)
        report["sphere_relations"] = sphere.rel.as_dict()
        reports.append(report)
        if B.dim != want:
            status = EXIT_FAIL
    _emit("algebra", reports, cfg, out)
    return status


def _solve_payload(cfg, case, conv, cache, settings_key="default"):
    from ..calculus.solve import solve_case

    qs = None if cfg.mode == "symbolic" else cfg.samples
    F0 = cfg.fields()[0]
    key = CacheKey("classify", cfg.N, 2, cfg.mode + ":" + ",".join(str(s) for s in (qs or [])),
                   conv.fingerprint(), relation_hash([case, settings_key]), ENGINE_VERSION)
    return cache.fetch(key, lambda: solve_case(case, cfg.N, cfg.mode, qs=qs, convention=conv).to_json())


def _report_ok(rep: dict) -> bool:
    if not rep["samples_agree"]:
        return False
    if rep["solution_dim"] == 0:
        return all(rep["paper_match"].values())
    return rep["N"] < 6 and rep["paper_in_solution_set"]


def cmd_classify(args, cfg, cache, out) -> int:
    conv = _convention(cfg, cfg.fields()[0], cache)
    cases = [cfg.case] if cfg.case else ["free", "red1", "red2"]
    reps = [_solve_payload(cfg, c, conv, cache) for c in cases]
    _emit("classify", reps[0] if cfg.case else reps, cfg, out)
    return EXIT_OK if all(_report_ok(r) for r in reps) else EXIT_FAIL


def _corrupted_value(F, v):
    target = F.qpow(2)
    return target if v != target else target + 1


def cmd_verify(args, cfg, cache, out) -> int:
    from ..calculus.ansatz import TERM_NAMES, published_coefficients
    from ..calculus.solve import make_context
    from ..calculus.verify import factorization_check, verify_calculus

    if args.corrupt and args.corrupt not in TERM_NAMES:
        raise ConfigError(f"unknown coefficient {args.corrupt!r}")
    reports = []
    for F in cfg.fields():
        conv = _convention(cfg, F, cache)
        ctx = make_context(cfg.N, F.mode, getattr(F, "q0", None), conv)
        if args.factorization:
            reports.append(factorization_check(cfg.N, ctx=ctx).to_json())
        calcs = [args.calculus] if args.calculus else ([] if args.factorization else list(CALCULUS_FLAGS))
        for calc in calcs:
            ans = published_coefficients(calc, ctx.family)
            if args.corrupt:
                ans = ans.corrupted(args.corrupt, _corrupted_value(F, ans.get(args.corrupt)))
            reports.append(verify_calculus(calc, cfg.N, ctx=ctx, ansatz=ans).to_json())
    _emit("verify", reports, cfg, out)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_FAIL


def cmd_report(args, cfg, cache, out) -> int:
    """Everything cheap at once, plus classifications already in the cache
    (or computed when --case is given)."""
    from ..calculus.solve import make_context
    from ..calculus.verify import factorization_check, verify_calculus

    F = cfg.fields()[0]
    conv = _convention(cfg, F, cache)
    f = build_family(cfg.N, F)
    doc: dict = {}
    doc["rmatrix"] = check_identities(f)
    try:
        doc["rep"] = morphism_count(cfg.N)
    except FrameError as exc:
        doc["rep"] = {"note": str(exc)}
    doc["algebra"] = {"N": cfg.N, "mode": F.label, "convention": _conv_json(conv),
                      "sphere_relations": build_sphere(f, conv).rel.as_dict()}
    ctx = make_context(cfg.N, F.mode, getattr(F, "q0", None), conv)
    doc["verify"] = [verify_calculus(c, cfg.N, ctx=ctx).to_json() for c in CALCULUS_FLAGS]
    doc["verify"].append(factorization_check(cfg.N, ctx=ctx).to_json())
    ok = all(r["pass"] for r in doc["rmatrix"]) and all(r["passed"] for r in doc["verify"])
    if cfg.case:
        rep = _solve_payload(cfg, cfg.case, conv, cache)
        doc["classify"] = rep
        ok = ok and _report_ok(rep)
    _emit("report", doc, cfg, out)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "rmatrix": cmd_rmatrix,
    "rep": cmd_rep,
    "algebra": cmd_algebra,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, default=3)
    common.add_argument("--mode", choices=("symbolic", "sampled"), default="sampled")
    common.add_argument("--q", action="append", help="q sample (rational, repeatable; default 3/2 and 2)")
    common.add_argument("--cache-dir", default=None, help=f"cache directory (default ${CACHE_ENV})")
    common.add_argument("--format", choices=("json", "markdown"), default="json")
    p = argparse.ArgumentParser(prog="cpcalc", description="Covariant calculi on quantum projective space.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("rmatrix", parents=[common], help="R-matrix identity suite")
    r.add_argument("--perturb", action="store_true", help="change one R entry (negative control)")
    rp = sub.add_parser("rep", parents=[common], help="corepresentation bookkeeping")
    rp.add_argument("action", nargs="?", choices=("decompose", "tower", "morphisms"), default="decompose")
    rp.add_argument("--frame", action="append", help="Young frame as comma separated rows")
    rp.add_argument("--degree", type=int, default=3)
    a = sub.add_parser("algebra", parents=[common], help="quotient bases and convention resolution")
    a.add_argument("--degree", type=int, default=2)
    c = sub.add_parser("classify", parents=[common], help="solve the conditions of a constraint setting")
    c.add_argument("--case", choices=("free", "red1", "red2"))
    v = sub.add_parser("verify", parents=[common], help="check known calculi")
    v.add_argument("--calculus", choices=tuple(CALCULUS_FLAGS))
    v.add_argument("--factorization", action="store_true")
    v.add_argument("--corrupt", metavar="COEF", help="replace one published coefficient (negative control)")
    rep = sub.add_parser("report", parents=[common], help="combined report")
    rep.add_argument("--case", choices=("free", "red1", "red2"))
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        cache = Cache(cfg.cache_dir)
        code = COMMANDS[args.command](args, cfg, cache, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FrameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConventionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.matrix:
            print(json.dumps(exc.matrix, indent=1, default=str), file=sys.stderr)
        return EXIT_UNRESOLVED
    except SphereError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except CacheError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CACHE
    if cache.events:
        for e in cache.events:
            print(f"cache: {e} (rebuilt)", file=sys.stderr)
        return EXIT_CACHE
    return code

"""Command-line front end.

Exit codes: 0 positive verdict, 1 negative verdict, 2 bad input, 3 size cap or
budget exceeded, 4 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bent as bentmod
from . import codes as codemod
from . import families as fammod
from .cache import cached_walsh
from .errors import BudgetExceeded, EvenCharacteristic, FieldTooLarge, InternalMismatch, ParyError
from .func import PFunc, from_expr, load_table, parse_expr
from .gf import MAX_Q, FieldCtx, parse_field_spec
from .numth import factorize
from .scheme import analyze, criterion_check
from .walsh import WalshSpectrum, inverse_check

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP, EXIT_DEFECT = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    field: str | None
    func: str | None
    table: str | None
    fmt: str
    method: str
    verify: bool
    cache_dir: str | None
    max_q: int


class UsageError(ValueError):
    pass


def _load(cfg: RunConfig) -> tuple[FieldCtx | None, PFunc]:
    if (cfg.func is None) == (cfg.table is None):
        raise UsageError("give exactly one of --func or --table")
    fld = parse_field_spec(cfg.field, max_q=cfg.max_q) if cfg.field else None
    if cfg.table is not None:
        f = load_table(cfg.table, fld)
        return f.field, f
    if fld is None:
        raise UsageError("--func needs --field")
    return fld, from_expr(cfg.func, fld)


# -- rendering ---------------------------------------------------------------

def _text_block(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in pairs)


def _flat_csv(obj: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in obj.items():
        w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
    return buf.getvalue()


def spectrum_csv(spec: WalshSpectrum) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    p = spec.field.p
    w.writerow(["field", spec.field.spec, "f_hash", spec.f_hash])
    w.writerow(["beta"] + [f"c{i}" for i in range(1, p)])
    for beta, row in enumerate(spec.coeffs.tolist()):
        w.writerow([beta, *row])
    return buf.getvalue()


def load_spectrum_csv(text: str) -> WalshSpectrum:
    rows = list(csv.reader(io.StringIO(text)))
    fld = parse_field_spec(rows[0][1])
    body = rows[2:]
    if len(body) != fld.q:
        raise ValueError(f"expected {fld.q} rows, found {len(body)}")
    coeffs = np.array([[int(v) for v in r[1:]] for r in body], dtype=np.int64)
    return WalshSpectrum(fld, coeffs, rows[0][3])


def _value_summary(spec: WalshSpectrum) -> dict:
    counts = spec.value_multiset(nonzero_only=True)
    norms = sorted({int(v.norm_sq().as_integer()) for v in spec.values()})
    return {
        "field": spec.field.spec,
        "q": spec.field.q,
        "f_hash": spec.f_hash,
        "w0": spec[0].to_json(),
        "nonzero_values": [{"value": v.to_json(), "text": v.to_text(), "count": c}
                           for v, c in sorted(counts.items(), key=lambda kv: kv[0].coeffs)],
        "norms": norms,
        "parseval": spec.parseval_ok(),
    }


def _emit(cfg: RunConfig, obj: dict, text: str, csv_text: str | None = None):
    if cfg.fmt == "json":
        print(json.dumps(obj, indent=2))
    elif cfg.fmt == "csv":
        sys.stdout.write(csv_text if csv_text is not None else _flat_csv(obj))
    else:
        print(text)


# -- subcommands ---------------------------------------------------------------

def cmd_walsh(cfg: RunConfig, args) -> int:
    _, f = _load(cfg)
    spec = cached_walsh(f, cfg.cache_dir, method=cfg.method)
    if cfg.verify and not inverse_check(spec, f):
        raise InternalMismatch("spectrum fails the inversion identity")
    if args.summary:
        s = _value_summary(spec)
        vals = ", ".join(f"{d['text']} (x{d['count']})" for d in s["nonzero_values"])
        text = _text_block([
            ("field", s["field"]),
            ("W(0)", spec[0].to_text()),
            ("values beta!=0", "{" + vals + "}"),
            ("norms |W|^2", ", ".join(map(str, s["norms"]))),
            ("parseval", "ok" if s["parseval"] else "FAILED"),
        ])
        summary_csv = io.StringIO()
        w = csv.writer(summary_csv, lineterminator="\n")
        w.writerow(["value", "count"])
        for d in s["nonzero_values"]:
            w.writerow([d["text"], d["count"]])
        _emit(cfg, s, text, summary_csv.getvalue())
    else:
        lines = [f"{beta}\t{v.to_text()}" for beta, v in enumerate(spec.values())]
        _emit(cfg, spec.to_json(), "\n".join(lines), spectrum_csv(spec))
    return EXIT_OK


def _intersection_text(tensor, labels) -> list[str]:
    out = []
    names = [str(lab) for lab in labels]
    for k, mat in enumerate(tensor):
        out.append(f"p^k_ij for k = {names[k]} (rows i, columns j in the same order):")
        for row in mat:
            out.append("  " + " ".join(f"{v:>6}" for v in row))
    return out


def cmd_scheme(cfg: RunConfig, args) -> int:
    _, f = _load(cfg)
    spec = cached_walsh(f, cfg.cache_dir, method=cfg.method)
    report = analyze(f, spec, verify=cfg.verify) if cfg.verify else criterion_check(f, spec)
    obj = report.to_json()
    obj["field"] = f.field.spec
    if report.is_scheme:
        verdict = f"{report.class_count}-class association scheme"
    else:
        verdict = f"not a scheme: V-set size {report.vset_size} != |I| = {report.image_size}"
    pairs = [("field", f.field.spec), ("I = f(F_q^*)", report.labels),
             ("|I|", report.image_size), ("V-set size", report.vset_size),
             ("form", report.method), ("verdict", verdict)]
    lines = [_text_block(pairs)]
    if report.intersection_numbers is not None:
        lines += _intersection_text(report.intersection_numbers,
                                    ["{0}"] + [f"D*_{x}" for x in report.labels])
    elif report.violation is not None:
        lines.append(f"violation: {report.violation}")
    _emit(cfg, obj, "\n".join(lines))
    return EXIT_OK if report.is_scheme else EXIT_NEGATIVE


def cmd_bent(cfg: RunConfig, args) -> int:
    _, f = _load(cfg)
    if f.field.p == 2:
        raise EvenCharacteristic("bent analysis is for odd characteristic")
    spec = cached_walsh(f, cfg.cache_dir, method=cfg.method)
    if not bentmod.is_bent(spec):
        obj = {"field": f.field.spec, "is_bent": False}
        _emit(cfg, obj, _text_block([("field", f.field.spec), ("bent", "no")]))
        return EXIT_NEGATIVE
    profile = bentmod.analyze_bent(f, spec)
    obj = profile.to_json()
    obj["dual_level_sums"] = bentmod.dual_level_sums(profile)
    obj["surjective"] = bentmod.is_surjective(f)
    obj["scheme_agrees"] = bentmod.regularity_scheme_crosscheck(f, spec)
    mu_vals = sorted(set(profile.mu.tolist()))
    pairs = [("field", f.field.spec), ("bent", "yes"),
             ("weakly regular", "yes" if profile.weakly_regular else "no"),
             ("mu", f"constant {mu_vals[0]}" if len(mu_vals) == 1 else "takes both signs")]
    if profile.weakly_regular:
        pairs += [("u", profile.u), ("epsilon", profile.epsilon),
                  ("regular", "yes" if profile.regular else "no"),
                  ("dual", profile.dual.digit_string())]
    obj["scaling_exponent"] = bentmod.scaling_exponent(f)
    scheme = obj["scheme_agrees"] == bool(profile.weakly_regular)
    obj["is_scheme"] = scheme
    pairs.append(("scheme", ("yes" if scheme else "no") + (
        ", matches regularity" if obj["scheme_agrees"] else ", differs from regularity")))
    _emit(cfg, obj, _text_block(pairs))
    return EXIT_OK


def _infer_rm(f: PFunc, cfg: RunConfig, args) -> tuple[int, int]:
    if args.r is not None:
        return args.r, args.m or 1
    if cfg.func is None:
        raise UsageError("--table-check on a value table needs --r and --m")
    terms = parse_expr(cfg.func, f.field).terms
    if len(terms) != 1 or terms[0][0] != 1 or (f.field.q - 1) % terms[0][1]:
        raise UsageError("cannot infer r^m from the expression; pass --r and --m")
    fac = factorize((f.field.q - 1) // terms[0][1])
    if len(fac) != 1:
        raise UsageError("(q-1)/d is not a prime power; pass --r and --m")
    (r, m), = fac.items()
    return r, m


def cmd_code(cfg: RunConfig, args) -> int:
    _, f = _load(cfg)
    spec = cached_walsh(f, cfg.cache_dir, method=cfg.method)
    if args.table_check is not None:
        r, m = _infer_rm(f, cfg, args)
        rep = codemod.table_check(f, r, m, args.table_check, spec=spec, variant=args.table_variant)
        code = codemod.level_code(f, rep["level"], star=rep["star"])
        obj = dict(rep["code"])
        obj["table_check"] = {k: v for k, v in rep.items() if k != "code"}
        verdict = rep["match"]
    else:
        if args.level is None:
            raise UsageError("code needs --level or --table-check")
        code = codemod.level_code(f, args.level, star=args.star)
        obj = code.to_json()
        obj["routes"] = codemod.check_weights(code, f, args.level, spec)["routes"]
        verdict = True
    if args.generator_matrix:
        Path(args.generator_matrix).write_text(codemod.dump_generator_matrix(code))
    weights = ", ".join(f"{w}:{a}" for w, a in obj["weights"].items() if w != "0")
    pairs = [("field", f.field.spec), ("[n, k]", f"[{obj['n']}, {obj['k']}]"),
             ("weights", weights), ("two-weight", "yes" if obj["two_weight"] else "no")]
    if "table_check" in obj:
        tc = obj["table_check"]
        pairs.append((f"table {tc['table']}", "MATCH" if tc["match"] else "MISMATCH"))
        for c in tc["cells"]:
            pairs.append((f"  {c['cell']}", f"predicted {c['predicted']}, actual {c['actual']}"
                          + ("" if c["match"] else "  <-- mismatch")))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["weight", "count"])
    for wt, a in obj["weights"].items():
        w.writerow([wt, a])
    _emit(cfg, obj, _text_block(pairs), buf.getvalue())
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_family(cfg: RunConfig, args) -> int:
    fam = fammod.family_new(args.kind, args.p, m=args.m or 1, r=args.r, p1=args.p1,
                            p2=args.p2, n=args.n, max_q=cfg.max_q)
    obj = fam.to_json()
    pairs = [("family", fam.kind), ("q", fam.q_text),
             ("exponent", obj["exponent"] if fam.materializable else f"(q-1)/{fam.N}"),
             ("predicted image", "{" + ", ".join(map(str, fam.image)) + "}"),
             ("predicted", f"{fam.class_count}-class")]
    if args.run:
        if not fam.materializable:
            raise FieldTooLarge(f"q = {fam.q_text} exceeds the cap {cfg.max_q}")
        report = fammod.end_to_end(fam, verify=cfg.verify)
        obj["verified"] = report.to_json()
        pairs.append(("materialized", f"{report.class_count}-class confirmed"))
    else:
        pairs.append(("materialized", "no (prediction only)" if not fam.materializable
                      else "no (pass --run to build it)"))
    _emit(cfg, obj, _text_block(pairs))
    return EXIT_OK


COMMANDS = {"walsh": cmd_walsh, "scheme": cmd_scheme, "bent": cmd_bent,
            "code": cmd_code, "family": cmd_family}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pary", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None,
                        help="default: text on a terminal, json otherwise")
    common.add_argument("--cache-dir", default=None, help="spectrum cache (env PARY_CACHE_DIR wins)")
    common.add_argument("--max-q", type=int, default=MAX_Q)
    common.add_argument("--verify", action="store_true")

    func = argparse.ArgumentParser(add_help=False)
    func.add_argument("--field", help='e.g. "3^4" or "3^3/[1,2,0,1]"')
    src = func.add_mutually_exclusive_group()
    src.add_argument("--func", help='e.g. "Tr(2*x - x^5)"')
    src.add_argument("--table", help="value-table file")
    how = func.add_mutually_exclusive_group()
    how.add_argument("--fast", dest="method", action="store_const", const="fast")
    how.add_argument("--naive", dest="method", action="store_const", const="naive")

    p = sub.add_parser("walsh", parents=[common, func], help="Walsh spectrum")
    p.add_argument("--summary", action="store_true")
    sub.add_parser("scheme", parents=[common, func], help="association-scheme verdict")
    sub.add_parser("bent", parents=[common, func], help="bentness and weak regularity")

    p = sub.add_parser("code", parents=[common, func], help="trace code of a level set")
    p.add_argument("--level", type=int)
    p.add_argument("--star", action="store_true", help="use D*_{f,i} = D_{f,i} minus 0")
    p.add_argument("--table-check", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--table-variant", choices=("stated", "corrected"), default="stated")
    p.add_argument("--r", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--generator-matrix", metavar="PATH")

    p = sub.add_parser("family", parents=[common], help="monomial family prediction")
    p.add_argument("--kind", required=True, type=str.lower, choices=fammod.KINDS)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--p1", type=int)
    p.add_argument("--p2", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--run", action="store_true", help="materialize and verify when q fits")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or ("text" if sys.stdout.isatty() else "json")
    cfg = RunConfig(command=args.command, field=getattr(args, "field", None),
                    func=getattr(args, "func", None), table=getattr(args, "table", None),
                    fmt=fmt, method=getattr(args, "method", None) or "fast", verify=args.verify,
                    cache_dir=args.cache_dir, max_q=args.max_q)
    try:
        return COMMANDS[args.command](cfg, args)
    except InternalMismatch as exc:
        print(f"error: internal cross-check failed: {exc}", file=sys.stderr)
        return EXIT_DEFECT
    except (FieldTooLarge, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface: ``u7slopes <command> [options]``.

Exit codes: 0 success, 1 mathematical mismatch, 2 precision failure, 64 usage.
Setting U7SLOPES_OUT_DIR sends reports to files in that directory instead of
standard output.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .localfield import DEFAULT_PREC, Embedding, LocalPrecisionError
from .qseries import PrecisionError

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PRECISION = 2
EXIT_USAGE = 64
OUT_DIR_ENV = "U7SLOPES_OUT_DIR"

VERIFY_TARGETS = ("models", "eisenstein", "recurrence", "coords", "dominant", "block", "weight2", "dims")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    types: tuple
    k: int = 1
    n: int = 14
    qprec: int | None = None
    m: int = DEFAULT_PREC
    fmt: str = "tsv"
    out: str | None = None

    @property
    def effective_qprec(self) -> int:
        return self.qprec if self.qprec is not None else 7 * self.n + 8


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise UsageError(f"empty range {text}")
        return list(range(lo, hi + 1))
    return [int(x) for x in text.split(",")]


def _types(value: str) -> tuple:
    if value == "both":
        return (Embedding.TYPE1, Embedding.TYPE2)
    return (Embedding.parse(value),)


# -- report emission ------------------------------------------------------------

class Report:
    """Rows plus a provenance header, rendered as TSV or JSON."""

    def __init__(self, title: str, columns: list[str], meta: dict):
        self.title = title
        self.columns = columns
        self.meta = {"tool": "u7slopes", "version": __version__, **meta}
        self.rows: list[list] = []

    def add(self, *row) -> None:
        self.rows.append(list(row))

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {
                "report": self.title,
                "provenance": self.meta,
                "columns": self.columns,
                "rows": [[_jsonable(v) for v in r] for r in self.rows],
            }
            return json.dumps(doc, indent=1, sort_keys=True) + "\n"
        lines = [f"# {self.title}"]
        lines += [f"# {k}={self.meta[k]}" for k in sorted(self.meta)]
        lines.append("\t".join(self.columns))
        lines += ["\t".join(_text(v) for v in r) for r in self.rows]
        return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _text(v) -> str:
    if isinstance(v, bool):
        return "pass" if v else "FAIL"
    if isinstance(v, (list, tuple)):
        return ",".join(_text(x) for x in v)
    return str(v)


def _emit(cfg: RunConfig, text: str, stem: str) -> None:
    target = cfg.out
    if target is None and os.environ.get(OUT_DIR_ENV):
        target = str(Path(os.environ[OUT_DIR_ENV]) / f"{stem}.{cfg.fmt}")
    if target is None or target == "-":
        sys.stdout.write(text)
        return
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


# -- commands ------------------------------------------------------------------

def cmd_slopes(cfg: RunConfig, check_dim: int | None = None) -> int:
    from .spectral import char_series, slope_table, stability_check
    from .u7matrix import build_matrix

    n2 = check_dim if check_dim is not None else cfg.n + 3
    meta = {"n": cfg.n, "n_check": n2, "k": cfg.k, "qprec": cfg.effective_qprec, "padic_prec": cfg.m}
    report = Report("slopes", ["type", "j", "val_c_j", "slope", "predicted", "match"], meta)
    ok = True
    for emb in cfg.types:
        small = char_series(build_matrix(cfg.n, cfg.k, emb, cfg.qprec))
        q2 = max(cfg.effective_qprec, 7 * n2 + 8)
        large = char_series(build_matrix(n2, cfg.k, emb, q2))
        stable = stability_check(small, large, emb, cfg.m)
        report.meta[f"stable_upto_type{emb.value}"] = stable
        if stable == 0:
            ok = False
        for row in slope_table(small, emb, cfg.m):
            report.add(emb.value, row.j, row.val, row.slope, row.predicted, row.match)
            ok &= row.match
    _emit(cfg, report.render(cfg.fmt), f"slopes-n{cfg.n}-k{cfg.k}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_predict(cfg: RunConfig, count: int) -> int:
    from .spectral import predicted_coeff_vals, predicted_slopes

    report = Report("predicted slopes", ["type", "i", "slope", "val_c_i"], {"count": count})
    for emb in cfg.types:
        for i, (s, v) in enumerate(zip(predicted_slopes(emb, count), predicted_coeff_vals(emb, count)), 1):
            report.add(emb.value, i, s, v)
    _emit(cfg, report.render(cfg.fmt), f"predict-{count}")
    return EXIT_OK


def cmd_dims(cfg: RunConfig, ks: list[int], exp: int | None) -> int:
    from .classical import character_exponent, classical_slope_count, cohen_oesterle_dim

    ok = True
    if exp is not None:
        report = Report("cusp form dimensions", ["k", "exponent", "dim"], {"exponent": exp})
        for k in ks:
            report.add(k, exp, cohen_oesterle_dim(k, exp))
    else:
        report = Report("classical slope counts", ["type", "k", "exponent", "dim", "slopes_below_k-1", "match"], {})
        for emb in cfg.types:
            for k in ks:
                e = character_exponent(k, emb)
                d = cohen_oesterle_dim(k, e)
                c = classical_slope_count(k, emb)
                report.add(emb.value, k, e, d, c, d == c)
                ok &= d == c
    _emit(cfg, report.render(cfg.fmt), "dims")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_matrix(cfg: RunConfig) -> int:
    from .u7matrix import build_matrix, matrix_to_json, matrix_to_tsv

    if len(cfg.types) != 1:
        raise UsageError("matrix needs a single --type")
    mat = build_matrix(cfg.n, cfg.k, cfg.types[0], cfg.qprec)
    text = matrix_to_json(mat) if cfg.fmt == "json" else matrix_to_tsv(mat)
    _emit(cfg, text, f"matrix-n{cfg.n}-k{cfg.k}-type{cfg.types[0].value}")
    return EXIT_OK


def _verify_checks(target: str, cfg: RunConfig, ks: list[int]) -> list[tuple[str, bool, str]]:
    from . import classical, curvealg, u7matrix

    prec = cfg.qprec or 200
    rows = []
    if target == "models":
        rows += [(r.name, r.ok, r.detail) for r in curvealg.verify_model_identities(prec)]
    elif target == "eisenstein":
        rows += [(r.name, r.ok, r.detail) for r in curvealg.verify_eisenstein_identities(prec)]
        sign = curvealg.resolve_f_sign()
        rows.append(("F = -q dt/dq", sign == -1, f"sign {sign}"))
        for emb in cfg.types:
            w = u7matrix.weight_factor(emb, 120)
            closed = u7matrix.weight_factor_closed_form(emb, 120)
            diff = (w - closed).truncate(100)
            rows.append((f"weight factor closed form, type {emb.value}", diff.is_zero(), "below q^100"))
    elif target == "recurrence":
        rows += [(r.name, r.ok, r.detail) for r in curvealg.check_recurrence_listing()]
        r = curvealg.verify_recurrence_series(prec)
        rows.append((r.name, r.ok, r.detail))
    elif target == "coords":
        rows += [(r.name, r.ok, r.detail) for r in curvealg.check_dominant_table()]
        rows += [(r.name, r.ok, r.detail) for r in (curvealg.check_coordinate_consistency(i) for i in range(1, 8))]
    elif target == "dominant":
        for j in range(1, 7):
            form = u7matrix.recover_rational_form(j)
            for emb in cfg.types:
                r = u7matrix.check_approximation(j, emb, form)
                rows.append((r.name, r.ok, r.detail))
    elif target == "block":
        n = max(cfg.n, 28)
        for emb in cfg.types:
            mat = u7matrix.build_matrix(n, 1, emb)
            for r in u7matrix.verify_block_structure(mat, columns=range(8, 22)):
                rows.append((f"type {emb.value}: {r.name}", r.ok, r.detail))
        for r in (u7matrix.check_twisted_commutation(1, 1), u7matrix.check_twisted_commutation(2, 2)):
            rows.append((r.name, r.ok, r.detail))
        for i in (1, 2, 3):
            r = u7matrix.check_recurrence(i)
            rows.append((r.name, r.ok, r.detail))
    elif target == "weight2":
        for emb in cfg.types:
            for res in classical.verify_weight2(emb, cfg.m):
                rows.append((res.label, res.ok, f"vals {sorted(res.vals)} expected {sorted(res.expected_vals)}"))
    elif target == "dims":
        for emb in cfg.types:
            for k in ks:
                e = classical.character_exponent(k, emb)
                d = classical.cohen_oesterle_dim(k, e)
                c = classical.classical_slope_count(k, emb)
                rows.append((f"type {emb.value} k={k} exponent {e}", d == c, f"dim {d}, slopes below k-1: {c}"))
    return rows


def cmd_verify(cfg: RunConfig, target: str, ks: list[int]) -> int:
    rows = _verify_checks(target, cfg, ks)
    meta = {"target": target, "types": ",".join(str(t.value) for t in cfg.types), "padic_prec": cfg.m}
    report = Report(f"verify {target}", ["check", "result", "detail"], meta)
    for name, ok, detail in rows:
        report.add(name, bool(ok), detail)
    _emit(cfg, report.render(cfg.fmt), f"verify-{target}")
    return EXIT_OK if rows and all(ok for _, ok, _ in rows) else EXIT_MISMATCH


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="type", default="both", choices=["1", "2", "both"])
    common.add_argument("--weight", type=int, default=1)
    common.add_argument("--dim", type=int, default=14)
    common.add_argument("--qprec", type=int, default=None)
    common.add_argument("--padic-prec", type=int, default=DEFAULT_PREC)
    common.add_argument("--format", default="tsv", choices=["tsv", "json"])
    common.add_argument("--out", default=None)

    p = _Parser(prog="u7slopes", description="U_7 slopes at level 49 by exact computation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("slopes", parents=[common], help="characteristic-series slopes")
    s.add_argument("--check-dim", type=int, default=None, help="second truncation for the stability test")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("target", choices=VERIFY_TARGETS)
    v.add_argument("--k", default="2..20")

    pr = sub.add_parser("predict", parents=[common], help="predicted slopes")
    pr.add_argument("--count", type=int, default=10)

    d = sub.add_parser("dims", parents=[common], help="cusp form dimensions")
    d.add_argument("--k", default="2..20")
    d.add_argument("--exp", type=int, default=None)

    sub.add_parser("matrix", parents=[common], help="dump the matrix")
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        types=_types(args.type),
        k=args.weight,
        n=args.dim,
        qprec=args.qprec,
        m=args.padic_prec,
        fmt=args.format,
        out=args.out,
    )
    if cfg.n < 1:
        raise UsageError("--dim must be at least 1")
    if cfg.k < 1:
        raise UsageError("--weight must be at least 1")
    if cfg.m < 4:
        raise UsageError("--padic-prec must be at least 4")
    if cfg.command in ("slopes", "matrix") and cfg.qprec is not None and cfg.qprec < 7 * cfg.n + 8:
        raise UsageError(f"--qprec must be at least 7n+8 = {7 * cfg.n + 8}")
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "slopes":
            return cmd_slopes(cfg, args.check_dim)
        if args.command == "predict":
            if args.count < 1:
                raise UsageError("--count must be positive")
            return cmd_predict(cfg, args.count)
        if args.command == "dims":
            return cmd_dims(cfg, _parse_range(args.k), args.exp)
        if args.command == "matrix":
            return cmd_matrix(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.target, _parse_range(args.k))
    except UsageError as exc:
        print(f"u7slopes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, LocalPrecisionError) as exc:
        print(f"u7slopes: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ValueError as exc:
        print(f"u7slopes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    kacmoody describe A1~
    kacmoody weyl enum A2 --max-len 2
    kacmoody char irrep A1 --hw 1,0 --depth 6 --verify
    kacmoody check denominator A2 --depth 5
    kacmoody verify kostant A1 --hw 1,0 --max-len 2 --extra-beta 1,1
    kacmoody bracket-table A1 --depth 1

Output is deterministic JSON (sorted keys, rationals as "p/q") unless
``--format`` says otherwise.  Exit codes: 0 ok, 1 verification mismatch,
2 precondition or resource error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .affine_roots import (
    affine_cartan_matrix,
    affine_comarks,
    affine_marks,
    from_labels,
    from_root_coords,
    labels,
    rho_tilde,
)
from .affine_weyl import enumerate_words, s_index, sends_alpha0_to_negative
from .characters import (
    FormalCharacter,
    denominator_identity_check,
    freudenthal_character,
    verma_character,
    weyl_kac_character,
)
from .cohomology import kostant_verify, report_is_sound
from .errors import KacMoodyError
from .finite_cartan import from_string
from .loop_algebra import bracket_table
from .modules import build_irreducible

log = logging.getLogger("kacmoody")

EXIT_OK, EXIT_MISMATCH, EXIT_PRECONDITION = 0, 1, 2
CACHE_ENV = "KACMOODY_CACHE_DIR"


@dataclass
class RunConfig:
    algebra: str = ""
    hw: list = field(default_factory=list)
    depth: int = 0
    max_len: int = 0
    cache_dir: str = ""
    output_format: str = "json"
    threads: object = 1

    def validate(self, fc=None):
        if self.depth < 0 or self.max_len < 0:
            raise UsageError("depth and max-len must be >= 0")
        if fc is not None and self.hw and len(self.hw) != fc.rank + 1:
            raise UsageError(f"{fc.name} needs {fc.rank + 1} Dynkin labels, got {len(self.hw)}")
        if self.output_format not in ("json", "tsv", "pretty"):
            raise UsageError(f"unknown format {self.output_format!r}")

    def n_threads(self) -> int:
        if self.threads in ("auto", None):
            return os.cpu_count() or 1
        return max(1, int(self.threads))


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ helpers


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _algebra(text: str):
    return from_string(text.rstrip("~"))


def _labels_arg(text: str) -> list:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"bad label list {text!r}") from exc


def _weight_arg(fc, text: str):
    """``m0,..,ml`` or ``m0,..,ml:degree`` as an affine weight."""
    labs, _, deg = text.partition(":")
    labs = _labels_arg(labs)
    if len(labs) != fc.rank + 1:
        raise UsageError(f"{fc.name} weights need {fc.rank + 1} labels, got {text!r}")
    return from_labels(fc, labs, int(deg) if deg else 0)


def _hw(fc, cfg: RunConfig):
    if not cfg.hw:
        raise UsageError("--hw is required")
    return from_labels(fc, cfg.hw)


def cache_root(cfg: RunConfig) -> Path:
    if cfg.cache_dir:
        return Path(cfg.cache_dir)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "kacmoody"


def cache_path(cfg: RunConfig, fc, params: dict) -> Path:
    """``<cache_dir>/<algebra>/<hash>.json`` keyed on algebra data, parameters and code version."""
    key = {"algebra": fc.describe(), "params": params, "version": __version__}
    digest = hashlib.sha256(dumps(key).encode()).hexdigest()[:32]
    return cache_root(cfg) / fc.name / f"{digest}.json"


def _table(rows, pretty: bool) -> str:
    if not pretty:
        return "".join("\t".join(map(str, r)) + "\n" for r in rows)
    widths = [max(len(str(r[j])) for r in rows) for j in range(len(rows[0]))]
    return "".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


# ----------------------------------------------------------------- commands


def cmd_describe(args, cfg):
    fc = _algebra(cfg.algebra)
    A = affine_cartan_matrix(fc)
    n = fc.rank + 1
    data = {
        "type": fc.name + "~",
        "gcm": [list(r) for r in A],
        "marks": list(affine_marks(fc)),
        "comarks": list(affine_comarks(fc)),
        "dual_coxeter_number": fc.coxeter_g,
        "rho_tilde": str(rho_tilde(fc)),
        "rho_tilde_labels": [str(x) for x in labels(fc, rho_tilde(fc))],
        "simple_roots": [str(from_root_coords(fc, [int(i == j) for j in range(n)])) for i in range(n)],
        "simple_coroot_pairings": [list(r) for r in A],
        "imaginary_root_multiplicity": fc.rank,
        "finite": fc.describe(),
    }
    if cfg.output_format == "json":
        return dumps(data), EXIT_OK
    rows = [("key", "value")] + [(k, json.dumps(data[k], sort_keys=True)) for k in sorted(data)]
    return _table(rows, cfg.output_format == "pretty"), EXIT_OK


def cmd_weyl_enum(args, cfg):
    fc = _algebra(cfg.algebra)
    words = enumerate_words(fc, cfg.max_len)
    recs = [
        {
            "word": str(w),
            "letters": list(w.letters),
            "l": w.length,
            "s": s_index(fc, w),
            "w_alpha0_negative": sends_alpha0_to_negative(fc, w),
        }
        for w in words
    ]
    if cfg.output_format == "json":
        return dumps({"algebra": fc.name + "~", "max_len": cfg.max_len, "count": len(recs), "elements": recs}), EXIT_OK
    rows = [("word", "l", "s", "w_alpha0_negative")] + [(r["word"], r["l"], r["s"], r["w_alpha0_negative"]) for r in recs]
    return _table(rows, cfg.output_format == "pretty"), EXIT_OK


def _char_payload(fc, ch: FormalCharacter, method: str) -> dict:
    data = ch.to_json(fc)
    data["method"] = method
    data["algebra"] = fc.name + "~"
    return data


def _shapovalov_character(fc, lam, depth) -> FormalCharacter:
    L = build_irreducible(fc, lam, depth)
    return FormalCharacter(lam, L.dims(), depth, "shapovalov")


_METHODS = {
    "freudenthal": freudenthal_character,
    "weyl-kac": weyl_kac_character,
    "shapovalov": _shapovalov_character,
}


def _render_char(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(payload)
    rows = [("weight", "mult")] + [tuple(r) for r in payload["coeffs"]]
    return _table(rows, fmt == "pretty")


def cmd_char(args, cfg):
    fc = _algebra(cfg.algebra)
    cfg.validate(fc)
    lam = _hw(fc, cfg)
    if args.kind == "verma":
        method = "verma"
    else:
        method = "shapovalov" if args.realize else args.method
    verify = args.kind == "irrep" and args.verify
    params = {"cmd": "char", "kind": args.kind, "method": method, "hw": cfg.hw, "depth": cfg.depth, "verify": verify}
    path = None if args.no_cache else cache_path(cfg, fc, params)
    if path is not None and path.exists():
        print(f"cached {path}", file=sys.stderr)
        payload = json.loads(path.read_text())
        return _render_char(payload, cfg.output_format), payload["exit_code"]

    code = EXIT_OK
    if args.kind == "verma":
        ch = verma_character(fc, lam, cfg.depth)
    else:
        ch = _METHODS[method](fc, lam, cfg.depth)
    payload = _char_payload(fc, ch, method)
    if verify:
        others = {m: (ch if m == method else f(fc, lam, cfg.depth)) for m, f in sorted(_METHODS.items())}
        support = sorted(set().union(*(set(c.coeffs) for c in others.values())))
        bad = [b for b in support if len({c.mult(b) for c in others.values()}) > 1]
        payload["verify"] = {
            "methods": sorted(others),
            "agree": not bad,
            "mismatches": [
                {"weight": str(ch.weight(fc, b)), **{m: c.mult(b) for m, c in others.items()}} for b in bad
            ],
        }
        if bad:
            code = EXIT_MISMATCH
    payload["exit_code"] = code
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(dumps(payload))
        tmp.replace(path)
    return _render_char(payload, cfg.output_format), code


def cmd_check_denominator(args, cfg):
    fc = _algebra(cfg.algebra)
    cfg.validate(fc)
    rep = denominator_identity_check(fc, cfg.depth, args.max_len)
    rep["algebra"] = fc.name + "~"
    code = EXIT_OK if rep["ok"] else EXIT_MISMATCH
    if cfg.output_format == "json":
        return dumps(rep), code
    rows = [("key", "value")] + [(k, json.dumps(rep[k], sort_keys=True)) for k in sorted(rep)]
    return _table(rows, cfg.output_format == "pretty"), code


def cmd_verify_kostant(args, cfg):
    fc = _algebra(cfg.algebra)
    cfg.validate(fc)
    lam = _hw(fc, cfg)
    extras = [_weight_arg(fc, t) for t in args.extra or []]
    extras += [lam - from_root_coords(fc, _labels_arg(t)) for t in args.extra_beta or []]
    rep = kostant_verify(fc, lam, cfg.max_len, extras, depth=args.module_depth, threads=cfg.n_threads())
    sound = report_is_sound(rep)
    wanted = {"l": rep.matches_l, "s": rep.matches_s, "both": rep.matches_l or rep.matches_s}[args.index]
    code = EXIT_OK if (sound and wanted) else EXIT_MISMATCH
    data = rep.to_json()
    data["algebra"] = fc.name + "~"
    data["index"] = args.index
    data["sound"] = sound
    data["exit_code"] = code
    if cfg.output_format == "json":
        return dumps(data), code
    return rep.tsv(), code


def cmd_bracket_table(args, cfg):
    fc = _algebra(cfg.algebra)
    cfg.validate(fc)
    rows = bracket_table(fc, cfg.depth)
    if cfg.output_format == "json":
        return dumps({"algebra": fc.name + "~", "depth": cfg.depth, "brackets": rows}), EXIT_OK
    table = [("x", "y", "bracket")] + [
        (r["x"], r["y"], " + ".join(f"{v}*{k}" for k, v in sorted(r["bracket"].items()))) for r in rows
    ]
    return _table(table, cfg.output_format == "pretty"), EXIT_OK


# ------------------------------------------------------------------ parsing


def _common(p: argparse.ArgumentParser, hw=False, depth=False, max_len=False):
    p.add_argument("algebra", help='finite type such as "A1" or "A1~"')
    if hw:
        p.add_argument("--hw", type=_labels_arg, default=None, help="Dynkin labels m0,m1,..,ml")
    if depth:
        p.add_argument("--depth", type=int, default=None, help="delta-degree cap")
    if max_len:
        p.add_argument("--max-len", dest="max_len", type=int, default=None, help="Weyl length cap")


def _global_options(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", default=d, help="JSON file with RunConfig defaults (explicit flags win)")
    p.add_argument("--out", default=d, help="write the result here instead of stdout")
    p.add_argument("--format", dest="output_format", choices=["json", "tsv", "pretty"], default=d)
    p.add_argument("--cache-dir", dest="cache_dir", default=d, help=f"cache root (default ${CACHE_ENV} or ~/.cache/kacmoody)")
    p.add_argument("--threads", default=d, help='worker processes, integer or "auto"')
    p.add_argument("-v", "--verbose", action="store_true", default=False if not suppress else d)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="kacmoody", description="Exact computations for untwisted affine Kac-Moody algebras.")
    top.add_argument("--version", action="version", version=__version__)
    _global_options(top, suppress=False)
    # the same flags are accepted after the subcommand
    shared = argparse.ArgumentParser(add_help=False)
    _global_options(shared, suppress=True)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="affine Cartan data", parents=[shared])
    _common(p)
    p.set_defaults(func=cmd_describe)

    weyl = sub.add_parser("weyl", help="affine Weyl group").add_subparsers(dest="weyl_cmd", required=True)
    p = weyl.add_parser("enum", help="elements up to a length", parents=[shared])
    _common(p, max_len=True)
    p.set_defaults(func=cmd_weyl_enum)

    p = sub.add_parser("char", help="truncated characters", parents=[shared])
    p.add_argument("kind", choices=["verma", "irrep"])
    _common(p, hw=True, depth=True)
    p.add_argument("--method", choices=sorted(_METHODS), default="freudenthal", help="irrep method")
    p.add_argument("--verify", action="store_true", help="irrep: require all three methods to agree")
    p.add_argument("--realize", action="store_true", help="irrep: dimensions of the explicitly realized module")
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_char)

    check = sub.add_parser("check", help="identities").add_subparsers(dest="check_cmd", required=True)
    p = check.add_parser("denominator", help="denominator identity up to a depth", parents=[shared])
    _common(p, depth=True)
    p.add_argument("--max-len", dest="max_len_override", type=int, default=None)
    p.set_defaults(func=cmd_check_denominator)

    verify = sub.add_parser("verify", help="cohomology").add_subparsers(dest="verify_cmd", required=True)
    p = verify.add_parser("kostant", help="n+ cohomology of L(hw) on the dot orbit", parents=[shared])
    _common(p, hw=True, max_len=True)
    p.add_argument("--extra", action="append", help="control weight m0,..,ml[:degree]; repeatable")
    p.add_argument("--extra-beta", action="append", help="control weight hw - sum k_i alpha_i given as k0,..,kl")
    p.add_argument("--index", choices=["l", "s", "both"], default="both")
    p.add_argument("--module-depth", type=int, default=None, help="realize L to this depth (default: minimal)")
    p.set_defaults(func=cmd_verify_kostant)

    p = sub.add_parser("bracket-table", help="brackets of n+ basis vectors", parents=[shared])
    _common(p, depth=True)
    p.set_defaults(func=cmd_bracket_table)
    return top


def resolve_config(args) -> RunConfig:
    """Defaults, then the JSON config file, then explicit flags."""
    merged = asdict(RunConfig())
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        unknown = set(data) - set(merged)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(data)
    for key in merged:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    cfg = RunConfig(**merged)
    cfg.hw = [int(x) for x in cfg.hw]
    cfg.depth, cfg.max_len = int(cfg.depth), int(cfg.max_len)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if hasattr(args, "max_len_override"):
        args.max_len = args.max_len_override
    try:
        cfg = resolve_config(args)
        t0 = time.time()
        text, code = args.func(args, cfg)
        elapsed = time.time() - t0
    except (KacMoodyError, UsageError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        hint = getattr(exc, "required_depth", None) or getattr(exc, "required_len", None)
        if hint:
            print(f"hint: rerun with a value of at least {hint}", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.out:
        Path(args.out).write_text(text)
        # timestamps stay out of the payload so reruns are byte-identical
        with open(args.out + ".log", "a") as fh:
            fh.write(f"{time.strftime('%Y-%m-%dT%H:%M:%S')}\t{' '.join(argv or sys.argv[1:])}\texit={code}\t{elapsed:.3f}s\n")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

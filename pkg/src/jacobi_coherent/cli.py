"""Command-line harness.

Usage::

    jacobi-coherent verify --suite all --config cfg.yaml --output report.json
    jacobi-coherent eval pn 2 1+0i 0+0i
    jacobi-coherent eval kernel k=1 0,0 0,0 --json

Argument grammar for ``eval``:

* ``key=value`` tokens are options (``k=``, ``N=``, ``M=``, group parameters);
  everything else is positional;
* a complex scalar is ``a+bi`` (``1.5-2i``, ``3``, ``-i``) or ``re,im``;
* a point ``(z, w)`` is ``Z,W`` with ``Z`` and ``W`` written as ``a+bi``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import yaml

from . import group, kernel, measure, special, states, verify
from .special import PhasePoint

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_REPORT = "jacobi-report-{suite}.json"


class UsageError(ValueError):
    pass


_COMPLEX_RE = re.compile(r"^[0-9eE.+\-ij]+$")


def parse_complex_literal(text: str) -> complex:
    """``a+bi`` style literal (``i`` or ``j`` as imaginary unit)."""
    s = text.strip().replace(" ", "")
    if not s or not _COMPLEX_RE.match(s):
        raise UsageError(f"not a complex number: {text!r}")
    s = s.replace("i", "j")
    # Python wants an explicit coefficient before a bare j
    s = re.sub(r"(^|[+\-])j", r"\g<1>1j", s)
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def parse_complex(text: str) -> complex:
    """Scalar: ``re,im`` or ``a+bi``."""
    if "," in text:
        parts = text.split(",")
        if len(parts) != 2:
            raise UsageError(f"expected re,im: {text!r}")
        try:
            return complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise UsageError(f"expected re,im with real parts: {text!r}") from None
    return parse_complex_literal(text)


def parse_point(text: str) -> PhasePoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected a point Z,W: {text!r}")
    z, w = (parse_complex_literal(p) for p in parts)
    if not abs(w) < 1:
        raise UsageError(f"point {text!r}: |w| must be < 1")
    return PhasePoint(z, w)


def format_number(value: complex) -> str:
    """16 significant digits; the imaginary part is dropped when it is exactly 0."""
    value = complex(value)
    re_s = _fmt(value.real)
    if value.imag == 0:
        return re_s
    im = value.imag
    sign = "-" if im < 0 or (im == 0 and math.copysign(1, im) < 0) else "+"
    return f"{re_s}{sign}{_fmt(abs(im))}i"


def _fmt(x: float) -> str:
    out = format(x, ".16g")
    return "0" if out == "-0" else out


# ---------------------------------------------------------------------------
# eval


def _split_args(tokens: Sequence[str]):
    opts: Dict[str, str] = {}
    pos: List[str] = []
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if sep and re.match(r"^[A-Za-z_]\w*$", key):
            if key in opts:
                raise UsageError(f"option {key} given twice")
            opts[key] = val
        else:
            pos.append(tok)
    return opts, pos


def _int(text: str, name: str, minimum: int = 0) -> int:
    try:
        v = int(text)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {text!r}") from None
    if v < minimum:
        raise UsageError(f"{name} must be >= {minimum}")
    return v


def _real(text: str, name: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"{name} must be a real number, got {text!r}") from None
    if not math.isfinite(v):
        raise UsageError(f"{name} must be finite")
    return v


def _eval_pn(opts, pos):
    _expect(opts, pos, (), 3)
    n = _int(pos[0], "n")
    z, w = parse_complex(pos[1]), parse_complex(pos[2])
    return complex(special.pn(n, z, w)), {"n": n, "z": z, "w": w}


def _eval_basis_fn(opts, pos):
    _expect(opts, pos, ("k",), 3)
    k = _real(opts["k"], "k")
    n, s = _int(pos[0], "n"), _int(pos[1], "s")
    x = parse_point(pos[2])
    return complex(special.basis_fn(n, k, s, x)), {"k": k, "n": n, "s": s, "x": x}


def _eval_kernel(opts, pos):
    _expect(opts, pos, ("k",), 2)
    k = _real(opts["k"], "k")
    x, x2 = parse_point(pos[0]), parse_point(pos[1])
    return kernel.kernel(k, x, x2), {"k": k, "x": x, "x2": x2}


def _eval_weight(opts, pos):
    _expect(opts, pos, ("k",), 1)
    k = _real(opts["k"], "k")
    x = parse_point(pos[0])
    return complex(measure.weight(k, x.z, x.w)), {"k": k, "x": x}


def _eval_multiplier(opts, pos):
    _expect(opts, pos, ("k",), 1, optional=("a", "b", "alpha", "t"))
    k = _real(opts["k"], "k")
    a = parse_complex(opts.get("a", "1"))
    b = parse_complex(opts.get("b", "0"))
    alpha = parse_complex(opts.get("alpha", "0"))
    t = _real(opts.get("t", "0"), "t")
    if not abs(a) > abs(b):
        raise UsageError("need |a| > |b| for an SU(1,1) element")
    h = group.JacobiElement.from_params(a, b, alpha, t)
    x = parse_point(pos[0])
    return group.multiplier(k, h, x), {"k": k, "h": h, "x": x}


def _eval_overlap(opts, pos):
    _expect(opts, pos, ("k",), 2, optional=("N", "M"))
    k = _real(opts["k"], "k")
    N, M = _int(opts.get("N", "60"), "N", 1), _int(opts.get("M", "60"), "M", 1)
    x, x2 = parse_point(pos[0]), parse_point(pos[1])
    vx = states.coherent_vector(k, x.z, x.w, N, M)
    vy = states.coherent_vector(k, x2.z, x2.w, N, M)
    return states.overlap(vy, vx), {"k": k, "N": N, "M": M, "x": x, "x2": x2}


_QUANTITIES: Dict[str, tuple] = {
    "pn": (_eval_pn, "pn <n> <z> <w>"),
    "basis_fn": (_eval_basis_fn, "basis_fn k=<k> <n> <s> <Z,W>"),
    "kernel": (_eval_kernel, "kernel k=<k> <Z,W> <Z',W'>"),
    "weight": (_eval_weight, "weight k=<k> <Z,W>"),
    "multiplier": (_eval_multiplier, "multiplier k=<k> [a=] [b=] [alpha=] [t=] <Z,W>"),
    "overlap": (_eval_overlap, "overlap k=<k> [N=60] [M=60] <Z,W> <Z',W'>"),
}


def _expect(opts, pos, required, n_pos, optional=()):
    missing = [r for r in required if r not in opts]
    extra = [o for o in opts if o not in required and o not in optional]
    if missing:
        raise UsageError(f"missing option(s): {', '.join(f'{m}=' for m in missing)}")
    if extra:
        raise UsageError(f"unknown option(s): {', '.join(extra)}")
    if len(pos) != n_pos:
        raise UsageError(f"expected {n_pos} positional argument(s), got {len(pos)}")


def evaluate(quantity: str, tokens: Sequence[str]):
    """Returns ``(value, parsed_args)``; raises :class:`UsageError` with the signature."""
    if quantity not in _QUANTITIES:
        raise UsageError(f"unknown quantity {quantity!r}; choose from {', '.join(_QUANTITIES)}")
    func, signature = _QUANTITIES[quantity]
    opts, pos = _split_args(tokens)
    try:
        return func(opts, pos)
    except UsageError as exc:
        raise UsageError(f"{exc}\nusage: eval {signature}") from None
    except ValueError as exc:
        raise UsageError(f"{exc}\nusage: eval {signature}") from None


def _cmd_eval(args, out) -> int:
    try:
        value, parsed = evaluate(args.quantity, args.args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        payload = {"quantity": args.quantity, "args": verify._jsonable(parsed),
                   "re": value.real, "im": value.imag, "value": format_number(value)}
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        print(format_number(value), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def load_config(path: Optional[str]) -> verify.SuiteConfig:
    """YAML or JSON mapping of SuiteConfig fields; missing file means defaults."""
    if path is None:
        return verify.SuiteConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise verify.ConfigError({"config": f"cannot read {path}: {exc.strerror}"}) from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise verify.ConfigError({"config": f"not valid YAML/JSON: {exc}"}) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise verify.ConfigError({"config": "top level must be a mapping"})
    return verify.SuiteConfig.from_mapping(data)


def _cmd_verify(args, out) -> int:
    try:
        cfg = load_config(args.config)
        report = verify.run_suite(cfg, args.suite)
    except verify.ConfigError as exc:
        for key, msg in exc.problems.items():
            print(f"config error: {key}: {msg}", file=sys.stderr)
        return EXIT_USAGE
    target = args.output or cfg.output or DEFAULT_REPORT.format(suite=args.suite)
    Path(target).write_text(report.to_json() + "\n")
    print(report.human_summary(), file=out)
    print(f"report written to {target}", file=out)
    return EXIT_OK if report.all_passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobi-coherent",
                                     description="Jacobi-group coherent states: evaluation and verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run verification suites")
    pv.add_argument("--suite", default="all", choices=list(verify.SUITES) + ["all"])
    pv.add_argument("--config", help="YAML/JSON file with SuiteConfig fields")
    pv.add_argument("--output", help="JSON report path (overrides the config's output)")
    pv.set_defaults(func=_cmd_verify)

    pe = sub.add_parser("eval", help="evaluate a single quantity",
                        epilog="signatures:\n  " + "\n  ".join(s for _, s in _QUANTITIES.values()),
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    pe.add_argument("quantity", choices=list(_QUANTITIES))
    pe.add_argument("args", nargs=argparse.REMAINDER)
    pe.add_argument("--json", action="store_true", help="print one JSON object")
    pe.set_defaults(func=_cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # allow --json anywhere after the quantity
    as_json = False
    if argv and argv[0] == "eval" and "--json" in argv[1:]:
        argv = [a for a in argv if a != "--json"]
        as_json = True
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    if args.command == "eval":
        args.json = args.json or as_json
    return args.func(args, out or sys.stdout)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

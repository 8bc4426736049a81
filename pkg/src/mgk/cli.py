"""Command-line front end: ``python -m mgk <verb> [options]``.

Verbs: eval, qeval, xcheck, sweep, coeffs, zeta-table, props. Output is JSON
unless ``--format csv`` (or ``text`` for coeffs) is asked for; ``--out`` writes
to a file instead of stdout. Exit status: 0 success, 1 usage error,
2 domain error, 3 when any computation did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import List, Optional, Sequence

from .errors import DomainError, NonDecayingIntegrandError, ParameterError
from .exact import f_n_symbolic, higher_stirling_coeffs, phi_n
from .multigamma import cross_method_residuals, default_product_length, log_gn_method, vigneras_property_check
from .numerics import EvalResult
from .qgamma import QContext, classical_limit_sweep, log_qgn
from .zeta import zeta_deriv_table

__all__ = ["main", "main_exit", "parse_z", "parse_q_seq", "EXIT_OK", "EXIT_USAGE", "EXIT_DOMAIN", "EXIT_NOT_CONVERGED"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NOT_CONVERGED = 3


class _UsageError(Exception):
    def __init__(self, message: str, reported: bool = False):
        super().__init__(message)
        self.reported = reported


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise _UsageError(message, reported=True)


def parse_z(text: str):
    """"x" parses as a real number, "re,im" as a complex number."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return float(parts[0])
        if len(parts) == 2:
            z = complex(float(parts[0]), float(parts[1]))
            return z.real if z.imag == 0.0 else z
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"cannot parse {text!r} as a number or 're,im' pair")


_Q_SEQ = re.compile(r"^\s*1\s*-\s*10\^-k\s*:\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_q_seq(text: str) -> List[float]:
    """Either "1-10^-k:a..b" (q = 1 - 10^-k for k = a..b) or a comma list of q values."""
    m = _Q_SEQ.match(text)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        if a < 1 or b < a:
            raise argparse.ArgumentTypeError("q sequence range must satisfy 1 <= a <= b")
        return [1.0 - 10.0 ** (-k) for k in range(a, b + 1)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse q sequence {text!r}") from None


def _parse_grid(text: str):
    return [parse_z(x) for x in text.split(";" if ";" in text else ",") if x.strip()]


def _z_json(z):
    if isinstance(z, complex):
        return [z.real, z.imag]
    return z


def _clean(obj):
    """Make an object JSON-safe: complex -> [re, im], non-finite floats -> null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        if obj.imag == 0.0:
            return _clean(obj.real)
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, EvalResult):
        return _clean(obj.to_json())
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def _build_parser() -> _Parser:
    p = _Parser(prog="mgk", description="Multiple gamma and multiple q-gamma evaluation.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, formats=("json",)):
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--format", choices=formats, default=formats[0])

    e = sub.add_parser("eval", help="log G_n(z+1)")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--z", type=parse_z, required=True)
    e.add_argument("--method", default="auto", choices=["auto", "weierstrass", "stirling", "euler-maclaurin"])
    e.add_argument("--K", type=int, help="Weierstrass product length")
    e.add_argument("--m", type=int, help="Euler-MacLaurin order")
    common(e)

    q = sub.add_parser("qeval", help="log G_n(z+1;q)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--z", type=parse_z, required=True)
    q.add_argument("--q", type=float, required=True)
    q.add_argument("--method", default="product", choices=["product", "em"])
    q.add_argument("--K", type=int, help="number of product factors (adaptive when omitted)")
    q.add_argument("--m", type=int, help="Euler-MacLaurin order")
    common(q)

    x = sub.add_parser("xcheck", help="pairwise residuals between evaluation methods")
    x.add_argument("--n-max", type=int, required=True)
    x.add_argument("--grid", required=True, help='comma-separated z values, e.g. "0.5,2.5"')
    x.add_argument("--K", type=int, help="Weierstrass product length (default MGK_DEFAULT_K or 10^6)")
    common(x, ("json", "csv"))

    s = sub.add_parser("sweep", help="classical limit q -> 1")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--z", type=parse_z, required=True)
    s.add_argument("--q-seq", type=parse_q_seq, required=True, help='"1-10^-k:1..5" or "0.9,0.99"')
    common(s, ("json", "csv"))

    c = sub.add_parser("coeffs", help="exact expansion coefficients")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--form", choices=["stirling", "weierstrass"], default="stirling")
    c.add_argument("--r-max", type=int, default=4, help="number of asymptotic series terms")
    common(c, ("json", "text"))

    zt = sub.add_parser("zeta-table", help="zeta'(-j) for j = 0..J")
    zt.add_argument("--j-max", type=int, default=12)
    common(zt, ("json", "csv"))

    pr = sub.add_parser("props", help="check the characterising properties of G_n")
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--grid", default="0,1,2,3,4,5")
    pr.add_argument("--method", default="auto", choices=["auto", "weierstrass", "stirling", "euler-maclaurin"])
    common(pr)
    return p


def _validate(args) -> None:
    for name in ("n", "n_max"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise _UsageError(f"--{name.replace('_', '-')} must be >= 1")
    for name in ("K", "m", "r_max"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise _UsageError(f"--{name.replace('_', '-')} must be >= 1")
    if args.verb == "zeta-table" and args.j_max < 0:
        raise _UsageError("--j-max must be >= 0")


def _csv(rows: Sequence[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: _csv_cell(r.get(k)) for k in fields})
    return buf.getvalue()


def _csv_cell(v):
    if hasattr(v, "item"):
        v = v.item()
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j" if v.imag else repr(v.real)
    if isinstance(v, float):
        return repr(v)
    return v


def _run_eval(args):
    kw = {}
    if args.K is not None:
        kw["K"] = args.K
    if args.m is not None:
        kw["m"] = args.m
    r = log_gn_method(args.n, args.z, args.method, **kw)
    out = {"n": args.n, "z": _z_json(args.z), **r.to_json()}
    return out, r.converged


def _run_qeval(args):
    kw = {}
    if args.K is not None:
        kw["K"] = args.K
    if args.m is not None:
        kw["m"] = args.m
    r = log_qgn(args.n, args.z, QContext(args.q), args.method, **kw)
    out = {"n": args.n, "z": _z_json(args.z), "q": args.q, **r.to_json()}
    return out, r.converged


def _run_xcheck(args):
    K = args.K if args.K is not None else default_product_length()
    rows = []
    ok = True
    for n in range(1, args.n_max + 1):
        for z in _parse_grid(args.grid):
            res = cross_method_residuals(n, z, K)
            ok = ok and all(r.converged for r in res["results"].values())
            rows.append(
                {
                    "n": n,
                    "z": _z_json(z),
                    "results": {k: v.to_json() for k, v in res["results"].items()},
                    "pairs": res["pairs"],
                }
            )
    if args.format == "csv":
        flat = [
            {"n": r["n"], "z": r["z"] if not isinstance(r["z"], list) else complex(*r["z"]), **p}
            for r in rows
            for p in r["pairs"]
        ]
        return _csv(flat, ["n", "z", "a", "b", "residual", "budget"]), ok
    return {"K": K, "rows": rows}, ok


def _run_sweep(args):
    table = classical_limit_sweep(args.n, args.z, args.q_seq)
    if args.format == "csv":
        return table.to_csv(), True
    return table.to_json(), True


def _zeta_label(r: int) -> str:
    return "zeta'(0)" if r == 0 else f"zeta'(-{r})"


def _run_coeffs(args):
    if args.form == "stirling":
        b = higher_stirling_coeffs(args.n, args.r_max)
        if args.format == "text":
            lines = [
                f"n = {b.n}",
                f"log_coeff: {b.log_coeff.to_text()}",
                f"polynomial: {b.display_polynomial().to_text()}",
            ]
            for r, p in sorted(b.const_part.zeta_d.items()):
                lines.append(f"{_zeta_label(r)} weight: {p.to_text()}")
            if not b.const_part.gamma.is_zero():
                lines.append(f"gamma weight: {b.const_part.gamma.to_text()}")
            for r, num, w in b.series_terms:
                lines.append(f"series r={r}: ({w}) * [{num.to_text()}] / (z+1)^{2 * r - 1}")
            return "\n".join(lines) + "\n", True
        return {"form": "stirling", **b.to_json()}, True
    phi = phi_n(args.n)
    F = f_n_symbolic(args.n)
    if args.format == "text":
        lines = [f"n = {args.n}"]
        for mu in phi.exponents():
            lines.append(f"phi k^{mu}: {phi.terms[mu].to_text()}")
        lines.append(f"F rational part: {F.one.to_text()}")
        lines.append(f"F gamma weight: {F.gamma.to_text()}")
        for r, p in sorted(F.zeta_d.items()):
            lines.append(f"F {_zeta_label(r)} weight: {p.to_text()}")
        return "\n".join(lines) + "\n", True
    return {"form": "weierstrass", "n": args.n, "phi": phi.to_json(), "F": F.to_json()}, True


def _run_zeta_table(args):
    t = zeta_deriv_table(args.j_max)
    data = t.to_json()
    if args.format == "csv":
        return _csv(data["rows"], ["j", "zeta_deriv", "error_bound"]), True
    return data, True


def _run_props(args):
    grid = [float(v) for v in _parse_grid(args.grid)]
    rep = vigneras_property_check(args.n, grid, method=args.method)
    return rep, True


_VERBS = {
    "eval": _run_eval,
    "qeval": _run_qeval,
    "xcheck": _run_xcheck,
    "sweep": _run_sweep,
    "coeffs": _run_coeffs,
    "zeta-table": _run_zeta_table,
    "props": _run_props,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
    except _UsageError as exc:
        if not exc.reported:
            sys.stderr.write(f"mgk: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        payload, converged = _VERBS[args.verb](args)
    except ParameterError as exc:
        sys.stderr.write(f"mgk: parameter error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"mgk: domain error: {exc}\n")
        return EXIT_DOMAIN
    except NonDecayingIntegrandError as exc:
        sys.stderr.write(f"mgk: not converged: {exc}\n")
        return EXIT_NOT_CONVERGED
    text = payload if isinstance(payload, str) else json.dumps(_clean(payload), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def main_exit() -> None:
    sys.exit(main())

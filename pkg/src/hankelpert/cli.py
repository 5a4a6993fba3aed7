"""Command-line interface emitting machine-readable computation reports.

Subcommands:

    exact    ln D_n of the bare weight by three independent routes
    compare  perturbed determinants: two direct routes vs the asymptotic
             prediction, with a running estimate of the oscillation constant
    fluid    continuum band endpoints and recurrence estimates vs exact values
    density  the continuum density on a grid, with its mass check
    heine    determinant ratios vs the n-fold ensemble average (n <= 3)

Reports go to stdout as JSON (default) or CSV; arbitrary-precision values
are emitted as decimal strings, never as binary floats. Identical command
lines produce identical reports except for the timing fields.

Exit codes: 0 success; 2 usage or parameter error (including expression
syntax errors); 3 numeric or precision failure; 4 perturbation validation
failure (nonpositive value or evaluation fault).
"""
from __future__ import annotations

import argparse
import csv
import json
import shlex
import sys
import time
from fractions import Fraction

import mpmath
from mpmath import mpf

from . import __version__
from .errors import (DomainError, EvalDomainError, HankelpertError,
                     ParseError, PositivityError, PrecisionError)
from .precision import Precision, to_mpf
from .jacobi import (JacobiParams, jacobi_alpha_n, jacobi_beta_n,
                     jacobi_log_hn, jacobi_logdet_asym, jacobi_logdet_exact)
from .hankel import (auto_digits, hankel_logdet_ldl, hankel_logdet_recurrence,
                     heine_average_small_n, perturbed_moment_sequence,
                     pure_moment_sequence)
from .fluid import (EquilibriumDensity, fluid_recurrence, support_endpoints,
                    support_endpoints_shifted)
from .linstat import assemble_prediction, cheb_log_expand, mean_term
from .dsl import parse_h, validate_positive

SCHEMA_VERSION = 1
HEINE_GUARD = 20


def _parse_n_list(text: str) -> list:
    """Sizes from '12', '10,20,40', or 'start:stop[:step]' (stop inclusive)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise DomainError(f"range must be start:stop[:step], got {text!r}")
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step < 1:
            raise DomainError(f"range step must be >= 1, got {step}")
        if stop < start:
            raise DomainError(f"empty range {text!r}")
        ns = list(range(start, stop + 1, step))
    else:
        try:
            ns = [int(tok) for tok in text.split(",") if tok.strip()]
        except ValueError:
            raise DomainError(f"sizes must be integers, got {text!r}") from None
    if not ns:
        raise DomainError("no sizes given")
    for n in ns:
        if n < 1:
            raise DomainError(f"sizes must be >= 1, got {n}")
    return sorted(set(ns))


def _row_digits(args, n: int) -> int:
    if args.digits is not None:
        return args.digits
    return auto_digits(n)


def _warn_if_below_policy(args, ns) -> None:
    if args.digits is None:
        return
    policy = max(auto_digits(n) for n in ns)
    if args.digits < policy:
        print(f"warning: --digits {args.digits} is below the size-based "
              f"policy of {policy} for n = {max(ns)}; results may lose "
              f"precision or abort", file=sys.stderr)


def _fmt(value, digits: int):
    """JSON-safe form: mpf -> decimal string, Fraction -> ratio string."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, mpf):
        return mpmath.nstr(value, digits)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _fmt_row(row: dict, digits: int) -> dict:
    return {k: _fmt(v, digits) for k, v in row.items()}


def _param_str(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return mpmath.nstr(value, 24) if isinstance(value, mpf) else str(value)


def _validated_h(args):
    h = parse_h(args.h)
    cert = validate_positive(h, 257, Precision(64))
    return h.with_certificate(cert)


# --- subcommands ---

def cmd_exact(args) -> tuple:
    """Bare-weight ln D_n by closed form, norm product, and direct factorization."""
    jp = JacobiParams(args.alpha, args.beta)
    ns = _parse_n_list(args.n)
    _warn_if_below_policy(args, ns)
    rows = []
    for n in ns:
        digits = _row_digits(args, n)
        p = Precision(digits)
        t0 = time.perf_counter()
        closed = jacobi_logdet_exact(n, jp, p)
        with p.workdps():
            norm_product = mpmath.fsum(jacobi_log_hn(j, jp, p) for j in range(n))
        ldl = hankel_logdet_ldl(pure_moment_sequence(jp, n, p), n, p)
        asym = jacobi_logdet_asym(n, jp, p) if jp.asymptotic_valid else None
        with p.workdps():
            row = {
                "n": n,
                "digits": digits,
                "log_det_closed": closed,
                "log_det_norm_product": norm_product,
                "log_det_ldl": ldl.log_det,
                "diff_closed_norm": abs(closed - norm_product),
                "diff_closed_ldl": abs(closed - ldl.log_det),
                "diff_norm_ldl": abs(norm_product - ldl.log_det),
                "log_det_asym": asym,
                "asym_gap": None if asym is None else abs(closed - asym),
                "elapsed_s": round(time.perf_counter() - t0, 3),
            }
        rows.append(_fmt_row(row, digits))
    parameters = {
        "n": [int(n) for n in ns],
        "alpha": _param_str(jp.alpha),
        "beta": _param_str(jp.beta),
        "asymptotic_valid": jp.asymptotic_valid,
        "digits": args.digits if args.digits is not None else "auto",
    }
    return parameters, rows, 0


def cmd_compare(args) -> tuple:
    """Perturbed determinants, two direct routes vs the asymptotic prediction."""
    jp = JacobiParams(args.alpha, args.beta)
    ns = _parse_n_list(args.n)
    _warn_if_below_policy(args, ns)
    h = _validated_h(args)
    failed = 0
    rows = []
    for n in ns:
        digits = _row_digits(args, n)
        p = Precision(digits)
        t0 = time.perf_counter()
        try:
            ms = perturbed_moment_sequence(jp, h, n, p, m=args.quad_order)
            direct = hankel_logdet_ldl(ms, n, p)
            second = hankel_logdet_recurrence(ms, n, jp, p)
            pred = assemble_prediction(n, jp, h, p, cheb_m=args.cheb_m)
            pure = jacobi_logdet_exact(n, jp, p)
            with p.workdps():
                ce = cheb_log_expand(h, p, args.cheb_m)
                mean_limit = mean_term(ce, n, jp, "limit")
                log_ratio = direct.log_det - pure
                pv_estimate = log_ratio - mean_limit
                row = {
                    "n": n,
                    "digits": digits,
                    "log_det_ldl": direct.log_det,
                    "log_det_recurrence": second.log_det,
                    "method_diff": abs(direct.log_det - second.log_det),
                    "method_tol": direct.cross_tolerance,
                    "prediction_total": pred.total,
                    "prediction_gap": direct.log_det - pred.total,
                    "log_leading": pred.log_leading,
                    "log_mean": pred.log_mean,
                    "pv_part": pred.pv_part,
                    "boundary_part": pred.boundary_part,
                    "edge_part": pred.edge_part,
                    "pure_constant_part": pred.pure_constant_part,
                    "log_det_pure": pure,
                    "log_ratio": log_ratio,
                    "mean_term_limit": mean_limit,
                    "pv_estimate": pv_estimate,
                    "pv_estimate_edge_adjusted": pv_estimate - pred.edge_part,
                }
                if args.heine:
                    if n <= 3:
                        avg = heine_average_small_n(n, jp, h, p)
                        row["heine_average"] = avg
                        row["heine_diff"] = abs(mpmath.exp(log_ratio) - avg)
                        row["heine_tol"] = mpf(10) ** (HEINE_GUARD - digits)
                    else:
                        row["heine_average"] = None
                        row["heine_diff"] = None
                        row["heine_tol"] = None
            row["elapsed_s"] = round(time.perf_counter() - t0, 3)
            rows.append(_fmt_row(row, digits))
        except PrecisionError as exc:
            failed += 1
            rows.append({"n": n, "digits": digits, "error": str(exc),
                         "error_type": type(exc).__name__})
    parameters = {
        "n": [int(n) for n in ns],
        "alpha": _param_str(jp.alpha),
        "beta": _param_str(jp.beta),
        "h": h.source,
        "h_min_sampled": _fmt(h.positivity_certificate.min_value, 16),
        "asymptotic_valid": jp.asymptotic_valid,
        "digits": args.digits if args.digits is not None else "auto",
        "quad_order": args.quad_order,
        "cheb_m": args.cheb_m,
    }
    return parameters, rows, (3 if failed else 0)


def cmd_fluid(args) -> tuple:
    """Continuum band and recurrence estimates against the exact coefficients."""
    jp = JacobiParams(args.alpha, args.beta)
    ns = _parse_n_list(args.n)
    digits = args.digits if args.digits is not None else 64
    p = Precision(digits)
    rows = []
    for n in ns:
        t0 = time.perf_counter()
        with p.workdps():
            si = support_endpoints(n, jp)
            shifted = support_endpoints_shifted(n, jp)
            alpha_tilde, beta_tilde = fluid_recurrence(n, jp)
            alpha_true = to_mpf(jacobi_alpha_n(n, jp))
            beta_true = to_mpf(jacobi_beta_n(n, jp))
            row = {
                "n": n,
                "digits": digits,
                "a_n": si.a_n,
                "b_n": si.b_n,
                "a_n_shifted": shifted.a_n,
                "b_n_shifted": shifted.b_n,
                "alpha_n": alpha_true,
                "beta_n": beta_true,
                "alpha_tilde": alpha_tilde,
                "beta_tilde": beta_tilde,
                "n3_alpha_dev": n ** 3 * (alpha_tilde - alpha_true),
                "n2_beta_dev": n ** 2 * (beta_tilde - beta_true),
                "n2_one_plus_a": n ** 2 * (1 + si.a_n),
                "n2_one_minus_b": n ** 2 * (1 - si.b_n),
                "elapsed_s": round(time.perf_counter() - t0, 3),
            }
        rows.append(_fmt_row(row, digits))
    parameters = {
        "n": [int(n) for n in ns],
        "alpha": _param_str(jp.alpha),
        "beta": _param_str(jp.beta),
        "digits": digits,
    }
    return parameters, rows, 0


def cmd_density(args) -> tuple:
    """Continuum density sampled on a Chebyshev grid over its band."""
    jp = JacobiParams(args.alpha, args.beta)
    ns = _parse_n_list(args.n)
    if len(ns) != 1:
        raise DomainError("density takes a single size, e.g. --n 20")
    n = ns[0]
    if args.points < 3:
        raise DomainError(f"need at least 3 grid points, got {args.points}")
    digits = args.digits if args.digits is not None else 64
    p = Precision(digits)
    t0 = time.perf_counter()
    with p.workdps():
        si = support_endpoints(n, jp)
        density = EquilibriumDensity(si)
        mass = density.mass(p)
        rows = []
        for j in range(args.points):
            x = si.center + si.halfwidth * mpmath.cos(
                mpmath.pi * (args.points - 1 - j) / (args.points - 1))
            if j == 0:
                x = si.a_n
            elif j == args.points - 1:
                x = si.b_n
            rows.append(_fmt_row({"x": x, "sigma": density(x)}, digits))
        parameters = {
            "n": n,
            "alpha": _param_str(jp.alpha),
            "beta": _param_str(jp.beta),
            "digits": digits,
            "points": args.points,
            "a_n": _fmt(si.a_n, digits),
            "b_n": _fmt(si.b_n, digits),
            "mass": _fmt(mass, digits),
            "mass_rel_err": _fmt(abs(mass - n) / n, 8),
            "elapsed_s": round(time.perf_counter() - t0, 3),
        }
    return parameters, rows, 0


def cmd_heine(args) -> tuple:
    """Determinant ratio vs the n-fold ensemble average, for n up to 3."""
    jp = JacobiParams(args.alpha, args.beta)
    ns = _parse_n_list(args.n)
    for n in ns:
        if n > 3:
            raise DomainError(f"ensemble averages are evaluated for n <= 3, got {n}")
    _warn_if_below_policy(args, ns)
    h = _validated_h(args)
    rows = []
    for n in ns:
        digits = _row_digits(args, n)
        p = Precision(digits)
        t0 = time.perf_counter()
        ms = perturbed_moment_sequence(jp, h, n, p, m=args.quad_order)
        perturbed = hankel_logdet_ldl(ms, n, p)
        pure = hankel_logdet_ldl(pure_moment_sequence(jp, n, p), n, p)
        with p.workdps():
            ratio_direct = mpmath.exp(perturbed.log_det - pure.log_det)
            average = heine_average_small_n(n, jp, h, p)
            row = {
                "n": n,
                "digits": digits,
                "ratio_direct": ratio_direct,
                "ratio_average": average,
                "diff": abs(ratio_direct - average),
                "tol": mpf(10) ** (HEINE_GUARD - digits),
                "elapsed_s": round(time.perf_counter() - t0, 3),
            }
        rows.append(_fmt_row(row, digits))
    parameters = {
        "n": [int(n) for n in ns],
        "alpha": _param_str(jp.alpha),
        "beta": _param_str(jp.beta),
        "h": h.source,
        "digits": args.digits if args.digits is not None else "auto",
    }
    return parameters, rows, 0


# --- report emission ---

def _emit_json(report: dict, stream) -> None:
    json.dump(report, stream, indent=2)
    stream.write("\n")


def _emit_csv(report: dict, stream) -> None:
    stream.write(f"# command: {report['command']}\n")
    stream.write(f"# tool: {report['tool']['name']} {report['tool']['version']}"
                 f" schema {report['schema_version']}\n")
    for key, value in report["parameters"].items():
        stream.write(f"# {key}: {value}\n")
    fields = []
    for row in report["rows"]:
        for key in row:
            if key not in fields:
                fields.append(key)
    writer = csv.DictWriter(stream, fieldnames=fields, restval="")
    writer.writeheader()
    for row in report["rows"]:
        writer.writerow({k: ("" if v is None else v) for k, v in row.items()})


def _emit(report: dict, fmt: str) -> None:
    if fmt == "csv":
        _emit_csv(report, sys.stdout)
    else:
        _emit_json(report, sys.stdout)


# --- argument plumbing ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hankelpert",
        description="Hankel determinants of perturbed Jacobi-type weights, "
                    "cross-validated at arbitrary precision.")
    parser.add_argument("--version", action="version",
                        version=f"hankelpert {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp, with_h=False, with_quad=False):
        sp.add_argument("--n", required=True,
                        help="sizes: one integer, a comma list, or start:stop[:step]")
        sp.add_argument("--alpha", default="0", help="exponent of (1-x), > -1")
        sp.add_argument("--beta", default="0", help="exponent of (1+x), > -1")
        sp.add_argument("--digits", type=int, default=None,
                        help="working precision override (default: size-based policy)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        if with_h:
            sp.add_argument("--h", required=True,
                            help="perturbation expression in x, e.g. 'exp(0.5*x)'")
        if with_quad:
            sp.add_argument("--quad-order", type=int, default=None,
                            help="Gauss rule order for perturbed moments (default n+32)")

    sp = sub.add_parser("exact", help="bare-weight ln det by three routes")
    common(sp)
    sp.set_defaults(run=cmd_exact)

    sp = sub.add_parser("compare", help="direct perturbed ln det vs prediction")
    common(sp, with_h=True, with_quad=True)
    sp.add_argument("--cheb-m", type=int, default=None,
                    help="Chebyshev degree for ln h (default: auto)")
    sp.add_argument("--heine", action="store_true",
                    help="add ensemble-average columns for sizes <= 3")
    sp.set_defaults(run=cmd_compare)

    sp = sub.add_parser("fluid", help="continuum band and recurrence estimates")
    common(sp)
    sp.set_defaults(run=cmd_fluid)

    sp = sub.add_parser("density", help="continuum density on a grid")
    common(sp)
    sp.add_argument("--points", type=int, default=21)
    sp.set_defaults(run=cmd_density)

    sp = sub.add_parser("heine", help="determinant ratio vs ensemble average")
    common(sp, with_h=True, with_quad=True)
    sp.set_defaults(run=cmd_heine)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    started = time.perf_counter()
    try:
        parameters, rows, code = args.run(args)
    except ParseError as exc:
        print(f"error: {exc} (at offset {exc.position}, expected one of "
              f"{', '.join(exc.expected) or 'n/a'})", file=sys.stderr)
        return 2
    except (PositivityError, EvalDomainError) as exc:
        print(f"error: perturbation rejected: {exc}", file=sys.stderr)
        return 4
    except PrecisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "hankelpert", "version": __version__},
        "command": shlex.join(["hankelpert"] + list(argv)),
        "subcommand": args.subcommand,
        "parameters": parameters,
        "rows": rows,
        "total_elapsed_s": round(time.perf_counter() - started, 3),
    }
    _emit(report, args.format)
    return code


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

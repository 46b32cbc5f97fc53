"""Command-line front end: ``vflab <command> [flags]``."""
from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from .bfunction import BFunction
from .bs_engine import (
    DomainError,
    bs_weighted_homogeneous,
    lct_from_bfunction,
    milnor_basis,
    minimal_b_certificate,
    minimal_exponent,
    sigma_set,
    solve_functional_equation,
    validate_weighted_homogeneous,
)
from .multiplier import (
    LogResolutionData,
    i_lambda,
    jumping_numbers_monomial,
    lct_from_resolution,
    multiplier_ideal_monomial,
    root_bound_candidates,
)
from .parsing import ParseError, parse_int_list, parse_polynomial, parse_rational, parse_rational_list
from .polynomial import Polynomial, VarSet, format_monomial, natural_key
from .vlab import BfElement, Truncation, VModel, check_axioms, tau

COMMANDS = (
    "bs", "oracle-b", "lct", "min-exp", "sigma", "jumping", "mult-ideal",
    "verify-beq", "vcheck", "resolution-lct", "root-bounds", "tau-demo",
)


class UsageError(Exception):
    pass


class TimeBudgetExceeded(Exception):
    pass


def _q(x) -> str:
    return str(x)


def _varset_for(args, *texts) -> VarSet:
    if getattr(args, "vars", None):
        return VarSet(tuple(v.strip() for v in args.vars.split(",") if v.strip()))
    from .parsing import names_in

    names = set()
    for t in texts:
        if t:
            names.update(names_in(t))
    names.discard("s")
    return VarSet(tuple(sorted(names, key=natural_key)))


def _poly(text, vs) -> Polynomial:
    return parse_polynomial(text, vs)


def _require(args, *names):
    for n in names:
        if getattr(args, n.replace("-", "_")) is None:
            raise UsageError(f"--{n} is required for this command")


def _f_and_weights(args):
    _require(args, "f", "weights")
    vs = _varset_for(args, args.f)
    f = _poly(args.f, vs)
    w = validate_weighted_homogeneous(f, parse_rational_list(args.weights))
    return f, w


def _f_and_g(args):
    _require(args, "f")
    vs = _varset_for(args, args.f, args.g)
    return _poly(args.f, vs), _poly(args.g, vs)


def _levels(text: str) -> list:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("--levels range must be start:stop:step")
        a, b, step = (parse_rational(p) for p in parts)
        if step <= 0:
            raise UsageError("--levels step must be positive")
        out, x = [], a
        while x <= b:
            out.append(x)
            x += step
        return out
    return parse_rational_list(text)


def _load_data(path: str) -> LogResolutionData:
    try:
        with open(path, encoding="utf-8") as fh:
            return LogResolutionData.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# command handlers return the result dict

def cmd_bs(args):
    f, w = _f_and_weights(args)
    b = bs_weighted_homogeneous(f, w)
    return {"b": str(b), "minimal_exponent": _q(minimal_exponent(b)), "lct": _q(lct_from_bfunction(b))}


def cmd_oracle_b(args):
    f, g = _f_and_g(args)
    cert = minimal_b_certificate(f, g, args.max_order, args.max_sdeg)
    return {"b": str(cert.b), "operator": str(cert.P), "verified": cert.verify()}


def cmd_lct(args):
    if args.a is not None:
        return {"lct": _q(jumping_numbers_monomial(parse_int_list(args.a), 1)[0])}
    if args.b is not None:
        return {"lct": _q(lct_from_bfunction(BFunction.parse(args.b)))}
    f, w = _f_and_weights(args)
    return {"lct": _q(lct_from_bfunction(bs_weighted_homogeneous(f, w)))}


def cmd_min_exp(args):
    if args.b is not None:
        return {"minimal_exponent": _q(minimal_exponent(BFunction.parse(args.b)))}
    f, w = _f_and_weights(args)
    return {"minimal_exponent": _q(minimal_exponent(bs_weighted_homogeneous(f, w)))}


def cmd_sigma(args):
    f, w = _f_and_weights(args)
    sig = sigma_set(f, w)
    return {
        "sigma": [_q(x) for x in sig.values],
        "multiplicities": list(sig.multiplicities),
        "milnor_number": len(milnor_basis(f)),
        "weights": [_q(x) for x in w.weights],
    }


def cmd_jumping(args):
    _require(args, "a", "bound")
    return {"jumping_numbers": [_q(x) for x in jumping_numbers_monomial(parse_int_list(args.a), parse_rational(args.bound))]}


def _ideal_text(ideal, names) -> list:
    return [format_monomial(names, g) or "1" for g in ideal.generators]


def cmd_mult_ideal(args):
    _require(args, "a", "lam")
    a = parse_int_list(args.a)
    lam = parse_rational(args.lam)
    names = VModel.snc(a).varset.names
    return {
        "multiplier_ideal": _ideal_text(multiplier_ideal_monomial(a, lam), names),
        "i_lambda": _ideal_text(i_lambda(a, lam), names),
    }


def cmd_verify_beq(args):
    _require(args, "b")
    f, g = _f_and_g(args)
    b = BFunction.parse(args.b)
    cert = solve_functional_equation(f, g, b, args.max_order, args.max_sdeg)
    return {"b": str(b), "verified": cert is not None, "operator": str(cert.P) if cert else None}


def cmd_vcheck(args):
    trunc = Truncation(args.trunc_J, args.trunc_D)
    if args.smooth:
        model = VModel.smooth()
    elif args.a is not None:
        model = VModel.snc(parse_int_list(args.a))
    elif args.f is not None:
        f, w = _f_and_weights(args)
        model = VModel.quasi_homogeneous(f, w)
    else:
        raise UsageError("vcheck needs --a (SNC), --f with --weights, or --smooth")
    levels = _levels(args.levels) if args.levels else [Fraction(k, 6) for k in range(13)]
    return check_axioms(model, levels, trunc).to_json()


def cmd_resolution_lct(args):
    _require(args, "data")
    return {"lct": _q(lct_from_resolution(_load_data(args.data)))}


def cmd_root_bounds(args):
    _require(args, "data")
    data = _load_data(args.data)
    which = args.which
    out = root_bound_candidates(data, which, m=args.m, L=args.L, exceptional_only=args.exceptional_only)
    if isinstance(out, frozenset):
        return {"which": which, "candidates": [_q(x) for x in sorted(out)]}
    return {"which": which, "bound": _q(out)}


def cmd_tau_demo(args):
    _require(args, "f")
    vs = _varset_for(args, args.f)
    f = _poly(args.f, vs)
    m = args.m
    s_vars = VarSet(("s",))
    s = Polynomial.variable(s_vars, "s")
    P = Polynomial.constant(s_vars, 1)
    for i in range(m):
        P = P * (s - i)
    image = tau(P, Polynomial.constant(vs, 1), f)
    expected = BfElement.delta(f, f ** m * (-1) ** m, m)
    return {"m": m, "image": str(image), "expected": str(expected), "match": image == expected}


HANDLERS = {
    "bs": cmd_bs, "oracle-b": cmd_oracle_b, "lct": cmd_lct, "min-exp": cmd_min_exp,
    "sigma": cmd_sigma, "jumping": cmd_jumping, "mult-ideal": cmd_mult_ideal,
    "verify-beq": cmd_verify_beq, "vcheck": cmd_vcheck, "resolution-lct": cmd_resolution_lct,
    "root-bounds": cmd_root_bounds, "tau-demo": cmd_tau_demo,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vflab", description="Exact b-functions, V-filtrations and multiplier ideals.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--f", help="polynomial, e.g. 'x^2 + y^3'")
    p.add_argument("--g", default="1", help="polynomial multiplier (default 1)")
    p.add_argument("--vars", help="comma-separated variable order (default: sorted names)")
    p.add_argument("--weights", help="comma-separated positive rationals")
    p.add_argument("--a", help="comma-separated SNC exponents")
    p.add_argument("--bound", help="rational upper bound for jumping numbers")
    p.add_argument("--lam", help="rational lambda for mult-ideal")
    p.add_argument("--b", help="b-function, e.g. '(s+1)(s+1/2)'")
    p.add_argument("--max-order", type=int, default=2)
    p.add_argument("--max-sdeg", type=int, default=2)
    p.add_argument("--levels", help="comma list or start:stop:step of rational levels")
    p.add_argument("--trunc-J", type=int, default=3)
    p.add_argument("--trunc-D", type=int, default=12)
    p.add_argument("--smooth", action="store_true", help="vcheck the smooth model")
    p.add_argument("--data", help="path to resolution data JSON")
    p.add_argument("--which", default="bf_roots",
                   choices=("bf_roots", "g_dtm_bound", "g_delta_bound", "dtm_roots"))
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--exceptional-only", action="store_true")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="json", action="store_true")
    fmt.add_argument("--text", dest="json", action="store_false")
    return p


@contextmanager
def _time_budget():
    raw = os.environ.get("VFLAB_MAX_MS")
    if not raw or not hasattr(signal, "setitimer"):
        yield
        return
    try:
        ms = int(raw)
    except ValueError:
        raise UsageError("VFLAB_MAX_MS must be an integer number of milliseconds") from None

    def expire(signum, frame):
        raise TimeBudgetExceeded(f"time budget of {ms} ms exceeded")

    old = signal.signal(signal.SIGALRM, expire)
    signal.setitimer(signal.ITIMER_REAL, ms / 1000)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _render_text(command, status, payload) -> str:
    lines = []
    if status != "ok":
        return f"error: {payload['message']}"
    for k, v in payload.items():
        if isinstance(v, list):
            v = ", ".join(json.dumps(x) if isinstance(x, (dict, list)) else str(x) for x in v)
        elif isinstance(v, dict):
            v = json.dumps(v)
        lines.append(f"{k}: {v}")
    return "\n".join(lines)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    as_json = "--json" in argv
    command = argv[0] if argv and not argv[0].startswith("-") else None

    def emit(status, key, payload, code):
        ms = int((time.perf_counter() - start) * 1000)
        if as_json:
            env = {"status": status, "command": command, "result": payload if key == "result" else None}
            if key == "error":
                env["error"] = payload
            env["timing_ms"] = ms
            stdout.write(json.dumps(env, indent=2) + "\n")
        else:
            out = stdout if status == "ok" else stderr
            out.write(_render_text(command, status, payload) + "\n")
        return code

    try:
        args = build_parser().parse_args(argv)
        as_json = args.json
        with _time_budget():
            result = HANDLERS[args.command](args)
        return emit("ok", "result", result, 0)
    except (UsageError, ParseError) as exc:
        return emit("error", "error", {"type": "usage", "message": str(exc)}, 2)
    except TimeBudgetExceeded as exc:
        return emit("error", "error", {"type": "time_budget", "message": str(exc)}, 1)
    except (DomainError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return emit("error", "error", {"type": "domain", "message": str(msg)}, 1)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

Subcommands: moment | kappa | kloosterman | afe | mollifier | arith.
Global flags: --threads, --seed, --budget, --out, --format, --strict,
--config.  Config files hold key=value lines and are merged underneath
explicit flags.  Exit codes: 0 success, 2 invalid configuration,
3 budget exceeded, 4 degraded precision under --strict.

Every run is reproducible from its flags plus the master seed: outputs
carry no timestamps and use repr float formatting, so repeated runs (at
any thread count) emit identical bytes.
"""

import argparse
import math
import os
import sys


def _build_parser():
    p = argparse.ArgumentParser(
        prog="zetamoll",
        description="mollified twisted second moments of the zeta function",
    )
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("text", "csv", "json"), default=None)
    p.add_argument("--strict", action="store_true", default=None)
    p.add_argument("--config", default=None)
    sub = p.add_subparsers(dest="command")

    m = sub.add_parser("moment", help="main-term / quadrature evaluations")
    m.add_argument("--coeffs", default=None,
                   help="unit | conrey | feng | twopiece | file:PATH")
    m.add_argument("--T", type=float, default=None)
    m.add_argument("--alpha", type=float, default=None)
    m.add_argument("--beta", type=float, default=None)
    m.add_argument("--theta", type=float, default=None)
    m.add_argument("--theta2", type=float, default=None)
    m.add_argument("--N", type=int, default=None)
    m.add_argument("--K", type=int, default=None)
    m.add_argument("--mode", choices=("main", "limit", "quadrature"), default=None)
    m.add_argument("--jet-order", type=int, default=None)
    m.add_argument("--compare", action="store_true", default=None,
                   help="print main term, quadrature and relative deviation")

    k = sub.add_parser("kappa", help="critical-zero proportion pipeline")
    k.add_argument("--preset", default=None)
    k.add_argument("--T", type=float, default=None)
    k.add_argument("--T-scan", dest="t_scan", default=None,
                   help="comma list of T values; emits CSV rows")
    k.add_argument("--R", type=float, default=None)
    k.add_argument("--theta1", type=float, default=None)
    k.add_argument("--theta2", type=float, default=None)
    k.add_argument("--K", type=int, default=None)

    kl = sub.add_parser("kloosterman", help="exponential-sum tools")
    kl.add_argument("--weil", action="store_true", default=None)
    kl.add_argument("--cmax", type=int, default=None)
    kl.add_argument("--samples", type=int, default=None)
    kl.add_argument("--complete", nargs=3, type=int, default=None,
                    metavar=("A", "B", "C"))
    kl.add_argument("--incomplete", nargs=4, type=int, default=None,
                    metavar=("F_LO", "F_HI", "E", "V"))
    kl.add_argument("--numerator", type=int, default=None)
    kl.add_argument("--squarefree", action="store_true", default=None)
    kl.add_argument("--bilinear", nargs=3, type=int, default=None,
                    metavar=("A", "M", "N"))
    kl.add_argument("--trilinear", nargs=4, type=int, default=None,
                    metavar=("A", "B", "N", "V"))
    kl.add_argument("--rho", type=int, default=None)
    kl.add_argument("--trials", type=int, default=None)

    a = sub.add_parser("afe", help="functional-equation residual")
    a.add_argument("--t", type=float, default=None)
    a.add_argument("--alpha", type=float, default=None)
    a.add_argument("--beta", type=float, default=None)
    a.add_argument("--truncation", type=int, default=None)

    mo = sub.add_parser("mollifier", help="coefficient table dumps")
    mo.add_argument("--family", default=None,
                    help="unit | conrey | feng | twopiece | file:PATH")
    mo.add_argument("--N", type=int, default=None)
    mo.add_argument("--T", type=float, default=None)
    mo.add_argument("--theta", type=float, default=None)
    mo.add_argument("--theta2", type=float, default=None)
    mo.add_argument("--K", type=int, default=None)
    mo.add_argument("--sigma0-shift", dest="sigma0_shift", type=float, default=None)

    ar = sub.add_parser("arith", help="arithmetic table dumps")
    ar.add_argument("--table", default=None,
                    help="mobius | von_mangoldt | mu_lambda_power")
    ar.add_argument("--limit", type=int, default=None)
    ar.add_argument("--k", type=int, default=None)
    return p


def _merge_config(args, parser):
    """Fill options the command line left unset from the key=value file."""
    if args.config is None:
        return args
    try:
        with open(args.config) as fh:
            pairs = {}
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"bad config line {line!r}")
                key, val = line.split("=", 1)
                pairs[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise ValueError(f"cannot read config: {exc}") from exc
    for key, val in pairs.items():
        if not hasattr(args, key):
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            cur_type = {"threads": int, "seed": int, "budget": int, "N": int,
                        "K": int, "limit": int, "k": int, "samples": int,
                        "cmax": int, "trials": int, "truncation": int,
                        "jet_order": int, "rho": int, "numerator": int}.get(key)
            if cur_type is not None:
                setattr(args, key, cur_type(val))
            elif key in ("strict", "weil", "squarefree", "compare"):
                setattr(args, key, val.lower() in ("1", "true", "yes"))
            elif key in ("T", "alpha", "beta", "theta", "theta1", "theta2",
                         "R", "t", "sigma0_shift"):
                setattr(args, key, float(val))
            else:
                setattr(args, key, val)
    return args


def _emit(text: str, args):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(cond, message):
    if not cond:
        raise ValueError(message)


def _build_table(args, mods):
    mollifier, moments = mods
    name = args.coeffs if hasattr(args, "coeffs") else args.family
    name = name or "unit"
    T = args.T
    if name == "unit":
        return mollifier.delta_coeffs()
    if name.startswith("file:"):
        return mollifier.load_coeffs(name[5:])
    _require(T is not None, f"--T required for the {name} family")
    L = math.log(T)
    shift = getattr(args, "sigma0_shift", None) or 0.0
    preset = moments.preset_feng2011(T)
    K = args.K or preset.K
    if name == "conrey":
        theta = args.theta if args.theta is not None else preset.theta1
        N = args.N or max(1, int(T**theta / L))
        return mollifier.conrey_coeffs(N, preset.P1, shift)
    if name == "feng":
        theta = args.theta if args.theta is not None else preset.theta2
        N = args.N or max(1, int(T**theta / L))
        polys = list(preset.feng_polys)[: K - 1]
        _require(len(polys) == K - 1, f"no preset polynomials for K={K}")
        return mollifier.feng_coeffs(N, polys, K, L, shift)
    if name == "twopiece":
        th1 = args.theta if args.theta is not None else preset.theta1
        th2 = args.theta2 if args.theta2 is not None else preset.theta2
        N1 = max(1, int(T**th1 / L))
        N2 = max(1, int(T**th2 / L))
        c1 = mollifier.conrey_coeffs(N1, preset.P1, shift)
        c2 = mollifier.feng_coeffs(N2, list(preset.feng_polys), preset.K, L, shift)
        return mollifier.two_piece_coeffs(c1, c2)
    raise ValueError(f"unknown coefficient family {name!r}")


def _cmd_moment(args):
    from . import moments, mollifier
    from .special import ShiftPair

    _require(args.T is not None, "moment requires --T")
    T = args.T
    table = _build_table(args, (mollifier, moments))
    alpha = args.alpha or 0.0
    beta = args.beta or 0.0
    sh = ShiftPair(alpha, beta, math.log(T))
    budget = args.budget
    mode = args.mode or "main"
    fmt = args.format or "text"

    def render(rep):
        return rep.to_json() + "\n" if fmt == "json" else rep.to_text()

    if args.compare:
        main = moments.main_term_I(table, sh, T, mode="auto", budget=budget)
        quad = moments.quadrature_I(table, sh, T)
        dev = abs(quad.value - main.value) / max(abs(main.value), 1e-300)
        text = (
            f"main_term={main.value!r}\nquadrature={quad.value!r}\n"
            f"relative_deviation={dev!r}\n"
        )
        _emit(text, args)
        return 4 if (args.strict and quad.degraded) else 0
    if mode == "main":
        rep = moments.main_term_I(table, sh, T, mode="auto", budget=budget)
    elif mode == "limit":
        rep = moments.main_term_limit(table, T, budget=budget)
    else:
        rep = moments.quadrature_I(table, sh, T)
    _emit(render(rep), args)
    return 4 if (args.strict and rep.degraded) else 0


def _cmd_kappa(args):
    from . import moments

    _require(args.preset in (None, "feng2011"), "unknown preset")
    ts = []
    if args.t_scan:
        ts = [float(x) for x in args.t_scan.split(",") if x]
    elif args.T is not None:
        ts = [args.T]
    _require(ts, "kappa requires --T or --T-scan")
    rows = ["T,N1,N2,E_value,kappa_est"]
    for T in ts:
        cfg = moments.preset_feng2011(T)
        overrides = {}
        for name in ("R", "theta1", "theta2", "K"):
            val = getattr(args, name)
            if val is not None:
                overrides[name] = val
        if args.budget is not None:
            overrides["budget"] = args.budget
        if overrides:
            from dataclasses import replace

            cfg = replace(cfg, **overrides)
        rep = moments.kappa_lower_bound(cfg)
        rows.append(rep.csv_row())
    _emit("\n".join(rows) + "\n", args)
    return 0


def _cmd_kloosterman(args):
    import numpy as np

    from . import kloosterman as kl

    seed = args.seed if args.seed is not None else 0
    if args.weil:
        cmax = args.cmax or 100
        rep = kl.weil_certificate_exhaustive(min(cmax, 100))
        lines = [
            f"exhaustive_cmax={min(cmax, 100)}",
            f"exhaustive_checked={rep.checked}",
            f"exhaustive_failures={rep.failures}",
            f"exhaustive_max_ratio={rep.max_ratio!r}",
        ]
        failures = rep.failures
        if cmax > 100:
            samples = args.samples or 100_000
            rr = kl.weil_certificate_random(samples, cmax, seed)
            lines += [
                f"random_cmax={cmax}",
                f"random_samples={samples}",
                f"random_failures={rr.failures}",
                f"random_max_ratio={rr.max_ratio!r}",
            ]
            failures += rr.failures
        _emit("\n".join(lines) + "\n", args)
        return 0 if failures == 0 else 1
    if args.complete:
        a, b, c = args.complete
        rec = kl.complete_kloosterman(a, b, c)
        _emit("a,b,c,re,im,weil_bound,satisfied\n" + rec.csv_row() + "\n", args)
        return 0 if rec.satisfied else 1
    if args.incomplete:
        f_lo, f_hi, e, v = args.incomplete
        rep = kl.incomplete_kloosterman(
            (f_lo, f_hi), e, v, args.numerator or 0, bool(args.squarefree)
        )
        _emit(
            "re,im,bound,ratio,terms\n"
            f"{rep.value.real!r},{rep.value.imag!r},{rep.bound!r},"
            f"{rep.ratio!r},{rep.terms}\n",
            args,
        )
        return 0
    if args.bilinear:
        A, M, N = args.bilinear
        rng = np.random.default_rng(seed)
        rows = ["A,M,N,lhs,rhs,ratio,seed"]
        for _ in range(args.trials or 1):
            rep = kl.bilinear_sum_measure(
                rng.choice([-1.0, 1.0], A),
                rng.choice([-1.0, 1.0], M),
                rng.choice([-1.0, 1.0], N),
            )
            rows.append(rep.csv_row().replace("None", str(seed)))
        _emit("\n".join(rows) + "\n", args)
        return 0
    if args.trilinear:
        A, B, N, V = args.trilinear
        rng = np.random.default_rng(seed)
        rows = ["A,B,N,V,rho,lhs,rhs,ratio,seed"]
        for _ in range(args.trials or 1):
            c = rng.choice([-1.0, 1.0], (A, N))
            rep = kl.trilinear_sum_measure(c, A, B, N, V, args.rho or 1)
            rows.append(rep.csv_row().replace("None", str(seed)))
        _emit("\n".join(rows) + "\n", args)
        return 0
    raise ValueError("kloosterman needs one of --weil/--complete/--incomplete/"
                     "--bilinear/--trilinear")


def _cmd_afe(args):
    from . import special as sp

    _require(args.t is not None, "afe requires --t")
    t = args.t
    sh = sp.ShiftPair(args.alpha or 0.0, args.beta or 0.0, math.log(max(t, 3.0)))
    res = sp.afe_residual(t, sh, args.truncation)
    lhs = abs(
        sp.zeta(complex(0.5 + sh.alpha, t)) * sp.zeta(complex(0.5 + sh.beta, -t))
    )
    _emit(
        f"t={t!r}\nalpha={sh.alpha!r}\nbeta={sh.beta!r}\n"
        f"residual={res!r}\nlhs_abs={lhs!r}\nrelative={res / lhs!r}\n",
        args,
    )
    return 0


def _cmd_mollifier(args):
    from . import moments, mollifier

    table = _build_table(args, (mollifier, moments))
    rows = ["n,a_n"]
    for n in table.nonzero_support():
        rows.append(f"{n},{float(table.values[n])!r}")
    _emit("\n".join(rows) + "\n", args)
    return 0


def _cmd_arith(args):
    from . import arith

    _require(args.table is not None, "arith requires --table")
    _require(args.limit is not None and args.limit >= 1, "arith requires --limit >= 1")
    if args.table == "mobius":
        tab = arith.sieve_mobius(args.limit)
    elif args.table == "von_mangoldt":
        tab = arith.sieve_von_mangoldt(args.limit)
    elif args.table == "mu_lambda_power":
        tab = arith.mu_lambda_power(args.k or 1, args.limit)
    else:
        raise ValueError(f"unknown table {args.table!r}")
    rows = ["n,value"] + [
        f"{n},{float(tab.values[n])!r}" for n in range(1, tab.limit + 1)
    ]
    _emit("\n".join(rows) + "\n", args)
    return 0


_DISPATCH = {
    "moment": _cmd_moment,
    "kappa": _cmd_kappa,
    "kloosterman": _cmd_kloosterman,
    "afe": _cmd_afe,
    "mollifier": _cmd_mollifier,
    "arith": _cmd_arith,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        args = _merge_config(args, parser)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.threads is not None and "numba" not in sys.modules:
        os.environ.setdefault("NUMBA_NUM_THREADS", str(max(1, args.threads)))
    from . import set_threads
    from .errors import (
        BudgetExceededError,
        DegradedPrecisionError,
        InvalidArgumentError,
        InvalidResultError,
    )

    if args.threads is not None:
        set_threads(args.threads)
    try:
        return _DISPATCH[args.command](args)
    except (InvalidArgumentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (DegradedPrecisionError, InvalidResultError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

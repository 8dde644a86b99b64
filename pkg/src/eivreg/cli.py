"""Command-line interface.

Subcommands: simulate, slope, rates, kl-check, re-probe (plus an internal
``oracle`` helper used to regenerate brute-force references).  Exit codes:
0 success, 1 usage or config error, 2 runtime or numeric error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .conditions import re_probe
from .datagen import SignalSpec, generate_dataset, generate_signal
from .errors import ConfigError
from .harness import (
    _PROBE_TAG,
    _SIGNAL_TAG,
    load_config,
    mix64,
    rate_report,
    read_records,
    run_experiment,
    write_records,
)
from .kl import kl_closed_form, kl_general_gaussian, kl_monte_carlo
from .model import NoiseModel, ProblemShape, SparsityBudget
from .oracle import GridSpec, grid_minimize, support_enumerate_minimize
from .rates import RateInputs, lower_bound_rate, rate_ratio_p2, upper_bound_rate
from .surrogate import compute_gamma

_USAGE_EXIT = 1
_RUNTIME_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(_USAGE_EXIT)


def _build_parser() -> _Parser:
    parser = _Parser(prog="eivreg")
    sub = parser.add_subparsers(
        dest="command",
        metavar="{simulate,slope,rates,kl-check,re-probe}",
    )
    sub.required = True

    p = sub.add_parser("simulate", parents=[], help="run a sweep, write trial CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("slope", help="fit the rate exponent from a trial CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mode", choices=["sweep-m", "sweep-n"], required=True)

    p = sub.add_parser("rates", help="evaluate the rate curves (constants = 1)")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma-x2", type=float, default=1.0)
    p.add_argument("--sigma-w2", type=float, default=0.0)
    p.add_argument("--sigma-e2", type=float, default=1.0)
    p.add_argument("--kappa-c", type=float, default=1.0)
    p.add_argument("--kappa-l", type=float, default=1.0)

    p = sub.add_parser("kl-check", help="closed-form vs Monte-Carlo KL")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sigma-x2", type=float, default=1.0)
    p.add_argument("--sigma-w2", type=float, default=1.0)
    p.add_argument("--sigma-e2", type=float, default=1.0)

    p = sub.add_parser("re-probe", help="restricted-eigenvalue probe on a "
                                        "generated instance")
    p.add_argument("--config", required=True)
    p.add_argument("--probes", type=int, default=256)
    p.add_argument("--c1", type=float, default=1.0)

    # internal: brute-force references for small instances
    p = sub.add_parser("oracle")
    p.add_argument("--mode", choices=["grid", "support"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--r0", type=int, default=2)
    p.add_argument("--resolution", type=int, default=401)

    return parser


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    records = run_experiment(config, threads=args.threads)
    write_records(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_slope(args) -> int:
    records = read_records(args.infile)
    report = rate_report(records, args.mode)
    print(f"mode:            {report.mode}")
    print(f"fitted slope:    {report.slope:.6f}")
    print(f"theory exponent: {report.theory_exponent:.6f}")
    print(f"r2:              {report.r2:.6f}")
    print(json.dumps({
        "mode": report.mode,
        "slope": report.slope,
        "intercept": report.intercept,
        "r2": report.r2,
        "theory_exponent": report.theory_exponent,
        "points": list(report.points),
    }))
    return 0


def _cmd_rates(args) -> int:
    inputs = RateInputs(
        p=args.p,
        budget=SparsityBudget(args.q, args.radius),
        shape=ProblemShape(args.m, args.n),
        noise=NoiseModel(args.sigma_x2, args.sigma_w2, args.sigma_e2),
        kappa_c=args.kappa_c,
        kappa_l=args.kappa_l,
    )
    print("rate curves evaluated with all universal constants set to 1")
    print(f"lower_bound_rate: {lower_bound_rate(inputs):.12g}")
    print(f"upper_bound_rate: {upper_bound_rate(inputs):.12g}")
    print(f"rate_ratio_p2:    {rate_ratio_p2(inputs):.12g}")
    return 0


def _cmd_kl_check(args) -> int:
    noise = NoiseModel(args.sigma_x2, args.sigma_w2, args.sigma_e2)
    rng = np.random.default_rng(args.seed)
    beta = rng.standard_normal(args.n)
    beta /= np.linalg.norm(beta)
    beta_p = rng.standard_normal(args.n)
    beta_p /= np.linalg.norm(beta_p)
    dataset = generate_dataset(
        ProblemShape(args.m, args.n), noise, beta, mix64(args.seed, 1)
    )
    closed = kl_closed_form(beta, beta_p, dataset.Z, noise)
    general = kl_general_gaussian(beta, beta_p, dataset.Z, noise)
    mc, se = kl_monte_carlo(beta, beta_p, dataset.Z, noise, args.samples, args.seed)
    print(f"closed_form:  {closed:.12g}")
    print(f"general_form: {general:.12g}")
    print(f"monte_carlo:  {mc:.12g} +- {se:.3g} (1 se)")
    return 0


def _cmd_re_probe(args) -> int:
    config = load_config(args.config)
    # mirrors replicate 0 of the sweep's first (m, n) cell
    m, n = config.m_grid[0], config.n_grid[0]
    budget = SparsityBudget(config.q, config.R_q)
    signal_seed = mix64(config.master_seed, _SIGNAL_TAG, n, 0)
    beta_star = generate_signal(SignalSpec(n, budget, signal_seed))
    data_seed = mix64(config.master_seed, m, n, 0)
    dataset = generate_dataset(ProblemShape(m, n), config.noise, beta_star, data_seed)
    gamma = compute_gamma(dataset.Z, config.noise.sigma_w2)
    report = re_probe(gamma, budget, args.probes, mix64(data_seed, _PROBE_TAG),
                      m=m, c1=args.c1)
    print(f"instance:        m={m} n={n} q={config.q} R_q={config.R_q}")
    print(f"kappa_l_hat:     {report.kappa_l_hat:.12g}")
    print(f"tau_assumed:     {report.tau_assumed:.12g}")
    print(f"probes_run:      {report.probes_run}")
    support = np.nonzero(np.abs(report.worst_direction) > 1e-12)[0]
    print(f"worst direction: support size {support.size} at {support.tolist()}")
    print("note: kappa_l_hat upper-bounds the true restricted minimum; the "
          "probe can refute a curvature level but cannot certify one")
    return 0


def _cmd_oracle(args) -> int:
    rng = np.random.default_rng(args.seed)
    A = rng.standard_normal((args.n, args.n))
    gamma = A.T @ A / args.n + 0.5 * np.eye(args.n)
    upsilon = 0.3 * rng.standard_normal(args.n)
    grid = GridSpec(resolution=args.resolution)
    if args.mode == "grid":
        beta, obj = grid_minimize(
            gamma, upsilon, SparsityBudget(args.q, args.radius), grid
        )
    else:
        beta, obj = support_enumerate_minimize(gamma, upsilon, args.r0, grid)
    print(json.dumps({"beta": beta.tolist(), "objective": obj}))
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "slope": _cmd_slope,
    "rates": _cmd_rates,
    "kl-check": _cmd_kl_check,
    "re-probe": _cmd_re_probe,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"eivreg: config error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"eivreg: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _RUNTIME_EXIT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error (invalid state, observable or
precondition), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import inequalities as ineq
from . import singlet_lab, source_ops, thresholds
from .errors import DimensionError, DomainError
from .observables import QubitObservableParams, random_observable
from .serialization import dumps, load_observable, load_state, observable_to_dict, rounded
from .states import BipartiteState, bell_state, mix_with_white_noise, phased_max_entangled

DEFAULT_TOL = 1e-9
DEFAULT_SEED = 42
DEFAULT_RESTARTS = 8


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _state_arg(args) -> BipartiteState:
    rho = load_state(args.state)
    if args.noise is not None:
        rho = mix_with_white_noise(rho, args.noise)
    return rho


def _emit(args, payload: dict) -> None:
    if args.format == "json":
        print(dumps(payload))
        return
    rows = list(_flatten(rounded(payload)))
    width = max((len(k) for k, _ in rows), default=0)
    for key, value in rows:
        print(f"{key:<{width}}  {value}")


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _settings_dict(settings) -> dict:
    return {name: observable_to_dict(w) for name, w in zip(("a1", "a2", "b1", "b2"), settings)}


def _chsh_report_dict(report: ineq.ChshReport) -> dict:
    return {
        "value": report.value,
        "bound": report.bound,
        "violated": report.violated,
        "coefficients": list(report.coefficients),
        "correlations": list(report.correlations),
        "settings": _settings_dict(report.settings),
    }


def cmd_bounds(args) -> dict:
    return thresholds.threshold_report(_state_arg(args), args.marginal_tol).to_dict()


def _check_source_dim(rho: BipartiteState, construction: str) -> None:
    d1, d2 = rho.dims
    n = {"right": d1 * d2 * d2, "left": d1 * d1 * d2, "bell": d1**3}[construction]
    if n > source_ops.MAX_SOURCE_DIM:
        raise DimensionError(
            f"source operator dimension {n} exceeds the cap {source_ops.MAX_SOURCE_DIM}"
        )


def cmd_certify(args) -> dict:
    rho = _state_arg(args)
    _check_source_dim(rho, args.construction)
    t = source_ops.build(rho, args.beta, args.construction, args.marginal_tol)
    return source_ops.certify(t, args.tol).to_dict()


def _formula_bound(rho: BipartiteState, construction: str, marginal_tol: float) -> float:
    if construction == "bell":
        return thresholds.beta_bell(rho, marginal_tol)
    g = thresholds.gamma(rho)
    side = g.side_values[0] if construction == "right" else g.side_values[1]
    return thresholds.beta_chsh_from_gamma(side)


def cmd_min_beta(args) -> dict:
    rho = _state_arg(args)
    _check_source_dim(rho, args.construction)
    beta = source_ops.minimal_positive_beta(
        rho, args.construction, tol=args.beta_tol, marginal_tol=args.marginal_tol
    )
    return {
        "construction": args.construction,
        "minimal_beta": beta,
        "beta_tol": args.beta_tol,
        "formula_bound": _formula_bound(rho, args.construction, args.marginal_tol),
        "beta_chsh": thresholds.beta_chsh(rho),
    }


def cmd_chsh_max(args) -> dict:
    rho = _state_arg(args)
    out: dict = {"dims": list(rho.dims)}
    if rho.dims == (2, 2):
        closed = ineq.chsh_max_two_qubit(rho)
        out["closed_form"] = {
            "value": closed.value,
            "max_over_all_observables": max(2.0, closed.value),
            "settings": _settings_dict(closed.settings),
        }
    sw = ineq.chsh_max_seesaw(rho, restarts=args.restarts, seed=args.seed)
    out["seesaw"] = {
        "value": sw.value,
        "restarts": args.restarts,
        "seed": args.seed,
        "iterations": len(sw.history),
        "settings": _settings_dict(sw.settings),
    }
    out["violated"] = max(sw.value, out.get("closed_form", {}).get("value", 0.0)) > 2 + ineq.VIOLATION_TOL
    return out


def _random_triples(rho: BipartiteState, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield tuple(random_observable(rho.d1, rng) for _ in range(3))


def cmd_bell_check(args) -> dict:
    rho = _state_arg(args)
    if args.random:
        worst = None
        satisfied = 0
        for triple in _random_triples(rho, args.random, args.seed):
            res = ineq.bell_check(rho, *triple)
            satisfied += res.satisfied
            slack = min(line.slack for line in res.lines)
            worst = slack if worst is None else min(worst, slack)
        return {"samples": args.random, "seed": args.seed, "satisfied": satisfied, "min_slack": worst}
    if not (args.w1 and args.w2 and args.w2t):
        raise DomainError("bell-check needs --w1, --w2 and --w2t, or --random N")
    res = ineq.bell_check(rho, load_observable(args.w1), load_observable(args.w2), load_observable(args.w2t))
    return {
        "lines": [{"lhs": l.lhs, "rhs": l.rhs, "satisfied": l.satisfied} for l in res.lines],
        "satisfied": res.satisfied,
    }


def cmd_extended_chsh(args) -> dict:
    rho = _state_arg(args)
    if len(args.gamma) != 4:
        raise DomainError(f"--gamma needs four coefficients, got {len(args.gamma)}")
    coeffs = ineq.ExtendedChshCoefficients(*args.gamma)
    if args.random:
        rng = np.random.default_rng(args.seed)
        best = None
        for _ in range(args.random):
            a1, a2 = random_observable(rho.d1, rng), random_observable(rho.d1, rng)
            b1, b2 = random_observable(rho.d2, rng), random_observable(rho.d2, rng)
            rep = ineq.extended_chsh_value(rho, a1, a2, b1, b2, coeffs)
            if best is None or rep.value > best.value:
                best = rep
        out = _chsh_report_dict(best)
        out["samples"] = args.random
        out["seed"] = args.seed
        return out
    names = ("a1", "a2", "b1", "b2")
    if not all(getattr(args, n) for n in names):
        raise DomainError("extended-chsh needs --a1 --a2 --b1 --b2, or --random N")
    obs = [load_observable(getattr(args, n)) for n in names]
    return _chsh_report_dict(ineq.extended_chsh_value(rho, *obs, coeffs))


def cmd_singlet(args) -> dict:
    if len(args.n) != 3:
        raise DomainError(f"--n needs three components, got {len(args.n)}")
    p = QubitObservableParams(args.alpha, tuple(args.n))
    out = {
        "alpha": p.alpha,
        "n": list(p.n),
        "beta": args.beta,
        "correlation": singlet_lab.noisy_singlet_correlation(p, args.beta),
        "correlation_numeric": singlet_lab.noisy_singlet_correlation_numeric(p, args.beta),
    }
    if p.n_norm > 0:
        out["probabilities"] = singlet_lab.noisy_singlet_joint_probs(p, args.beta).to_dict()
    return out


def cmd_peres(args) -> dict:
    phases = args.phases if args.phases else None
    analytic, numeric = singlet_lab.peres_pt_min_eig(args.d, args.beta, phases)
    return {
        "d": args.d,
        "beta": args.beta,
        "analytic": analytic,
        "numeric": numeric,
        "boundary": singlet_lab.separability_boundary(args.d),
        "ppt": numeric >= -args.tol,
    }


def demo_rows(restarts: int = DEFAULT_RESTARTS, seed: int = DEFAULT_SEED) -> list[dict]:
    rows = []
    for label, rho, d in (
        ("bell:psi-", bell_state("psi-"), 2),
        ("phased:d=2", phased_max_entangled(2), 2),
        ("phased:d=3", phased_max_entangled(3), 3),
    ):
        rep = thresholds.threshold_report(rho)
        if d == 2:
            chsh = ineq.chsh_max_two_qubit(rho).value
        else:
            chsh = ineq.chsh_max_seesaw(rho, restarts=restarts, seed=seed).value
        rows.append(
            {
                "state": label,
                "gamma": rep.gamma,
                "beta_chsh": rep.beta_chsh,
                "beta_bell": rep.beta_bell,
                "min_beta_right": source_ops.minimal_positive_beta(rho, "right"),
                "min_beta_left": source_ops.minimal_positive_beta(rho, "left"),
                "min_beta_bell": source_ops.minimal_positive_beta(rho, "bell"),
                "pt_boundary": singlet_lab.separability_boundary(d),
                "chsh_max": chsh,
            }
        )
    return rows


def cmd_demo(args) -> dict:
    spin_z = QubitObservableParams(0.0, (0.0, 0.0, 1.0))
    beta = 2.0 / 3.0
    probs = singlet_lab.noisy_singlet_joint_probs(spin_z, beta)
    return {
        "states": demo_rows(args.restarts, args.seed),
        "noisy_singlet_at_two_thirds": {
            "beta": beta,
            "spin_correlation": singlet_lab.noisy_singlet_correlation(spin_z, beta),
            "probabilities": probs.to_dict(),
        },
    }


def _print_demo_text(payload: dict) -> None:
    cols = [
        "state", "gamma", "beta_chsh", "beta_bell", "min_beta_right",
        "min_beta_left", "min_beta_bell", "pt_boundary", "chsh_max",
    ]
    rows = rounded(payload["states"])
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    for row in [cols, *cells]:
        print("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    s = rounded(payload["noisy_singlet_at_two_thirds"])
    p = s["probabilities"]
    print()
    print(f"noisy singlet, beta = {s['beta']}, both parties measure sigma_z")
    print(f"  correlation          {s['spin_correlation']}")
    print(f"  P(+,+) = P(-,-)      {p['plus_plus']}")
    print(f"  P(+,-) = P(-,+)      {p['plus_minus']}")
    print(f"  P(same | Bob)        {p['conditional_same']}")
    print(f"  P(different | Bob)   {p['conditional_different']}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--json", dest="format", action="store_const", const="json",
                        help="shorthand for --format json")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="PSD tolerance")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    common.add_argument("--marginal-tol", type=float, default=thresholds.MARGINAL_TOL,
                        help="tolerance on ||tau1 - tau2|| for equal reduced states")

    stateful = argparse.ArgumentParser(add_help=False)
    stateful.add_argument("--state", required=True,
                          help="registry name (bell:psi-, phased:d=3, werner:beta=0.5, "
                               "mixed:d1=2,d2=2) or path to a state JSON file")
    stateful.add_argument("--noise", type=float, default=None,
                          help="mix the state with this fraction of white noise first")

    parser = argparse.ArgumentParser(prog="dsobounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("bounds", parents=[common, stateful], help="gamma and noise thresholds")

    p = sub.add_parser("certify", parents=[common, stateful], help="certify a source operator")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--construction", choices=source_ops.CONSTRUCTIONS, default="right")

    p = sub.add_parser("min-beta", parents=[common, stateful], help="smallest certified noise")
    p.add_argument("--construction", choices=source_ops.CONSTRUCTIONS, default="right")
    p.add_argument("--beta-tol", type=float, default=1e-8)

    sub.add_parser("chsh-max", parents=[common, stateful], help="maximize CHSH over observables")

    p = sub.add_parser("bell-check", parents=[common, stateful], help="perfect-correlation Bell form")
    for name in ("--w1", "--w2", "--w2t"):
        p.add_argument(name)
    p.add_argument("--random", type=int, default=0, help="check N random observable triples")

    p = sub.add_parser("extended-chsh", parents=[common, stateful], help="extended CHSH functional")
    p.add_argument("--gamma", type=_floats, default=[1.0, 1.0, 1.0, -1.0],
                   help="g11,g12,g21,g22")
    for name in ("--a1", "--a2", "--b1", "--b2"):
        p.add_argument(name)
    p.add_argument("--random", type=int, default=0, help="take the max over N random settings")

    p = sub.add_parser("singlet", parents=[common], help="noisy singlet correlations")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--n", type=_floats, default=[0.0, 0.0, 1.0], help="nx,ny,nz")
    p.add_argument("--beta", type=float, required=True)

    p = sub.add_parser("peres", parents=[common], help="partial-transpose eigenvalue")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--phases", type=_floats, default=None)

    sub.add_parser("demo", parents=[common], help="worked examples table")
    return parser


COMMANDS = {
    "bounds": cmd_bounds,
    "certify": cmd_certify,
    "min-beta": cmd_min_beta,
    "chsh-max": cmd_chsh_max,
    "bell-check": cmd_bell_check,
    "extended-chsh": cmd_extended_chsh,
    "singlet": cmd_singlet,
    "peres": cmd_peres,
    "demo": cmd_demo,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command == "demo" and args.format == "text":
        _print_demo_text(payload)
    else:
        _emit(args, payload)
    return 0


def main() -> None:
    sys.exit(run())

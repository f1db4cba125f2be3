"""Command-line front end: count, tree, state, continue, evolve.

Emits CSV/JSON datasets (branch energies over nu/f, stationary states,
beating time series with spectral peaks).  Exit codes: 0 ok, 2 bad input,
3 I/O, 4 solver/continuation, 5 integration quality.  Numeric CSV fields
carry 17 significant digits so doubles round-trip exactly; files are
written to a temporary name and renamed into place.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import dynamics
from .anticontinuum import (
    LatticeParams,
    SolutionSet,
    bifurcation_tree,
    build_state,
)
from .continuation import (
    continue_in_beta,
    dnls_residual,
    jacobian_diagonal_t0,
)
from .errors import (
    ConfigurationError,
    DomainError,
    IntegrationError,
    ResonanceError,
    SolverError,
)
from .partitions import counting_function, f_asymptotic

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_IO = 3
EXIT_SOLVER = 4
EXIT_INTEGRATION = 5

DEFAULT_MARGIN = 5


@dataclass
class RunConfig:
    """Validated bag of CLI parameters for one subcommand invocation."""

    command: str
    x: float | None = None
    x_min: float | None = None
    x_max: float | None = None
    samples: int = 1001
    max_n: int = 64
    set_sites: tuple[int, ...] | None = None
    nu: float | None = None
    f: float | None = None
    beta: float = 0.0
    steps: int = 10
    dt: float = dynamics.DEFAULT_DT
    t_end: float = 20.0 * dynamics.BLOCH_PERIOD
    out: str | None = None
    format: str = "csv"
    signs: str | None = None
    seed: int | None = None
    site: int | None = None
    j: int = 0
    stride: int = 1
    initial: str | None = None


def fmt(value) -> str:
    """17-significant-digit text, exact round trip for doubles."""
    return format(float(value), ".17g")


def _atomic_write(path: str, data: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_set(text: str) -> tuple[int, ...]:
    try:
        sites = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise DomainError(f"--set must be comma-separated integers, got {text!r}")
    return sites


def _resolve_signs(config: RunConfig, n: int):
    """'+-+' literal, or 'random' drawn from the seeded generator."""
    if config.signs is None or config.signs == "":
        return None
    if config.signs == "random":
        rng = np.random.default_rng(config.seed)
        return tuple(int(s) for s in rng.choice((-1, 1), size=n))
    return config.signs


def _lattice_params(config: RunConfig, sset: SolutionSet | None,
                    beta: float = 0.0) -> LatticeParams:
    """Dimensionless-first: --x alone means nu = x, f = 1."""
    if config.nu is not None and config.f is not None:
        nu, f = config.nu, config.f
    elif config.x is not None:
        if config.nu is not None:
            nu, f = config.nu, config.nu / config.x
        else:
            nu, f = config.x, 1.0
    else:
        raise DomainError("need --x or the pair --nu/--f")
    if sset is None:
        return LatticeParams(nu=nu, f=f, beta=beta)
    return LatticeParams.for_set(sset, nu=nu, f=f, beta=beta,
                                 margin=DEFAULT_MARGIN)


def cmd_count(config: RunConfig) -> int:
    if config.x is None:
        raise DomainError("count needs --x")
    f_count = counting_function(config.x)
    print(f"F = {f_count}, branches = {f_count + 1}")
    if config.x >= 1.0:
        n = math.floor(config.x)
        print(f"asymptotic F ~ {f_asymptotic(n):.6g} at n = {n}")
    return EXIT_OK


def cmd_tree(config: RunConfig) -> int:
    if config.x_min is None or config.x_max is None:
        raise DomainError("tree needs --x-min and --x-max")
    tree = bifurcation_tree(config.x_min, config.x_max,
                            samples=config.samples, max_n=config.max_n)
    set_labels = ["+".join(str(s) for s in b.set.sites) for b in tree.branches]
    if config.format == "json":
        payload = {
            "x_grid": [float(x) for x in tree.x_grid],
            "branches": [
                {
                    "id": i,
                    "set": list(b.set.sites),
                    "n_modes": b.set.cardinality,
                    "birth_x": b.birth,
                    "samples": [[float(x), float(m)]
                                for x, m in zip(b.xs, b.mu_over_f)],
                }
                for i, b in enumerate(tree.branches)
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["x", "branch_id", "set", "mu_over_f", "n_modes", "birth_x"])
        for x in tree.x_grid:
            for i, branch in enumerate(tree.branches):
                if x > branch.birth:
                    n = branch.set.cardinality
                    mu = x / n + sum(branch.set.sites) / n
                    writer.writerow([fmt(x), i, set_labels[i], fmt(mu), n,
                                     fmt(branch.birth)])
        text = buffer.getvalue()
    if config.out:
        _atomic_write(config.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _state_payload(config: RunConfig) -> dict:
    sset = SolutionSet(config.set_sites)
    params = _lattice_params(config, sset, beta=config.beta)
    signs = _resolve_signs(config, sset.cardinality)
    if config.beta > 0:
        result = continue_in_beta(sset, params, config.beta,
                                  steps=config.steps, signs=signs)
        state, certificate = result.state, result.certificate
    else:
        # the zero-hopping state exists even when its continuation
        # certificate does not (resonant mu/f): emit it with a null
        state = build_state(sset, params, signs=signs)
        try:
            _, certificate = jacobian_diagonal_t0(state)
        except ResonanceError:
            certificate = None
    residual = float(np.max(np.abs(dnls_residual(state))))
    lo, hi = params.window
    return {
        "set": list(sset.sites),
        "signs": list(state.signs) if state.signs is not None else None,
        "nu": params.nu,
        "f": params.f,
        "beta": config.beta,
        "window": [lo, hi],
        "mu": state.mu,
        "coefficients": {str(site): float(value)
                         for site, value in zip(params.window_sites,
                                                state.coefficients)},
        "certificate": certificate,
        "residual_norm": residual,
    }


def cmd_state(config: RunConfig) -> int:
    if config.set_sites is None:
        raise DomainError("state needs --set")
    payload = _state_payload(config)
    text = json.dumps(payload, indent=2) + "\n"
    if config.out:
        _atomic_write(config.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_continue(config: RunConfig) -> int:
    if config.set_sites is None:
        raise DomainError("continue needs --set")
    sset = SolutionSet(config.set_sites)
    params = _lattice_params(config, sset, beta=config.beta)
    signs = _resolve_signs(config, sset.cardinality)
    payload = {
        "set": list(sset.sites),
        "nu": params.nu,
        "f": params.f,
        "beta_target": config.beta,
        "steps": config.steps,
    }
    try:
        result = continue_in_beta(sset, params, config.beta,
                                  steps=config.steps, signs=signs)
    except SolverError as exc:
        payload.update({
            "status": "failed",
            "error": str(exc),
            "path": [[b, r, i] for b, r, i in exc.path],
        })
        text = json.dumps(payload, indent=2) + "\n"
        if config.out:
            _atomic_write(config.out, text)
        print(f"continuation failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    lo, hi = params.window
    payload.update({
        "status": "ok",
        "certificate": result.certificate,
        "path": [[b, r, i] for b, r, i in result.path],
        "mu": result.state.mu,
        "window": [lo, hi],
        "coefficients": {str(site): float(value)
                         for site, value in zip(params.window_sites,
                                                result.state.coefficients)},
    })
    text = json.dumps(payload, indent=2) + "\n"
    if config.out:
        _atomic_write(config.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def load_state_vector(path: str) -> tuple[np.ndarray, LatticeParams]:
    """Rebuild (initial vector, params) from a `state` JSON file, bit-exact."""
    with open(path, encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except ValueError as exc:
            raise DomainError(f"unreadable state file {path}: {exc}") from exc
    try:
        lo, hi = payload["window"]
        params = LatticeParams(nu=payload["nu"], f=payload["f"],
                               beta=payload["beta"], window=(lo, hi))
        vector = np.zeros(hi - lo + 1, dtype=complex)
        for site, value in payload["coefficients"].items():
            vector[int(site) - lo] = value
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"state file {path} is not usable: {exc}") from exc
    return vector, params


def _evolve_trace(config: RunConfig):
    """Pick the evolution mode; returns (trace, params, spectrum site, x)."""
    if config.initial is not None:
        vector, params = load_state_vector(config.initial)
        trace = dynamics.evolve(vector, params, config.t_end, config.dt)
        if config.site is not None:
            site = config.site
        else:
            site = int(params.window[0] + np.argmax(np.abs(vector)))
        return trace, params, site, params.ratio
    if config.set_sites is not None:
        sset = SolutionSet(config.set_sites)
        params = _lattice_params(config, sset, beta=config.beta)
        signs = _resolve_signs(config, sset.cardinality)
        if config.beta > 0:
            state = continue_in_beta(sset, params, config.beta,
                                     steps=config.steps, signs=signs).state
        else:
            state = build_state(sset, params, signs=signs)
        trace = dynamics.evolve(state.coefficients.astype(complex),
                                params, config.t_end, config.dt)
        site = config.site if config.site is not None else sset.sites[0]
        return trace, params, site, params.ratio
    # default: three-state superposition around well j
    if config.x is None and (config.nu is None or config.f is None):
        raise DomainError("evolve needs --initial, --set, or --x for the "
                          "three-state superposition")
    if config.x is None:
        x = config.nu / config.f
        nu, f = config.nu, config.f
    else:
        x = config.x
        nu = config.nu if config.nu is not None else 0.05
        f = nu / x
    window = (config.j - 1 - DEFAULT_MARGIN, config.j + 1 + DEFAULT_MARGIN)
    params = LatticeParams(nu=nu, f=f, beta=config.beta, window=window)
    trace = dynamics.beating_trace(x, config.j, params, config.t_end, config.dt)
    site = config.site if config.site is not None else config.j
    return trace, params, site, x


def cmd_evolve(config: RunConfig) -> int:
    trace, params, site, x = _evolve_trace(config)
    peaks = dynamics.spectrum(trace, site)
    predicted = list(dynamics.beat_periods(x)) if x > 1.0 else None

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["t_prime", "site", "abs2"])
    sites = params.window_sites
    abs2 = np.abs(trace.states) ** 2
    for k in range(0, trace.times.size, config.stride):
        t_text = fmt(trace.times[k])
        for col, lattice_site in enumerate(sites):
            writer.writerow([t_text, int(lattice_site), fmt(abs2[k, col])])
    csv_text = buffer.getvalue()

    companion = {
        "site": int(site),
        "x": x,
        "predicted_periods": predicted,
        "predicted_frequencies": (
            [2.0 * math.pi / t for t in predicted] if predicted else None),
        "peaks": [[f_, p_] for f_, p_ in peaks[:12]],
        "norm_drift": trace.norm_drift,
        "energy_drift": trace.energy_drift,
        "dt": trace.dt,
        "t_end": float(trace.times[-1]),
        "stride": config.stride,
    }
    json_text = json.dumps(companion, indent=2) + "\n"

    if config.out:
        _atomic_write(config.out, csv_text)
        root, _ = os.path.splitext(config.out)
        _atomic_write(root + ".json", json_text)
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write(json_text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starktree",
        description="Bifurcation trees and dynamics of tilted-lattice "
                    "DNLS stationary states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *names):
        if "x" in names:
            p.add_argument("--x", type=float, help="ratio nu/f")
        if "set" in names:
            p.add_argument("--set", type=str, help="comma-separated sites, e.g. 0,1,3")
        if "nu_f" in names:
            p.add_argument("--nu", type=float, help="nonlinearity nu")
            p.add_argument("--f", type=float, help="tilt f")
        if "beta" in names:
            p.add_argument("--beta", type=float, default=0.0, help="hopping beta")
            p.add_argument("--steps", type=int, default=10,
                           help="continuation steps to reach beta")
        if "signs" in names:
            p.add_argument("--signs", type=str, default=None,
                           help="sign pattern '+-+' or 'random'")
            p.add_argument("--seed", type=int, default=None,
                           help="seed for random sign sampling")
        if "out" in names:
            p.add_argument("--out", type=str, default=None, help="output path")

    p_count = sub.add_parser("count", help="branch counting function at nu/f")
    add_common(p_count, "x")

    p_tree = sub.add_parser("tree", help="bifurcation tree dataset over nu/f")
    p_tree.add_argument("--x-min", type=float, required=True)
    p_tree.add_argument("--x-max", type=float, required=True)
    p_tree.add_argument("--samples", type=int, default=1001)
    p_tree.add_argument("--max-n", type=int, default=64,
                        help="largest birth threshold to enumerate")
    p_tree.add_argument("--format", choices=("csv", "json"), default="csv")
    add_common(p_tree, "out")

    p_state = sub.add_parser("state", help="stationary state as JSON")
    add_common(p_state, "x", "set", "nu_f", "beta", "signs", "out")

    p_cont = sub.add_parser("continue",
                            help="continuation path to finite hopping")
    add_common(p_cont, "x", "set", "nu_f", "beta", "signs", "out")

    p_evolve = sub.add_parser("evolve", help="time evolution dataset")
    add_common(p_evolve, "x", "set", "nu_f", "beta", "signs", "out")
    p_evolve.add_argument("--t-end", type=float,
                          default=20.0 * dynamics.BLOCH_PERIOD,
                          help="dimensionless time horizon")
    p_evolve.add_argument("--dt", type=float, default=dynamics.DEFAULT_DT)
    p_evolve.add_argument("--j", type=int, default=0,
                          help="well index for the three-state superposition")
    p_evolve.add_argument("--site", type=int, default=None,
                          help="site whose density is Fourier-analysed")
    p_evolve.add_argument("--stride", type=int, default=1,
                          help="emit every stride-th step to the CSV")
    p_evolve.add_argument("--initial", type=str, default=None,
                          help="state JSON file to use as initial condition")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command)
    for name in ("x", "x_min", "x_max", "samples", "max_n", "nu", "f", "beta",
                 "steps", "dt", "t_end", "out", "format", "signs", "seed",
                 "site", "j", "stride", "initial"):
        if hasattr(args, name):
            value = getattr(args, name)
            if value is not None or name in ("out", "signs", "seed", "site",
                                             "initial", "x", "nu", "f"):
                setattr(config, name, value)
    if getattr(args, "set", None) is not None:
        config.set_sites = _parse_set(args.set)
    if config.stride < 1:
        raise DomainError(f"--stride must be >= 1, got {config.stride}")
    return config


COMMANDS = {
    "count": cmd_count,
    "tree": cmd_tree,
    "state": cmd_state,
    "continue": cmd_continue,
    "evolve": cmd_evolve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        config = _config_from_args(args)
        return COMMANDS[config.command](config)
    except (DomainError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SolverError, ResonanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()

"""Command-line entry point: ``graphcount {sample,logpmf,fit,select,verify}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input or
usage, 3 file I/O failure, 4 invalid ``r`` for structure selection.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .bayes import DataError, Observations, dirnm_log_pmf, idirmult_log_pmf, log_marginal_likelihood, \
    posterior_update, read_observations, write_observations
from .graph import GraphError, UndirectedGraph, decompose, read_graph
from .hypergeom import HypergeometricError
from .models import MultParams, NmParams, SupportError, mult_log_pmf, mult_sample, nm_log_pmf, nm_sample
from .polynomials import OutOfDomainError
from .priors import DirParams, IDirParams, PriorError
from .select import (
    ChainConfig,
    ConfigError,
    GraphScorer,
    chain_report,
    exact_posterior,
    exact_report,
    run_chain,
)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_IO, EXIT_R = 0, 1, 2, 3, 4
SEED_ENV = "GRAPHCOUNT_SEED"


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


# -- argument helpers --------------------------------------------------------------------

def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _vector(values: Optional[list], g: UndirectedGraph, name: str) -> np.ndarray:
    if values is None:
        raise CliError(f"--{name} is required")
    if len(values) == 1:
        return np.full(g.n, values[0])
    if len(values) != g.n:
        raise CliError(f"--{name} needs 1 or {g.n} values (vertex order {','.join(g.vertices)})")
    return np.array(values)


def resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _load_graph(path: str) -> UndirectedGraph:
    try:
        g = read_graph(path)
    except OSError as exc:
        raise CliError(f"cannot read graph: {exc}", EXIT_IO) from None
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"invalid graph file {path}: {exc}") from None
    decompose(g)
    return g


def _load_data(path: str) -> Observations:
    try:
        return read_observations(path)
    except OSError as exc:
        raise CliError(f"cannot read data: {exc}", EXIT_IO) from None


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write output: {exc}", EXIT_IO) from None


def _model_params(args, g: UndirectedGraph):
    if args.model == "nm":
        return NmParams(g, args.r, _vector(args.x, g, "x"))
    if args.r != int(args.r):
        raise CliError("the mult model needs an integer r")
    return MultParams(g, int(args.r), _vector(args.y, g, "y"))


# -- commands ----------------------------------------------------------------------------

def cmd_sample(args) -> int:
    g = _load_graph(args.graph)
    p = _model_params(args, g)
    rng = np.random.default_rng(resolve_seed(args.seed))
    draw = nm_sample if args.model == "nm" else mult_sample
    rows = draw(p, rng=rng, size=args.n)
    buf = io.StringIO()
    write_observations(buf, g.vertices, rows)
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_logpmf(args) -> int:
    g = _load_graph(args.graph)
    data = _load_data(args.data)
    rows = data.aligned(g)
    if args.alpha is not None:
        alpha = _vector(args.alpha, g, "alpha")
        if args.model == "nm":
            values = [dirnm_log_pmf(g, alpha, args.beta, args.r, n) for n in rows]
        else:
            values = [idirmult_log_pmf(g, alpha, args.beta, int(args.r), n) for n in rows]
    else:
        p = _model_params(args, g)
        values = (nm_log_pmf if args.model == "nm" else mult_log_pmf)(p, rows) if len(rows) else []
    buf = io.StringIO()
    buf.write(",".join(g.vertices) + ",logpmf\n")
    for n, v in zip(rows.tolist(), np.atleast_1d(values).tolist()):
        buf.write(",".join(str(c) for c in n) + f",{v!r}\n")
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_fit(args) -> int:
    g = _load_graph(args.graph)
    data = _load_data(args.data)
    alpha = _vector(args.alpha, g, "alpha")
    if args.model == "nm":
        prior = DirParams(g, alpha, args.beta)
    else:
        if args.r != int(args.r):
            raise CliError("the mult model needs an integer r")
        prior = IDirParams(g, alpha, args.beta)
    post = posterior_update(prior, data, args.r)
    report = {
        "model": args.model,
        "prior": "Dir_G" if args.model == "nm" else "IDir_G",
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.edges],
        "observations": data.k,
        "r": int(args.r) if args.r.is_integer() else args.r,
        "alpha_prior": prior.alpha.tolist(),
        "beta_prior": prior.beta,
        "alpha_posterior": post.alpha.tolist(),
        "beta_posterior": post.beta,
    }
    if args.model == "nm":
        report["log_marginal_likelihood"] = log_marginal_likelihood(g, alpha, args.beta, args.r, data)
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_select(args) -> int:
    if args.r != int(args.r) or args.r < 1:
        raise CliError(f"r must be a positive integer, got {args.r}", EXIT_R)
    data = _load_data(args.data)
    vertices = data.labels
    alpha = args.alpha if args.alpha is not None else [1.0]
    if len(alpha) not in (1, len(vertices)):
        raise CliError(f"--alpha needs 1 or {len(vertices)} values")
    alpha = alpha[0] if len(alpha) == 1 else alpha
    scorer = GraphScorer(vertices, data, alpha, args.beta, int(args.r))
    if args.exact:
        report = exact_report(exact_posterior(data, alpha, args.beta, int(args.r)), scorer)
    else:
        initial = _load_graph(args.initial_graph) if args.initial_graph else None
        cfg = ChainConfig(steps=args.steps, burn_in=args.burn_in, seed=resolve_seed(args.seed),
                          alpha=alpha, beta=args.beta, r=int(args.r), initial_graph=initial)
        trace = run_chain(data, cfg, chains=args.chains)
        report = chain_report(trace, scorer, cfg, args.chains)
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import DEFAULT_SEED, check_names, run_checks

    only = []
    for item in args.only or []:
        only.extend(v.strip() for v in item.split(",") if v.strip())
    names = check_names()
    keys = []
    for k in only:
        if k.isdigit() and 1 <= int(k) <= len(names):
            keys.append(int(k))
        elif k in names:
            keys.append(k)
        else:
            raise CliError(f"unknown check {k!r}; choose from {', '.join(names)}")
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    report = None if args.json else (lambda res: print(res.line(), flush=True))
    results = run_checks(keys or None, seed=seed, report=report)
    passed = all(r.passed for r in results)
    if args.json:
        print(json.dumps({"passed": passed, "seed": seed, "checks": [r.to_dict() for r in results]}, indent=2))
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if passed else EXIT_CHECK


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphcount", description="Graph negative multinomial and "
                                     "graph multinomial count models on decomposable graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p):
        p.add_argument("--model", choices=("nm", "mult"), default="nm", help="count model (default nm)")
        p.add_argument("--graph", required=True, help="graph JSON file with vertices and edges")
        p.add_argument("--r", type=float, required=True, help="shape (nm, real > 0) or trials (mult, integer)")
        p.add_argument("--x", type=_floats, help="nm parameters, comma list in vertex order or one value")
        p.add_argument("--y", type=_floats, help="mult parameters, comma list in vertex order or one value")

    p = sub.add_parser("sample", help="draw count vectors and write them as CSV")
    model_args(p)
    p.add_argument("--n", type=_positive_int, required=True, help="number of rows to draw")
    p.add_argument("--seed", type=int, help=f"RNG seed (falls back to ${SEED_ENV}, then 0)")
    p.add_argument("--output", "-o", help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("logpmf", help="log mass of each CSV row under a model or a prior predictive")
    model_args(p)
    p.add_argument("--data", required=True, help="CSV with a header of vertex labels")
    p.add_argument("--alpha", type=_floats, help="prior alpha; switches to the prior predictive")
    p.add_argument("--beta", type=float, default=1.0, help="prior beta (default 1)")
    p.add_argument("--output", "-o", help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_logpmf)

    p = sub.add_parser("fit", help="conjugate posterior update of the graph prior")
    p.add_argument("--model", choices=("nm", "mult"), default="nm")
    p.add_argument("--graph", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--alpha", type=_floats, default=[1.0], help="prior alpha (default 1)")
    p.add_argument("--beta", type=float, default=1.0, help="prior beta (default 1)")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("select", help="posterior over decomposable graphs for the CSV columns")
    p.add_argument("--data", required=True, help="CSV; its header defines the vertices")
    p.add_argument("--r", type=float, required=True, help="known positive integer r")
    p.add_argument("--alpha", type=_floats, help="prior alpha (default 1)")
    p.add_argument("--beta", type=float, default=1.0, help="prior beta (default 1)")
    p.add_argument("--steps", type=_positive_int, default=100_000, help="chain length (default 100000)")
    p.add_argument("--burn-in", type=_nonneg_int, default=None, help="discarded steps (default steps/10)")
    p.add_argument("--chains", type=_positive_int, default=1, help="independent chains to merge")
    p.add_argument("--seed", type=int, help=f"RNG seed (falls back to ${SEED_ENV}, then 0)")
    p.add_argument("--initial-graph", help="graph JSON to start the chain from (default empty)")
    p.add_argument("--exact", action="store_true", help="enumerate all graphs instead (at most 5 vertices)")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("verify", help="run the built-in numerical acceptance checks")
    p.add_argument("--only", action="append", help="check names or numbers, comma separated; repeatable")
    p.add_argument("--json", action="store_true", help="machine-readable results")
    p.add_argument("--seed", type=int, help="seed for the statistical checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"graphcount: error: {exc}", file=sys.stderr)
        return exc.code
    except (DataError, GraphError, SupportError, OutOfDomainError, PriorError, ConfigError,
            HypergeometricError, ValueError) as exc:
        print(f"graphcount: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"graphcount: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

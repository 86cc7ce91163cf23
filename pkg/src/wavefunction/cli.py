"""Command-line interface.

Exit codes:
  0  success
  1  usage or argument error
  2  data error (unreadable or malformed input, degenerate sample)
  3  fit did not converge (the model is still written)
"""

import argparse
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .fit import DegenerateSampleError, FitOptions, fit_mle
from .model import ModelFormatError, WaveModel, load_model, serialize
from .quadrature import IntegrationError, entropy, moments, project_density
from .reference import REFERENCE_NAMES, make_reference
from .sampler import RNG_NAME, sample_n

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NOT_CONVERGED = 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x):
    return format(float(x), ".17g")


def read_sample(path):
    """One number per line; blank lines and lines starting with '#' are skipped."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    values = []
    for row, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            v = float(text)
        except ValueError:
            raise DataError(f"{path}: row {row}: cannot parse {text!r} as a number") from None
        if not math.isfinite(v):
            raise DataError(f"{path}: row {row}: value {text!r} is not finite")
        values.append(v)
    return np.array(values)


def _load(path) -> WaveModel:
    try:
        return load_model(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except ModelFormatError as exc:
        raise DataError(f"{path}: {exc}") from None


def _reference(name):
    try:
        return make_reference(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        try:
            fh = open(path, "w")
        except OSError as exc:
            raise DataError(f"cannot write {path}: {exc.strerror}") from None
        with fh:
            yield fh


def _report_stream(args):
    # with the main document on stdout, diagnostics go to stderr
    return sys.stderr if args.output in (None, "-") else sys.stdout


def cmd_fit(args):
    data = read_sample(args.input)
    try:
        opts = FitOptions(degree=args.degree, max_iterations=args.max_iterations)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        model, report = fit_mle(data, opts)
    except DegenerateSampleError as exc:
        raise DataError(f"{args.input}: {exc}") from None
    with _output(args.output) as out:
        out.write(serialize(model))
    rep = _report_stream(args)
    rep.write(f"# converged: {str(report.converged).lower()}\n")
    rep.write(f"# iterations: {report.iterations}\n")
    rep.write(f"# log_likelihood: {_fmt(report.final_log_likelihood)}\n")
    rep.write(f"# gradient_norm: {report.gradient_norm:.3e}\n")
    rep.write(f"# n: {data.shape[0]}\n")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_eval(args):
    lo, hi, count = args.grid_min, args.grid_max, args.grid_count
    if count < 2 or not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise UsageError(f"invalid grid: need finite min < max and count >= 2 (got {lo}, {hi}, {count})")
    ref = _reference(args.reference) if args.reference else None
    model = _load(args.model)
    x = np.linspace(lo, hi, count)
    amp = model.amplitude(model.standardize(x))
    dens = amp * amp / model.scale
    cols = ["x", "fitted_density", "fitted_amplitude"]
    table = [x, dens, amp]
    if ref is not None:
        true_dens = ref.density(x)
        # same convention as the fitted column: density = amplitude^2 / scale
        cols = ["x", "true_density", "fitted_density", "true_amplitude", "fitted_amplitude"]
        table = [x, true_dens, dens, np.sqrt(model.scale * true_dens), amp]
    with _output(args.output) as out:
        out.write("# " + "\t".join(cols) + "\n")
        for row in zip(*table):
            out.write("\t".join(_fmt(v) for v in row) + "\n")
    return EXIT_OK


def cmd_moments(args):
    if args.max_p < 0:
        raise UsageError(f"--max-p must be non-negative, got {args.max_p}")
    model = _load(args.model)
    values = moments(model, args.max_p, scale="original")
    sys.stdout.write("# p\traw_moment\n")
    for p, v in enumerate(values):
        sys.stdout.write(f"{p}\t{_fmt(v)}\n")
    return EXIT_OK


def cmd_entropy(args):
    model = _load(args.model)
    sys.stdout.write(_fmt(entropy(model, method=args.method)) + "\n")
    return EXIT_OK


def cmd_sample(args):
    if args.n < 0 or args.burn_in < 0 or args.thinning < 1:
        raise UsageError("need --n >= 0, --burn-in >= 0 and --thinning >= 1")
    model = _load(args.model)
    draws = sample_n(model, args.n, seed=args.seed, burn_in=args.burn_in, thinning=args.thinning)
    with _output(args.output) as out:
        out.write("# wavefunction slice sample\n")
        out.write(f"# generator: {RNG_NAME}\n")
        out.write(f"# seed: {args.seed}\n")
        out.write(f"# n: {args.n}\n")
        out.write(f"# burn_in: {args.burn_in}\n")
        out.write(f"# thinning: {args.thinning}\n")
        for v in draws:
            out.write(_fmt(v) + "\n")
    return EXIT_OK


def cmd_project(args):
    if args.degree < 0:
        raise UsageError("--degree must be non-negative")
    ref = _reference(args.reference)
    try:
        w, mass = project_density(
            ref.standardized_sqrt_density, args.degree, breakpoints=ref.standardized_breakpoints()
        )
    except IntegrationError as exc:
        raise DataError(str(exc)) from None
    model = WaveModel(w / math.sqrt(float(w @ w)), location=ref.location, scale=ref.scale)
    with _output(args.output) as out:
        out.write(serialize(model))
    _report_stream(args).write(f"# partial_mass: {_fmt(mass.partial_mass)}\n")
    return EXIT_OK


def cmd_draw(args):
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    ref = _reference(args.reference)
    draws = ref.sample(args.n, seed=args.seed)
    with _output(args.output) as out:
        out.write(f"# exact draws from {ref.name}\n")
        out.write(f"# generator: {RNG_NAME}\n")
        out.write(f"# seed: {args.seed}\n")
        for v in draws:
            out.write(_fmt(v) + "\n")
    return EXIT_OK


def build_parser():
    parser = _Parser(
        prog="wavefunction",
        description="Fit, evaluate and sample wave-function (Hermite) density models.",
        epilog="exit codes: 0 success, 1 usage/argument error, 2 data error, "
        "3 fit did not converge (model still written)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    refs = ", ".join(REFERENCE_NAMES)

    p = sub.add_parser("fit", help="fit a model to a sample file by maximum likelihood")
    p.add_argument("input", help="sample file: one number per line, '#' comments")
    p.add_argument("--degree", type=int, default=10)
    p.add_argument("--max-iterations", type=int, default=500)
    p.add_argument("--output", help="model file (default: stdout)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="tabulate amplitude and density on a grid")
    p.add_argument("model")
    p.add_argument("--grid-min", type=float, required=True)
    p.add_argument("--grid-max", type=float, required=True)
    p.add_argument("--grid-count", type=int, default=201)
    p.add_argument("--reference", help=f"add true density columns ({refs})")
    p.add_argument("--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("moments", help="exact raw moments E[X^0..X^p]")
    p.add_argument("model")
    p.add_argument("--max-p", type=int, default=4)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("entropy", help="differential entropy")
    p.add_argument("model")
    p.add_argument("--method", choices=("gauss-hermite", "roots"), default="gauss-hermite")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("sample", help="slice-sample from a model")
    p.add_argument("model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("--thinning", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("project", help="project a reference density onto the basis")
    p.add_argument("reference", help=refs)
    p.add_argument("--degree", type=int, default=10)
    p.add_argument("--output")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("draw", help="exact draws from a reference distribution")
    p.add_argument("reference", help=refs)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_draw)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wavefunction {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"wavefunction {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

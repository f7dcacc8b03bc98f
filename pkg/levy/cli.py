"""
Command-line interface.
Parses model specs, runs approximations and prints densities, CDFs, prices and reports.

Exit codes: 0 success, 1 failed checks, 2 invalid input, 3 numerical or unexpected failure.
"""

import argparse
import json
import logging
import sys
from decimal import Decimal
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import BenchmarkConfig, NumericConfig, OutputConfig, load_env_file
from levy.errors import HyperExpError, NumericalError, ValidationError
from levy.harness import (
    CHECKS,
    FORMATS,
    TABLES,
    convergence_study,
    density_comparison,
    fit_geometric_rate,
    map_numbers,
    render,
    render_rows,
    run_checks,
    table_reproduction,
)
from levy.hyperexp import METHODS, ONE_SIDED, TWO_SIDED, HyperExpProcess, approximate, martingale_hep
from levy.numkernel import context
from levy.processes import MODEL_FAMILIES, LevyModel, calibrated, model_from_dict
from levy.transforms import InversionGrid, cdf_values, price_european_call, price_european_put

logger = logging.getLogger(__name__)

EXIT_CODES = '''exit codes:
  0  success
  1  a verify check or an asserted reproduce-table cell failed
  2  invalid input (ValidationError)
  3  numerical failure (NumericalError) or an unexpected error'''

MODEL_PARAMS = {
    'alpha': 'alpha', 'a': 'a', 'ahat': 'a_hat', 'nu': 'nu', 'theta': 'theta', 'sigma': 'sigma',
    'C': 'C', 'G': 'G', 'M': 'M', 'Y': 'Y', 'kappa': 'kappa', 'a_bm': 'a_bm',
}


# === Parser ===

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group('output and configuration')
    group.add_argument('--env-file', help='Explicit env file with HYPEREXP_* settings')
    group.add_argument('--log-level', default='WARNING', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    group.add_argument('--format', choices=FORMATS, help='Output format (default: table; json for approximate)')
    group.add_argument('--digits', type=int, help='Significant digits of printed numbers')
    group.add_argument('--hep-digits', type=int, help='Digits of serialised hyperexponential parameters')
    group.add_argument('--precision', type=int, help='Decimal digits of the extended-precision context')
    return common


def _model_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group('model')
    group.add_argument('--model', choices=sorted(MODEL_FAMILIES), help='Model family')
    group.add_argument('--spec', help='JSON model document')
    group.add_argument('--mu', help='Linear drift')
    for flag in MODEL_PARAMS:
        group.add_argument(f'--{flag.replace("_", "-")}', dest=flag, help=f'{flag} parameter')
    return parser


def _approx_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group('approximation')
    group.add_argument('--method', choices=METHODS)
    group.add_argument('--two-sided', dest='method', action='store_const', const=TWO_SIDED)
    group.add_argument('--one-sided', dest='method', action='store_const', const=ONE_SIDED)
    group.add_argument('--n', type=int, default=5, help='Approximation order')
    group.add_argument('--k', type=int, help='Numerator excess of one-sided approximants')
    group.add_argument('--n-neg', type=int, help='Order for the negative tail')
    group.add_argument('--k-neg', type=int, help='Numerator excess for the negative tail')
    group.add_argument('--center', default='0', help='Expansion point inside the strip')
    group.add_argument('--from-hep', help='Read the hyperexponential process from an approximate output file')
    group.add_argument('--exact', action='store_true', help='Use the model itself instead of an approximation')
    return parser


def _grid_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group('Fourier grid')
    group.add_argument('--damping', type=float)
    group.add_argument('--du', type=float)
    group.add_argument('--umax', type=float)
    group.add_argument('--scheme', choices=['trapezoid', 'simpson'])
    return parser


def build_parser() -> argparse.ArgumentParser:
    common, model, approx, grid = _common_parser(), _model_parser(), _approx_parser(), _grid_parser()
    parser = argparse.ArgumentParser(prog='levy', description='Hyperexponential approximation of Levy processes.',
                                     epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('approximate', parents=[common, model, approx], help='Build and print an approximation')

    density = sub.add_parser('density', parents=[common, model, approx], help='Compare x·π(x) with x·π_n(x)')
    density.add_argument('--x', nargs='+', required=True)

    cdf = sub.add_parser('cdf', parents=[common, model, approx, grid], help='CDF of X_t by Fourier inversion')
    cdf.add_argument('--t', default='1')
    cdf.add_argument('--x', nargs='+', required=True)

    price = sub.add_parser('price', parents=[common, model, approx, grid], help='European option price')
    price.add_argument('--S0', default=None)
    price.add_argument('--K', default=None)
    price.add_argument('--T', default=None)
    price.add_argument('--r', default=None)
    price.add_argument('--put', action='store_true')

    verify = sub.add_parser('verify', parents=[common], help='Run property checks', epilog=EXIT_CODES,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
    verify.add_argument('--checks', nargs='*', choices=sorted(CHECKS))

    convergence = sub.add_parser('convergence', parents=[common, model, approx], help='Error decay in n')
    convergence.add_argument('--orders', type=int, nargs='+', default=list(range(2, 13)))
    convergence.add_argument('--z', nargs='+', default=['0.5'])

    table = sub.add_parser('reproduce-table', parents=[common, grid], help='Recompute a published table',
                           epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    table.add_argument('--table', required=True, choices=sorted(TABLES))
    table.add_argument('--full', action='store_true')
    return parser


# === Formatting ===

def format_number(value: Any, digits: Optional[int] = None) -> str:
    """Decimal string with the given significant digits, rounded half-even."""
    digits = digits or OutputConfig.DIGITS
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_, str)):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        exact = Decimal(repr(float(value)))
    else:
        exact = Decimal(context().nstr(value, digits + 10, strip_zeros=False))
    return format(exact, f'.{digits}g')


def _format_rows(rows: Sequence[Sequence[Any]], digits: Optional[int]) -> List[List[str]]:
    return [[format_number(v, digits) for v in row] for row in rows]


# === Inputs ===

def _read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding='utf-8') as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read JSON document {path}: {exc}") from exc


def model_from_args(args: argparse.Namespace) -> LevyModel:
    if args.spec:
        doc = _read_json(args.spec)
        if doc.get('precision'):
            NumericConfig.PRECISION = int(doc['precision'])
        return model_from_dict(doc)
    if not args.model:
        raise ValidationError("give --model or --spec")
    params = {key: getattr(args, flag) for flag, key in MODEL_PARAMS.items() if getattr(args, flag) is not None}
    return model_from_dict({'family': args.model, 'params': params, 'drift': args.mu or 0})


def _method(args: argparse.Namespace) -> str:
    if args.method:
        return args.method
    return ONE_SIDED if args.k is not None else TWO_SIDED


def approximation_from_args(args: argparse.Namespace, model: LevyModel) -> HyperExpProcess:
    hep, report = approximate(model, _method(args), args.n, args.k, args.n_neg, args.k_neg, args.center)
    logger.info("Approximation matches cumulants through order %d", report.matched_through)
    return hep


def _round_trip(hep: HyperExpProcess, args: argparse.Namespace) -> HyperExpProcess:
    return HyperExpProcess.from_dict(hep.to_dict(args.hep_digits))


def hep_from_args(args: argparse.Namespace) -> HyperExpProcess:
    """The hyperexponential process as `approximate` prints it."""
    if args.from_hep:
        return HyperExpProcess.from_dict(_read_json(args.from_hep))
    return _round_trip(approximation_from_args(args, model_from_args(args)), args)


def grid_from_args(args: argparse.Namespace) -> InversionGrid:
    return InversionGrid.from_config(damping=args.damping, du=args.du, u_max=args.umax, scheme=args.scheme)


def _numbers(values: Sequence[str]) -> List[float]:
    try:
        return [float(v) for v in values]
    except ValueError as exc:
        raise ValidationError(f"not a number: {exc}") from exc


# === Commands ===

Output = Tuple[str, bool]


def cmd_approximate(args: argparse.Namespace) -> Output:
    hep = hep_from_args(args)
    doc = hep.to_dict(args.hep_digits)
    fmt = args.format or 'json'
    if fmt == 'json':
        return json.dumps(doc, indent=2), True
    rows = [['drift', doc['drift'], ''], ['sigma2', doc['sigma2'], ''], ['cutoff', doc['cutoff'], '']]
    rows += [['positive', a, b] for a, b in doc['positive']]
    rows += [['negative', a, b] for a, b in doc['negative']]
    return render_rows(('field', 'alpha', 'beta'), rows, fmt), True


def cmd_density(args: argparse.Namespace) -> Output:
    model = model_from_args(args)
    hep = approximation_from_args(args, model)
    rows = [[r.x, r.exact, r.approx, r.rel_error] for r in density_comparison(model, hep, args.x)]
    return render_rows(('x', 'x*pi(x)', 'x*pi_n(x)', 'rel_error'), _format_rows(rows, args.digits),
                       args.format or 'table'), True


def cmd_cdf(args: argparse.Namespace) -> Output:
    xs = _numbers(args.x)
    if min(xs) <= 0:
        raise ValidationError(f"CDF inversion needs x > 0, got {min(xs)}")
    target = model_from_args(args) if args.exact else hep_from_args(args)
    values = cdf_values(target, args.t, xs, grid_from_args(args))
    rows = [[x, v] for x, v in zip(xs, values.tolist())]
    return render_rows(('x', 'cdf'), _format_rows(rows, args.digits), args.format or 'table'), True


def cmd_price(args: argparse.Namespace) -> Output:
    contract = BenchmarkConfig.get_contract_params()
    S0, K, T, r = (getattr(args, key) or contract[key] for key in ('S0', 'K', 'T', 'r'))
    if args.exact:
        target = calibrated(model_from_args(args), r)
    else:
        target = _round_trip(martingale_hep(hep_from_args(args), r), args)
    pricer = price_european_put if args.put else price_european_call
    value = pricer(target, S0, K, T, r, grid_from_args(args))
    rows = [['put' if args.put else 'call', value]]
    return render_rows(('option', 'price'), _format_rows(rows, args.digits), args.format or 'table'), True


def cmd_verify(args: argparse.Namespace) -> Output:
    report = run_checks(args.checks or None)
    return render(report, args.format or 'table', partial(format_number, digits=args.digits)), report.passed


def cmd_convergence(args: argparse.Namespace) -> Output:
    model = model_from_args(args)
    points = [context().convert(z) for z in args.z]
    records = convergence_study(model, args.orders, points, _method(args), args.k)
    rows = [[r.n, r.max_error, r.rate, r.envelope] for r in records]
    headers = ('n', 'max_error', 'rate', 'envelope')
    fmt = args.format or 'table'
    fitted = fit_geometric_rate(records)
    if fmt == 'json':
        doc = {'records': [dict(zip(headers, row)) for row in rows], 'fitted_rate': fitted}
        return json.dumps(map_numbers(doc, partial(format_number, digits=args.digits)), indent=2), True
    text = render_rows(headers, _format_rows(rows, args.digits), fmt)
    if fmt == 'table':
        text += f"\nfitted rate: {format_number(fitted, args.digits)}"
    return text, True


def cmd_reproduce_table(args: argparse.Namespace) -> Output:
    report = table_reproduction(args.table, args.full, grid_from_args(args))
    return render(report, args.format or 'table', partial(format_number, digits=args.digits)), report.passed


COMMANDS: Dict[str, Callable[[argparse.Namespace], Output]] = {
    'approximate': cmd_approximate,
    'density': cmd_density,
    'cdf': cmd_cdf,
    'price': cmd_price,
    'verify': cmd_verify,
    'convergence': cmd_convergence,
    'reproduce-table': cmd_reproduce_table,
}


# === Entry point ===

def _configure(args: argparse.Namespace):
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    if args.env_file:
        if not load_env_file(args.env_file):
            raise ValidationError(f"env file {args.env_file} could not be loaded")
    if args.precision:
        NumericConfig.PRECISION = args.precision


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name; None reads sys.argv.

    Returns:
        Process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        _configure(args)
        output, ok = COMMANDS[args.command](args)
    except HyperExpError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:
        logger.debug("Unexpected failure", exc_info=True)
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return NumericalError.exit_code
    print(output)
    return 0 if ok else 1


def main() -> int:
    return run(sys.argv[1:])

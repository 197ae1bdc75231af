"""Command-line front end.

    liecov basis     --algebra sl3 --rep adjoint
    liecov decompose --algebra sl2 --rep adjoint --input map.txt
    liecov decompose --algebra sl3 --samples points.txt
    liecov divide    --algebra sl2 --input field.txt
    liecov realify   --algebra sl3 --seed 4
    liecov factor    --algebra sl2 --rep irrep:2 --input dist.txt --via generator
    liecov selftest

Every failure is logged, summarized on stderr in one line and mapped to the
exit code of its error class.
"""

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from liecov import create_context
from liecov.catalog import default_degree_bound
from liecov.covariants import (
    CovariantBasis,
    invariant_generators,
    is_covariant,
    kostant_basis,
)
from liecov.distkit import factor_point_distribution
from liecov.division import (
    dixmier_divide,
    generalized_divide,
    kostant_decompose,
    pointwise_decompose,
    tangency_defect,
)
from liecov.errors import InvalidInput, LiecovError, NotCovariant
from liecov.formats import (
    GENERATOR_SEPARATOR,
    basis_manifest,
    certificate_report,
    decomposition_report,
    division_report,
    dump_json,
    error_report,
    factorization_report,
    format_distribution,
    format_generators,
    format_polymap,
    format_samples,
    load_algebra,
    load_representation,
    parse_distribution,
    parse_generators,
    parse_polymap,
    parse_samples,
    pointwise_report,
    read_text,
)
from liecov.polyalg import PolyMap, poly_ring
from liecov.realify import realify_basis, scramble_basis, verify_certificate

logger = logging.getLogger(__name__)

FORMATS = ('text', 'json')


@dataclass(frozen=True)
class JobConfig:
    command: str
    algebra: str
    rep: str
    degree_bound: int
    seed: int
    tol_input: float
    tol_residual: float
    output: str = None
    format: str = 'json'
    threads: int = 1
    input: str = None
    samples: str = None
    invariant: bool = False
    via: str = 'gradients'
    experimental: bool = False
    full: bool = False

    def validate(self):
        for name in ('tol_input', 'tol_residual'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidInput(f"{name.replace('_', '-')} must be positive, got {value}")
        if self.degree_bound is not None and self.degree_bound < 1:
            raise InvalidInput(f"degree bound must be >= 1, got {self.degree_bound}")
        if self.format not in FORMATS:
            raise InvalidInput(f"format must be one of {', '.join(FORMATS)}")
        return self


class _Parser(argparse.ArgumentParser):
    """Usage errors become InvalidInput so they exit with code 1"""

    def error(self, message):
        raise InvalidInput(f"{self.prog}: {message}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument('--algebra', default='sl2',
                        help='catalog name (sl2, sl3, sl4, so3) or algebra file')
    common.add_argument('--rep', default='adjoint',
                        help='adjoint, trivial, standard, irrep:m, sym:k, dual:<name> '
                             'or representation file')
    common.add_argument('--degree-bound', type=int, default=None)
    common.add_argument('--seed', type=int, default=None)
    common.add_argument('--tol-input', type=float, default=None)
    common.add_argument('--tol-residual', type=float, default=None)
    common.add_argument('--format', choices=FORMATS, default=None)
    common.add_argument('--out', default=None, help='write the report here')

    parser = _Parser(prog='liecov',
                     description='Covariant maps and distributions on Lie algebras')
    commands = parser.add_subparsers(dest='command', required=True,
                                     parser_class=_Parser)

    commands.add_parser('basis', parents=[common], help='Kostant module basis')

    decompose = commands.add_parser('decompose', parents=[common],
                                    help='coefficients over the module basis')
    source = decompose.add_mutually_exclusive_group(required=True)
    source.add_argument('--input', help='covariant map file')
    source.add_argument('--samples', help='sample file of (x, f(x)) pairs')

    divide = commands.add_parser('divide', parents=[common],
                                 help='solve [x, Y(x)] = X(x)')
    divide.add_argument('--input', required=True, help='vector field file')
    divide.add_argument('--experimental', action='store_true',
                        help='P(x) = sum pi(q_i(x)) P_i(x) for the chosen --rep')

    realify = commands.add_parser('realify', parents=[common],
                                  help='conjugation-fixed module basis')
    realify.add_argument('--input', help='generator file; default scrambles the '
                                         'computed basis')

    factor = commands.add_parser('factor', parents=[common],
                                 help='factor a covariant point distribution')
    factor.add_argument('--input', required=True, help='distribution file')
    factor.add_argument('--via', choices=('gradients', 'generator'), default='gradients',
                        help='gradient covariants q_i or the single module generator')
    factor.add_argument('--invariant', action='store_true',
                        help='require invariant theta')

    selftest = commands.add_parser('selftest', parents=[common],
                                   help='run the property suite')
    selftest.add_argument('--full', action='store_true',
                          help='include the slow acceptance sweeps')
    return parser


def job_config(args, settings):
    """Configuration values overridden by the parsed flags"""
    def pick(flag, default):
        return default if flag is None else flag

    return JobConfig(
        command=args.command,
        algebra=args.algebra,
        rep=args.rep,
        degree_bound=pick(args.degree_bound, settings.DEGREE_BOUND),
        seed=pick(args.seed, settings.SEED),
        tol_input=pick(args.tol_input, settings.TOL_INPUT),
        tol_residual=pick(args.tol_residual, settings.TOL_RESIDUAL),
        output=args.out,
        format=pick(args.format, settings.OUTPUT_FORMAT),
        threads=max(1, settings.THREADS),
        input=getattr(args, 'input', None),
        samples=getattr(args, 'samples', None),
        invariant=getattr(args, 'invariant', False),
        via=getattr(args, 'via', 'gradients'),
        experimental=getattr(args, 'experimental', False),
        full=getattr(args, 'full', False),
    ).validate()


# -- commands ---------------------------------------------------------------------


def _setup(cfg):
    algebra = load_algebra(cfg.algebra)
    rep = load_representation(cfg.rep, algebra)
    bound = cfg.degree_bound or default_degree_bound(algebra)
    return algebra, rep, bound


def _emit(cfg, report, text):
    content = dump_json(report) if cfg.format == 'json' else text
    if cfg.output:
        Path(cfg.output).write_text(content)
        logger.info(f"wrote {cfg.command} report to {cfg.output}")
    else:
        sys.stdout.write(content)


def cmd_basis(cfg):
    algebra, rep, bound = _setup(cfg)
    basis = kostant_basis(rep, bound, threads=cfg.threads)
    header = (f"# {algebra.name} {rep.label}: r={basis.r} "
              f"degrees={list(basis.degrees)}\n")
    _emit(cfg, basis_manifest(basis), header + format_generators(basis.generators))
    return 0


def cmd_decompose(cfg):
    algebra, rep, bound = _setup(cfg)
    basis = kostant_basis(rep, bound, threads=cfg.threads)
    if cfg.input:
        P = parse_polymap(read_text(cfg.input), algebra.dim)
        decomposition = kostant_decompose(P, basis)
        coefficients = PolyMap(poly_ring(algebra.dim, P.field),
                               decomposition.coefficients)
        _emit(cfg, decomposition_report(decomposition), format_polymap(coefficients))
        return 0
    samples = parse_samples(read_text(cfg.samples), algebra.dim, rep.target_dim)
    gens = invariant_generators(algebra, bound)
    result = pointwise_decompose(samples, basis, gens, tol_input=cfg.tol_input,
                                 tol_residual=cfg.tol_residual)
    rows = [(x, c) for x, c in zip(
        ([float(v) for v in point] for point in result.points), result.coeff_values)]
    _emit(cfg, pointwise_report(result), format_samples(rows))
    return 0


def cmd_divide(cfg):
    algebra, rep, bound = _setup(cfg)
    X = parse_polymap(read_text(cfg.input), algebra.dim)
    gens = invariant_generators(algebra, bound)
    if cfg.experimental:
        quotients = generalized_divide(X, rep, gens, bound)
        report = {'experimental': True,
                  'quotients': [format_polymap(P) for P in quotients]}
        _emit(cfg, report, format_generators(quotients))
        return 0
    Y = dixmier_divide(X, gens, bound)
    _emit(cfg, division_report(Y, tangency_defect(X, gens)), format_polymap(Y))
    return 0


def cmd_realify(cfg):
    algebra, rep, bound = _setup(cfg)
    if cfg.input:
        generators = parse_generators(read_text(cfg.input), algebra.dim)
        for j, P in enumerate(generators):
            if not is_covariant(P, rep):
                raise NotCovariant(f"generator {j} is not covariant for {rep.label}",
                                   generator=j)
        basis = CovariantBasis(rep, tuple(generators),
                               tuple(P.degree for P in generators), bound)
    else:
        basis = scramble_basis(kostant_basis(rep, bound, threads=cfg.threads),
                               seed=cfg.seed)
    certificate = realify_basis(basis, seed=cfg.seed)
    verify_certificate(certificate)
    _emit(cfg, certificate_report(certificate),
          format_generators(certificate.new_generators))
    return 0


def cmd_factor(cfg):
    algebra, rep, bound = _setup(cfg)
    T = parse_distribution(read_text(cfg.input), algebra.dim, rep.target_dim)
    if cfg.via == 'generator':
        gens = kostant_basis(rep, bound, threads=cfg.threads)
        if gens.r != 1:
            raise InvalidInput(f"{rep.label} has {gens.r} module generators, "
                               f"factoring through one needs exactly one")
    else:
        if rep.target_dim != algebra.dim:
            raise InvalidInput("gradient covariants factor g-valued distributions only")
        gens = invariant_generators(algebra, bound)
    factorization = factor_point_distribution(T, gens, rep,
                                              invariant=cfg.invariant or None)
    text = (GENERATOR_SEPARATOR + '\n').join(
        format_distribution(theta) for theta in factorization.thetas)
    _emit(cfg, factorization_report(factorization), text)
    return 0


def cmd_selftest(cfg):
    from liecov.selftest import run_selftest

    return run_selftest(seed=cfg.seed, full=cfg.full)


COMMANDS = {
    'basis': cmd_basis,
    'decompose': cmd_decompose,
    'divide': cmd_divide,
    'realify': cmd_realify,
    'factor': cmd_factor,
    'selftest': cmd_selftest,
}


def main(argv=None):
    context = create_context()
    command = 'liecov'
    cfg = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        cfg = job_config(args, context.settings)
        return COMMANDS[command](cfg)
    except LiecovError as error:
        logger.error(f"{command} failed: {error.message}")
        details = ', '.join(f"{k}={v}" for k, v in error.details.items())
        print(f"{command}: {type(error).__name__}: {error.message}"
              + (f" ({details})" if details else ''), file=sys.stderr)
        if cfg is not None and cfg.format == 'json':
            sys.stdout.write(dump_json(error_report(error)))
        return error.exit_code


if __name__ == '__main__':
    sys.exit(main())

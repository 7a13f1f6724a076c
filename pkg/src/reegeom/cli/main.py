import argparse
import math
import sys
import warnings
from typing import List, Optional

import numpy as np

from reegeom import __version__
from reegeom.cli.io import RunManifest, STDIO, matrix_to_json, read_json, \
    read_state, write_csv, write_json
from reegeom.cli.verify import SUITES, run_suites
from reegeom.css.classify import classify
from reegeom.css.css import CssResult, bloch_gap, css_auto, edge_gap
from reegeom.errors import DegenerateFrameWarning, NotConvergedError, \
    NotSolvableFamilyError, ReeGeomError
from reegeom.geometry.bodies import Body, surface_mesh
from reegeom.helpers import DEFAULT_PARAMS, RunConfig, dict2config, \
    update_dict
from reegeom.logger import Logger, logger
from reegeom.ree.oracle import ReeReport, ree_numeric
from reegeom.revmap.zfamily import SWEEP_COLUMNS, css_line_sweep, \
    sample_sweep_params
from reegeom.states.qstate import PauliForm, canonicalize, concurrence, \
    from_pauli, is_ppt, to_pauli

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_UNSUPPORTED = 3

EPILOG = """exit codes:
  0  success
  1  a verification check failed or the numerical oracle did not converge
  2  invalid input (bad flags, unreadable file, matrix violating a
     density-matrix invariant)
  3  unsupported method (geometric CSS requested for a state outside the
     solvable families)

environment:
  REE_GEOM_THREADS  caps the number of threads for oracle restarts and
                    sweeps (default 1)
"""

SURFACE_COLUMNS = ('q1', 'q2', 'q3', 'sheet')


def _config(args) -> RunConfig:
    params = update_dict(DEFAULT_PARAMS, {'tolerance.psd': args.tol})
    overrides = {
        'oracle.restarts': getattr(args, 'restarts', None),
        'oracle.max_iterations': getattr(args, 'max_iterations', None),
        'oracle.seed': getattr(args, 'oracle_seed', None),
    }
    return dict2config(update_dict(
        params, {k: v for k, v in overrides.items() if v is not None}))


def _manifest(args, inputs=(), outputs=(), seed=None) -> RunManifest:
    flags = {k: v for k, v in sorted(vars(args).items())
             if k not in ('handler', 'command')}
    return RunManifest(args.command, list(inputs), list(outputs), flags, seed)


#############################################################################
# SUBCOMMANDS
#############################################################################
def cmd_decompose(args) -> int:
    rho = read_state(args.state, args.tol)
    pauli = to_pauli(rho)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', DegenerateFrameWarning)
        canonical, lu = canonicalize(rho)
        family = classify(rho)
    for w in caught:
        logger.warning(str(w.message), src='decompose')
    payload = {
        'r': pauli.r,
        's': pauli.s,
        'g': pauli.g,
        'canonical': {'r': canonical.r, 's': canonical.s, 'q': canonical.q},
        'local_unitary': {'a': matrix_to_json(lu.U_A),
                          'b': matrix_to_json(lu.U_B)},
        'eigenvalues': rho.eigenvalues,
        'concurrence': concurrence(rho),
        'ppt': is_ppt(rho, args.tol),
        'family': family.name,
    }
    write_json(args.out, payload, _manifest(args, [args.state], [args.out]))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    obj = read_json(args.pauli)
    try:
        form = PauliForm(obj['r'], obj['s'], obj['g'])
    except KeyError as exc:
        raise ValueError(f'Pauli form misses entry {exc}') from None
    rho = from_pauli(form).validate(args.tol)
    write_json(args.out, matrix_to_json(rho.entries),
               _manifest(args, [args.pauli], [args.out]))
    return EXIT_OK


def _css_payload(result: CssResult, scale: float) -> dict:
    family = result.family
    return {
        'family': family.name,
        'weights': family.weights,
        'separable': result.separable,
        'geometric': result.geometric,
        'css': matrix_to_json(result.css.entries),
        'tau': result.tau,
        'ree': result.ree * scale,
        'x_family': result.x_family,
        'residuals': {
            'bloch_gap': result.residuals.bloch_gap,
            'edge_gap': result.residuals.edge_gap,
            'recovery_gap': result.residuals.recovery_gap,
        },
    }


def _oracle_payload(rho, report: ReeReport, scale: float) -> dict:
    css = report.css_numeric
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', DegenerateFrameWarning)
        tau = canonicalize(css)[0].q
        family = classify(rho)
    return {
        'family': family.name,
        'separable': is_ppt(rho),
        'geometric': False,
        'css': matrix_to_json(css.entries),
        'tau': tau,
        'ree': report.value * scale,
        'residuals': {
            'bloch_gap': bloch_gap(rho, css),
            'edge_gap': edge_gap(css),
            'recovery_gap': float('nan'),
        },
        'oracle': {
            'converged': report.converged,
            'iterations': report.iterations,
            'restart_values': [v * scale for v in report.restart_values],
        },
    }


def cmd_css(args) -> int:
    cfg = _config(args)
    rho = read_state(args.state, args.tol)
    scale = 1 / math.log(2) if args.bits else 1.0
    if args.method == 'numeric':
        payload = _oracle_payload(rho, ree_numeric(rho, cfg.oracle), scale)
    else:
        result = css_auto(rho, cfg.oracle,
                          numeric_fallback=args.method == 'auto',
                          psd_tol=cfg.tolerance.psd,
                          classify_tol=cfg.tolerance.classify)
        payload = _css_payload(result, scale)
    payload.update(method=args.method, units='bits' if args.bits else 'nats')
    write_json(args.out, payload, _manifest(args, [args.state], [args.out],
                                            seed=cfg.oracle.seed))
    return EXIT_OK


def cmd_surface(args) -> int:
    mesh = surface_mesh(Body.deserialize(args.body), args.r, args.s, args.n,
                        args.tol)
    rows = ((*point, sheet) for point, sheet in zip(mesh.points, mesh.sheets))
    write_csv(args.out, SURFACE_COLUMNS, rows,
              _manifest(args, outputs=[args.out]))
    logger.info(f'wrote {len(mesh)} points to {args.out}', src='surface')
    return EXIT_OK


def cmd_sweep(args) -> int:
    rng = np.random.default_rng(args.seed)
    params = sample_sweep_params(rng, args.r, args.s, args.families,
                                 args.bell_diagonal)
    x_grid = np.linspace(0, args.xmax, args.xsteps)
    rows = css_line_sweep(params, x_grid, args.tol, progress=args.progress)
    write_csv(args.out, SWEEP_COLUMNS, rows,
              _manifest(args, outputs=[args.out], seed=args.seed))
    logger.info(f'wrote {len(rows)} rows to {args.out}', src='sweep')
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    names = list(SUITES) if args.suite == 'all' else [args.suite]
    report = run_suites(names, cfg, args.seed, args.count, args.progress)

    failed = 0
    for suite, results in report.items():
        for check in results:
            failed += not check.passed
            mark = 'ok  ' if check.passed else 'FAIL'
            print(f'[{mark}] {suite}: {check.name}: {check.detail}')
    total = sum(len(results) for results in report.values())
    print(f'{total - failed}/{total} checks passed')

    if args.out:
        payload = {'passed': failed == 0,
                   'suites': {suite: [c.to_dict() for c in results]
                              for suite, results in report.items()}}
        write_json(args.out, payload, _manifest(args, outputs=[args.out],
                                                seed=args.seed))
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


#############################################################################
# PARSER
#############################################################################
def _add_oracle_flags(parser):
    parser.add_argument('--restarts', type=int, default=None, metavar='N',
                        help=f'Oracle restarts '
                             f'(default: {DEFAULT_PARAMS["oracle.restarts"]})')
    parser.add_argument('--max-iterations', type=int, default=None,
                        dest='max_iterations', metavar='N',
                        help=f'Oracle iterations per restart (default: '
                             f'{DEFAULT_PARAMS["oracle.max_iterations"]})')
    parser.add_argument('--oracle-seed', type=int, default=None,
                        dest='oracle_seed', metavar='SEED',
                        help=f'Oracle seed '
                             f'(default: {DEFAULT_PARAMS["oracle.seed"]})')


def _bloch_component(s: str) -> float:
    value = float(s)
    if not -1 <= value <= 1:
        raise argparse.ArgumentTypeError(f'{value} is outside [-1, 1]')
    return value


def _non_negative_int(s: str) -> int:
    value = int(s)
    if value < 0:
        raise argparse.ArgumentTypeError(f'{value} is negative')
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ree-geom',
        description='Relative entropy of entanglement and closest separable '
                    'states of two-qubit states',
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    parser.add_argument('--tol', type=float,
                        default=DEFAULT_PARAMS['tolerance.psd'], metavar='TOL',
                        help=f'Positivity tolerance '
                             f'(default: {DEFAULT_PARAMS["tolerance.psd"]})')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='More log output (repeat for trace)')
    parser.add_argument('-q', '--quiet', action='store_true',
                        help='Only log errors')
    parser.add_argument('--progress', action='store_true',
                        help='Show progress bars')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('decompose', help='Pauli decomposition of a state')
    p.add_argument('state', help='State JSON file ("-" for stdin)')
    p.add_argument('-o', '--out', default=STDIO, help='Output JSON file')
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser('reconstruct', help='State from a Pauli decomposition')
    p.add_argument('pauli', help='Pauli JSON file with r, s and g')
    p.add_argument('-o', '--out', default=STDIO, help='Output JSON file')
    p.set_defaults(handler=cmd_reconstruct)

    p = sub.add_parser('css', help='Closest separable state and REE')
    p.add_argument('state', help='State JSON file ("-" for stdin)')
    p.add_argument('--method', choices=('geometric', 'numeric', 'auto'),
                   default='auto', help='Solver (default: auto)')
    p.add_argument('--bits', action='store_true',
                   help='Report the REE in bits instead of nats')
    p.add_argument('-o', '--out', default=STDIO, help='Output JSON file')
    _add_oracle_flags(p)
    p.set_defaults(handler=cmd_css)

    p = sub.add_parser('surface', help='Mesh of the T or L boundary')
    p.add_argument('--body', choices=[b.value for b in Body], required=True)
    p.add_argument('--r', type=_bloch_component, default=0.0)
    p.add_argument('--s', type=_bloch_component, default=0.0)
    p.add_argument('--n', type=int, default=64, help='Grid size (default: 64)')
    p.add_argument('--out', required=True, help='Output CSV file')
    p.set_defaults(handler=cmd_surface)

    p = sub.add_parser('sweep', help='Reverse-map lines of σ_Z families')
    p.add_argument('--r', type=_bloch_component, default=0.0)
    p.add_argument('--s', type=_bloch_component, default=0.0)
    p.add_argument('--families', type=_non_negative_int, default=8,
                   help='Number of families (default: 8)')
    p.add_argument('--xsteps', type=int, default=21,
                   help='Points per family (default: 21)')
    p.add_argument('--xmax', type=float, default=4.0,
                   help='Largest family parameter (default: 4.0)')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--bell-diagonal', action='store_true',
                   dest='bell_diagonal',
                   help='Constrain the families to r = s = 0')
    p.add_argument('--out', required=True, help='Output CSV file')
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser('verify', help='Run self-check suites')
    p.add_argument('--suite', choices=[*SUITES, 'all'], default='all')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--count', type=_non_negative_int, default=10,
                   help='Random samples per check (default: 10)')
    p.add_argument('--out', default=None, help='JSON report file')
    _add_oracle_flags(p)
    p.set_defaults(handler=cmd_verify)
    return parser


def _set_log_level(args):
    if args.quiet:
        logger.set_level(Logger.Level.ERROR)
    elif args.verbose >= 2:
        logger.set_level(Logger.Level.TRACE)
    elif args.verbose == 1:
        logger.set_level(Logger.Level.DEBUG)
    else:
        logger.set_level(Logger.Level.WARNING)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _set_log_level(args)
    try:
        return args.handler(args)
    except NotSolvableFamilyError as exc:
        logger.error(str(exc), src=args.command)
        return EXIT_UNSUPPORTED
    except NotConvergedError as exc:
        logger.error(str(exc), src=args.command)
        return EXIT_CHECK_FAILED
    except (ReeGeomError, ValueError, TypeError, OSError) as exc:
        logger.error(str(exc), src=args.command)
        return EXIT_INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())

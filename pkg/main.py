"""
WalkLab
Decoherent time-inhomogeneous quantum walks: simulate, sweep, fit and compare
"""
import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from src import __version__
from src.experiments.compare import run_compare
from src.experiments.config import ExperimentConfig, read_config_values
from src.experiments.fitting import run_fit
from src.experiments.simulate import run_simulate
from src.experiments.sweep import PRESETS, Statistic, SweepGrid, parse_values, run_preset, run_sweep
from src.utils.config import Config, parse_grid
from src.utils.logger import get_logger
from src.walk.params import InitialState

logger = get_logger(__name__)


class CommandLineError(ValueError):
    """Bad command line (unknown flag, missing argument)"""


class WalkLabParser(argparse.ArgumentParser):
    """Raises instead of printing usage, so every failure ends in one JSON error line"""

    def error(self, message):
        raise CommandLineError(message)


def add_walk_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--lambda', dest='lam', help='coin family scale lambda')
    parser.add_argument('--zeta', help='coin family exponent zeta')
    parser.add_argument('--p', help='decoherence strength in [0, 1]')
    parser.add_argument('--family', help='measurement family: total, coin or position')
    parser.add_argument('--init', help="initial coin: basis:1, basis:2, symmetric, balanced or 'a1,a2'")
    parser.add_argument('--alpha', help='tail level for alpha_t')
    parser.add_argument('--gamma', help='rescaling exponent')
    parser.add_argument('--samples', help="trajectories, or 'n_sigma/n_I/n_Y' for siy")
    parser.add_argument('--seed', help='master seed')
    parser.add_argument('--workers', help='worker processes (0 = all CPUs)')
    parser.add_argument('--config', type=Path, help='KEY=VALUE experiment file; flags override it')


def build_parser() -> argparse.ArgumentParser:
    parser = WalkLabParser(prog='walklab', description=__doc__.strip().splitlines()[1])
    parser.add_argument('--version', action='version', version=f"walklab {__version__}")
    commands = parser.add_subparsers(dest='command', required=True)

    simulate = commands.add_parser('simulate', help='one distribution at time t')
    add_walk_flags(simulate)
    simulate.add_argument('--t', help='horizon')
    simulate.add_argument('--method', help='exact, trajectory, siy, classical or pure')
    simulate.add_argument('--out', help='output CSV path')

    sweep = commands.add_parser('sweep', help='statistic series over a (lambda, zeta, p) grid')
    add_walk_flags(sweep)
    sweep.add_argument('--t', help="time grid: 'start:stop:step' or comma list (default FIT_GRID)")
    sweep.add_argument('--preset', choices=sorted(PRESETS), help='reproduce one of the rate tables')
    sweep.add_argument('--statistic', default=Statistic.ALPHA_T.value, choices=[s.value for s in Statistic])
    sweep.add_argument('--no-fit', action='store_true', help='skip the decay fits')
    sweep.add_argument('--out', type=Path, default=Config.RESULTS_DIR, help='output directory')
    sweep.add_argument('--name', default=None, help='file name prefix (default: preset name or sweep)')

    fit = commands.add_parser('fit', help='fit both decay models to a t,value CSV')
    fit.add_argument('series', type=Path)
    fit.add_argument('--out', type=Path, help='coefficients CSV path')

    compare = commands.add_parser('compare', help='KS against a reference density or TV against another result')
    compare.add_argument('result', type=Path)
    compare.add_argument('--reference', help="arcsine, uniform, semicircle, konno, beta:<lam> or gaussian:<var>")
    compare.add_argument('--other', type=Path, help='second result CSV (TV distance)')
    compare.add_argument('--gamma', type=float, default=1.0)
    return parser


def flag_values(args: argparse.Namespace) -> dict:
    """Flags in the config-file key grammar; unset flags are dropped"""
    values = {
        'lambda': args.lam, 'zeta': args.zeta, 'p': args.p, 't': args.t, 'family': args.family,
        'init': args.init, 'alpha': args.alpha, 'gamma': args.gamma, 'samples': args.samples,
        'seed': args.seed, 'workers': args.workers,
        'method': getattr(args, 'method', None), 'out': getattr(args, 'out', None),
    }
    return {key: value for key, value in values.items() if value is not None}


def command_simulate(args: argparse.Namespace) -> dict:
    overrides = flag_values(args)
    if args.config is not None:
        config = ExperimentConfig.from_file(args.config, overrides)
    else:
        config = ExperimentConfig.from_mapping(overrides)
    result = run_simulate(config)
    return {'csv': str(result.csv_path), 'metadata': str(result.metadata_path), **result.metadata['summary']}


def command_sweep(args: argparse.Namespace) -> dict:
    values = read_config_values(args.config) if args.config is not None else {}
    values.update({key: value for key, value in flag_values(args).items() if key not in ('out', 'method')})

    options = {
        'init': InitialState.parse(values['init']) if 'init' in values else None,
        'alpha': float(values.get('alpha', Config.TAIL_ALPHA)),
        'gamma': float(values.get('gamma', 1.0)),
        'fit': not args.no_fit,
        'samples': int(values.get('samples', Config.DEFAULT_TRAJECTORIES)),
        'seed': int(values.get('seed', Config.DEFAULT_SEED)),
        'workers': int(values['workers']) if 'workers' in values else None,
    }

    if args.preset:
        result = run_preset(args.preset, out_dir=args.out, **options)
    else:
        missing = [key for key in ('lambda', 'zeta', 'p') if key not in values]
        if missing:
            raise ValueError(f"sweep needs --preset or values for {', '.join('--' + key for key in missing)}")
        grid = SweepGrid(
            lams=parse_values(values['lambda']),
            zetas=parse_values(values['zeta']),
            ps=parse_values(values['p']),
            times=parse_grid(str(values['t'])) if 't' in values else Config.FIT_GRID,
            family=values.get('family', 'total'),
        )
        result = run_sweep(grid, Statistic(args.statistic), out_dir=args.out, name=args.name or 'sweep', **options)

    summary = {'files': {key: str(path) for key, path in result.paths.items()}, 'failures': len(result.failures)}
    if result.coefficients is not None:
        summary['rational_rate_ranges'] = {str(p): list(span) for p, span in result.rate_ranges().items()}
    return summary


def command_fit(args: argparse.Namespace) -> dict:
    coefficients = run_fit(args.series, args.out)
    return {'fits': coefficients.to_dict(orient='records')}


def command_compare(args: argparse.Namespace) -> dict:
    return run_compare(args.result, reference=args.reference, other_path=args.other, gamma=args.gamma)


COMMANDS = {
    'simulate': command_simulate,
    'sweep': command_sweep,
    'fit': command_fit,
    'compare': command_compare,
}


def main(argv=None) -> int:
    command = 'walklab'
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        summary = COMMANDS[command](args)
    except Exception as e:
        logger.error(f"{command} failed: {e}")
        print(json.dumps({'error': type(e).__name__, 'message': str(e)}), file=sys.stderr)
        return 1
    print(json.dumps(summary, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/python3

import argparse
import logging
import sys

from Controllers import Cli, load_config
from Models import AuditError, EXIT_FAILURE, PropertyKind, TestId
from Models.Configs import DEFAULT_B, Consensus, Correction, Mode
from Models.Dataset import DEFAULT_MIN_STRATUM
from Models.Scm import MODERATE_EFFECT

log = logging.getLogger('audit')

# flags each command cannot run without
REQUIRED = {
    'audit': ('data', 'manifest'),
    'accuracy': ('data', 'manifest'),
    'trend': ('data', 'manifest'),
    'symmetry': ('landmarks',),
}


def global_flags():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--data', type=str, help="This is the path of the sample table (CSV).")
    parser.add_argument('--manifest', type=str, help="This is the path of the property manifest (JSON).")
    parser.add_argument('--out', type=str, default='out', help="This is the output directory.")
    parser.add_argument('--seed', type=int, default=0, help="This is the seed all randomness derives from.")
    parser.add_argument('--jobs', type=int, default=1, help="This is the number of concurrent workers.")
    parser.add_argument('--alpha', type=float, default=0.01, help="This is the significance level.")
    parser.add_argument('--tests', nargs='+', choices=[t.value for t in TestId],
                        default=[t.value for t in TestId], help="These are the committee members to run.")
    parser.add_argument('--consensus', choices=[c.value for c in Consensus], default=Consensus.majority.value)
    parser.add_argument('--mode', choices=[m.value for m in Mode], default=Mode.stratify.value)
    parser.add_argument('--correction', choices=[c.value for c in Correction], default=Correction.none.value)
    parser.add_argument('--B', type=int, default=DEFAULT_B, help="This is the number of null surrogates.")
    parser.add_argument('--min-stratum', type=int, default=DEFAULT_MIN_STRATUM)
    parser.add_argument('--svg', action='store_true', help="Also render SVG figures.")
    parser.add_argument('--config', type=str, help="JSON defaults or a run_manifest.json to replay.")
    parser.add_argument('-v', '--verbose', action='store_true')
    return parser


def scm_flags(default_kind, default_n, default_effect):
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--kind', type=str, default=default_kind,
                        help="null, direct or pipeline (or the full kind names).")
    parser.add_argument('--n', type=int, default=default_n)
    parser.add_argument('--effect-size', type=float, default=default_effect)
    parser.add_argument('--noise-std', type=float, default=1.0)
    parser.add_argument('--property-kind', choices=[k.value for k in PropertyKind], default='scalar')
    parser.add_argument('--classes', type=int, default=7)
    return parser


def build_parser():
    parent = global_flags()
    parser = argparse.ArgumentParser(description="Audit which sample properties a classifier's logits depend on.")
    commands = parser.add_subparsers(dest='command', required=True)
    subparsers = {}

    audit = subparsers['audit'] = commands.add_parser('audit', parents=[parent], help="Run the test committee.")
    audit.add_argument('--format', choices=('csv', 'json', 'text_grid', 'all'), default='all')
    audit.add_argument('--run-label', type=str, default='run', help="This is the model or run name.")

    accuracy = subparsers['accuracy'] = commands.add_parser('accuracy', parents=[parent])
    accuracy.add_argument('--group-by', nargs='*', default=[], help="Property abbreviations to split by.")
    accuracy.add_argument('--classes', nargs='*', default=None, help="Restrict the table to these classes.")

    trend = subparsers['trend'] = commands.add_parser('trend', parents=[parent])
    trend.add_argument('--property', type=str, help="Property abbreviation; all when omitted.")
    trend.add_argument('--class', dest='class_name', type=str, help="Class name; all when omitted.")
    trend.add_argument('--window-frac', type=float, default=0.1)
    trend.add_argument('--stride-frac', type=float, default=0.025)

    symmetry = subparsers['symmetry'] = commands.add_parser('symmetry', parents=[parent])
    symmetry.add_argument('--landmarks', type=str, help="This is the landmark CSV.")
    symmetry.add_argument('--images', type=str, help="Directory of <sample_id>.pgm images.")

    calibrate = subparsers['calibrate'] = commands.add_parser(
        'calibrate', parents=[parent, scm_flags('null', 500, MODERATE_EFFECT)])
    calibrate.add_argument('--trials', type=int, default=200)

    subparsers['fixture'] = commands.add_parser('fixture', parents=[parent, scm_flags('pipeline', 700, MODERATE_EFFECT)])

    return parser, subparsers


def parse_args(argv=None):
    parser, subparsers = build_parser()
    args = parser.parse_args(argv)

    if args.config:
        command = subparsers[args.command]
        known = {action.dest for action in command._actions}
        defaults = load_config(args.config)
        ignored = sorted(set(defaults) - known)
        if ignored:
            log.warning('ignoring unknown config keys %s', ignored)
        # explicit flags still win over the file
        command.set_defaults(**{k: v for k, v in defaults.items() if k in known and k not in ('config', 'command')})
        args = parser.parse_args(argv)

    for name in REQUIRED.get(args.command, ()):
        if getattr(args, name) is None:
            subparsers[args.command].error(f'the following arguments are required: --{name}')
    return args


def main(argv=None):
    try:
        args = parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                            format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
        return Cli(args).run()
    except AuditError as e:
        print(f'error: {e}', file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())

import argparse
import logging
import os
import sys
from typing import List, Optional

from driftbench.cli.commands import (cmd_active, cmd_features, cmd_ingest,
                                     cmd_report, cmd_synth, cmd_windows)
from driftbench.cli.config import RunConfig, resolve_threads
from driftbench.errors import ConfigError, DriftBenchError
from driftbench.utils import setup_logger
from driftbench.version import __version__

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog='driftbench',
        description="Temporal malware-detection benchmark: feature "
        "selection, sliding windows, active learning and reports.")
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    parser.add_argument('--config', help="INI run configuration")
    parser.add_argument('--seed', type=int, help="master seed")
    parser.add_argument('--out', help="output directory")
    parser.add_argument('--threads', type=int,
                        help="worker threads (default $DRIFTBENCH_THREADS "
                        "or 1)")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="progress bars (-v) and debug logs (-vv)")
    sub = parser.add_subparsers(dest='command', metavar='COMMAND',
                                parser_class=ArgumentParser)
    sub.required = True

    p = sub.add_parser('ingest', help="read a manifest and feature files")
    p.add_argument('--manifest')
    p.add_argument('--features-dir')

    p = sub.add_parser('features', help="rank features, vectorize corpus")
    p.add_argument('--corpus', help="default: <out>/corpus.txt")
    p.add_argument('--top-n', type=int)
    p.add_argument('--scope', '--mi-scope', dest='scope',
                   choices=('train', 'all'))
    p.add_argument('--initial-span', type=int)
    p.add_argument('--train-end', help="exclusive YYYY-MM-DD cut-off")

    p = sub.add_parser('windows', help="sliding-window experiments")
    p.add_argument('--dataset', help="default: <out>/dataset.sparse")
    p.add_argument('--batch-size', type=int)
    p.add_argument('--mal-per-batch', type=int)
    p.add_argument('--train-batches', help="e.g. '4,5,6'")
    p.add_argument('--models', help="e.g. 'nb,svm,rf'")
    p.add_argument('--threshold', type=float)

    p = sub.add_parser('active', help="monthly active learning")
    p.add_argument('--dataset', help="default: <out>/dataset.sparse")
    p.add_argument('--budget', help="e.g. '50,100,200,400'")
    p.add_argument('--model')
    p.add_argument('--initial-span', type=int)
    p.add_argument('--weighting', choices=('uniform', 'size'))
    p.add_argument('--retune', action='store_true', default=None)
    p.add_argument('--threshold', type=float)

    p = sub.add_parser('synth', help="generate a synthetic drifting corpus")
    p.add_argument('--spec', help="INI file with a [synth] section")
    p.add_argument('--n-apps', type=int)
    p.add_argument('--drift', help="e.g. '2013-01-01:40,2013-07-01:20'")

    p = sub.add_parser('report', help="consolidate a run directory")
    p.add_argument('--run', help="default: <out>")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config)
    config.override('run', seed=args.seed, out=args.out)
    if args.command == 'ingest':
        config.override('corpus', manifest=args.manifest,
                        features=args.features_dir)
    elif args.command == 'features':
        config.override('features', top_n=args.top_n, scope=args.scope,
                        initial_span=args.initial_span,
                        train_end=args.train_end)
    elif args.command == 'windows':
        config.override('windows', batch_size=args.batch_size,
                        mal_per_batch=args.mal_per_batch,
                        train_batches=args.train_batches,
                        models=args.models)
        config.override('run', threshold=args.threshold)
    elif args.command == 'active':
        config.override('active', budget=args.budget, model=args.model,
                        initial_span=args.initial_span,
                        weighting=args.weighting, retune=args.retune)
        config.override('run', threshold=args.threshold)
    elif args.command == 'synth':
        if args.spec:
            config.synth.update(RunConfig.from_file(args.spec).synth)
        config.override('synth', n_apps=args.n_apps, drift=args.drift)
    return config


def run(args: argparse.Namespace, config: RunConfig, n_jobs: int):
    out = config.run.out
    default_dataset = os.path.join(out, 'dataset.sparse')
    if args.command == 'ingest':
        return cmd_ingest(config, n_jobs=n_jobs)
    if args.command == 'features':
        return cmd_features(
            config, args.corpus or os.path.join(out, config.corpus.path))
    if args.command == 'windows':
        return cmd_windows(config, args.dataset or default_dataset,
                           n_jobs=n_jobs)
    if args.command == 'active':
        return cmd_active(config, args.dataset or default_dataset,
                          n_jobs=n_jobs, verbose=args.verbose)
    if args.command == 'synth':
        return cmd_synth(config, n_jobs=n_jobs)
    if args.command == 'report':
        return cmd_report(config, args.run or out)
    raise ConfigError(f"unknown command '{args.command}'.")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        n_jobs = resolve_threads(args.threads, config.run.threads)
        os.makedirs(config.run.out, exist_ok=True)
        level = logging.DEBUG if args.verbose > 1 else logging.INFO
        logger = setup_logger(output=config.run.out, level=level)
        logger.info(f"driftbench {__version__} {args.command} "
                    f"(seed={config.run.seed}, threads={n_jobs})")
        for path in run(args, config, n_jobs):
            logger.info(f"Wrote {path}")
    except DriftBenchError as e:
        print(str(e), file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as e:
        print(f"[io] {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

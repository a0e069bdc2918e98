"""Run BASE-PC and total-order polynomial chaos experiments."""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
import numpy as np
from tqdm import tqdm
from .. import defaults
from .._registration import make
from ..adaptation import BasePC, TotalOrderBaseline
from ..metrics import MetricsSink, summary_table
from .config import ConfigError, load_config


logger = logging.getLogger(__name__)


def _get_args(argv=None):
    """Parse command line arguments and return them."""
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--verbose",
        "-v",
        action="count",
        default=0,
        help="log INFO messages with -v and DEBUG messages with -vv",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="The base seed, overriding the experiment file",
    )
    parser.add_argument(
        "--out",
        type=str,
        default=None,
        help="The output directory, overriding the experiment file",
    )
    parser.add_argument(
        "--ref-rrmse",
        type=int,
        default=None,
        metavar="N",
        help="Compute the reference RRMSE on N draws at every iteration",
    )
    parser.add_argument(
        "--quiet",
        "-q",
        action="store_true",
        help="Hide the progress bar",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    run = commands.add_parser("run", help="Run one method of an experiment")
    run.add_argument("config", type=str, help="The JSON experiment file")
    compare = commands.add_parser("compare", help="Run and compare several methods")
    compare.add_argument("config", type=str, help="The JSON experiment file")
    # parse arguments and return them
    return parser.parse_args(argv)


def _configure_logging(verbosity):
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbosity, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _driver(experiment, method, seed):
    """Build the run of one method with its own seed."""
    qoi = make(experiment.qoi, **experiment.qoi_kwargs)
    cfg = replace(experiment.run, seed=seed, sample_mode=method.sample_mode)
    if method.name == defaults.TOTAL_ORDER:
        return TotalOrderBaseline(cfg, qoi, method.order)
    return BasePC(cfg, qoi)


def _run_method(experiment, method, seed, out_dir, quiet):
    """
    Run one method, streaming its records to a CSV log.

    Returns:
        the list of IterationRecord

    """
    driver = _driver(experiment, method, seed)
    snapshot = experiment.to_dict()
    snapshot.update(method=method.label, run=driver.cfg.to_dict())
    path = out_dir / "{}.csv".format(method.label)
    with MetricsSink(path, snapshot) as sink:
        progress = tqdm(
            total=driver.cfg.max_iterations + 1, desc=method.label, disable=quiet
        )

        def on_record(record):
            sink.write(record)
            progress.update(1)
            progress.set_postfix(N=record.n_samples, B=record.n_basis, cv=record.cv_rrmse)

        try:
            surrogate, records = driver.run(on_record)
        finally:
            progress.close()
        sink.close(surrogate.to_dict())
    return records


def run(experiment, quiet=False):
    """Run the single method of an experiment, return the records."""
    out_dir = Path(experiment.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    return _run_method(
        experiment, experiment.methods[0], experiment.seed, out_dir, quiet
    )


def compare(experiment, quiet=False):
    """
    Run every method of an experiment and write the joined summary.

    Each method runs with its own substream of the base seed.

    Returns:
        the summary DataFrame

    """
    out_dir = Path(experiment.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    streams = np.random.SeedSequence(experiment.seed).spawn(len(experiment.methods))
    logs = {}
    for method, stream in zip(experiment.methods, streams):
        seed = int(stream.generate_state(1)[0])
        logs[method.label] = _run_method(experiment, method, seed, out_dir, quiet)
    table = summary_table(logs)
    table.to_csv(out_dir / "summary.csv", index=False, float_format="%.17g")
    return table


def main(argv=None):
    """The main entry point for the command line interface."""
    # parse arguments from the command line (argparse validates arguments)
    args = _get_args(argv)
    _configure_logging(args.verbose)
    try:
        experiment = load_config(
            args.config,
            args.command,
            seed=args.seed,
            output=args.out,
            n_ref=args.ref_rrmse,
        )
    except ConfigError as error:
        print("invalid experiment {}: {}".format(args.config, error))
        sys.exit(2)
    try:
        if args.command == "run":
            run(experiment, args.quiet)
        else:
            compare(experiment, args.quiet)
    except Exception as error:
        logger.debug("experiment failed", exc_info=True)
        print("experiment {} failed: {}".format(args.config, error))
        sys.exit(1)
    sys.exit(0)


# explicitly define the outward facing API of this module
__all__ = [main.__name__]

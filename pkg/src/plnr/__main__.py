import argparse
import logging
import signal
import sys

from .common import InvariantBreach
from .db import applySchema, checkConnection
from .engine import Engine
from .jobSpec import COMMANDS, JobSpec
from .reports import dumpReport

logger = logging.getLogger(__name__)

# Configure the top-level "plnr" logger so all plnr.* submodules inherit the
# handler. Stderr only: stdout carries the JSON report.
_formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
_handler = logging.StreamHandler(sys.stderr)
_handler.setFormatter(_formatter)

logging.getLogger("plnr").setLevel(logging.INFO)
logging.getLogger("plnr").addHandler(_handler)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _intList(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a comma separated list of integers")


def _range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("..")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a range lo..hi")


def parseArguments(argv: list[str] | None = None) -> argparse.Namespace:
    parser = _Parser(prog="plnr", description="plnr: planar functions, semifields and relative difference sets.")
    parser.add_argument("command", type=str, choices=COMMANDS, help="Pipeline to run.")
    parser.add_argument("--field", type=str, help="Field spec p^m or p^m/c0,...,cm.", default=None)
    parser.add_argument("--fn", type=str, help="Sparse polynomial e:c,... or a hex truth table (negabent, bent).", default=None)
    parser.add_argument("--arity", type=int, help="Number of variables of a truth table.", default=None)
    parser.add_argument("--group", type=str, help="Group spec Zn, Zn1xZn2 or cocycle:<field>:product|zero|albertK|twistedK|form=<rows>.", default=None)
    parser.add_argument("--forbidden", type=str, help="Generators of the forbidden subgroup.", default=None)
    parser.add_argument("--set", dest="elements", type=str, help="Elements of R, codes or (a,b) tuples.", default=None)
    parser.add_argument("--subgroup", type=str, help="Generators of U for rds-project.", default=None)
    parser.add_argument("--range", dest="dRange", type=_range, help="Exponent range lo..hi for planar-search.", default=None)
    parser.add_argument("--convention", type=str, choices=["odd", "even"], help="Planarity convention.", default=None)
    parser.add_argument("--no-restrict", action="store_true", help="Odd search: test every exponent, not only p-free ones.", default=False)
    parser.add_argument("--rule", type=str, choices=["field", "albert", "twisted", "planar"], help="Pre-semifield product.", default=None)
    parser.add_argument("--k", type=int, help="Frobenius exponent of the albert and twisted rules.", default=None)
    parser.add_argument("--identity", type=int, help="Element e for the semifield x*e, e*y rescaling.", default=None)
    parser.add_argument("--source", type=str, choices=["semifield", "rds"], help="Design source.", default=None)
    parser.add_argument("--dual", action="store_true", help="Use the dual incidence structure.", default=False)
    parser.add_argument("--chain", type=_intList, help="Kantor subfield degrees, descending.", default=None)
    parser.add_argument("--zetas", type=_intList, help="Kantor zeta per subfield.", default=None)
    parser.add_argument("--direction", type=int, help="Kantor: c defining the component Tr(c f(x)).", default=None)
    parser.add_argument("--no-four-block", action="store_true", help="bent: skip the four-block negabent output.", default=False)
    parser.add_argument("--names", type=str, help="fixtures: comma separated subset to run.", default=None)
    parser.add_argument("-i", "--input", type=str, help="Input file (rds, semifield or incidence).", default=None)
    parser.add_argument("-o", "--out", type=str, help="Output file for the built object.", default=None)
    parser.add_argument("--report", type=str, help="Also write the JSON report to this path.", default=None)
    parser.add_argument("-t", "--threads", type=int, help="Worker threads (default $PLNR_THREADS or CPU count).", default=None)
    parser.add_argument("--seed", type=int, help="Seed for sampled checks.", default=None)
    parser.add_argument("--samples", type=int, help="Sample count for sampled checks.", default=None)
    parser.add_argument("-sql", type=str, help="IP of postgreSQL database.", default=None)
    parser.add_argument("-p", "--port", type=int, help="Port of the postgreSQL database.", default=5432)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging.", default=False)
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only.", default=False)

    args = parser.parse_args(argv)
    return args


def checkArguments(args: argparse.Namespace) -> JobSpec:
    if args.verbose:
        logging.getLogger("plnr").setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger("plnr").setLevel(logging.WARNING)
    else:
        logging.getLogger("plnr").setLevel(logging.INFO)

    if args.sql is not None:
        if checkConnection(args.sql, args.port):
            logger.info("Successfully connected to PostgreSQL database.")
            if not applySchema(args.sql, args.port):
                logger.warning("Report tables could not be created; inserts may fail.")
        else:
            logger.warning("Failed to connect to PostgreSQL database; the report stays local.")
            args.sql = None

    options = {
        "subgroup": args.subgroup,
        "noRestrict": args.no_restrict or None,
        "rule": args.rule,
        "k": args.k,
        "identity": args.identity,
        "source": args.source,
        "dual": args.dual or None,
        "chain": args.chain,
        "zetas": args.zetas,
        "direction": args.direction,
        "fourBlock": False if args.no_four_block else None,
        "names": [n.strip() for n in args.names.split(",")] if args.names else None,
        "reportPath": args.report,
    }
    extra = {}
    if args.seed is not None:
        extra["seed"] = args.seed
    if args.samples is not None:
        extra["samples"] = args.samples

    return JobSpec(
        command=args.command,
        fieldSpec=args.field,
        fnSpec=args.fn,
        arity=args.arity,
        groupSpec=args.group,
        forbidden=args.forbidden,
        elements=args.elements,
        dRange=args.dRange,
        convention=args.convention,
        outputPath=args.out,
        inputPath=args.input,
        threads=args.threads,
        sqlIP=args.sql,
        sqlPort=args.port,
        options={k: v for k, v in options.items() if v is not None},
        **extra,
    )


def _handle_shutdown(signum, frame):
    logger.info(f"Received signal {signum}, shutting down.")
    sys.exit(EXIT_INTERNAL)


def main(argv: list[str] | None = None) -> int:
    signal.signal(signal.SIGTERM, _handle_shutdown)
    signal.signal(signal.SIGINT, _handle_shutdown)

    args = parseArguments(argv)
    try:
        job = checkArguments(args)
        logger.debug(f"Running {job.command} with {job.toDict()}")
        report = Engine(job).run()
    except InvariantBreach:
        logger.exception("Internal invariant breached")
        return EXIT_INTERNAL
    except ValueError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except Exception:
        logger.exception("Unexpected failure")
        return EXIT_INTERNAL

    print(dumpReport(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

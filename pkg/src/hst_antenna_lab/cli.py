"""``hst-antenna-lab`` command line.

Exit codes: 0 success, 2 invalid input, 3 constraint violation (spacing or
regime), 4 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .analytic import validation_report
from .deployment import deployment_from_dict
from .errors import HSTLabError, InvalidParameterError
from .harness import FIGURE_IDS, load_sweep_spec, run_figure, run_sweep, timestamp, write_sweep_csv
from .metrics import (
    DEFAULT_REFINE_TOL,
    DEFAULT_REL_TOL,
    outage_report,
    sample_trace,
    service_amount,
    write_outage_csv,
    write_trace_csv,
)
from .scenario import load_scenario_file

log = logging.getLogger("hst_antenna_lab")


def _scenario_and_deployment(path):
    scenario, raw = load_scenario_file(path)
    if "deployment" not in raw:
        raise InvalidParameterError(f"{path}: this command needs a 'deployment' section")
    return scenario, deployment_from_dict(raw["deployment"], scenario)


def cmd_trace(args):
    scenario, dep = _scenario_and_deployment(args.scenario)
    trace = sample_trace(scenario, dep, args.step)
    footer = [] if args.reproducible else [f"generated={timestamp()}"]
    write_trace_csv(args.out, trace, scenario, include_snrs=args.snrs, footer=footer)


def cmd_service(args):
    scenario, dep = _scenario_and_deployment(args.scenario)
    print(format(service_amount(scenario, dep, rel_tol=args.rel_tol), ".17g"))


def cmd_otr(args):
    scenario, dep = _scenario_and_deployment(args.scenario)
    report = outage_report(scenario, dep, args.cth, scan_step=args.scan_step, refine_tol=args.refine_tol)
    if args.out:
        footer = [] if args.reproducible else [f"generated={timestamp()}"]
        write_outage_csv(args.out, report, footer=footer)
    print(format(report.otr, ".17g"))


def cmd_sweep(args):
    scenario, _ = load_scenario_file(args.scenario)
    spec = load_sweep_spec(args.spec)
    result = run_sweep(scenario, spec, workers=args.workers)
    write_sweep_csv(args.out, result, reproducible=args.reproducible)


def cmd_figure(args):
    for path in run_figure(args.id, args.out, reproducible=args.reproducible, workers=args.workers):
        print(path)


def cmd_validate(args):
    scenario, _ = load_scenario_file(args.scenario)
    report = validation_report(scenario, args.separation, args.cth, groups_n=args.n, groups_delta=args.delta)
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")


def build_parser():
    p = argparse.ArgumentParser(prog="hst-antenna-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log skipped sweep combinations")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, reproducible=True):
        sp.add_argument("--scenario", required=True, metavar="FILE")
        if reproducible:
            sp.add_argument(
                "--reproducible", action="store_true", help="omit the timestamp comment line from CSV output"
            )

    sp = sub.add_parser("trace", help="sample C(t) over the window into a CSV")
    common(sp)
    sp.add_argument("--out", required=True, metavar="FILE.csv")
    sp.add_argument("--step", type=float, default=1e-3, metavar="SEC")
    sp.add_argument("--snrs", action="store_true", help="add per-antenna SNR columns")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("service", help="print the service amount")
    common(sp, reproducible=False)
    sp.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL, metavar="X")
    sp.set_defaults(func=cmd_service)

    sp = sub.add_parser("otr", help="print the outage time ratio")
    common(sp)
    sp.add_argument("--cth", type=float, required=True, metavar="BITS")
    sp.add_argument("--scan-step", type=float, default=None, metavar="SEC")
    sp.add_argument("--refine-tol", type=float, default=DEFAULT_REFINE_TOL, metavar="SEC")
    sp.add_argument("--out", metavar="FILE.csv", help="also write the outage intervals")
    sp.set_defaults(func=cmd_otr)

    sp = sub.add_parser("sweep", help="run a parameter sweep from a JSON spec")
    common(sp)
    sp.add_argument("--spec", required=True, metavar="FILE")
    sp.add_argument("--out", required=True, metavar="FILE.csv")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("figure", help="write the CSVs for one result figure")
    sp.add_argument("--id", required=True, choices=FIGURE_IDS)
    sp.add_argument("--out", required=True, metavar="DIR")
    sp.add_argument("--reproducible", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("validate", help="closed-form versus numeric report for two antennas (JSON)")
    common(sp, reproducible=False)
    sp.add_argument("--separation", type=float, required=True, metavar="M")
    sp.add_argument("--cth", type=float, required=True, metavar="BITS")
    sp.add_argument("--n", type=int, default=4, help="antenna count for the group-distance table")
    sp.add_argument("--delta", type=float, default=1.0, help="fixed interval for the group-distance table")
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except HSTLabError as exc:
        print(f"hst-antenna-lab: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())

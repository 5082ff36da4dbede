"""
Command-line interface for CausalLab.
Every subcommand is a thin layer over the scenario view model and services.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import config
from models.causet import Causet, Slice
from models.errors import CausalLabError, ScenarioParseError, ScenarioValidationError
from models.scenario import CheckSpec, Expectation, Report
from models.spacetime import Event, SpacetimeModel, SurfaceGrid, Window
from utils.file_utils import dumps_json, read_json, to_jsonable, write_json_atomic, write_text_atomic
from viewmodels.scenario_viewmodel import CHECKS, ScenarioViewModel
from views.render import CausetRenderer

logger = logging.getLogger(__name__)


def _model(args: argparse.Namespace) -> SpacetimeModel:
    window = None
    if args.window:
        half = len(args.window) // 2
        window = Window(args.window[:half], args.window[half:])
    excision = Event.from_sequence(args.excise_at) if getattr(args, 'excise_at', None) else None
    return SpacetimeModel.from_label(args.model, window, excision)


def _emit(data, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(dumps_json(data))
    else:
        write_json_atomic(out, data)
        logger.info("Wrote %s", out)


def _load_causet(vm: ScenarioViewModel, path: Path) -> Causet:
    return vm.causets.causet_from_dict(read_json(path))


def _slice(vm: ScenarioViewModel, c: Causet, args: argparse.Namespace) -> Optional[Slice]:
    if getattr(args, 'points', None):
        return vm.causets.make_slice(c, args.points, "points")
    if getattr(args, 'level', None) is not None:
        return vm.causets.level_slice(c, args.level)
    return None


def _print_report(report: Report) -> None:
    for result in report.checks:
        status = "ok" if result.satisfied else "FAILED"
        print(f"  {result.name:<24} verdict={str(result.verdict):<5} expect={result.expect.value:<9} {status}")
    summary = report.summary()
    print(f"{report.scenario}: {summary['satisfied']}/{summary['total']} checks satisfied")


# ----------------------------------------------------------------------
# Subcommands

def cmd_sprinkle(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    c = vm.causets.sprinkle(_model(args), args.density, args.seed)
    if args.format == 'csv':
        if args.out is None:
            raise ValueError("--format csv needs --out")
        vm.causets.export_relation_csv(c, args.out)
    else:
        _emit(vm.causets.causet_to_dict(c), args.out)
    return config.EXIT_OK


def cmd_slice(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    c = _load_causet(vm, args.causet)
    slice_ = _slice(vm, c, args)
    if slice_ is None:
        raise ValueError("Give --level or --points")
    if args.through is not None:
        slice_ = vm.causets.slice_through_point(c, slice_, args.through)
    _emit(to_jsonable(slice_), args.out)
    return config.EXIT_OK


def cmd_excise(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    c = _load_causet(vm, args.causet)
    excision = vm.causets.excise(c, args.point)
    data = vm.causets.causet_to_dict(excision.causet)
    data['to_ambient'] = list(excision.to_ambient)
    _emit(data, args.out)
    return config.EXIT_OK


def cmd_diamonds(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    c = _load_causet(vm, args.causet)
    slice_ = _slice(vm, c, args)
    if slice_ is None:
        raise ValueError("Give --level or --points")
    diamonds = vm.causets.diamonds_on_slice(c, slice_, args.samples)
    _emit([{'base': sorted(d.base), 'span': sorted(d.span)} for d in diamonds], args.out)
    return config.EXIT_OK


def cmd_deform(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    grid = SurfaceGrid.cube(args.half_width, args.d, args.grid_h)
    tau = vm.surfaces.half_cone_surface(grid)
    p = Event.from_sequence(args.p or [0.0] * (args.d + 1))
    deformed = vm.surfaces.deform_surface_through_point(tau, p, args.eps)
    verification = vm.surfaces.verify_deformation(deformed, tau, p, args.eps)
    if args.out is not None:
        vm.surfaces.export_grid_csv(deformed, args.out)
    print(dumps_json(to_jsonable(verification)), end="")
    return config.EXIT_OK if verification.holds else config.EXIT_CHECK_FAILED


def _run_subset(vm: ScenarioViewModel, args: argparse.Namespace, checks: List[CheckSpec]) -> int:
    scenario = vm.load_scenario(args.scenario)
    scenario = dataclasses.replace(scenario, checks=tuple(checks))
    report = vm.run_scenario(scenario, out=args.out, jobs=1)
    _print_report(report)
    return report.exit_code


def cmd_check(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    params = read_json(args.params) if args.params else {}
    return _run_subset(vm, args, [CheckSpec(args.name, Expectation(args.expect), params)])


def cmd_bridge(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    params = {'p': args.point} if args.point is not None else {}
    return _run_subset(vm, args, [CheckSpec('bridge', Expectation.MUST_HOLD, params)])


def cmd_run(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    report = vm.run_scenario(args.scenario, out=args.out, jobs=args.jobs,
                             fail_fast=True if args.fail_fast else None)
    _print_report(report)
    return report.exit_code


def cmd_report_diff(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    diffs = vm.report_diff(args.first, args.second)
    for line in diffs:
        print(line)
    if args.out is not None:
        write_text_atomic(args.out, "\n".join(diffs) + ("\n" if diffs else ""))
    return config.EXIT_OK if not diffs else config.EXIT_CHECK_FAILED


def cmd_render(vm: ScenarioViewModel, args: argparse.Namespace) -> int:
    c = _load_causet(vm, args.causet)
    CausetRenderer().render(c, args.out, _slice(vm, c, args), args.point)
    return config.EXIT_OK


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causal-lab", description=config.APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.APP_VERSION}")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="Logging level (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_out(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--out", type=Path, default=None, help="Output file (default: stdout)")
        return p

    p = with_out(sub.add_parser("sprinkle", help="Poisson-sprinkle a causal set into a window"))
    p.add_argument("--model", default="mink2", help="mink2, mink3 or mink4 (default: %(default)s)")
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=float, nargs="+", help="Lower corner then upper corner, (t, x...) each")
    p.add_argument("--excise-at", type=float, nargs="+", help="Excision point of the continuum model")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(handler=cmd_sprinkle)

    for name, handler, text in (("slice", cmd_slice, "Build a slice of a stored causal set"),
                                ("diamonds", cmd_diamonds, "List the diamonds on a slice"),
                                ("render", cmd_render, "Render a 1+1 causal set to PNG")):
        p = sub.add_parser(name, help=text)
        p.add_argument("causet", type=Path)
        p.add_argument("--level", type=float, default=None)
        p.add_argument("--points", type=int, nargs="+", default=None)
        p.add_argument("--out", type=Path, default=None, required=name == "render")
        p.set_defaults(handler=handler)
        if name == "slice":
            p.add_argument("--through", type=int, default=None, help="Rebuild the slice through this point")
        if name == "diamonds":
            p.add_argument("--samples", type=int, default=config.DEFAULT_SAMPLE_BUDGET)
        if name == "render":
            p.add_argument("--point", type=int, default=None, help="Marked point whose cones are shaded")

    p = with_out(sub.add_parser("excise", help="Excise a point and its light cones"))
    p.add_argument("causet", type=Path)
    p.add_argument("--point", type=int, required=True)
    p.set_defaults(handler=cmd_excise)

    p = with_out(sub.add_parser("deform", help="Deform the half-cone surface through a point"))
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--half-width", type=float, default=5.0)
    p.add_argument("--grid-h", type=float, default=config.DEFAULT_GRID_H)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--p", type=float, nargs="+", default=None)
    p.set_defaults(handler=cmd_deform)

    p = with_out(sub.add_parser("check", help="Run a single named check against a scenario"))
    p.add_argument("name", choices=sorted(CHECKS))
    p.add_argument("scenario", type=Path)
    p.add_argument("--params", type=Path, default=None, help="JSON file with check parameters")
    p.add_argument("--expect", choices=[e.value for e in Expectation], default=Expectation.MUST_HOLD.value)
    p.set_defaults(handler=cmd_check)

    p = with_out(sub.add_parser("bridge", help="Compare the two cofinal families of a scenario"))
    p.add_argument("scenario", type=Path)
    p.add_argument("--point", type=int, default=None)
    p.set_defaults(handler=cmd_bridge)

    p = with_out(sub.add_parser("run", help="Run every check of a scenario"))
    p.add_argument("scenario", type=Path)
    p.add_argument("--jobs", type=int, default=config.DEFAULT_JOBS)
    p.add_argument("--fail-fast", action="store_true")
    p.set_defaults(handler=cmd_run)

    p = with_out(sub.add_parser("report-diff", help="Compare two reports, ignoring timing fields"))
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)
    p.set_defaults(handler=cmd_report_diff)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.getLogger().setLevel(args.log_level.upper())
    vm = ScenarioViewModel(output_dir=config.OUTPUT_DIR)
    try:
        return args.handler(vm, args)
    except (ScenarioParseError, ScenarioValidationError) as exc:
        logger.error("Invalid scenario: %s", exc)
        return config.EXIT_USAGE
    except (CausalLabError, ValueError, KeyError, OSError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return config.EXIT_USAGE

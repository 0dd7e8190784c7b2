#!/usr/bin/env python3
"""
Command line interface for adsflux.

Subcommands run the verification suites, the convergence scans, and single
operations (projection, flux, holonomy, mesh export) on a validated scenario.
Reports go to the output directory; stdout carries the formatted result and
stderr the log.

Exit status: 0 when every check passes, 1 when a check or operation fails,
2 on usage errors (including malformed loop words), 3 when the scenario
configuration is invalid.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from .adsgeom import FramePoint, project
from .config import SUITE_NAMES, ScenarioConfig, load_config
from .errors import AdsFluxError, ConfigError, LoopWordError
from .lagrangian_lab import (
    IsotopyPath,
    LoopWord,
    SurfaceMesh,
    anchored_holonomy,
    flux,
    relative_holonomy,
    section_closure,
)
from .lie_core import AlgVec, GroupElt
from .report import OutputFormatter, write_report, write_table
from .suites import SCANS, SuiteContext, run_scan, run_verify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3

_logger = logging.getLogger(__name__)


def _point(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


class AdsFluxCLI:
    """Scenario runner with subcommands for suites, scans and single operations"""

    def __init__(self):
        self.setup_argument_parser()

    def setup_argument_parser(self):
        """Setup command line argument parser"""
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--config', help='Scenario JSON file (default: builtin octagon scenario)')
        common.add_argument('--seed', type=int, help='Random seed (default: the scenario seed, 0)')
        common.add_argument('--out', help='Output directory (default: the scenario output directory)')
        common.add_argument(
            '--tol-scale',
            type=float,
            default=1.0,
            help='Multiply every acceptance tolerance by this factor (default: 1.0)'
        )
        common.add_argument(
            '--format',
            choices=['default', 'json', 'csv'],
            default='default',
            help='Output format (default: default)'
        )
        common.add_argument('--verbose', action='store_true', help='Log debugging information to stderr')

        self.arg_parser = argparse.ArgumentParser(
            prog="adsflux",
            description="Flux and holonomy of Lagrangians in H2 x H2 from surfaces in Anti-de Sitter space",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Examples:
  %(prog)s verify                              # Run every acceptance suite
  %(prog)s verify --suite curvature --suite gauss
  %(prog)s verify --tol-scale 0                # Every comparison fails
  %(prog)s scan curvature --format csv         # defect/area against eps
  %(prog)s scan flux-holonomy --config s.json  # Flux and holonomy against duration
  %(prog)s project --g 1 0 0 1 --u 1 0 0       # Projection of a frame point
  %(prog)s flux --family closed-form --duration 0.1 --loop a1
  %(prog)s holonomy --family hamiltonian --loop a1 b1
  %(prog)s mesh-export --subdivision 8 --output mesh.txt
            """
        )
        sub = self.arg_parser.add_subparsers(dest='command', required=True)

        verify = sub.add_parser('verify', parents=[common], help='Run the verification suites')
        verify.add_argument(
            '--suite',
            action='append',
            choices=SUITE_NAMES,
            help='Suite to run; repeat for several (default: the scenario suites)'
        )

        scan = sub.add_parser('scan', parents=[common], help='Run a convergence scan and write its CSV table')
        scan.add_argument('scan', choices=sorted(SCANS), help='Which scan to run')

        proj = sub.add_parser('project', parents=[common], help='Project a frame point (g, u0) to H2 x H2')
        proj.add_argument('--g', type=float, nargs=4, required=True, metavar=('A', 'B', 'C', 'D'),
                          help='Group element [[A, B], [C, D]] with determinant 1')
        proj.add_argument('--u', type=float, nargs=3, required=True, metavar=('J', 'K', "K'"),
                          help='Future unit timelike u0 in the basis J, K, K\'')

        for name, text in (('flux', 'Flux of an isotopy around loop words'),
                           ('holonomy', 'Relative and anchored holonomy around loop words')):
            op = sub.add_parser(name, parents=[common], help=text)
            op.add_argument('--family', choices=['hamiltonian', 'closed-form'], default='hamiltonian',
                            help='Isotopy family (default: hamiltonian)')
            op.add_argument('--hamiltonian', help='Name of the scenario Hamiltonian (default: the first)')
            op.add_argument('--duration', type=float, default=0.1,
                            help='Duration of the closed-form flow (default: 0.1)')
            op.add_argument('--loop', nargs='+', default=None,
                            help='Loop words such as a1 or "a1 b2^-1" (default: the scenario loops)')

        mesh = sub.add_parser('mesh-export', parents=[common], help='Write the genus-two octagon mesh as text')
        mesh.add_argument('--subdivision', type=int, help='Triangles per wedge side (default: scenario numerics)')
        mesh.add_argument('--output', help='Target file (default: <out>/mesh.txt)')

    def run(self, args=None) -> int:
        """Main CLI entry point"""
        if args is None:
            args = sys.argv[1:]

        parsed_args = self.arg_parser.parse_args(args)
        logging.basicConfig(
            level=logging.DEBUG if parsed_args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )

        try:
            config = self._load(parsed_args)
        except ConfigError as e:
            print(f"Configuration error: {e}", file=sys.stderr)
            return EXIT_CONFIG

        handlers = {
            'verify': self._verify,
            'scan': self._scan,
            'project': self._project,
            'flux': self._flux,
            'holonomy': self._holonomy,
            'mesh-export': self._mesh_export,
        }
        try:
            return handlers[parsed_args.command](parsed_args, config)
        except ConfigError as e:
            print(f"Configuration error: {e}", file=sys.stderr)
            return EXIT_CONFIG
        except LoopWordError as e:
            print(f"Usage error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except (AdsFluxError, ValueError) as e:
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_FAILED

    # ---- helpers -------------------------------------------------------------

    def _load(self, args) -> ScenarioConfig:
        """Load and validate the scenario, including its representation and bump supports."""
        config = load_config(args.config)
        ctx = SuiteContext(config, config.seed)
        rep = ctx.rep
        for h in config.hamiltonians:
            h.spec().validate(ctx.domain)
        _logger.debug("scenario: %s representation, %d Hamiltonians", rep.rep_class.value,
                      len(config.hamiltonians))
        return config

    def _out_dir(self, args, config: ScenarioConfig) -> str:
        return args.out if args.out is not None else config.outputs.directory

    def _emit(self, data: Dict[str, Any], args) -> None:
        print(OutputFormatter.format_result(data, args.format))

    def _context(self, args, config: ScenarioConfig) -> SuiteContext:
        seed = config.seed if args.seed is None else args.seed
        return SuiteContext(config, seed, args.tol_scale)

    def _path(self, args, ctx: SuiteContext) -> IsotopyPath:
        if args.family == 'closed-form':
            return ctx.closed_form_path(args.duration)
        names = [h.name for h in ctx.config.hamiltonians]
        if not names:
            raise ConfigError("the scenario defines no Hamiltonians")
        name = args.hamiltonian if args.hamiltonian is not None else names[0]
        if name not in names:
            raise ConfigError(f"unknown Hamiltonian: {name} (choose from {', '.join(names)})")
        return ctx.hamiltonian_path(names.index(name))

    def _loops(self, args, ctx: SuiteContext) -> List[LoopWord]:
        return [LoopWord.parse(w) for w in args.loop] if args.loop else ctx.loops

    # ---- subcommands ---------------------------------------------------------

    def _verify(self, args, config: ScenarioConfig) -> int:
        report = run_verify(config, args.seed, args.tol_scale, args.suite)
        out = config.outputs
        write_report(report, self._out_dir(args, config), out.report, out.timings)
        self._emit(report.to_dict(), args)
        return EXIT_OK if report.passed else EXIT_FAILED

    def _scan(self, args, config: ScenarioConfig) -> int:
        report, table = run_scan(config, args.scan, args.seed, args.tol_scale)
        directory = self._out_dir(args, config)
        write_report(report, directory, f"scan_{table.name}_report.json", f"scan_{table.name}_timings.json")
        write_table(table, directory)
        self._emit(table.to_dict(), args)
        if not report.passed:
            print(OutputFormatter.format_result(report.to_dict(), 'default'), file=sys.stderr)
        return EXIT_OK if report.passed else EXIT_FAILED

    def _project(self, args, config: ScenarioConfig) -> int:
        frame = FramePoint(GroupElt(np.array(args.g).reshape(2, 2)), AlgVec.from_coords(*args.u))
        b = project(frame)
        self._emit({"zl": _point(b.zl), "zr": _point(b.zr)}, args)
        return EXIT_OK

    def _flux(self, args, config: ScenarioConfig) -> int:
        ctx = self._context(args, config)
        words = self._loops(args, ctx)
        path = self._path(args, ctx)
        result: Dict[str, Any] = {"path": path.name}
        for word in words:
            result[str(word)] = flux(path, word, ctx.numerics, ctx.domain)
        self._emit(result, args)
        return EXIT_OK

    def _holonomy(self, args, config: ScenarioConfig) -> int:
        ctx = self._context(args, config)
        words = self._loops(args, ctx)
        path = self._path(args, ctx)
        end = path.end
        result: Dict[str, Any] = {"path": path.name}
        for word in words:
            result[f"{word}.relative"] = relative_holonomy(end, path.start, word, None, ctx.numerics, ctx.domain)
            result[f"{word}.anchored"] = anchored_holonomy(ctx.rep, end, word, ctx.numerics, ctx.domain)
            result[f"{word}.closure"] = section_closure(ctx.rep, end, word, ctx.numerics, ctx.domain)
        self._emit(result, args)
        return EXIT_OK

    def _mesh_export(self, args, config: ScenarioConfig) -> int:
        ctx = self._context(args, config)
        subdivision = args.subdivision if args.subdivision is not None else ctx.numerics.mesh_subdivision
        mesh = SurfaceMesh.octagon(subdivision, ctx.domain)
        target = Path(args.output) if args.output else Path(self._out_dir(args, config)) / "mesh.txt"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(mesh.to_text())
        self._emit({
            "file": str(target),
            "vertices": len(mesh.vertices),
            "triangles": len(mesh.triangles),
            "euler_characteristic": mesh.euler_characteristic(),
        }, args)
        return EXIT_OK


def main():
    """Main entry point"""
    cli = AdsFluxCLI()
    sys.exit(cli.run())


if __name__ == "__main__":
    main()

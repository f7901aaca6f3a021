#
# Command-line interface
#
# Copyright (C) 2026  The lencert authors.  All rights reserved.
#
# This library is free software; you can redistribute it and/or
# modify it under the terms of the GNU Lesser General Public
# License as published by the Free Software Foundation; either
# version 2.1 of the License, or (at your option) any later version.
#
# This library is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public
# License along with this library; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston, MA  02110-1301
# USA
#
import argparse
import logging
import math
import os
import sys

from lencert import __version__
from lencert.constants import C_BUDGET, DEFAULT_SEED, EXIT_PASS, \
    EXIT_VERDICT_FAIL, EXIT_CONFIG_ERROR, EXIT_IO_ERROR, \
    SAMPLES_PER_WINDOW, SEED_ENVIRONMENT_VARIABLE
from lencert.cli.files import InstanceFormatError, load_json, \
    read_instance, write_csv, write_instance, write_report
from lencert.error import ErrorMapper, ErrorRule, LencertError
from lencert.foliation import assign_disks, build_chart
from lencert.geometry import check_hypotheses
from lencert.identifier import IdentifierError, MetricIdentifier
from lencert.intersection import estimate_lambda
from lencert.riemannian.chart import MetricError, get_chart
from lencert.riemannian.curvature import check_riemannian_hypotheses
from lencert.riemannian.smoothing import BlendCertificate, \
    blend_certificate, smooth_riemannian
from lencert.smoothing import boundary_gap, closeness_certificate, \
    sample_parameters, smooth
from lencert.structure import ReportData, StructureError
from lencert.typing import Double, Int, List, Str
from lencert.verify.generator import FAMILY_NAMES, Family, \
    GeneratorError, Instance, gen_offset_annulus, gen_shortcut, \
    gen_wiggly, generate_family
from lencert.verify.sweep import SweepError, estimate_C, \
    search_counterexample
from lencert.verify.theorem import VerificationConfig, verify_rescaled, \
    verify_theorem

__all__ = [
    "RunConfig",
    "ArgumentError",
    "create_error_mapper",
    "create_parser",
    "load_config",
    "cmd_generate",
    "cmd_check",
    "cmd_smooth",
    "cmd_foliate",
    "cmd_intersect",
    "cmd_verify",
    "cmd_sweep",
    "cmd_search",
    "run",
    "main",
]

log = logging.getLogger(__name__)

class ArgumentError(LencertError):
    """Invalid arguments of a command."""
    pass


class RunConfig(ReportData):
    """Configuration of a command.

    The configuration is embedded in every report, so a command can
    be run again from its report. The number of worker processes is
    not a part of it.
    """

    def __init__(self):
        self._command = ""
        self._instance = ""
        self._family = "offset"
        self._radius = 0.0
        self._delta = 0.0
        self._points = 0
        self._amplitude = 0.0
        self._frequency = 0
        self._radius_factor = 2.0
        self._delta_share = 0.25
        self._eps = 1e-3
        self._eps_values = [1e-1, 1e-2, 1e-3]
        self._seed = DEFAULT_SEED
        self._backend = ""
        self._samples_per_window = SAMPLES_PER_WINDOW
        self._window_stride = 1
        self._c_budget = C_BUDGET
        self._budget = 100
        self._curvature_bound = 0.0
        self._scale = 1.0
        self._start = 0.0
        self._length = 1.0

    @property
    def command(self) -> Str:
        """Name of the command."""
        return self._command

    @command.setter
    def command(self, value):
        self._command = value

    @property
    def instance(self) -> Str:
        """Path to the manifest of an instance."""
        return self._instance

    @instance.setter
    def instance(self, value):
        self._instance = value

    @property
    def family(self) -> Str:
        """Name of the generated family."""
        return self._family

    @family.setter
    def family(self, value):
        self._family = value

    @property
    def radius(self) -> Double:
        """Radius of the generated curve.

        Zero means the radius of the family for the given eps.
        """
        return self._radius

    @radius.setter
    def radius(self, value):
        self._radius = value

    @property
    def delta(self) -> Double:
        """Offset of the generated curves."""
        return self._delta

    @delta.setter
    def delta(self, value):
        self._delta = value

    @property
    def points(self) -> Int:
        """Number of the generated points, zero for two per unit."""
        return self._points

    @points.setter
    def points(self, value):
        self._points = value

    @property
    def amplitude(self) -> Double:
        return self._amplitude

    @amplitude.setter
    def amplitude(self, value):
        self._amplitude = value

    @property
    def frequency(self) -> Int:
        return self._frequency

    @frequency.setter
    def frequency(self, value):
        self._frequency = value

    @property
    def radius_factor(self) -> Double:
        """Radius of the family members times eps."""
        return self._radius_factor

    @radius_factor.setter
    def radius_factor(self, value):
        self._radius_factor = value

    @property
    def delta_share(self) -> Double:
        return self._delta_share

    @delta_share.setter
    def delta_share(self, value):
        self._delta_share = value

    @property
    def eps(self) -> Double:
        """Turning and area bound."""
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def eps_values(self) -> List[Double]:
        """Bounds of a sweep."""
        return self._eps_values

    @eps_values.setter
    def eps_values(self, value):
        self._eps_values = value

    @property
    def seed(self) -> Int:
        return self._seed

    @seed.setter
    def seed(self, value):
        self._seed = value

    @property
    def backend(self) -> Str:
        """Metric backend, empty for the backend of the instance."""
        return self._backend

    @backend.setter
    def backend(self, value):
        self._backend = value

    @property
    def samples_per_window(self) -> Int:
        return self._samples_per_window

    @samples_per_window.setter
    def samples_per_window(self, value):
        self._samples_per_window = value

    @property
    def window_stride(self) -> Int:
        return self._window_stride

    @window_stride.setter
    def window_stride(self, value):
        self._window_stride = value

    @property
    def c_budget(self) -> Double:
        return self._c_budget

    @c_budget.setter
    def c_budget(self, value):
        self._c_budget = value

    @property
    def budget(self) -> Int:
        """Number of trials of a search."""
        return self._budget

    @budget.setter
    def budget(self, value):
        self._budget = value

    @property
    def curvature_bound(self) -> Double:
        """Bound of the sectional curvature.

        A positive bound verifies the instance in the rescaled metric.
        """
        return self._curvature_bound

    @curvature_bound.setter
    def curvature_bound(self, value):
        self._curvature_bound = value

    @property
    def scale(self) -> Double:
        """Length of the curvature windows of the rescaling."""
        return self._scale

    @scale.setter
    def scale(self, value):
        self._scale = value

    @property
    def start(self) -> Double:
        """Start of the inspected parameter window."""
        return self._start

    @start.setter
    def start(self, value):
        self._start = value

    @property
    def length(self) -> Double:
        """Length of the inspected parameter window."""
        return self._length

    @length.setter
    def length(self, value):
        self._length = value


def create_error_mapper():
    """Create the mapper of errors to exit codes.

    Errors of the library map to the failed verdict by default.
    """
    mapper = ErrorMapper()

    for exception_type in (GeneratorError, SweepError, IdentifierError,
                           StructureError, MetricError, ArgumentError):
        mapper.add_rule(ErrorRule(
            exception_type=exception_type,
            exit_code=EXIT_CONFIG_ERROR
        ))

    for exception_type in (InstanceFormatError, OSError):
        mapper.add_rule(ErrorRule(
            exception_type=exception_type,
            exit_code=EXIT_IO_ERROR
        ))

    return mapper


def _float_list(value):
    """Parse a comma-separated list of reals."""
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "invalid list of reals: '{}'".format(value)
        ) from None


class _ArgumentParser(argparse.ArgumentParser):
    """Parser raising errors instead of exiting."""

    def error(self, message):
        raise ArgumentError(message)


def create_parser():
    """Create the parser of the command line.

    Options which are not given are left out of the arguments, so
    only the given ones override the configuration file.
    """
    parser = _ArgumentParser(
        prog="lencert",
        description="Numerical certification of the length comparison "
                    "of curves bounding a thin annulus.",
        argument_default=argparse.SUPPRESS
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + __version__
    )

    common = argparse.ArgumentParser(
        add_help=False, argument_default=argparse.SUPPRESS
    )
    common.add_argument(
        "--config", metavar="FILE",
        help="a JSON file with a configuration or a report"
    )
    common.add_argument(
        "--output", metavar="DIR", default=".",
        help="a directory of the output files"
    )
    common.add_argument(
        "--jobs", metavar="N", type=int, default=1,
        help="a number of worker processes"
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="log more, twice for the numerical details"
    )
    common.add_argument(
        "-q", "--quiet", action="store_true", default=False,
        help="log only errors"
    )
    common.add_argument(
        "--seed", type=int, help="a seed of the random generators"
    )
    common.add_argument(
        "--eps", type=float, help="the turning and area bound"
    )
    common.add_argument(
        "--backend", metavar="METRIC",
        help="a metric like euclidean, sphere:R, flat-torus:L "
             "or perturbed:A"
    )

    instance = argparse.ArgumentParser(
        add_help=False, argument_default=argparse.SUPPRESS
    )
    instance.add_argument(
        "instance", nargs="?",
        help="a manifest of an instance or its directory"
    )

    window = argparse.ArgumentParser(
        add_help=False, argument_default=argparse.SUPPRESS
    )
    window.add_argument(
        "--start", type=float, help="a start of the parameter window"
    )
    window.add_argument(
        "--length", type=float, help="a length of the parameter window"
    )

    family = argparse.ArgumentParser(
        add_help=False, argument_default=argparse.SUPPRESS
    )
    family.add_argument(
        "--family", choices=FAMILY_NAMES, help="a family of instances"
    )
    family.add_argument(
        "--amplitude", type=float, help="an amplitude of the wiggles"
    )
    family.add_argument(
        "--frequency", type=int, help="a number of the wiggles"
    )
    family.add_argument(
        "--radius-factor", dest="radius_factor", type=float,
        help="a radius of the family members times eps"
    )
    family.add_argument(
        "--delta-share", dest="delta_share", type=float,
        help="an offset of the family members in units of the area"
    )

    commands = parser.add_subparsers(
        dest="command", metavar="COMMAND", parser_class=_ArgumentParser
    )
    commands.required = True

    generate = commands.add_parser(
        "generate", parents=[common, family],
        argument_default=argparse.SUPPRESS,
        help="generate an instance"
    )
    generate.add_argument(
        "--R", "--radius", dest="radius", type=float,
        help="a radius of the curves, the family radius by default"
    )
    generate.add_argument(
        "--delta", type=float, help="an offset of the curves"
    )
    generate.add_argument(
        "--points", type=int, help="a number of points of the curves"
    )

    commands.add_parser(
        "check", parents=[common, instance],
        argument_default=argparse.SUPPRESS,
        help="check the hypotheses of an instance"
    )
    commands.add_parser(
        "smooth", parents=[common, instance],
        argument_default=argparse.SUPPRESS,
        help="smooth the first curve and certify the closeness"
    )
    commands.add_parser(
        "foliate", parents=[common, instance, window],
        argument_default=argparse.SUPPRESS,
        help="build the normal foliation on a window"
    )

    intersect = commands.add_parser(
        "intersect", parents=[common, instance, window],
        argument_default=argparse.SUPPRESS,
        help="intersect the annulus with the normal disks of a window"
    )
    intersect.add_argument(
        "--samples-per-window", dest="samples_per_window", type=int,
        help="a number of sampled disks"
    )

    verify = commands.add_parser(
        "verify", parents=[common, instance],
        argument_default=argparse.SUPPRESS,
        help="verify the length comparison on an instance"
    )
    verify.add_argument(
        "--samples-per-window", dest="samples_per_window", type=int,
        help="a number of sampled disks per window"
    )
    verify.add_argument(
        "--window-stride", dest="window_stride", type=int,
        help="audit every n-th window"
    )
    verify.add_argument(
        "--c-budget", dest="c_budget", type=float,
        help="the constant of the verdict"
    )
    verify.add_argument(
        "--curvature-bound", dest="curvature_bound", type=float,
        help="verify in the metric rescaled for this curvature bound"
    )
    verify.add_argument(
        "--scale", type=float,
        help="a length of the curvature windows of the rescaling"
    )

    sweep = commands.add_parser(
        "sweep", parents=[common, family],
        argument_default=argparse.SUPPRESS,
        help="estimate the constant on a family"
    )
    sweep.add_argument(
        "--eps-values", dest="eps_values", type=_float_list,
        help="comma-separated bounds spanning two decades"
    )

    search = commands.add_parser(
        "search", parents=[common],
        argument_default=argparse.SUPPRESS,
        help="search for a counterexample"
    )
    search.add_argument(
        "--budget", type=int, help="a number of trials"
    )
    search.add_argument(
        "--c-budget", dest="c_budget", type=float,
        help="the constant of the verdict"
    )

    return parser


# Options which are not a part of the configuration.
RUN_OPTIONS = ("config", "output", "jobs", "verbose", "quiet")


def load_config(arguments, environ=None):
    """Build the configuration of a command.

    The configuration file is applied first, then the options of
    the command line and then the seed of the environment.

    :param arguments: parsed arguments
    :param environ: a dictionary of environment variables or None
    :return: an instance of RunConfig
    :raise ArgumentError: if the configuration is not valid
    """
    environ = os.environ if environ is None else environ
    structure = {}
    path = getattr(arguments, "config", None)

    if path:
        structure = load_json(path)

        # Accept a report with an embedded configuration.
        if isinstance(structure, dict) and "config" in structure:
            structure = structure["config"]

    try:
        config = RunConfig.from_structure(structure)
    except TypeError as e:
        raise ArgumentError(
            "Invalid configuration '{}': {}".format(path, e)
        ) from None

    for name, value in vars(arguments).items():
        if name not in RUN_OPTIONS:
            setattr(config, name, value)

    if environ.get(SEED_ENVIRONMENT_VARIABLE):
        try:
            config.seed = int(environ[SEED_ENVIRONMENT_VARIABLE])
        except ValueError:
            raise ArgumentError(
                "Invalid seed '{}' in {}.".format(
                    environ[SEED_ENVIRONMENT_VARIABLE],
                    SEED_ENVIRONMENT_VARIABLE
                )
            ) from None

        log.info("Using the seed %s of the environment.", config.seed)

    return config


def _output_path(output, name):
    os.makedirs(output, exist_ok=True)
    return os.path.join(output, name)


def _load_instance(config):
    """Read the instance of the configuration."""
    if not config.instance:
        raise ArgumentError("No instance is specified.")

    instance = read_instance(config.instance)

    if not config.backend:
        return instance

    return Instance(
        instance.curve0,
        instance.curve1,
        instance.sigma,
        instance.eps,
        MetricIdentifier.from_string(config.backend),
        instance.generator,
        instance.seed,
        instance.parameters
    )


def _family(config):
    family = Family()
    family.name = config.family
    family.radius_factor = config.radius_factor
    family.delta_share = config.delta_share
    family.amplitude = config.amplitude
    family.frequency = config.frequency
    return family


def _window(config, length):
    """Return the inspected window clipped to the curve."""
    start = min(max(config.start, 0.0), length)
    end = min(start + config.length, length)

    if not end > start:
        raise ArgumentError(
            "The window [{}, {}] is empty.".format(start, end)
        )

    return start, end


def cmd_generate(config, output, jobs=1):
    """Generate an instance and write its files.

    :return: an exit code
    """
    if config.radius <= 0:
        instance = generate_family(_family(config), config.eps, config.seed)
    else:
        points = config.points or int(
            math.ceil(4.0 * math.pi * config.radius)
        )

        if config.family == "shortcut":
            instance = gen_shortcut(
                config.radius, config.eps, points, config.seed
            )
        elif config.family == "offset":
            instance = gen_offset_annulus(
                config.radius, config.delta, points, config.eps,
                config.seed
            )
        else:
            instance = gen_wiggly(
                config.radius, config.delta, config.amplitude,
                config.frequency, points, config.eps, config.seed
            )

    write_instance(instance, output, RunConfig.to_structure(config))
    return EXIT_PASS


def cmd_check(config, output, jobs=1):
    """Check the hypotheses of an instance.

    :return: an exit code
    """
    instance = _load_instance(config)
    chart = get_chart(instance.backend)

    if chart.flat:
        sigma = instance.sigma.match(instance.curve0, instance.curve1)
        report = check_hypotheses(
            instance.curve0, instance.curve1, sigma, instance.eps
        )
    else:
        report = check_riemannian_hypotheses(
            chart, instance.curve0, instance.curve1, instance.sigma,
            instance.eps
        )

    write_report(
        _output_path(output, "check.json"),
        RunConfig.to_structure(config),
        type(report).to_structure(report)
    )
    return EXIT_PASS if report.passed else EXIT_VERDICT_FAIL


def cmd_smooth(config, output, jobs=1):
    """Smooth the first curve of an instance.

    :return: an exit code
    """
    instance = _load_instance(config)
    chart = get_chart(instance.backend)
    structure = RunConfig.to_structure(config)

    if chart.flat:
        sc = smooth(instance.curve0)
        certificate = closeness_certificate(sc, instance.eps)
        report = type(certificate).to_structure(certificate)
        report["boundary_gap"] = boundary_gap(sc)
    else:
        sc = smooth_riemannian(chart, instance.curve0)
        certificate = blend_certificate(sc, instance.eps)
        report = BlendCertificate.to_structure(certificate)
        report["boundary_gap"] = boundary_gap(sc, order=0)

    write_report(_output_path(output, "smooth.json"), structure, report)

    s = sample_parameters(0.0, sc.length, 1)
    write_csv(
        _output_path(output, "smooth.csv"),
        ["s", "x", "y", "z"],
        ([t] + list(p) for t, p in zip(s, sc.evaluate(s))),
        structure
    )
    return EXIT_PASS if certificate.passed else EXIT_VERDICT_FAIL


def cmd_foliate(config, output, jobs=1):
    """Build the foliation chart on a window.

    :return: an exit code
    """
    instance = _load_instance(config)
    sc = smooth(instance.curve0)
    J = _window(config, sc.length)
    chart = build_chart(sc, J, instance.eps)
    assignment = assign_disks(sc, instance.eps, interval=J)

    report = {
        "chart": type(chart.report).to_structure(chart.report),
        "assignment": type(assignment.report).to_structure(
            assignment.report
        ),
    }
    write_report(
        _output_path(output, "foliate.json"),
        RunConfig.to_structure(config),
        report
    )

    passed = chart.report.gradient_ok and assignment.report.passed
    return EXIT_PASS if passed else EXIT_VERDICT_FAIL


def cmd_intersect(config, output, jobs=1):
    """Intersect the annulus with the normal disks of a window.

    :return: an exit code
    """
    instance = _load_instance(config)
    curve0 = instance.curve0
    sigma = instance.sigma.match(curve0, instance.curve1)

    sc = smooth(curve0)
    J = _window(config, sc.length)
    reach = (max(J[0] - 1.0, 0.0), min(J[1] + 1.0, sc.length))
    assignment = assign_disks(sc, instance.eps, interval=reach)
    estimate = estimate_lambda(
        assignment, sigma, J, instance.eps, config.samples_per_window,
        config.seed
    )

    structure = RunConfig.to_structure(config)
    write_report(
        _output_path(output, "intersect.json"),
        structure,
        type(estimate).to_structure(estimate)
    )
    write_csv(
        _output_path(output, "intersect.csv"),
        ["t", "length", "transversal", "in_lambda", "s_candidates"],
        ([s.t, s.length, s.transversal, s.in_lambda, s.s_candidates]
         for s in estimate.samples),
        structure
    )
    return EXIT_PASS if estimate.passed else EXIT_VERDICT_FAIL


def cmd_verify(config, output, jobs=1):
    """Verify the length comparison on an instance.

    The report is written regardless of the verdict.

    :return: an exit code
    """
    instance = _load_instance(config)

    verification = VerificationConfig()
    verification.c_budget = config.c_budget
    verification.samples_per_window = config.samples_per_window
    verification.window_stride = config.window_stride
    verification.seed = config.seed

    if config.curvature_bound > 0:
        report = verify_rescaled(
            instance, config.curvature_bound, config.scale, verification
        )
    else:
        report = verify_theorem(instance, verification)

    structure = RunConfig.to_structure(config)
    write_report(
        _output_path(output, "report.json"),
        structure,
        type(report).to_structure(report)
    )
    write_csv(
        _output_path(output, "lambda.csv"),
        ["window_start", "window_end", "lambda_fraction", "coarea_ratio"],
        ([w.window_start, w.window_end, w.lambda_fraction, w.coarea.ratio]
         for w in report.windows),
        structure
    )
    write_csv(
        _output_path(output, "ratio.csv"),
        ["eps", "ratio", "c_candidate", "passed"],
        [[report.eps, report.ratio, report.c_candidate, report.passed]],
        structure
    )

    for failure in report.failures:
        log.warning("%s", failure)

    return EXIT_PASS if report.passed else EXIT_VERDICT_FAIL


def cmd_sweep(config, output, jobs=1):
    """Estimate the constant of a family.

    :return: an exit code
    """
    estimate = estimate_C(
        _family(config), config.eps_values, config.seed, jobs
    )

    structure = RunConfig.to_structure(config)
    write_csv(
        _output_path(output, "sweep.csv"),
        ["family", "eps", "ratio", "c"],
        ([config.family, eps, ratio, c] for eps, ratio, c in zip(
            estimate.eps_values, estimate.ratios, estimate.per_eps
        )),
        structure
    )

    summary = type(estimate).to_structure(estimate)
    margins = [
        (1.0 - config.c_budget * eps) - ratio
        for eps, ratio in zip(estimate.eps_values, estimate.ratios)
        if ratio > 0
    ]
    summary["worst_margin"] = max(margins) if margins else None
    write_report(_output_path(output, "summary.json"), structure, summary)
    return EXIT_PASS


def cmd_search(config, output, jobs=1):
    """Search for a counterexample.

    :return: an exit code
    """
    result = search_counterexample(
        config.budget, config.seed, config.eps, c_budget=config.c_budget,
        jobs=jobs
    )

    write_report(
        _output_path(output, "search.json"),
        RunConfig.to_structure(config),
        type(result).to_structure(result)
    )
    return EXIT_VERDICT_FAIL if result.counterexample else EXIT_PASS


HANDLERS = {
    "generate": cmd_generate,
    "check": cmd_check,
    "smooth": cmd_smooth,
    "foliate": cmd_foliate,
    "intersect": cmd_intersect,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "search": cmd_search,
}


def _configure_logging(arguments):
    if getattr(arguments, "quiet", False):
        level = logging.ERROR
    elif getattr(arguments, "verbose", 0) > 1:
        level = logging.DEBUG
    elif getattr(arguments, "verbose", 0) == 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def run(argv=None, environ=None):
    """Run a command.

    :param argv: a list of arguments or None
    :param environ: a dictionary of environment variables or None
    :return: an exit code
    :raise LencertError: if the command fails
    """
    arguments = create_parser().parse_args(argv)
    _configure_logging(arguments)

    config = load_config(arguments, environ)
    handler = HANDLERS[config.command]

    log.info("Running the command %s.", config.command)
    return handler(config, arguments.output, arguments.jobs)


def main(argv=None):
    """Run the command line and exit."""
    mapper = create_error_mapper()

    try:
        code = run(argv)
    except (LencertError, OSError) as e:
        code = mapper.get_exit_code(type(e))
        print("lencert: {}".format(e), file=sys.stderr)

    sys.exit(code)

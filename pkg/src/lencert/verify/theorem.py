#
# End-to-end verification of the length comparison
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
import logging
import math

from lencert.constants import C_BUDGET, C_FIT, DEFAULT_SEED, MIN_LENGTH, \
    SAMPLES_PER_WINDOW, SAMPLING_SLACK
from lencert.foliation import AssignmentError, AssignmentReport, \
    ChartError, assign_disks
from lencert.geometry import BoundaryMismatchError, HypothesisReport, \
    check_hypotheses
from lencert.intersection import CoareaAudit, PhiImageReport, \
    coarea_audit, estimate_lambda, phi_image_audit, sample_window
from lencert.riemannian.chart import ScaledChart, get_chart
from lencert.riemannian.curvature import RiemannianHypothesisReport, \
    check_riemannian_hypotheses, rescale_metric, total_curvature_to_turning
from lencert.riemannian.integrator import ChartExitError
from lencert.riemannian.smoothing import smooth_riemannian
from lencert.smoothing import ClosenessCertificate, SmoothingError, \
    boundary_gap, closeness_certificate, smooth
from lencert.structure import ReportData
from lencert.typing import Bool, Double, Int, List, Str

__all__ = [
    "VerificationConfig",
    "WindowAudit",
    "VerificationReport",
    "partition_windows",
    "verify_theorem",
    "verify_rescaled",
]

log = logging.getLogger(__name__)

# Audits which need the Euclidean structure of the chart.
EUCLIDEAN_AUDITS = ("lambda", "coarea", "phi")


class VerificationConfig(ReportData):
    """Configuration of a verification run."""

    def __init__(self):
        self._c_budget = C_BUDGET
        self._c_fit = C_FIT
        self._samples_per_window = SAMPLES_PER_WINDOW
        self._window_stride = 1
        self._slack = SAMPLING_SLACK
        self._seed = DEFAULT_SEED

    @property
    def c_budget(self) -> Double:
        """The constant of the verdict."""
        return self._c_budget

    @c_budget.setter
    def c_budget(self, value):
        self._c_budget = value

    @property
    def c_fit(self) -> Double:
        """The constant of the derivative and area bounds."""
        return self._c_fit

    @c_fit.setter
    def c_fit(self, value):
        self._c_fit = value

    @property
    def samples_per_window(self) -> Int:
        """Number of sampled disks in each window."""
        return self._samples_per_window

    @samples_per_window.setter
    def samples_per_window(self, value):
        self._samples_per_window = value

    @property
    def window_stride(self) -> Int:
        """Audit every k-th window."""
        return self._window_stride

    @window_stride.setter
    def window_stride(self, value):
        self._window_stride = value

    @property
    def slack(self) -> Double:
        """The allowed sampling error."""
        return self._slack

    @slack.setter
    def slack(self, value):
        self._slack = value

    @property
    def seed(self) -> Int:
        return self._seed

    @seed.setter
    def seed(self, value):
        self._seed = value


class WindowAudit(ReportData):
    """Audits of one window of the first curve."""

    def __init__(self):
        self._window_start = 0.0
        self._window_end = 0.0
        self._lambda_fraction = 0.0
        self._lambda_passed = False
        self._coarea = CoareaAudit()
        self._s_candidates = 0
        self._error = ""

    @property
    def window_start(self) -> Double:
        return self._window_start

    @window_start.setter
    def window_start(self, value):
        self._window_start = value

    @property
    def window_end(self) -> Double:
        return self._window_end

    @window_end.setter
    def window_end(self, value):
        self._window_end = value

    @property
    def lambda_fraction(self) -> Double:
        """Share of the samples with short transversal sections."""
        return self._lambda_fraction

    @lambda_fraction.setter
    def lambda_fraction(self, value):
        self._lambda_fraction = value

    @property
    def lambda_passed(self) -> Bool:
        return self._lambda_passed

    @lambda_passed.setter
    def lambda_passed(self, value):
        self._lambda_passed = value

    @property
    def coarea(self) -> CoareaAudit:
        return self._coarea

    @coarea.setter
    def coarea(self, value):
        self._coarea = value

    @property
    def s_candidates(self) -> Int:
        """Sections bounding a short arc of the first curve."""
        return self._s_candidates

    @s_candidates.setter
    def s_candidates(self, value):
        self._s_candidates = value

    @property
    def error(self) -> Str:
        """Failure of the audit or an empty string."""
        return self._error

    @error.setter
    def error(self, value):
        self._error = value


class VerificationReport(ReportData):
    """Result of the verification of an instance."""

    def __init__(self):
        self._backend = "euclidean"
        self._metric_factor = 1.0
        self._eps = 0.0
        self._hypotheses = HypothesisReport()
        self._chart_hypotheses = RiemannianHypothesisReport()
        self._hypotheses_passed = False
        self._length0 = 0.0
        self._length1 = 0.0
        self._ratio = 0.0
        self._smoothing_gap = 0.0
        self._closeness = ClosenessCertificate()
        self._assignment = AssignmentReport()
        self._windows = []
        self._window_count = 0
        self._lambda_fractions = []
        self._coarea_ratios = []
        self._phi = PhiImageReport()
        self._aggregate_consistent = True
        self._c_candidate = 0.0
        self._c_budget = C_BUDGET
        self._skipped_audits = []
        self._failures = []
        self._passed = False

    @property
    def backend(self) -> Str:
        """Identifier of the metric."""
        return self._backend

    @backend.setter
    def backend(self, value):
        self._backend = value

    @property
    def metric_factor(self) -> Double:
        """Multiple of the metric of the backend."""
        return self._metric_factor

    @metric_factor.setter
    def metric_factor(self, value):
        self._metric_factor = value

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def hypotheses(self) -> HypothesisReport:
        """Hypotheses checked in the Euclidean space."""
        return self._hypotheses

    @hypotheses.setter
    def hypotheses(self, value):
        self._hypotheses = value

    @property
    def chart_hypotheses(self) -> RiemannianHypothesisReport:
        """Hypotheses checked in a curved chart."""
        return self._chart_hypotheses

    @chart_hypotheses.setter
    def chart_hypotheses(self, value):
        self._chart_hypotheses = value

    @property
    def hypotheses_passed(self) -> Bool:
        return self._hypotheses_passed

    @hypotheses_passed.setter
    def hypotheses_passed(self, value):
        self._hypotheses_passed = value

    @property
    def length0(self) -> Double:
        return self._length0

    @length0.setter
    def length0(self, value):
        self._length0 = value

    @property
    def length1(self) -> Double:
        return self._length1

    @length1.setter
    def length1(self, value):
        self._length1 = value

    @property
    def ratio(self) -> Double:
        """Length of the second curve divided by the first one."""
        return self._ratio

    @ratio.setter
    def ratio(self, value):
        self._ratio = value

    @property
    def smoothing_gap(self) -> Double:
        """Mismatch of the smoothing at the piece boundaries."""
        return self._smoothing_gap

    @smoothing_gap.setter
    def smoothing_gap(self, value):
        self._smoothing_gap = value

    @property
    def closeness(self) -> ClosenessCertificate:
        return self._closeness

    @closeness.setter
    def closeness(self, value):
        self._closeness = value

    @property
    def assignment(self) -> AssignmentReport:
        return self._assignment

    @assignment.setter
    def assignment(self, value):
        self._assignment = value

    @property
    def windows(self) -> List[WindowAudit]:
        """Audits of the audited windows."""
        return self._windows

    @windows.setter
    def windows(self, value):
        self._windows = value

    @property
    def window_count(self) -> Int:
        """Number of windows of the partition."""
        return self._window_count

    @window_count.setter
    def window_count(self, value):
        self._window_count = value

    @property
    def lambda_fractions(self) -> List[Double]:
        return self._lambda_fractions

    @lambda_fractions.setter
    def lambda_fractions(self, value):
        self._lambda_fractions = value

    @property
    def coarea_ratios(self) -> List[Double]:
        return self._coarea_ratios

    @coarea_ratios.setter
    def coarea_ratios(self, value):
        self._coarea_ratios = value

    @property
    def phi(self) -> PhiImageReport:
        return self._phi

    @phi.setter
    def phi(self, value):
        self._phi = value

    @property
    def aggregate_consistent(self) -> Bool:
        """Do the image measures fit into the second curve?"""
        return self._aggregate_consistent

    @aggregate_consistent.setter
    def aggregate_consistent(self, value):
        self._aggregate_consistent = value

    @property
    def c_candidate(self) -> Double:
        """The measured constant (1 - ratio) / eps clamped at zero."""
        return self._c_candidate

    @c_candidate.setter
    def c_candidate(self, value):
        self._c_candidate = value

    @property
    def c_budget(self) -> Double:
        return self._c_budget

    @c_budget.setter
    def c_budget(self, value):
        self._c_budget = value

    @property
    def skipped_audits(self) -> List[Str]:
        return self._skipped_audits

    @skipped_audits.setter
    def skipped_audits(self, value):
        self._skipped_audits = value

    @property
    def failures(self) -> List[Str]:
        """Recorded failures of the pipeline."""
        return self._failures

    @failures.setter
    def failures(self, value):
        self._failures = value

    @property
    def passed(self) -> Bool:
        """Is the ratio at least 1 - C eps?"""
        return self._passed

    @passed.setter
    def passed(self, value):
        self._passed = value


def partition_windows(length):
    """Divide [0, L] into floor(L) windows of equal length.

    :param length: a length at least one
    :return: a list of parameter intervals
    """
    if length < MIN_LENGTH:
        return []

    count = int(math.floor(length))
    width = length / count
    return [(i * width, (i + 1) * width) for i in range(count)]


def _record_failure(report, message):
    log.warning("Verification failure: %s", message)
    report.failures = report.failures + [message]


def _finish(report, config):
    """Compute the ratio and the verdict."""
    report.ratio = report.length1 / report.length0 \
        if report.length0 > 0 else 0.0
    report.c_candidate = max(0.0, (1.0 - report.ratio) / report.eps) \
        if report.eps > 0 else 0.0
    report.c_budget = float(config.c_budget)
    report.passed = report.ratio >= 1.0 - config.c_budget * report.eps

    log.info("Ratio %s, the verdict is %s.", report.ratio,
             "pass" if report.passed else "fail")
    return report


def _audit_window(assignment, sigma, J, index, eps, config):
    """Run the sampled audits of a window."""
    audit = WindowAudit()
    audit.window_start = float(J[0])
    audit.window_end = float(J[1])
    seed = config.seed + index

    samples = sample_window(
        assignment, sigma, J, eps, config.samples_per_window, seed
    )
    estimate = estimate_lambda(
        assignment, sigma, J, eps, config.samples_per_window, seed,
        slack=config.slack, samples=samples
    )

    audit.lambda_fraction = estimate.fraction
    audit.lambda_passed = estimate.passed
    audit.coarea = coarea_audit(
        assignment, sigma, J, config.samples_per_window, eps, seed,
        c_fit=config.c_fit, samples=samples
    )
    audit.s_candidates = sum(s.s_candidates for s in samples)

    log.debug("Window %s: fraction %s.", J, estimate.fraction)
    return audit, estimate


def _verify_euclidean(instance, config, report):
    """Run the full pipeline in the Euclidean coordinates."""
    curve0 = instance.curve0
    curve1 = instance.curve1
    eps = instance.eps

    report.length0 = curve0.total_length
    report.length1 = curve1.total_length

    try:
        sigma = instance.sigma.match(curve0, curve1)
        report.hypotheses = check_hypotheses(curve0, curve1, sigma, eps)
    except BoundaryMismatchError as e:
        _record_failure(report, str(e))
        return _finish(report, config)

    report.hypotheses_passed = report.hypotheses.passed

    try:
        sc = smooth(curve0)
        report.smoothing_gap = boundary_gap(sc)
        report.closeness = closeness_certificate(
            sc, eps, samples_per_unit=4
        )
        assignment = assign_disks(sc, eps, c_fit=config.c_fit)
    except (SmoothingError, AssignmentError) as e:
        _record_failure(report, str(e))
        return _finish(report, config)

    report.assignment = assignment.report
    windows = partition_windows(sc.length)
    report.window_count = len(windows)
    audits = []
    estimates = []

    for index, J in enumerate(windows):
        if index % max(config.window_stride, 1):
            continue

        try:
            audit, estimate = _audit_window(
                assignment, sigma, J, index, eps, config
            )
        except (AssignmentError, ChartError) as e:
            audit = WindowAudit()
            audit.window_start = float(J[0])
            audit.window_end = float(J[1])
            audit.error = str(e)
            _record_failure(report, "Window {}: {}".format(J, e))
        else:
            estimates.append(estimate)

        audits.append(audit)

    report.windows = audits
    report.lambda_fractions = [a.lambda_fraction for a in audits]
    report.coarea_ratios = [a.coarea.ratio for a in audits]
    report.phi = phi_image_audit(estimates, curve1)

    share = len(audits) / len(windows) if windows else 0.0
    report.aggregate_consistent = report.phi.total_measure \
        <= report.length1 * share * (1.0 + config.slack)

    if not report.aggregate_consistent:
        log.warning("The image measures exceed the second curve.")

    return _finish(report, config)


def _verify_in_chart(instance, config, chart, report):
    """Check the hypotheses and the smoothing in a curved chart."""
    eps = instance.eps

    try:
        hypotheses = check_riemannian_hypotheses(
            chart, instance.curve0, instance.curve1, instance.sigma, eps
        )
    except (BoundaryMismatchError, ChartExitError) as e:
        _record_failure(report, str(e))
        return _finish(report, config)

    report.chart_hypotheses = hypotheses
    report.hypotheses_passed = hypotheses.passed
    report.length0 = hypotheses.length0
    report.length1 = hypotheses.length1

    try:
        rsc = smooth_riemannian(chart, instance.curve0)
        report.smoothing_gap = boundary_gap(rsc, order=0)
    except (SmoothingError, ChartExitError) as e:
        _record_failure(report, str(e))

    log.warning("Skipping the audits %s in the chart %s.",
                ", ".join(EUCLIDEAN_AUDITS), chart.name)
    report.skipped_audits = list(EUCLIDEAN_AUDITS)
    return _finish(report, config)


def verify_theorem(instance, config=None, chart=None):
    """Verify the length comparison on an instance.

    The failures of the pipeline are recorded in the report. Flat
    charts of the identity metric run the full pipeline in their
    coordinates, other charts check the hypotheses and the smoothing
    and skip the sampled audits.

    :param instance: an instance
    :param config: an instance of VerificationConfig or None
    :param chart: a chart or None for the backend of the instance
    :return: an instance of VerificationReport
    """
    config = config or VerificationConfig()
    chart = chart or get_chart(instance.backend)

    report = VerificationReport()
    report.backend = str(instance.backend)
    report.eps = instance.eps

    if isinstance(chart, ScaledChart):
        report.metric_factor = chart.factor

    log.info("Verifying %s in the chart %s.", instance, chart.name)

    if chart.flat and not isinstance(chart, ScaledChart):
        return _verify_euclidean(instance, config, report)

    return _verify_in_chart(instance, config, chart, report)


def verify_rescaled(instance, curvature_bound, r, config=None):
    """Verify the length comparison after rescaling the metric.

    The metric of the backend is multiplied by 1000 K / r^2. A curve
    with the total curvature at most eps over every window of length
    r then satisfies the turning hypothesis in the rescaled metric.
    Flat instances are rescaled in their coordinates and verified in
    the Euclidean pipeline.

    :param instance: an instance
    :param curvature_bound: an upper bound K of the sectional curvature
    :param r: a scale of the curvature windows
    :param config: an instance of VerificationConfig or None
    :return: an instance of VerificationReport
    :raise MetricError: if the rescaling parameters are not positive
    """
    config = config or VerificationConfig()
    base = get_chart(instance.backend)
    scaled = rescale_metric(base, curvature_bound, r)

    try:
        turning = total_curvature_to_turning(instance.curve0, r, base)
    except ChartExitError as e:
        turning = None
        failure = str(e)
    else:
        failure = None

    if base.flat:
        factor = math.sqrt(scaled.factor)
        backend = instance.backend

        if backend.name == "flat-torus":
            backend = "flat-torus:{}".format(repr(factor * backend.parameter))

        report = verify_theorem(
            instance.scaled(factor, backend), config
        )
    else:
        report = verify_theorem(instance, config, scaled)

    report.metric_factor = scaled.factor

    if failure:
        _record_failure(report, failure)
    elif turning.max_total_curvature > instance.eps:
        _record_failure(
            report, "The total curvature {} over windows of {} "
                    "exceeds eps.".format(turning.max_total_curvature, r)
        )

    return report

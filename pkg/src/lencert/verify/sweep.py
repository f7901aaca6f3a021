#
# Sweeps over eps and the search for counterexamples
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
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from lencert.constants import C_BUDGET, DEFAULT_SEED
from lencert.error import LencertError
from lencert.geometry import BoundaryMismatchError, check_hypotheses
from lencert.structure import ReportData
from lencert.typing import Bool, Double, Int, List
from lencert.verify.generator import Family, GeneratorError, \
    generate_family

__all__ = [
    "SweepError",
    "ConstantEstimate",
    "SearchResult",
    "estimate_C",
    "search_counterexample",
    "run_tasks",
]

log = logging.getLogger(__name__)

# The smallest span of a sweep in decades of eps.
MIN_DECADES = 2.0


class SweepError(LencertError):
    """Invalid parameters of a sweep."""
    pass


def run_tasks(function, tasks, jobs=1):
    """Apply a function to the tasks and return results in their order.

    :param function: a function of the module level
    :param tasks: a list of arguments
    :param jobs: a number of worker processes
    :return: a list of results
    """
    if jobs is None or jobs <= 1 or len(tasks) <= 1:
        return [function(task) for task in tasks]

    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(function, tasks))


def _measure(task):
    """Generate an instance and measure its length ratio.

    :param task: a tuple of a family structure, eps and a seed
    :return: a tuple of the ratio or None and the hypothesis verdict
    """
    structure, eps, seed = task
    family = Family.from_structure(structure)

    try:
        instance = generate_family(family, eps, seed)
        sigma = instance.sigma.match(instance.curve0, instance.curve1)
    except (GeneratorError, BoundaryMismatchError) as e:
        log.debug("Rejected %s at eps %s: %s", family.name, eps, e)
        return None, False

    report = check_hypotheses(instance.curve0, instance.curve1, sigma, eps)
    ratio = instance.curve1.total_length / instance.curve0.total_length
    return ratio, report.passed


class ConstantEstimate(ReportData):
    """The measured constant of a family."""

    def __init__(self):
        self._family = Family()
        self._eps_values = []
        self._ratios = []
        self._per_eps = []
        self._c_hat = 0.0
        self._stability = 1.0

    @property
    def family(self) -> Family:
        return self._family

    @family.setter
    def family(self, value):
        self._family = value

    @property
    def eps_values(self) -> List[Double]:
        return self._eps_values

    @eps_values.setter
    def eps_values(self, value):
        self._eps_values = value

    @property
    def ratios(self) -> List[Double]:
        """Length ratios of the instances, zero if rejected."""
        return self._ratios

    @ratios.setter
    def ratios(self, value):
        self._ratios = value

    @property
    def per_eps(self) -> List[Double]:
        """The constant measured at each eps."""
        return self._per_eps

    @per_eps.setter
    def per_eps(self, value):
        self._per_eps = value

    @property
    def c_hat(self) -> Double:
        """The largest measured constant."""
        return self._c_hat

    @c_hat.setter
    def c_hat(self, value):
        self._c_hat = value

    @property
    def stability(self) -> Double:
        """Ratio of the largest and the smallest positive constant."""
        return self._stability

    @stability.setter
    def stability(self, value):
        self._stability = value


def estimate_C(family, eps_values, seed=DEFAULT_SEED, jobs=1):
    """Measure the constant of the length comparison on a family.

    The constant of an instance is (1 - ratio) / eps clamped at zero.
    Instances failing the hypotheses don't contribute.

    :param family: an instance of Family
    :param eps_values: a list of at least three eps spanning two decades
    :param seed: a seed of the generator
    :param jobs: a number of worker processes
    :return: an instance of ConstantEstimate
    :raise SweepError: if the sweep is not valid
    """
    eps_values = [float(eps) for eps in eps_values]

    if len(eps_values) < 3:
        raise SweepError(
            "At least three eps values are required, got {}.".format(
                len(eps_values)
            )
        )

    if min(eps_values) <= 0:
        raise SweepError("The eps values must be positive.")

    span = math.log10(max(eps_values) / min(eps_values))

    if span < MIN_DECADES - 1e-9:
        raise SweepError(
            "The eps values span {:.2f} decades, not {}.".format(
                span, MIN_DECADES
            )
        )

    structure = Family.to_structure(family)
    tasks = [(structure, eps, seed) for eps in eps_values]
    results = run_tasks(_measure, tasks, jobs)

    ratios = []
    constants = []

    for eps, (ratio, passed) in zip(eps_values, results):
        ratios.append(ratio if ratio is not None else 0.0)

        if ratio is None or not passed:
            log.warning("The %s instance at eps %s is excluded.",
                        family.name, eps)
            constants.append(0.0)
            continue

        constants.append(max(0.0, (1.0 - ratio) / eps))

    positive = [c for c in constants if c > 0]

    estimate = ConstantEstimate()
    estimate.family = family
    estimate.eps_values = eps_values
    estimate.ratios = ratios
    estimate.per_eps = constants
    estimate.c_hat = max(constants)
    estimate.stability = max(positive) / min(positive) if positive else 1.0

    log.info("The constant of %s is %s.", family.name, estimate.c_hat)
    return estimate


class SearchResult(ReportData):
    """The worst instance found by the search."""

    def __init__(self):
        self._eps = 0.0
        self._c_budget = C_BUDGET
        self._trials = 0
        self._evaluated = 0
        self._rejected = 0
        self._worst_margin = 0.0
        self._worst_family = Family()
        self._worst_seed = 0
        self._counterexample = False

    @property
    def eps(self) -> Double:
        return self._eps

    @eps.setter
    def eps(self, value):
        self._eps = value

    @property
    def c_budget(self) -> Double:
        return self._c_budget

    @c_budget.setter
    def c_budget(self, value):
        self._c_budget = value

    @property
    def trials(self) -> Int:
        return self._trials

    @trials.setter
    def trials(self, value):
        self._trials = value

    @property
    def evaluated(self) -> Int:
        """Trials passing the hypotheses."""
        return self._evaluated

    @evaluated.setter
    def evaluated(self, value):
        self._evaluated = value

    @property
    def rejected(self) -> Int:
        """Trials rejected by a generator or by the hypotheses."""
        return self._rejected

    @rejected.setter
    def rejected(self, value):
        self._rejected = value

    @property
    def worst_margin(self) -> Double:
        """The largest (1 - C eps) - ratio of the evaluated trials."""
        return self._worst_margin

    @worst_margin.setter
    def worst_margin(self, value):
        self._worst_margin = value

    @property
    def worst_family(self) -> Family:
        return self._worst_family

    @worst_family.setter
    def worst_family(self, value):
        self._worst_family = value

    @property
    def worst_seed(self) -> Int:
        return self._worst_seed

    @worst_seed.setter
    def worst_seed(self, value):
        self._worst_seed = value

    @property
    def counterexample(self) -> Bool:
        """Is the worst margin positive?"""
        return self._counterexample

    @counterexample.setter
    def counterexample(self, value):
        self._counterexample = value


def _random_family(rng, names):
    """Draw the parameters of a family."""
    family = Family()
    family.name = str(names[int(rng.integers(len(names)))])
    family.radius_factor = float(rng.uniform(2.0, 4.0))
    family.delta_share = float(rng.uniform(0.05, 0.4))

    if family.name == "wiggly":
        family.amplitude = float(rng.uniform(0.0, 0.5))
        family.frequency = int(rng.integers(1, 51))

    return family


def search_counterexample(budget, seed=DEFAULT_SEED, eps=1e-3,
                          names=("offset", "wiggly"), c_budget=C_BUDGET,
                          jobs=1):
    """Search randomly for an instance violating the length comparison.

    The margin of an instance is (1 - C eps) - ratio. Only instances
    passing the hypotheses are evaluated, the search reports the
    largest margin, which is expected to be negative.

    :param budget: a number of trials
    :param seed: a seed of the search
    :param eps: the turning and area bound
    :param names: names of the searched families
    :param c_budget: the constant of the verdict
    :param jobs: a number of worker processes
    :return: an instance of SearchResult
    """
    rng = np.random.default_rng(seed)
    families = []
    tasks = []

    for _ in range(int(budget)):
        family = _random_family(rng, names)
        trial_seed = int(rng.integers(2 ** 31))
        families.append((family, trial_seed))
        tasks.append((Family.to_structure(family), eps, trial_seed))

    result = SearchResult()
    result.eps = float(eps)
    result.c_budget = float(c_budget)
    result.trials = len(tasks)
    worst = None

    for number, ((family, trial_seed), (ratio, passed)) in enumerate(
            zip(families, run_tasks(_measure, tasks, jobs))):

        if ratio is None or not passed:
            result.rejected += 1
            log.info("Trial %d of %d: rejected.", number + 1, len(tasks))
            continue

        margin = (1.0 - c_budget * eps) - ratio
        result.evaluated += 1
        log.info("Trial %d of %d: margin %s.", number + 1, len(tasks), margin)

        if worst is None or margin > worst:
            worst = margin
            result.worst_margin = margin
            result.worst_family = family
            result.worst_seed = trial_seed

    result.counterexample = worst is not None and worst > 0

    if result.counterexample:
        log.warning("Found a counterexample with the margin %s.", worst)

    return result

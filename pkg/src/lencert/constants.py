#
# Tolerances and defaults
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

# Boundary loops must lie within this multiple of Length(Γ₀) of their curve.
TOL_BOUNDARY_FACTOR = 1e-9

# Sampled parameter pairs per unit of arc length in the turning check.
TURNING_SAMPLES_PER_UNIT = 32

# Theorem range of the turning bound.
EPS_THEOREM_BOUND = 1e-4

# Length lower bounds of the compared curves.
MIN_LENGTH = 1.0
LONG_CURVE_LENGTH = 100.0
SHORT_SEGMENT_LENGTH = 50.0
SHORT_SEGMENT_FACTOR = 10.0

# Reach of the arc-length estimates.
TANGENT_ESTIMATE_REACH = 100.0

# Cutoff support and derivative order.
CUTOFF_HALF_WIDTH = 0.25
CUTOFF_MAX_ORDER = 4

# Certificate constants.
C_CERT = 1e4
C_FIT = 50.0
C_BUDGET = 1000.0

# Disks and charts.
DISK_RADIUS = 1.0
MIN_TANGENT_SPEED = 0.5
CHART_MAX_INTERVAL = 20.0
CYLINDER_HALF_LENGTH = 50.0
CYLINDER_RADIUS_SQUARED = 10.0
PROBE_GRID = 20
ROUNDTRIP_TOLERANCE = 1e-8

# Newton solvers.
NEWTON_MAX_ITERATIONS = 50
NEWTON_TOLERANCE = 1e-12
PHI_TOLERANCE = 1e-10
ASSIGNMENT_MAX_SPACING = 1e-2
ASSIGNMENT_MIN_POINTS = 1e4

# Intersections.
TRANSVERSALITY_ANGLE = 1e-6
CHAINING_FACTOR = 1e-9
RIM_TOLERANCE = 1e-9
PLANE_TOLERANCE_FACTOR = 1e-12
ENDPOINT_TOLERANCE = 1e-6
SAMPLING_SLACK = 0.01

# Endpoint kinds of intersection components.
ENDPOINT_GAMMA0 = "gamma0"
ENDPOINT_GAMMA1 = "gamma1"
ENDPOINT_RIM = "rim"
ENDPOINT_INTERIOR = "interior"
ENDPOINT_BOUNDARY = "boundary"
ENDPOINT_NONE = "none"

# Riemannian integrators.
RK4_STEP = 1e-3
FINITE_DIFFERENCE_STEP = 1e-4
LOG_TOLERANCE = 1e-10
RICHARDSON_TOLERANCE = 1e-8
TRANSPORT_STEP = 1e-2
TANGENT_DRIFT_WINDOW = 100.0

# Curvature factor of the metric rescaling.
RESCALE_CURVATURE_FACTOR = 1000.0

# Verification.
SAMPLES_PER_WINDOW = 32
DEFAULT_SEED = 0

# Environment variable overriding seeds.
SEED_ENVIRONMENT_VARIABLE = "ALL_SEED"

# Exit codes of the command line interface.
EXIT_PASS = 0
EXIT_VERDICT_FAIL = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3

# Version of the report schema.
REPORT_SCHEMA_VERSION = 1

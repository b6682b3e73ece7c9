"""Central table of numeric defaults.

Every tolerance, cap, and grid size used by the workbench is defined here and
accepted as an explicit parameter by the functions that use it.

===================  ============  ====================================================
name                 default       used by
===================  ============  ====================================================
SOLVER_TOL           1e-13         absolute bisection tolerance (all root solves)
DEPTH_CAP            60            max word length / inverse-iteration depth
CONJUGACY_DEPTH_CAP  48            max refinement depth for conjugacy enclosures
CELL_CAP             2**20         max cylinder count for a fully enumerated level
WORK_CAP             10**7         max excluded-word tuple count in tail sums
MIN_CUT_GAP          1e-9          smallest admissible branch width at validation
MONOTONE_GRID        2048          sample count for the monotonicity validation check
ENDPOINT_SNAP        1e-12         distance at which a point is treated as a cylinder
                                   endpoint during conjugacy evaluation
QS_DENOM_FLOOR       1e-300        denominator floor for distortion ratios
MODULUS_GRID         1024          default x-grid for modulus reports
SCALE_LADDER         2^-1..2^-20   default t-ladder for modulus reports
PROBE_LEVEL          6             mesh-decay sanity probe depth for conjugacies
===================  ============  ====================================================

The caps can be overridden per CLI invocation through the environment
variables ``CIRCLEDYN_WORK_CAP``, ``CIRCLEDYN_CELL_CAP`` and
``CIRCLEDYN_DEPTH_CAP`` (see :mod:`circledyn.cli`).
"""

SOLVER_TOL = 1e-13
DEPTH_CAP = 60
CONJUGACY_DEPTH_CAP = 48
CELL_CAP = 2**20
WORK_CAP = 10**7
MIN_CUT_GAP = 1e-9
MONOTONE_GRID = 2048
ENDPOINT_SNAP = 1e-12
QS_DENOM_FLOOR = 1e-300
MODULUS_GRID = 1024
SCALE_LADDER = tuple(2.0**-j for j in range(1, 21))
PROBE_LEVEL = 6

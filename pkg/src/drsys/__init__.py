"""Partial dynamical systems on finite samples: domain-aware iteration,
separated/spanning/generating growth counts, wandering classification,
countable-alphabet subshifts, and a gallery of sampled example systems."""

from .core import (
    check_invariance,
    closure_in_sample,
    dn_distance,
    image_set,
    iterate,
    iteration_domain,
    preimage_of_image,
    restrict,
)
from .entropy import (
    CountingConfig,
    EntropyReport,
    SampleWindow,
    ScheduleError,
    estimate_entropy,
    max_separated,
    min_generating,
    min_spanning,
    sgen,
    sspan,
    ssep,
    verify_clopen_supremum,
    verify_sandwiches,
)
from .counting import ExactnessBudgetError
from .points import Point, euclidean, symbolic
from .system import PartialSystem, SystemValidationError, make_table_system
from .wandering import (
    DynamicalBall,
    SweepPolicy,
    dynamical_ball,
    eventually_merging_rule,
    partition_omega,
    test_wandering_witness,
    verify_omega_properties,
)

__version__ = "0.1.0"

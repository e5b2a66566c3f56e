"""Approximate matrix multiplication with the fast Walsh-Hadamard sketch."""

from .amplification import AmplifyConfig, AmplifyTrace, amplify_multiply
from .evaluator import (
    EntryStats,
    ErrorReport,
    ExperimentPlan,
    FlatnessResult,
    flatness_probe,
    predicted_sq_error,
    run_experiment,
)
from .fwht import fwht_rows, fwht_two_sided, fwht_vector, hadamard_entry, hadamard_matrix
from .matrix import (
    diag_scale,
    frobenius_norm_sq,
    generate,
    is_power_of_two,
    make_rng,
    next_power_of_two,
    random_signs,
)
from .rotation import RotationKeys, check_multiplicativity, rotate, rotate_inverse
from .sampling import IndexSet, SamplerMode, sample_indices
from .sketch import (
    Estimator,
    SketchConfig,
    SketchResult,
    exact_multiply,
    naive_sample_multiply,
    partial_product,
    sketch_multiply,
)

__version__ = "0.1.0"

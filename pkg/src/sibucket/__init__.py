"""Simulator and metrics engine for single-pixel (bucket-detector)
computational imaging with structured illumination."""

from .basis import (
    BasisBundle,
    GramMatrix,
    biorthogonal,
    check_condition1,
    check_condition2,
    gram,
    independence_rank,
    orthonormalize_polar,
)
from .errors import (
    ConditionError,
    FieldFormatError,
    GridMismatchError,
    ParameterError,
    SIBucketError,
    SingularSetError,
)
from .grid import Field, Grid, inner, norm, read_field, spatial_mean, write_field
from .metrics import (
    FlatSnr,
    IqcResult,
    McSnr,
    MetricsReport,
    compute_report,
    iqc,
    resolution_map,
    resolution_measurement,
    resolution_uniform,
    snr_analytic,
    snr_flat,
    snr_flat_measurement,
    snr_monte_carlo,
    width_delta2,
    width_variance,
)
from .patterns import (
    PatternSet,
    ValidationReport,
    harmonic_masks,
    pixel_masks,
    pseudo_random_masks,
    two_pixel_masks,
    validate,
)
from .recon import (
    KernelMatrix,
    ReconMatrix,
    classify,
    green_kernel,
    measurement_kernel,
    psf,
    recon_matrix,
    reconstruct,
    reconstruct_noiseless,
)
from .rng import BACKEND as RNG_BACKEND
from .sim import (
    MeasurementRecord,
    ObjectSpec,
    bucket_means,
    builtin_object,
    run_trials,
    sample_buckets,
    transmission_coeffs,
)

__version__ = "0.1.0"

"""regionaudit: measures how much of a bounded feature space a trained
biometric verifier accepts, and how that acceptance region responds to
population shape, threshold choice, and noise-augmented training."""

__version__ = "0.1.0"

from ._accel import HAS_NUMBA, NUMBA_ENABLED
from .errors import InvalidInputError, RegionAuditError, TrainingDivergedError
from .dataset import (
    LabeledDataset,
    NormalizationParams,
    assemble_user_task,
    balanced_negative_sample,
    concat_datasets,
    min_max_normalize,
    read_dataset_csv,
    train_test_split,
    write_dataset_csv,
)
from .synth import (
    FixedVariance,
    HierarchicalVariance,
    Population,
    PopulationSpec,
    SampledVariance,
    SweepPoint,
    generate_population,
    make_halfspace_dataset,
)
from .classifiers import ALGORITHMS, TrainConfig, load_model, save_model, train
from .region import (
    BinnedRegionReport,
    EerPoint,
    RegionEstimate,
    ThresholdCurve,
    estimate_acceptance_region,
    evaluate_curves,
    find_eer,
    measure_region_volume,
    rates_at_threshold,
    region_overlap,
    threshold_grid,
)
from .mitigation import BetaNoiseSpec, augment_training_set, beta_noise
from .harness import (
    EXPERIMENT_NAMES,
    PROFILES,
    EvalSettings,
    ExperimentConfig,
    run_experiment,
    run_user_evaluation,
)

__all__ = [
    "__version__",
    "HAS_NUMBA",
    "NUMBA_ENABLED",
    "RegionAuditError",
    "InvalidInputError",
    "TrainingDivergedError",
    "LabeledDataset",
    "NormalizationParams",
    "assemble_user_task",
    "balanced_negative_sample",
    "concat_datasets",
    "min_max_normalize",
    "read_dataset_csv",
    "train_test_split",
    "write_dataset_csv",
    "FixedVariance",
    "SampledVariance",
    "HierarchicalVariance",
    "Population",
    "PopulationSpec",
    "SweepPoint",
    "generate_population",
    "make_halfspace_dataset",
    "ALGORITHMS",
    "TrainConfig",
    "train",
    "save_model",
    "load_model",
    "RegionEstimate",
    "ThresholdCurve",
    "EerPoint",
    "BinnedRegionReport",
    "threshold_grid",
    "estimate_acceptance_region",
    "evaluate_curves",
    "find_eer",
    "rates_at_threshold",
    "measure_region_volume",
    "region_overlap",
    "BetaNoiseSpec",
    "beta_noise",
    "augment_training_set",
    "EXPERIMENT_NAMES",
    "PROFILES",
    "EvalSettings",
    "ExperimentConfig",
    "run_experiment",
    "run_user_evaluation",
]

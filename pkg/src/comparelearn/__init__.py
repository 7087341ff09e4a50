"""Finite-domain toolkit for learning with a source class and a benchmark class."""

from .__about__ import __version__
from .core import (
    STAR,
    BinaryClass,
    BinaryHypothesis,
    BinaryModel,
    ConfigError,
    Domain,
    EnumerationCapError,
    GuardError,
    GVConstructionError,
    IntervalPartition,
    NoConsistentHypothesisError,
    RealClass,
    RealHypothesis,
    RealModel,
    ToolkitError,
    agreement,
    agreement_class,
    as_real_class,
    as_real_hypothesis,
    as_real_model,
    binarize_class,
    binarize_hypothesis,
    chi,
    class_from_json,
    class_to_json,
    discretize_labels,
    gen_product,
    model_from_json,
    model_to_json,
    multi_agreement_class,
    pi_proj,
    proj_interval,
    shift_scale_class,
    sigma_mask_class,
    sign,
)
from .dimensions import (
    DimensionResult,
    MistakeTree,
    covering_number_exact,
    covering_upper,
    fat,
    gv_packing,
    is_fat_shattered,
    is_shattered,
    ldim,
    mutual_fat,
    mutual_fat2,
    mutual_ldim,
    mutual_vc,
    packing_number,
    tree_shattered_by,
    vc,
)
from .offline import (
    LearnerParams,
    LossFunction,
    WeakOracle,
    absolute_loss,
    agreement_learn,
    boost,
    comparative_learn,
    corm_general,
    dcorm_binary_benchmark,
    dcorm_real,
    erm_agnostic,
    erm_realizable,
    exact_weak_oracle,
    ma_mc_learn,
    omni_learn,
    omnipredict,
    round_model,
    squared_loss,
    tau,
    weak_from_strong,
)
from .online import (
    LabeledSequence,
    RegretReport,
    RWMLearner,
    SOALearner,
    comp_online,
    play_tree_adversary,
    run_sequence,
)
from .stat_model import (
    Dataset,
    DiscreteDistribution,
    SourceModel,
    ber_star,
    cal_error,
    class_error,
    corr_partial,
    correlation,
    ma_error,
    make_distribution,
    mc_error,
    mc_error_lambda,
    regression_loss,
    rng_stream,
    sample,
    sign_cal_error,
)
from .experiments import (
    EstimateReport,
    TaskSpec,
    estimate_sample_complexity,
    goal_satisfied,
    run_experiment,
    scenario,
    wilson_interval,
)

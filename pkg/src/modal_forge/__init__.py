"""modal-forge: SDOF dynamics simulation, graph-network surrogate modeling,
and genetic-algorithm parameter search.

The pipeline: simulate single-degree-of-freedom systems with the
Newmark-beta integrator, sweep a (mass, stiffness, damping) design space
into a peak-displacement dataset, train a small message-passing surrogate
on it, and search the space with a genetic algorithm whose optimum is then
verified by direct simulation.
"""

from .dataset import (
    DEFAULT_SPACE,
    Dataset,
    GridSampling,
    LogUniformSampling,
    ParameterSpace,
    SampleRecord,
    generate_dataset,
    read_dataset,
    sample_parameters,
    split_dataset,
    write_dataset,
)
from .errors import (
    CheckpointError,
    DataError,
    InvalidInputError,
    ModalForgeError,
    NumericalError,
)
from .excitation import (
    BaseRecord,
    ExcitationSpec,
    Free,
    GroundMotionRecord,
    HalfSinePulse,
    Sine,
    demo_ground_motion,
    excitation_descriptor,
    load_ground_motion,
    parse_ground_motion,
    resample_record,
    synthesize_force,
)
from .ga import (
    DEFAULT_BOUNDS,
    DirectFitness,
    GaConfig,
    GaResult,
    SurrogateFitness,
    blend_crossover,
    decode,
    direct_fitness,
    evolve,
    gaussian_mutate,
    init_population,
    surrogate_fitness,
    tournament_select,
)
from .gnn import (
    GnnModel,
    Metrics,
    NormStats,
    SdofGraph,
    TrainConfig,
    encode_graph,
    evaluate,
    fit_norm_stats,
    forward,
    gradient_check,
    init_model,
    load_model,
    loss_and_gradients,
    metrics_from_predictions,
    predict_batch,
    save_model,
    train,
)
from .sdof import (
    InitialConditions,
    ModalProps,
    NewmarkParams,
    SdofSystem,
    TimeHistory,
    absolute_acceleration,
    analytic_free_vibration,
    damping_from_ratio,
    derive_modal,
    max_abs_displacement,
    newmark_solve,
)

__version__ = "0.1.0"

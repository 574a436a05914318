"""Matroid secretary library: rank-oracle matroids, online secretary
algorithms, their lift/projection/tree-composition wrappers and an exact or
Monte Carlo evaluation harness."""
from .errors import MatroidError, ResourceLimitError, UnsupportedModeError
from .matroid import (
    DirectSum,
    Dual,
    GraphicMatroid,
    LinearMatroid,
    Matroid,
    Minor,
    RankFunctionMatroid,
    SparsePavingMatroid,
    Truncation,
    UniformMatroid,
    closure,
    complete_graph,
    direct_sum,
    dual,
    fano,
    minor,
    r10,
    rank,
    same_rank_function,
    simplify,
    truncate,
)
from .enumeration import (
    basis_membership,
    density,
    enumerate_bases,
    enumerate_circuits,
    is_paving,
    max_weight_basis,
    opt,
    sample_random_basis,
)
from .connectivity import (
    LambdaWitness,
    PerturbationStep,
    TreeDecomposition,
    connectivity,
    edge_thickness,
    is_full,
    lemma_lambda_witness,
    local_connectivity,
    normalize_leaf,
    thickness,
    verify_perturbation_step,
)
from .harness import ArrivalStream, EvalReport, evaluate_exact, evaluate_monte_carlo, simulate
from .algorithms import (
    ClassicalSecretary,
    KleinbergUNI,
    OnlineAlgorithm,
    PAV,
    RandomBasis,
    ThresholdGreedy,
    classical_secretary,
    from_spec,
    kleinberg_uni,
    pav,
    random_basis,
    threshold_greedy,
)
from .combinators import (
    CompositionPlan,
    lift_wrap,
    multi_project_wrap,
    perturb_wrap,
    project_wrap,
    regular_compose,
    restrict_wrap,
    tree_compose,
)

__version__ = "0.1.0"

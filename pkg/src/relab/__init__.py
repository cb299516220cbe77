"""relab: resolution/relevance analysis of discrete samples and models.

The library characterises a sample by how finely it resolves states
(resolution) and how much of that detail is informative about the underlying
process (relevance), and applies the same pair of coordinates to spike
trains, clusterings, tilted sampling ensembles and learning machines.
"""

__version__ = "0.1.0"

from .errors import (
    BadArgument,
    BadColumn,
    BadData,
    BadLabel,
    Degenerate,
    EmptyInput,
    NumericalFailure,
    RelabError,
    TooLarge,
)
from .sample_core import (
    CategoricalTable,
    DegeneracyProfile,
    EntropySummary,
    FrequencyProfile,
    RRPoint,
    Sample,
    build_degeneracy,
    build_frequency,
    degeneracy_from_counts,
    entropy_summary,
    project_columns,
    rank_sites,
    summary_of_degeneracy,
)
from .combinatorics import (
    count_partitions,
    degeneracy_of_partition,
    exact_counts,
    iter_partitions,
    log_counts,
    most_numerous_profile,
    rr_density,
)
from .frontier import (
    ExponentFit,
    FrontierCurve,
    ZipfGap,
    fit_exponent,
    frontier_relevance_at,
    max_relevance_frontier,
    random_baseline,
    slope_exponent,
    zipf_gap,
)
from .msr import MSRResult, SpikeTrain, bin_spikes, msr_curve, multiscale_relevance
from .cluster_eval import (
    Dendrogram,
    RankingReport,
    TruthMetrics,
    agglomerate,
    cut_at_k,
    kendall_tau,
    rank_algorithms,
    rr_trajectory,
    truth_metrics,
)
from .large_dev import (
    LDTConfig,
    SweepResult,
    beta_sweep,
    detect_transition,
    log_weight,
    mcmc_tilted_chain,
    observed_counts,
    posterior_predictive_sample,
)
from .olm_rem import (
    OLMSpec,
    REMConfig,
    REMResult,
    critical_nu,
    model_relevance,
    pairwise_couplings,
    pairwise_energies,
    pow2_spec,
    olm_entropy_energy_curve,
    olm_optimal_costs,
    rem_critical_params,
    rem_phase_diagram,
    rem_simulate,
    sample_extreme_value,
    specific_heat_curve,
)
from .inference_bounds import (
    BoundResult,
    GaussianPosteriorSummary,
    kl_posterior_prior,
    log_evidence,
    param_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Friend suggestion by affinity-weighted Random Walk with Restart, with
comparison baselines and a link-prediction evaluation harness."""
from .baselines import BaselineKind, CurrentApproachParams, baseline_suggest, current_score
from .candidates import CandidateSet, select_candidates
from .evaluation import (
    PROPOSED,
    CohortSpec,
    EvalReport,
    TestCohort,
    auc,
    build_test_cohorts,
    precision_at_k,
    run_benchmark,
    sweep_weights,
)
from .features import FeatureVector, FeatureWeights, adamic_adar, affinity, feature_vector
from .graph import (
    AttrKind,
    EdgeRecord,
    Snapshot,
    apply_user_filter,
    load_snapshot,
    neighborhood,
    temporal_split,
)
from .rwr import LocalGraph, RwrDistribution, RwrParams, build_local_graph, rwr_distribution
from .suggester import SuggestionList, SuggestionParams, score_candidate, suggest
from .synthgen import SynthConfig, generate_dataset

__version__ = "0.1.0"

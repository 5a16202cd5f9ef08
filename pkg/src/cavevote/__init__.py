"""Election simulation and influence metrics on community-structured graphs."""

from .dynamics import (BehaviorDistribution, ElectionConfig, ElectionOutcome,
                       Phase, PollState, StrategyMatrix, classify_poll_state,
                       run_election, sample_strategies, step)
from .experiments import (ElectionRecord, PccPoint, RegressionResult,
                          SurfacePoint, SweepConfig, SweepError, ols_fit,
                          pcc_curves, pearson, run_batch,
                          surface_mean_abs_gap)
from .graphs import (Graph, HrcParams, PartyAssignment, assign_parties_spa,
                     build_caveman, complete_graph, generate_hrc, line_graph,
                     poll_fractions, rewire_relaxed, star_graph)
from .metrics import (AssortmentConvention, CliqueCounts, GapConvention,
                      MetricReport, caveman_assortment_closed,
                      caveman_gap_closed, caveman_rival_assortment_closed,
                      clique_gap, deterministic_vote_shares,
                      deterministic_voter_skew, efficiency_gap, equal_rep_gap,
                      influence_gap, influence_gap_value, initial_majority,
                      metric_report, node_assortment, party_assortment,
                      plurality_core_gap)

__version__ = "0.1.0"

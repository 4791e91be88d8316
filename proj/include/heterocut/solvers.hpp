#pragma once

#include <vector>

#include "heterocut/graph.hpp"
#include "heterocut/rng.hpp"

namespace heterocut {

/// Result of the Goemans-Williamson style max-cut solve: the relaxation's
/// Gram matrix (PSD, unit diagonal), the best rounded cut, and diagnostics.
struct SdpSolution {
  int n = 0;
  std::vector<double> gram;  // row-major n*n
  Partition cut;
  double cut_value = 0.0;
  double sdp_objective = 0.0;  // trace(W Sigma)
  double sdp_cut_bound = 0.0;  // upper bound on any cut implied by the relaxation
  int sweeps = 0;

  double gram_at(int i, int j) const { return gram[static_cast<std::size_t>(i) * n + j]; }
};

/// Solves the unit-diagonal PSD relaxation of max-cut by block-coordinate
/// minimization over a rank-ceil(sqrt(2n)) factorization, then rounds with
/// random hyperplanes and returns the best of `rounding_trials` cuts.
/// Dense-graph memory makes this impractical past ~1000 vertices, so n is
/// capped there. Throws SolverFailure if the solve stalls before tolerance.
SdpSolution maxcut_gw(const WeightGraph& g, int rounding_trials, SeedStream& stream);

/// Multi-start single-vertex local search for max-K-cut. Each start draws an
/// independent random assignment from a derived substream, then scans
/// vertices in index order accepting the first strictly improving relabel
/// until no move improves. Starts may run in parallel; the best cut wins,
/// ties broken by start index. `move_values`, when given, receives the cut
/// value after every accepted move of the winning start.
Partition maxkcut_local(const WeightGraph& g, int k, int starts, SeedStream& stream,
                        std::vector<double>* move_values = nullptr);

/// Exhaustive optimum; throws InstanceTooLarge when k^n exceeds 1e7.
Partition brute_force_maxkcut(const WeightGraph& g, int k);

}  // namespace heterocut

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "heterocut/geometry.hpp"

namespace heterocut {

struct SyncResult {
  std::vector<Rotation> rotations;
  double residual = 0.0;  // sum over valid pairs of the common-line mismatch
  int iterations = 0;
};

struct LudOptions {
  int max_iters = 100;
  double tol = 1e-8;  // relative objective change
};

/// Estimates rotations from one class's common lines by locally minimizing
/// the sum of unsquared pair residuals ||R_i c_ij - R_j c_ji||.
///
/// Initialization builds the 2n x 2n synchronization matrix with 2x2 blocks
/// c_ij c_ji^T, takes its three leading eigenvectors, and projects each 3x2
/// block to orthonormal columns. Refinement runs reweighted least squares
/// with weights 1/max(r_ij, 1e-8): each sweep updates every image's in-plane
/// frame to the weighted Procrustes optimum given the others, then reweights.
/// The reported residual never increases; a sweep that fails to improve is
/// rolled back and ends the loop.
///
/// The solution is determined only up to a global O(3) gauge (rotation plus
/// handedness). Throws TooFewImages (< 3) or DisconnectedPairs.
SyncResult lud_rotations(const CommonLineTable& table, const LudOptions& opts = {});

/// Aligns estimated rotations to a reference set over the full gauge group:
/// both handedness branches are tried, each with the orthogonal Procrustes
/// rotation fitted over the stacked matrices. Returns the aligned rotations
/// and the mean per-image spectral-norm error.
std::pair<std::vector<Rotation>, double> align_rotations(std::span<const Rotation> estimated,
                                                         std::span<const Rotation> truth);

/// True when every image is reachable from every other through valid pairs.
bool pair_graph_connected(const CommonLineTable& table);

}  // namespace heterocut

#pragma once

#include "geosep/core.hpp"

#include <optional>

namespace geosep {

// Ground truth for equivalence up to rotation (optionally reflection),
// translation, and relabeling. Both oracles center the clouds, search a
// family of candidate alignments, and report the best witness found.
//
// residual: the smallest maximum point distance over the searched witnesses;
// infinite when nothing was searched (e.g. rank mismatch). The verdict is
// residual <= tol * max(1, diameter). Both oracles canonicalize the argument
// order internally and invert the witness when the arguments arrive swapped,
// so result(X, Y) and result(Y, X) match.
struct AlignmentResult {
  bool equivalent = false;
  double residual = 0.0;
  std::optional<GroupElement> witness;
};

// Exhaustive over all n! relabelings, each aligned by the orthogonal
// Procrustes solution (determinant-corrected when proper). Any d, n <= 8.
// The residual is the true minimum over every relabeling.
AlignmentResult align_exhaustive(const PointCloud& X, const PointCloud& Y,
                                 bool proper, double tol = 1e-6);

// Frame-candidate search, d = 3 and any n: the most independent centered
// pair of X is matched against every pair of Y whose frame Gram agrees,
// each candidate rotation is scored by greedy nearest-neighbor matching.
// Clouds of rank <= 1 are compared through sorted coordinates along their
// lines. Reliable when tol is well below the minimum inter-point gap;
// near-degenerate clouds are a documented limitation.
AlignmentResult align_frames(const PointCloud& X, const PointCloud& Y,
                             bool proper, double tol = 1e-6);

}  // namespace geosep

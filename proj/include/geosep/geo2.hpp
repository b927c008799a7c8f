#pragma once

#include "geosep/embed.hpp"

namespace geosep {

// Frame-based features. Every ordered tuple of d-1 distinct centered points
// spans a frame, completed by the generalized cross product; the Gram matrix
// of the frame plus an embedded multiset of the remaining points in frame
// coordinates summarizes the cloud relative to that tuple, and one outer
// embedding over all tuples gives a feature that separates clouds up to
// rotation + permutation (and, with both orientations, up to reflection too).

// Cofactor expansion along the appended column: component k of the output is
// (-1)^(k+d) det(V with row k removed), 1-based. The output w is orthogonal
// to every column of V and det([V | w]) = |w|^2. Reduces to the classical
// cross product for 3 x 2 input.
Eigen::VectorXd generalized_cross(const Eigen::MatrixXd& V);

// [x_i^c, x_j^c, orientation * (x_i^c cross x_j^c)] of the centered cloud;
// d = 3, orientation +1 or -1.
Eigen::MatrixXd frame(const PointCloud& X, int i, int j, int orientation);

struct FrameFeature {
  int i = 0;
  int j = 0;
  int orientation = +1;
  Eigen::MatrixXd gram;    // frame' * frame, positive semidefinite
  Eigen::VectorXd h;       // embedded multiset of the other points
};

// Gram of the (i, j) frame plus the alpha-embedded multiset of the remaining
// n-2 points expressed in frame coordinates.
FrameFeature frame_feature(const PointCloud& X, int i, int j, int orientation,
                           const EmbedParams& alpha);

struct Geo2Config {
  int d = 3;
  int n = 0;
  int K1 = 0;              // inner embedding width
  int K2 = 0;              // outer embedding width
  PsiKind psi = PsiKind::sort;
  bool both_orientations = false;
  EmbedParams alpha;       // inner: D = d, N = n - d + 1
  EmbedParams beta;        // outer: one column per tuple (per orientation)

  // Widths follow the 2 * intrinsic + 1 rule: K1 = 2 d (n - d + 1) + 1 and
  // K2 = 2 d n + 1. make_so(n) equals make_dgeo(3, n), so the d = 3 engine
  // and the general one agree bit for bit.
  static Geo2Config make_so(int n, Seed seed, PsiKind psi);
  static Geo2Config make_o(int n, Seed seed, PsiKind psi);
  static Geo2Config make_dgeo(int d, int n, Seed seed, PsiKind psi);
};

// Rotation + permutation invariant feature, d = 3. Separating on clouds with
// distinct-degree profiles and, in the generic case, on all of R^(3 x n).
Eigen::VectorXd f_2geo_so(const PointCloud& X, const Geo2Config& cfg);

// Also reflection invariant: the tuple multiset carries both orientations,
// all positive-orientation tuples in lexicographic order, then all negative.
Eigen::VectorXd f_2geo_o(const PointCloud& X, const Geo2Config& cfg);

// General dimension, rotation + permutation invariant, n >= d. Tuples are
// the ordered (d-1)-tuples of distinct indices in lexicographic order.
Eigen::VectorXd f_dgeo(const PointCloud& X, const Geo2Config& cfg);

}  // namespace geosep

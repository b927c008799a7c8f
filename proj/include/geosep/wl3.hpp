#pragma once

#include "geosep/embed.hpp"

#include <vector>

namespace geosep {

// Triplet color refinement over centered inner products, d = 3. Colors live
// on ordered triplets (repeats included); one refinement round plus a global
// reduction already separates clouds up to orthogonal transforms and
// permutation in the generic case.

// Initial colors: column (i1 * n + i2) * n + i3 holds the row-major
// flattened 3 x 3 Gram matrix of the centered points (x_i1, x_i2, x_i3).
// Invariant under every orthogonal transform of the cloud. Refuses n > 64;
// the color table has n^3 columns.
Eigen::MatrixXd wl3_initial(const PointCloud& X);

// One round: the color of triplet i gains the embedded multiset of
// D_j(i) = (color(j, i2, i3), color(i1, j, i3), color(i1, i2, j)), j = 1..n,
// appended below the previous color.
Eigen::MatrixXd wl3_refine(const Eigen::MatrixXd& colors, int n,
                           const EmbedParams& params);

struct Wl3Config {
  int T = 1;
  int K = 0;  // embedding width per round and for the global reduction
  PsiKind psi = PsiKind::sort;
  std::vector<EmbedParams> round;
  EmbedParams global;

  static Wl3Config make(int n, int T, Seed seed, PsiKind psi);
};

// T refinement rounds, then one embedding over all n^3 final colors.
Eigen::VectorXd f_3wl(const PointCloud& X, const Wl3Config& cfg);

}  // namespace geosep

#pragma once

#include "geosep/embed.hpp"

#include <vector>

namespace geosep {

// Distance-profile features: iterated message passing over the pairwise
// distances only. Cheap and rotation/reflection/translation invariant, but
// incomplete; regular-graph style clouds with identical distance profiles
// collapse to the same feature.

// Ascending distances from point i to every point, the zero self-distance
// included. Length n.
Eigen::VectorXd geometric_degree(const PointCloud& X, int i);

// All n degree vectors in lexicographically ascending order, so the result
// is a canonical multiset form.
std::vector<Eigen::VectorXd> degree_histogram(const PointCloud& X);

// True when no two degree vectors coincide; vectors closer than tol in
// L-infinity count as equal. A single point is trivially distinct.
bool is_distinct(const PointCloud& X, double tol);

// T rounds of state updates followed by one multiset reduction over the
// final states. Step t updates h_i from (h_i, {{(h_j, |x_i - x_j|)}}_{j != i}).
struct Geo1Config {
  int T = 2;
  int K = 0;  // state and output width
  PsiKind psi = PsiKind::sort;
  std::vector<EmbedParams> step;  // one vector-multiset embedding per round
  EmbedParams final;              // plain multiset over the n final states

  // K defaults to embedding_dim(6n + ... ) -- callers pass K explicitly via
  // the second overload when they need something else.
  static Geo1Config make(int n, int T, Seed seed, PsiKind psi);
  static Geo1Config make(int n, int T, int K, Seed seed, PsiKind psi);
};

// Initial states are zero vectors of width K. Requires n >= 2.
Eigen::VectorXd f_1geo(const PointCloud& X, const Geo1Config& cfg);

}  // namespace geosep

#pragma once

// Hard instance families and the benchmark sampler built on them.
//
// The Cholesky family embeds a pair of non-isomorphic regular graphs as
// point clouds: columns of a PSD square root of each graph Laplacian. Both
// graphs share the degree sequence, so every pairwise-distance profile
// coincides, yet the clouds are inequivalent under O(m) x S_m whenever the
// graphs are non-isomorphic.

#include <cstdint>
#include <string>
#include <string_view>

#include "geosep/core.hpp"

namespace geosep {

enum class PairLabel { equivalent, inequivalent, unknown };
enum class GroupKind { so, o };

std::string_view label_name(PairLabel l);  // "EQUIVALENT" | "INEQUIVALENT" | "UNKNOWN"
std::string_view group_name(GroupKind g);  // "SO" | "O"
GroupKind parse_group(std::string_view name);

struct InstancePair {
  PointCloud X;
  PointCloud Y;
  std::string name;
  PairLabel label = PairLabel::unknown;
  GroupKind group = GroupKind::o;  // group the label refers to
  Seed seed = 0;
};

// Laplacian of one m-cycle (split = false) or of two disjoint m/2-cycles
// (split = true). m must be even and >= 6 so each half is a genuine cycle.
Eigen::MatrixXd cycle_laplacian(int m, bool split);

// E with E^T E = L for symmetric PSD L, via the eigendecomposition square
// root. Eigenvalues below -eps are an error; small negative ones are
// clamped to zero.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& L, double eps = 1e-9);

// X = two (half)-cycles, Y = one (2*half)-cycle, both as Laplacian factor
// clouds with d = n = 2*half. Inequivalent under O x S_n, with identical
// geometric-degree histograms.
InstancePair gen_cholesky_pair(int half);

// One benchmark sample: `src` moved by a random proper rotation and
// permutation (plus a translation when requested), then Gaussian noise of
// standard deviation `sigma` added per coordinate.
PointCloud make_sample(const PointCloud& src, double sigma, bool translate,
                       Seed seed);

enum class Which { first, second };

PointCloud make_sample(const InstancePair& pair, Which which, double sigma,
                       Seed seed, bool translate = false);

}  // namespace geosep

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace geosep {

// Point cloud in R^d, one point per column, double precision throughout.
using PointCloud = Eigen::MatrixXd;
using Seed = std::uint64_t;

// Deterministic random stream. All scalar recipes are spelled out on top of
// the raw mt19937_64 word sequence, so identical seeds reproduce identical
// draws for a given release regardless of the standard library in use.
class Rng {
 public:
  explicit Rng(Seed seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gaussian();

  // Uniform on {0, ..., n-1} without modulo bias.
  int below(int n);

  // Fills in column-major order.
  void fill_gaussian(Eigen::Ref<Eigen::MatrixXd> m);

  // Uniform permutation of {0, ..., n-1} by Fisher-Yates.
  std::vector<int> permutation(int n);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Seed of a named child stream. Streams derived from the same root with
// different names or indices are independent for all practical purposes.
Seed derive_seed(Seed root, std::string_view name, std::uint64_t index = 0);
Rng derive_stream(Seed root, std::string_view name, std::uint64_t index = 0);

// Rigid motion plus relabeling: point j of the input lands in column
// sigma[j] of the output, carrying R * x_j + t.
struct GroupElement {
  Eigen::MatrixXd R;       // d x d orthogonal
  Eigen::VectorXd t;       // translation, zero unless requested
  std::vector<int> sigma;  // permutation of {0, ..., n-1}
  bool proper = true;      // det(R) = +1 when true
};

// Throw std::invalid_argument when a structural invariant fails:
// finite entries, orthogonality within 1e-12, |det| = 1 within 1e-9,
// sigma a bijection.
void validate(const PointCloud& X);
void validate(const GroupElement& g);

// Ascending sort in the bitwise total order of doubles (-0.0 precedes +0.0,
// otherwise numeric order; inputs must be free of NaN). The result depends
// only on the multiset of values, never on their input order, which keeps
// every downstream reduction permutation-stable bit for bit.
void sort_ascending(double* v, std::ptrdiff_t n);
Eigen::VectorXd sorted_ascending(Eigen::VectorXd v);

// Coordinate-wise mean accumulated in sorted order, so permuting the points
// changes nothing, not even the rounding.
Eigen::VectorXd stable_mean(const PointCloud& X);

// X minus its column mean; output columns sum to zero within
// 1e-12 * max(1, largest |entry|).
PointCloud center(const PointCloud& X);

PointCloud apply(const GroupElement& g, const PointCloud& X);

// Haar-distributed R on SO(d) (proper) or O(d), uniform sigma, and standard
// Gaussian t when with_translation is set. Draw order: R entries, sigma,
// then t.
GroupElement random_group_element(int d, int n, bool proper,
                                  bool with_translation, Rng& rng);

// X + sigma * G with iid standard Gaussian G, filled column-major.
PointCloud add_noise(const PointCloud& X, double sigma, Rng& rng);

// Pairwise Euclidean distances, exact zero diagonal, bitwise symmetric.
Eigen::MatrixXd distance_matrix(const PointCloud& X);

double diameter(const PointCloud& X);

// |f - g|_inf / max(1, |f|_inf, |g|_inf); the relative scale used by every
// separation verdict.
double relative_gap(const Eigen::VectorXd& f, const Eigen::VectorXd& g);

}  // namespace geosep

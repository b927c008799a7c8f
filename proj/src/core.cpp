#include "geosep/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace geosep {

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0,1] keeps the log finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

int Rng::below(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::below requires n >= 1");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = bits();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

void Rng::fill_gaussian(Eigen::Ref<Eigen::MatrixXd> m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = gaussian();
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(p[static_cast<std::size_t>(i)],
              p[static_cast<std::size_t>(below(i + 1))]);
  return p;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Seed derive_seed(Seed root, std::string_view name, std::uint64_t index) {
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a over the name
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::uint64_t z = splitmix64(root ^ h);
  z = splitmix64(z ^ (index * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull));
  return z;
}

Rng derive_stream(Seed root, std::string_view name, std::uint64_t index) {
  return Rng(derive_seed(root, name, index));
}

void validate(const PointCloud& X) {
  if (X.rows() < 1 || X.cols() < 1)
    throw std::invalid_argument("point cloud must have d >= 1 and n >= 1");
  if (!X.allFinite())
    throw std::invalid_argument("point cloud has a non-finite entry");
}

void validate(const GroupElement& g) {
  const Eigen::Index d = g.R.rows();
  if (d < 1 || g.R.cols() != d)
    throw std::invalid_argument("group element: R must be square");
  if (!g.R.allFinite() || !g.t.allFinite())
    throw std::invalid_argument("group element: non-finite entry");
  if (g.t.size() != d)
    throw std::invalid_argument("group element: t does not match R");
  const double ortho =
      (g.R.transpose() * g.R - Eigen::MatrixXd::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();
  if (ortho > 1e-12)
    throw std::invalid_argument("group element: R'R deviates from I by " +
                                std::to_string(ortho));
  const double det = g.R.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9)
    throw std::invalid_argument("group element: |det R| deviates from 1");
  if (g.proper && det < 0.0)
    throw std::invalid_argument("group element: proper flag with det R = -1");
  const int n = static_cast<int>(g.sigma.size());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : g.sigma) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("group element: sigma is not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

namespace {

// Monotone map to unsigned keys: ascending key order is ascending numeric
// order with -0.0 before +0.0.
inline std::uint64_t sort_key(double x) {
  const std::uint64_t u = std::bit_cast<std::uint64_t>(x);
  return (u & 0x8000000000000000ull) ? ~u : (u | 0x8000000000000000ull);
}

inline double key_value(std::uint64_t k) {
  const std::uint64_t u =
      (k & 0x8000000000000000ull) ? (k ^ 0x8000000000000000ull) : ~k;
  return std::bit_cast<double>(u);
}

void radix_sort_keys(std::uint64_t* a, std::uint64_t* tmp, std::ptrdiff_t n) {
  for (int pass = 0; pass < 8; ++pass) {
    const int shift = pass * 8;
    std::size_t count[256] = {};
    for (std::ptrdiff_t i = 0; i < n; ++i)
      ++count[(a[i] >> shift) & 0xFF];
    std::size_t pos[256];
    std::size_t run = 0;
    for (int b = 0; b < 256; ++b) {
      pos[b] = run;
      run += count[b];
    }
    for (std::ptrdiff_t i = 0; i < n; ++i)
      tmp[pos[(a[i] >> shift) & 0xFF]++] = a[i];
    std::swap(a, tmp);
  }
  // Eight passes leave the result back in the original buffer.
}

}  // namespace

void sort_ascending(double* v, std::ptrdiff_t n) {
  if (n < 2) return;
  if (n < 48) {
    // Insertion sort on the monotone keys.
    for (std::ptrdiff_t i = 1; i < n; ++i) {
      const double x = v[i];
      const std::uint64_t kx = sort_key(x);
      std::ptrdiff_t j = i - 1;
      while (j >= 0 && sort_key(v[j]) > kx) {
        v[j + 1] = v[j];
        --j;
      }
      v[j + 1] = x;
    }
    return;
  }
  thread_local std::vector<std::uint64_t> keys, scratch;
  keys.resize(static_cast<std::size_t>(n));
  scratch.resize(static_cast<std::size_t>(n));
  for (std::ptrdiff_t i = 0; i < n; ++i) keys[static_cast<std::size_t>(i)] = sort_key(v[i]);
  radix_sort_keys(keys.data(), scratch.data(), n);
  for (std::ptrdiff_t i = 0; i < n; ++i) v[i] = key_value(keys[static_cast<std::size_t>(i)]);
}

Eigen::VectorXd sorted_ascending(Eigen::VectorXd v) {
  sort_ascending(v.data(), v.size());
  return v;
}

Eigen::VectorXd stable_mean(const PointCloud& X) {
  validate(X);
  const Eigen::Index d = X.rows(), n = X.cols();
  Eigen::VectorXd mean(d), row(n);
  for (Eigen::Index r = 0; r < d; ++r) {
    row = X.row(r);
    sort_ascending(row.data(), n);
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) s += row[k];
    mean[r] = s / static_cast<double>(n);
  }
  return mean;
}

PointCloud center(const PointCloud& X) {
  return X.colwise() - stable_mean(X);
}

PointCloud apply(const GroupElement& g, const PointCloud& X) {
  validate(X);
  validate(g);
  if (g.R.cols() != X.rows())
    throw std::invalid_argument("apply: R dimension does not match the cloud");
  if (static_cast<Eigen::Index>(g.sigma.size()) != X.cols())
    throw std::invalid_argument("apply: sigma length does not match the cloud");
  PointCloud out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    out.col(g.sigma[static_cast<std::size_t>(j)]) = g.R * X.col(j) + g.t;
  return out;
}

GroupElement random_group_element(int d, int n, bool proper,
                                  bool with_translation, Rng& rng) {
  if (d < 1 || n < 1)
    throw std::invalid_argument("random_group_element requires d, n >= 1");
  Eigen::MatrixXd A(d, d);
  rng.fill_gaussian(A);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  // Fixing the signs of R's diagonal makes Q Haar-distributed on O(d).
  const Eigen::VectorXd diag = qr.matrixQR().diagonal();
  for (int k = 0; k < d; ++k)
    if (diag[k] < 0.0) Q.col(k) = -Q.col(k);
  if (proper && Q.determinant() < 0.0) Q.col(d - 1) = -Q.col(d - 1);

  GroupElement g;
  g.R = Q;
  g.sigma = rng.permutation(n);
  g.t = Eigen::VectorXd::Zero(d);
  if (with_translation)
    for (int k = 0; k < d; ++k) g.t[k] = rng.gaussian();
  g.proper = proper;
  return g;
}

PointCloud add_noise(const PointCloud& X, double sigma, Rng& rng) {
  validate(X);
  if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be >= 0");
  PointCloud G(X.rows(), X.cols());
  rng.fill_gaussian(G);
  return X + sigma * G;
}

Eigen::MatrixXd distance_matrix(const PointCloud& X) {
  validate(X);
  const Eigen::Index n = X.cols();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (X.col(i) - X.col(j)).norm();
      D(i, j) = dist;
      D(j, i) = dist;
    }
  return D;
}

double diameter(const PointCloud& X) {
  validate(X);
  double best = 0.0;
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    for (Eigen::Index j = i + 1; j < X.cols(); ++j)
      best = std::max(best, (X.col(i) - X.col(j)).norm());
  return best;
}

double relative_gap(const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
  if (f.size() != g.size())
    throw std::invalid_argument("relative_gap: feature lengths differ");
  const double scale =
      std::max({1.0, f.cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff()});
  return (f - g).cwiseAbs().maxCoeff() / scale;
}

}  // namespace geosep

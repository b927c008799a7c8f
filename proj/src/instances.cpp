#include "geosep/instances.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace geosep {

std::string_view label_name(PairLabel l) {
  switch (l) {
    case PairLabel::equivalent: return "EQUIVALENT";
    case PairLabel::inequivalent: return "INEQUIVALENT";
    default: return "UNKNOWN";
  }
}

std::string_view group_name(GroupKind g) {
  return g == GroupKind::so ? "SO" : "O";
}

GroupKind parse_group(std::string_view name) {
  if (name == "SO") return GroupKind::so;
  if (name == "O") return GroupKind::o;
  throw std::invalid_argument("unknown group '" + std::string(name) +
                              "', expected SO or O");
}

Eigen::MatrixXd cycle_laplacian(int m, bool split) {
  if (m < 6 || m % 2 != 0)
    throw std::invalid_argument("cycle_laplacian: m must be even and >= 6, got " +
                                std::to_string(m));
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  auto add_cycle = [&L](int lo, int len) {
    for (int k = 0; k < len; ++k) {
      const int a = lo + k;
      const int b = lo + (k + 1) % len;
      L(a, a) += 1.0;
      L(b, b) += 1.0;
      L(a, b) -= 1.0;
      L(b, a) -= 1.0;
    }
  };
  if (split) {
    add_cycle(0, m / 2);
    add_cycle(m / 2, m / 2);
  } else {
    add_cycle(0, m);
  }
  return L;
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& L, double eps) {
  if (L.rows() != L.cols())
    throw std::invalid_argument("psd_factor: matrix is not square");
  if (!L.isApprox(L.transpose(), 1e-12))
    throw std::invalid_argument("psd_factor: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_factor: eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  for (int k = 0; k < lam.size(); ++k) {
    if (lam[k] < -eps)
      throw std::invalid_argument(
          "psd_factor: eigenvalue " + std::to_string(lam[k]) +
          " below -eps, matrix is not PSD");
    if (lam[k] < 0.0) lam[k] = 0.0;
  }
  // E = sqrt(Lambda) Q^T, so E^T E = Q Lambda Q^T = L.
  return lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

InstancePair gen_cholesky_pair(int half) {
  if (half < 3)
    throw std::invalid_argument("gen_cholesky_pair: half must be >= 3, got " +
                                std::to_string(half));
  const int m = 2 * half;
  InstancePair p;
  p.X = psd_factor(cycle_laplacian(m, true));
  p.Y = psd_factor(cycle_laplacian(m, false));
  p.name = "cholesky-dim" + std::to_string(m);
  p.label = PairLabel::inequivalent;
  p.group = GroupKind::o;
  p.seed = 0;
  return p;
}

PointCloud make_sample(const PointCloud& src, double sigma, bool translate,
                       Seed seed) {
  if (sigma < 0.0)
    throw std::invalid_argument("make_sample: sigma must be >= 0");
  Rng grng = derive_stream(seed, "sample.group");
  const GroupElement g =
      random_group_element(static_cast<int>(src.rows()),
                           static_cast<int>(src.cols()),
                           /*proper=*/true, translate, grng);
  const PointCloud moved = apply(g, src);
  Rng nrng = derive_stream(seed, "sample.noise");
  return add_noise(moved, sigma, nrng);
}

PointCloud make_sample(const InstancePair& pair, Which which, double sigma,
                       Seed seed, bool translate) {
  return make_sample(which == Which::first ? pair.X : pair.Y, sigma, translate,
                     seed);
}

}  // namespace geosep

#include "geosep/geo1.hpp"

#include <algorithm>
#include <stdexcept>

namespace geosep {

Eigen::VectorXd geometric_degree(const PointCloud& X, int i) {
  validate(X);
  if (i < 0 || i >= X.cols())
    throw std::invalid_argument("geometric_degree: index out of range");
  const Eigen::Index n = X.cols();
  Eigen::VectorXd deg(n);
  for (Eigen::Index j = 0; j < n; ++j) deg[j] = (X.col(j) - X.col(i)).norm();
  sort_ascending(deg.data(), n);
  return deg;
}

std::vector<Eigen::VectorXd> degree_histogram(const PointCloud& X) {
  validate(X);
  std::vector<Eigen::VectorXd> h;
  h.reserve(static_cast<std::size_t>(X.cols()));
  for (int i = 0; i < X.cols(); ++i) h.push_back(geometric_degree(X, i));
  std::sort(h.begin(), h.end(),
            [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
              return std::lexicographical_compare(u.data(), u.data() + u.size(),
                                                  v.data(),
                                                  v.data() + v.size());
            });
  return h;
}

bool is_distinct(const PointCloud& X, double tol) {
  const auto h = degree_histogram(X);
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j)
      if ((h[i] - h[j]).cwiseAbs().maxCoeff() < tol) return false;
  return true;
}

Geo1Config Geo1Config::make(int n, int T, Seed seed, PsiKind psi) {
  return make(n, T, embedding_dim(3 * n), seed, psi);
}

Geo1Config Geo1Config::make(int n, int T, int K, Seed seed, PsiKind psi) {
  if (n < 2) throw std::invalid_argument("Geo1Config: n must be >= 2");
  if (T < 1) throw std::invalid_argument("Geo1Config: T must be >= 1");
  if (K < 1) throw std::invalid_argument("Geo1Config: K must be >= 1");
  Geo1Config cfg;
  cfg.T = T;
  cfg.K = K;
  cfg.psi = psi;
  int state = K;  // width of h_i entering round t
  for (int t = 1; t <= T; ++t) {
    Rng rng = derive_stream(seed, "geo1.step", static_cast<std::uint64_t>(t));
    cfg.step.push_back(
        sample_embed_params(K, state + 1, n - 1, state, psi, rng));
    state = embed_output_dim(cfg.step.back());
  }
  Rng rng = derive_stream(seed, "geo1.final");
  cfg.final = sample_embed_params(K, state, n, 0, psi, rng);
  return cfg;
}

Eigen::VectorXd f_1geo(const PointCloud& X, const Geo1Config& cfg) {
  validate(X);
  const int n = static_cast<int>(X.cols());
  if (n < 2) throw std::invalid_argument("f_1geo: needs at least two points");
  if (static_cast<int>(cfg.step.size()) != cfg.T)
    throw std::invalid_argument("f_1geo: config rounds do not match T");
  if (cfg.step.empty() || cfg.step[0].N != n - 1 || cfg.final.N != n)
    throw std::invalid_argument("f_1geo: config built for a different n");

  const Eigen::MatrixXd dist = distance_matrix(X);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(cfg.K, n);
  for (int t = 0; t < cfg.T; ++t) {
    const EmbedParams& p = cfg.step[static_cast<std::size_t>(t)];
    Eigen::MatrixXd Hnext(embed_output_dim(p), n);
    Eigen::MatrixXd M(H.rows() + 1, n - 1);
    for (int i = 0; i < n; ++i) {
      int col = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        M.col(col).head(H.rows()) = H.col(j);
        M(H.rows(), col) = dist(i, j);
        ++col;
      }
      Hnext.col(i) = embed_vector_multiset(p, H.col(i), M);
    }
    H = std::move(Hnext);
  }
  return embed_multiset(cfg.final, H);
}

}  // namespace geosep

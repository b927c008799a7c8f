#include "geosep/wl3.hpp"

#include <stdexcept>
#include <string>

namespace geosep {

Eigen::MatrixXd wl3_initial(const PointCloud& X) {
  validate(X);
  if (X.rows() != 3) throw std::invalid_argument("wl3_initial: requires d = 3");
  const int n = static_cast<int>(X.cols());
  if (n > 64)
    throw std::invalid_argument(
        "wl3_initial: n = " + std::to_string(n) +
        " exceeds the n <= 64 budget (the color table has n^3 columns)");
  const PointCloud Xc = center(X);
  // Pairwise inner products once; triplet Grams are lookups.
  Eigen::MatrixXd ip(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ip(i, j) = Xc.col(i).dot(Xc.col(j));
  const long n3 = static_cast<long>(n) * n * n;
  Eigen::MatrixXd colors(9, n3);
  long col = 0;
  int idx[3];
  for (idx[0] = 0; idx[0] < n; ++idx[0])
    for (idx[1] = 0; idx[1] < n; ++idx[1])
      for (idx[2] = 0; idx[2] < n; ++idx[2]) {
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            colors(3 * a + b, col) = ip(idx[a], idx[b]);
        ++col;
      }
  return colors;
}

Eigen::MatrixXd wl3_refine(const Eigen::MatrixXd& colors, int n,
                           const EmbedParams& params) {
  const long n3 = static_cast<long>(n) * n * n;
  if (n < 1 || colors.cols() != n3)
    throw std::invalid_argument("wl3_refine: color table does not match n");
  const int c = static_cast<int>(colors.rows());
  if (params.D != 3 * c || params.N != n)
    throw std::invalid_argument("wl3_refine: parameters expect D = 3c, N = n");
  const int K = embed_output_dim(params);
  Eigen::MatrixXd out(c + K, n3);
  out.topRows(c) = colors;
  Eigen::MatrixXd D(3 * c, n);
  const long nn = static_cast<long>(n) * n;
  long col = 0;
  for (long i1 = 0; i1 < n; ++i1)
    for (long i2 = 0; i2 < n; ++i2)
      for (long i3 = 0; i3 < n; ++i3) {
        for (long j = 0; j < n; ++j) {
          D.col(j).head(c) = colors.col(j * nn + i2 * n + i3);
          D.col(j).segment(c, c) = colors.col(i1 * nn + j * n + i3);
          D.col(j).tail(c) = colors.col(i1 * nn + i2 * n + j);
        }
        out.col(col).tail(K) = embed_multiset(params, D);
        ++col;
      }
  return out;
}

Wl3Config Wl3Config::make(int n, int T, Seed seed, PsiKind psi) {
  if (n < 1) throw std::invalid_argument("Wl3Config: n must be >= 1");
  if (T < 1) throw std::invalid_argument("Wl3Config: T must be >= 1");
  Wl3Config cfg;
  cfg.T = T;
  cfg.K = embedding_dim(3 * n);
  cfg.psi = psi;
  int c = 9;
  for (int t = 1; t <= T; ++t) {
    Rng rng = derive_stream(seed, "wl3.round", static_cast<std::uint64_t>(t));
    cfg.round.push_back(sample_embed_params(cfg.K, 3 * c, n, 0, psi, rng));
    c += embed_output_dim(cfg.round.back());
  }
  const long n3 = static_cast<long>(n) * n * n;
  Rng rng = derive_stream(seed, "wl3.global");
  cfg.global =
      sample_embed_params(cfg.K, c, static_cast<int>(n3), 0, psi, rng);
  return cfg;
}

Eigen::VectorXd f_3wl(const PointCloud& X, const Wl3Config& cfg) {
  const int n = static_cast<int>(X.cols());
  if (static_cast<int>(cfg.round.size()) != cfg.T)
    throw std::invalid_argument("f_3wl: config rounds do not match T");
  if (cfg.global.N != static_cast<long>(n) * n * n)
    throw std::invalid_argument("f_3wl: config built for a different n");
  Eigen::MatrixXd colors = wl3_initial(X);
  for (const EmbedParams& p : cfg.round) colors = wl3_refine(colors, n, p);
  return embed_multiset(cfg.global, colors);
}

}  // namespace geosep

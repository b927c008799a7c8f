#include "geosep/geoegnn.hpp"

#include <algorithm>
#include <stdexcept>

namespace geosep {

Eigen::VectorXd affine_leaky(const AffineMap& m, const Eigen::VectorXd& x) {
  if (m.W.cols() != x.size())
    throw std::invalid_argument("affine_leaky: input length mismatch");
  Eigen::VectorXd y = m.W * x + m.bias;
  for (Eigen::Index k = 0; k < y.size(); ++k)
    if (y[k] < 0.0) y[k] *= 0.01;
  return y;
}

namespace {

AffineMap sample_affine(int rows, int cols, Seed seed, std::string_view name) {
  Rng rng = derive_stream(seed, name);
  AffineMap m;
  m.W.resize(rows, cols);
  rng.fill_gaussian(m.W);
  m.bias.resize(rows);
  for (int r = 0; r < rows; ++r) m.bias[r] = rng.gaussian();
  return m;
}

}  // namespace

GeoEgnnConfig GeoEgnnConfig::make(int n, int T, bool both_orientations,
                                  Seed seed, PsiKind psi) {
  if (n < 3) throw std::invalid_argument("GeoEgnnConfig: needs n >= 3");
  if (T < 1) throw std::invalid_argument("GeoEgnnConfig: T must be >= 1");
  GeoEgnnConfig cfg;
  cfg.T = T;
  cfg.n = n;
  cfg.hidden = embedding_dim(3 * n);
  cfg.both_orientations = both_orientations;
  cfg.psi = psi;
  const int K1 = embedding_dim(3 * (n - 2));
  Rng ra = derive_stream(seed, "geoegnn.alpha");
  cfg.alpha = sample_embed_params(K1, 3, n - 2, 0, psi, ra);
  const int msize =
      (9 + embed_output_dim(cfg.alpha)) * (both_orientations ? 2 : 1);
  cfg.phi_e =
      sample_affine(cfg.hidden, 2 * cfg.hidden + msize, seed, "geoegnn.phi_e");
  Rng rb = derive_stream(seed, "geoegnn.beta");
  cfg.beta =
      sample_embed_params(cfg.hidden, cfg.hidden, n - 1, 0, psi, rb);
  cfg.phi_h = sample_affine(
      cfg.hidden, embed_output_dim(cfg.beta) + cfg.hidden, seed,
      "geoegnn.phi_h");
  Rng rg = derive_stream(seed, "geoegnn.gamma");
  cfg.gamma = sample_embed_params(cfg.hidden, cfg.hidden, n, 0, psi, rg);
  cfg.mix = sample_affine(1, cfg.hidden + embed_output_dim(cfg.gamma), seed,
                          "geoegnn.mix");
  return cfg;
}

GeoEgnnOutput geoegnn_forward(const PointCloud& X, const GeoEgnnConfig& cfg) {
  validate(X);
  if (X.rows() != 3)
    throw std::invalid_argument("geoegnn_forward: requires d = 3");
  const int n = static_cast<int>(X.cols());
  if (n != cfg.n)
    throw std::invalid_argument("geoegnn_forward: config built for n = " +
                                std::to_string(cfg.n));

  // Pair features once, reused across rounds.
  const PointCloud Xc = center(X);
  const int hdim = embed_output_dim(cfg.alpha);
  const int block = 9 + hdim;
  const int msize = block * (cfg.both_orientations ? 2 : 1);
  Eigen::MatrixXd F(3, 3), G(3, 3), P(3, n - 2);
  Eigen::MatrixXd pair_feat(msize, static_cast<long>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      F.col(0) = Xc.col(i);
      F.col(1) = Xc.col(j);
      F.col(2) = generalized_cross(F.leftCols(2));
      auto slot = pair_feat.col(static_cast<long>(i) * n + j);
      for (int orient = 0; orient < (cfg.both_orientations ? 2 : 1);
           ++orient) {
        if (orient == 1) F.col(2) = -F.col(2);
        G.noalias() = F.transpose() * F;
        int c2 = 0;
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          P.col(c2++).noalias() = F.transpose() * Xc.col(k);
        }
        for (int r = 0; r < 3; ++r)
          for (int c3 = 0; c3 < 3; ++c3)
            slot[orient * block + 3 * r + c3] = G(r, c3);
        slot.segment(orient * block + 9, hdim) = embed_multiset(cfg.alpha, P);
      }
      // A reflection swaps the two orientation blocks, so their order must
      // not encode orientation: store the lexicographically smaller block
      // first. The message then depends only on the unordered block pair,
      // which is reflection invariant, and no information is lost. The
      // comparison skips the Gram part: its blocks agree in exact arithmetic
      // (the cross column is orthogonal to both base points), so their only
      // difference is sign noise on exact zeros, which would poison the
      // order. The multiset part differs genuinely.
      if (cfg.both_orientations &&
          std::lexicographical_compare(
              slot.data() + block + 9, slot.data() + 2 * block,
              slot.data() + 9, slot.data() + block)) {
        for (int r = 0; r < block; ++r) std::swap(slot[r], slot[r + block]);
      }
    }

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(cfg.hidden, n);
  Eigen::VectorXd ein(2 * cfg.hidden + msize);
  Eigen::MatrixXd S(cfg.hidden, n - 1);
  Eigen::VectorXd uin(embed_output_dim(cfg.beta) + cfg.hidden);
  for (int t = 0; t < cfg.T; ++t) {
    Eigen::MatrixXd Hnext(cfg.hidden, n);
    for (int i = 0; i < n; ++i) {
      int col = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        ein.head(cfg.hidden) = H.col(i);
        ein.segment(cfg.hidden, cfg.hidden) = H.col(j);
        ein.tail(msize) = pair_feat.col(static_cast<long>(i) * n + j);
        S.col(col++) = affine_leaky(cfg.phi_e, ein);
      }
      const Eigen::VectorXd s = embed_multiset(cfg.beta, S);
      uin.head(s.size()) = s;
      uin.tail(cfg.hidden) = H.col(i);
      Hnext.col(i) = affine_leaky(cfg.phi_h, uin);
    }
    H = std::move(Hnext);
  }

  GeoEgnnOutput out;
  out.h_global = embed_multiset(cfg.gamma, H);
  out.h = std::move(H);
  return out;
}

Eigen::VectorXd equivariant_readout(const PointCloud& X,
                                    const GeoEgnnConfig& cfg) {
  if (!cfg.both_orientations)
    throw std::invalid_argument(
        "equivariant_readout: requires the reflection-invariant variant "
        "(both orientations); the rotation-only states would not transform "
        "correctly under reflections");
  const GeoEgnnOutput o = geoegnn_forward(X, cfg);
  const PointCloud Xc = center(X);
  const int n = static_cast<int>(X.cols());
  Eigen::VectorXd win(cfg.hidden + o.h_global.size());
  win.tail(o.h_global.size()) = o.h_global;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(3);
  for (int k = 0; k < n; ++k) {
    win.head(cfg.hidden) = o.h.col(k);
    const double wk = (cfg.mix.W * win + cfg.mix.bias)[0];
    out += wk * Xc.col(k);
  }
  return out;
}

}  // namespace geosep

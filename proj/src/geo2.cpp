#include "geosep/geo2.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace geosep {

namespace {

// Determinant by in-place partial-pivot elimination on a small stack buffer,
// column-major. Allocation-free; m <= 15.
double det_inplace(double* a, int m) {
  double det = 1.0;
  for (int c = 0; c < m; ++c) {
    int piv = c;
    double best = std::abs(a[c * m + c]);
    for (int r = c + 1; r < m; ++r) {
      const double v = std::abs(a[c * m + r]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (int k = c; k < m; ++k) std::swap(a[k * m + c], a[k * m + piv]);
      det = -det;
    }
    const double p = a[c * m + c];
    det *= p;
    for (int r = c + 1; r < m; ++r) {
      const double f = a[c * m + r] / p;
      if (f != 0.0)
        for (int k = c + 1; k < m; ++k) a[k * m + r] -= f * a[k * m + c];
    }
  }
  return det;
}

constexpr int kMaxCrossDim = 16;

void cross_into(const Eigen::Ref<const Eigen::MatrixXd>& V,
                Eigen::Ref<Eigen::VectorXd> w) {
  const int d = static_cast<int>(V.rows());
  if (d == 2) {
    w[0] = -V(1, 0);
    w[1] = V(0, 0);
    return;
  }
  if (d == 3) {
    w[0] = V(1, 0) * V(2, 1) - V(2, 0) * V(1, 1);
    w[1] = V(2, 0) * V(0, 1) - V(0, 0) * V(2, 1);
    w[2] = V(0, 0) * V(1, 1) - V(1, 0) * V(0, 1);
    return;
  }
  double buf[(kMaxCrossDim - 1) * (kMaxCrossDim - 1)];
  const int m = d - 1;
  // Sign of the k-th cofactor, 1-based: (-1)^(k+d).
  double sign = ((1 + d) % 2 == 0) ? 1.0 : -1.0;
  for (int k = 0; k < d; ++k) {
    int rr = 0;
    for (int r = 0; r < d; ++r) {
      if (r == k) continue;
      for (int c = 0; c < m; ++c) buf[c * m + rr] = V(r, c);
      ++rr;
    }
    w[k] = sign * det_inplace(buf, m);
    sign = -sign;
  }
}

}  // namespace

Eigen::VectorXd generalized_cross(const Eigen::MatrixXd& V) {
  const int d = static_cast<int>(V.rows());
  if (d < 2 || V.cols() != d - 1)
    throw std::invalid_argument(
        "generalized_cross: expected a d x (d-1) matrix with d >= 2");
  if (d > kMaxCrossDim)
    throw std::invalid_argument("generalized_cross: d > 16 not supported");
  if (!V.allFinite())
    throw std::invalid_argument("generalized_cross: non-finite entry");
  Eigen::VectorXd w(d);
  cross_into(V, w);
  return w;
}

Eigen::MatrixXd frame(const PointCloud& X, int i, int j, int orientation) {
  validate(X);
  if (X.rows() != 3) throw std::invalid_argument("frame: requires d = 3");
  const int n = static_cast<int>(X.cols());
  if (i < 0 || i >= n || j < 0 || j >= n || i == j)
    throw std::invalid_argument("frame: indices must be distinct and in range");
  if (orientation != 1 && orientation != -1)
    throw std::invalid_argument("frame: orientation must be +1 or -1");
  const PointCloud Xc = center(X);
  Eigen::MatrixXd F(3, 3);
  F.col(0) = Xc.col(i);
  F.col(1) = Xc.col(j);
  cross_into(F.leftCols(2), F.col(2));
  if (orientation < 0) F.col(2) = -F.col(2);
  return F;
}

FrameFeature frame_feature(const PointCloud& X, int i, int j, int orientation,
                           const EmbedParams& alpha) {
  const Eigen::MatrixXd F = frame(X, i, j, orientation);
  const PointCloud Xc = center(X);
  const int n = static_cast<int>(X.cols());
  if (n < 3)
    throw std::invalid_argument("frame_feature: needs at least three points");
  Eigen::MatrixXd P(3, n - 2);
  int col = 0;
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    P.col(col++).noalias() = F.transpose() * Xc.col(k);
  }
  FrameFeature out;
  out.i = i;
  out.j = j;
  out.orientation = orientation;
  out.gram = F.transpose() * F;
  out.h = embed_multiset(alpha, P);
  return out;
}

namespace {

// Ordered (m)-tuples of distinct indices in lexicographic order.
struct TupleIter {
  std::vector<int> idx;
  std::vector<char> used;
  int n;

  TupleIter(int m, int n_) : idx(m), used(static_cast<std::size_t>(n_), 0), n(n_) {
    for (int k = 0; k < m; ++k) {
      idx[static_cast<std::size_t>(k)] = k;
      used[static_cast<std::size_t>(k)] = 1;
    }
  }

  bool advance() {
    const int m = static_cast<int>(idx.size());
    for (int pos = m - 1; pos >= 0; --pos) {
      used[static_cast<std::size_t>(idx[static_cast<std::size_t>(pos)])] = 0;
      int v = idx[static_cast<std::size_t>(pos)] + 1;
      while (v < n && used[static_cast<std::size_t>(v)]) ++v;
      if (v < n) {
        idx[static_cast<std::size_t>(pos)] = v;
        used[static_cast<std::size_t>(v)] = 1;
        for (int q = pos + 1; q < m; ++q) {
          int w = 0;
          while (used[static_cast<std::size_t>(w)]) ++w;
          idx[static_cast<std::size_t>(q)] = w;
          used[static_cast<std::size_t>(w)] = 1;
        }
        return true;
      }
    }
    return false;
  }
};

long tuple_count(int n, int m) {
  long c = 1;
  for (int k = 0; k < m; ++k) c *= n - k;
  return c;
}

void check_config(const PointCloud& X, const Geo2Config& cfg, int need_d,
                  bool both, const char* fn) {
  validate(X);
  const std::string name(fn);
  if (need_d > 0 && X.rows() != need_d)
    throw std::invalid_argument(name + ": requires d = 3");
  if (cfg.d != X.rows() || cfg.n != X.cols())
    throw std::invalid_argument(name + ": config built for d=" +
                                std::to_string(cfg.d) + ", n=" +
                                std::to_string(cfg.n) + ", cloud is " +
                                std::to_string(X.rows()) + "x" +
                                std::to_string(X.cols()));
  if (cfg.both_orientations != both)
    throw std::invalid_argument(name + ": config orientation mode mismatch");
  if (X.cols() < X.rows())
    throw std::invalid_argument(name + ": needs n >= d");
}

// Shared engine: one column of tuple features per (tuple, orientation),
// positive orientations first in lexicographic tuple order, then negative.
Eigen::VectorXd tuple_features(const PointCloud& X, const Geo2Config& cfg) {
  const int d = cfg.d;
  const int n = cfg.n;
  const int m = d - 1;
  const long tuples = tuple_count(n, m);
  const long cols = cfg.both_orientations ? 2 * tuples : tuples;
  const int hdim = embed_output_dim(cfg.alpha);
  const int rest = n - d + 1;

  Eigen::MatrixXd M(d * d + hdim, cols);
  const PointCloud Xc = center(X);

  Eigen::MatrixXd F(d, d);
  Eigen::MatrixXd P(d, rest);
  Eigen::MatrixXd G(d, d);
  Eigen::VectorXd col(d * d + hdim);

  TupleIter it(m, n);
  long tau = 0;
  do {
    for (int k = 0; k < m; ++k)
      F.col(k) = Xc.col(it.idx[static_cast<std::size_t>(k)]);
    cross_into(F.leftCols(m), F.col(d - 1));
    for (int orient = 0; orient < (cfg.both_orientations ? 2 : 1); ++orient) {
      if (orient == 1) F.col(d - 1) = -F.col(d - 1);
      G.noalias() = F.transpose() * F;
      int slot = 0;
      for (int k = 0; k < n; ++k) {
        if (it.used[static_cast<std::size_t>(k)]) continue;
        P.col(slot++).noalias() = F.transpose() * Xc.col(k);
      }
      for (int r = 0; r < d; ++r)
        for (int c2 = 0; c2 < d; ++c2) col[r * d + c2] = G(r, c2);
      col.tail(hdim) = embed_multiset(cfg.alpha, P);
      M.col(orient == 0 ? tau : tuples + tau) = col;
    }
    ++tau;
  } while (it.advance());

  return embed_multiset(cfg.beta, M);
}

Geo2Config make_config(int d, int n, Seed seed, PsiKind psi, bool both) {
  if (d < 2) throw std::invalid_argument("Geo2Config: d must be >= 2");
  if (n < d) throw std::invalid_argument("Geo2Config: needs n >= d");
  const long tuples = tuple_count(n, d - 1);
  if (tuples > 2'000'000L)
    throw std::invalid_argument(
        "Geo2Config: " + std::to_string(tuples) +
        " index tuples exceed the supported budget; reduce n or d");
  Geo2Config cfg;
  cfg.d = d;
  cfg.n = n;
  cfg.psi = psi;
  cfg.both_orientations = both;
  cfg.K1 = embedding_dim(d * (n - d + 1));
  cfg.K2 = embedding_dim(d * n);
  Rng ra = derive_stream(seed, "geo2.alpha");
  cfg.alpha = sample_embed_params(cfg.K1, d, n - d + 1, 0, psi, ra);
  const long cols = both ? 2 * tuples : tuples;
  Rng rb = derive_stream(seed, "geo2.beta");
  cfg.beta = sample_embed_params(cfg.K2, d * d + embed_output_dim(cfg.alpha),
                                 static_cast<int>(cols), 0, psi, rb);
  return cfg;
}

}  // namespace

Geo2Config Geo2Config::make_so(int n, Seed seed, PsiKind psi) {
  return make_config(3, n, seed, psi, false);
}

Geo2Config Geo2Config::make_o(int n, Seed seed, PsiKind psi) {
  return make_config(3, n, seed, psi, true);
}

Geo2Config Geo2Config::make_dgeo(int d, int n, Seed seed, PsiKind psi) {
  return make_config(d, n, seed, psi, false);
}

Eigen::VectorXd f_2geo_so(const PointCloud& X, const Geo2Config& cfg) {
  check_config(X, cfg, 3, false, "f_2geo_so");
  return tuple_features(X, cfg);
}

Eigen::VectorXd f_2geo_o(const PointCloud& X, const Geo2Config& cfg) {
  check_config(X, cfg, 3, true, "f_2geo_o");
  return tuple_features(X, cfg);
}

Eigen::VectorXd f_dgeo(const PointCloud& X, const Geo2Config& cfg) {
  check_config(X, cfg, 0, false, "f_dgeo");
  return tuple_features(X, cfg);
}

}  // namespace geosep

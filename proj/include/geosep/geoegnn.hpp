#pragma once

#include "geosep/geo2.hpp"

namespace geosep {

// Frame features wired into a fixed-weight message-passing layer. The
// trainable maps of a full network are replaced by random affine maps with a
// leaky-linear activation, which keeps every claim testable: invariant node
// states and global state, plus an equivariant vector readout for the
// orientation-complete variant.

struct AffineMap {
  Eigen::MatrixXd W;
  Eigen::VectorXd bias;
};

// W * x + bias, then x -> 0.01 x on negative components.
Eigen::VectorXd affine_leaky(const AffineMap& m, const Eigen::VectorXd& x);

struct GeoEgnnConfig {
  int T = 1;
  int n = 0;
  int hidden = 0;          // node state width, embedding_dim(3n) by default
  bool both_orientations = false;  // true: reflection invariant as well
  PsiKind psi = PsiKind::sort;
  EmbedParams alpha;       // inner width of the pair features
  // message: (h_i, h_j, m_ij) -> hidden; with both orientations m_ij is the
  // two orientation blocks in a canonical order (reflections swap the
  // blocks, so a fixed order would leak orientation)
  AffineMap phi_e;
  EmbedParams beta;        // per-node reduction over the n-1 messages
  AffineMap phi_h;         // update: (s_i, h_i) -> hidden
  EmbedParams gamma;       // global reduction over the n node states
  AffineMap mix;           // readout weight: (h_k, h_global) -> scalar

  static GeoEgnnConfig make(int n, int T, bool both_orientations, Seed seed,
                            PsiKind psi);
};

struct GeoEgnnOutput {
  Eigen::MatrixXd h;        // hidden x n node states
  Eigen::VectorXd h_global;
};

// Node states start at zero. Requires d = 3, n >= 3. States and the global
// state are invariant under rotation + translation + permutation, and under
// reflections too when both orientations are carried.
GeoEgnnOutput geoegnn_forward(const PointCloud& X, const GeoEgnnConfig& cfg);

// sum_k mix(h_k, h_global) * x_k^c: rotates with the cloud, ignores
// translation and permutation. Only defined for the reflection-invariant
// variant; errors otherwise, since reflected inputs would not reflect the
// output.
Eigen::VectorXd equivariant_readout(const PointCloud& X,
                                    const GeoEgnnConfig& cfg);

}  // namespace geosep

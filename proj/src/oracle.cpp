#include "geosep/oracle.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace geosep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_shapes(const PointCloud& X, const PointCloud& Y) {
  validate(X);
  validate(Y);
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument(
        "alignment: clouds differ in shape (" + std::to_string(X.rows()) +
        "x" + std::to_string(X.cols()) + " vs " + std::to_string(Y.rows()) +
        "x" + std::to_string(Y.cols()) + ")");
}

// Deterministic canonical order so result(X, Y) and result(Y, X) coincide:
// the alignment always runs first -> second, and the witness is inverted
// when the caller's arguments arrived swapped.
bool should_swap(const PointCloud& X, const PointCloud& Y) {
  const double* a = X.data();
  const double* b = Y.data();
  const Eigen::Index n = X.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (a[k] < b[k]) return false;
    if (a[k] > b[k]) return true;
  }
  return false;
}

GroupElement invert(const GroupElement& g) {
  GroupElement inv;
  inv.R = g.R.transpose();
  inv.t = -(g.R.transpose() * g.t);
  inv.sigma.resize(g.sigma.size());
  for (std::size_t j = 0; j < g.sigma.size(); ++j)
    inv.sigma[static_cast<std::size_t>(g.sigma[j])] = static_cast<int>(j);
  inv.proper = g.proper;
  return inv;
}

double pair_scale(const PointCloud& X, const PointCloud& Y) {
  return std::max(1.0, std::max(diameter(X), diameter(Y)));
}

GroupElement make_witness(const Eigen::MatrixXd& R, const std::vector<int>& sigma,
                          const PointCloud& X, const PointCloud& Y) {
  GroupElement g;
  g.R = R;
  g.sigma = sigma;
  g.t = stable_mean(Y) - R * stable_mean(X);
  g.proper = R.determinant() > 0.0;
  return g;
}

// Orthogonal Procrustes: the orthogonal R maximizing <R, M>, restricted to
// det = +1 when proper.
Eigen::MatrixXd procrustes(const Eigen::MatrixXd& M, bool proper) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd R = svd.matrixU() * svd.matrixV().transpose();
  if (proper && R.determinant() < 0.0) {
    Eigen::MatrixXd U = svd.matrixU();
    U.col(U.cols() - 1) = -U.col(U.cols() - 1);
    R = U * svd.matrixV().transpose();
  }
  return R;
}

AlignmentResult exhaustive_impl(const PointCloud& X, const PointCloud& Y,
                                bool proper, double tol) {
  const int n = static_cast<int>(X.cols());
  const PointCloud Xc = center(X);
  const PointCloud Yc = center(Y);

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);

  double best = kInf;
  std::vector<int> best_perm;
  Eigen::MatrixXd best_R;
  Eigen::MatrixXd M(X.rows(), X.rows());
  do {
    M.setZero();
    for (int j = 0; j < n; ++j)
      M.noalias() += Yc.col(perm[static_cast<std::size_t>(j)]) *
                     Xc.col(j).transpose();
    const Eigen::MatrixXd R = procrustes(M, proper);
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      worst = std::max(
          worst,
          (R * Xc.col(j) - Yc.col(perm[static_cast<std::size_t>(j)])).norm());
    if (worst < best) {
      best = worst;
      best_perm = perm;
      best_R = R;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  AlignmentResult res;
  res.residual = best;
  res.equivalent = best <= tol * pair_scale(X, Y);
  res.witness = make_witness(best_R, best_perm, X, Y);
  return res;
}

// Orthonormal right-handed basis with the given unit first column (any
// orthogonal completion works; the remaining columns only span the
// complement).
Eigen::Matrix3d complete_basis(const Eigen::Vector3d& u) {
  int axis = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(u[k]) < std::abs(u[axis])) axis = k;
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e[axis] = 1.0;
  Eigen::Vector3d p = e - e.dot(u) * u;
  p /= p.norm();
  Eigen::Matrix3d B;
  B.col(0) = u;
  B.col(1) = p;
  B.col(2) = u.cross(p);
  return B;
}

std::vector<int> argsort(const Eigen::VectorXd& v) {
  std::vector<int> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (v[a] != v[b]) return v[a] < v[b];
    return a < b;
  });
  return idx;
}

// Clouds whose centered points lie on a line (or at the origin): compare
// sorted coordinates along the lines, both direction signs. Any needed flip
// is realizable by a proper rotation, so the proper flag plays no role.
AlignmentResult rank1_impl(const PointCloud& X, const PointCloud& Y,
                           const PointCloud& Xc, const PointCloud& Yc,
                           double tol) {
  const int n = static_cast<int>(X.cols());
  int mx = 0, my = 0;
  for (int k = 1; k < n; ++k) {
    if (Xc.col(k).norm() > Xc.col(mx).norm()) mx = k;
    if (Yc.col(k).norm() > Yc.col(my).norm()) my = k;
  }
  const double nx = Xc.col(mx).norm(), ny = Yc.col(my).norm();
  const Eigen::Vector3d u =
      nx > 0.0 ? Eigen::Vector3d(Xc.col(mx) / nx) : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d v =
      ny > 0.0 ? Eigen::Vector3d(Yc.col(my) / ny) : Eigen::Vector3d::UnitX();
  Eigen::VectorXd cx(n), cy(n);
  for (int k = 0; k < n; ++k) {
    cx[k] = u.dot(Xc.col(k));
    cy[k] = v.dot(Yc.col(k));
  }

  AlignmentResult res;
  res.residual = kInf;
  const Eigen::Matrix3d Bx = complete_basis(u);
  for (int sign = 0; sign < 2; ++sign) {
    const double s = sign == 0 ? 1.0 : -1.0;
    const Eigen::Matrix3d By = complete_basis(Eigen::Vector3d(s * v));
    const Eigen::Matrix3d R = By * Bx.transpose();
    const auto ox = argsort(cx);
    const auto oy = argsort(Eigen::VectorXd(s * cy));
    std::vector<int> sigma(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      sigma[static_cast<std::size_t>(ox[static_cast<std::size_t>(k)])] =
          oy[static_cast<std::size_t>(k)];
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      worst = std::max(
          worst,
          (R * Xc.col(j) - Yc.col(sigma[static_cast<std::size_t>(j)])).norm());
    if (worst < res.residual) {
      res.residual = worst;
      res.witness = make_witness(R, sigma, X, Y);
    }
  }
  res.equivalent = res.residual <= tol * pair_scale(X, Y);
  return res;
}

AlignmentResult frames_impl(const PointCloud& X, const PointCloud& Y,
                            bool proper, double tol) {
  const int n = static_cast<int>(X.cols());
  const PointCloud Xc = center(X);
  const PointCloud Yc = center(Y);
  const double dx = diameter(X), dy = diameter(Y);

  // Most independent pair of each cloud; the cross norm doubles as a rank
  // probe.
  double bx = -1.0, by = -1.0;
  int bi = 0, bj = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double cxn =
          Eigen::Vector3d(Xc.col(i)).cross(Eigen::Vector3d(Xc.col(j))).norm();
      if (cxn > bx) {
        bx = cxn;
        bi = i;
        bj = j;
      }
      const double cyn =
          Eigen::Vector3d(Yc.col(i)).cross(Eigen::Vector3d(Yc.col(j))).norm();
      if (cyn > by) by = cyn;
    }
  if (n == 1) bx = by = 0.0;

  const bool x_line = bx <= 1e-9 * dx * dx || n == 1;
  const bool y_line = by <= 1e-9 * dy * dy || n == 1;
  if (x_line != y_line) {
    AlignmentResult res;
    res.residual = kInf;
    res.equivalent = false;
    return res;
  }
  if (x_line) return rank1_impl(X, Y, Xc, Yc, tol);

  const double tau = tol * pair_scale(X, Y);
  const double gram_tol = tol * std::max(1.0, std::max(dx * dx, dy * dy));

  Eigen::Matrix3d FX;
  FX.col(0) = Xc.col(bi);
  FX.col(1) = Xc.col(bj);
  FX.col(2) = FX.col(0).cross(FX.col(1));
  const Eigen::Matrix3d GX = FX.transpose() * FX;
  const Eigen::Matrix3d FXinv = FX.inverse();

  AlignmentResult res;
  res.residual = kInf;

  struct Cand {
    double dd;
    int j;
    int i;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<std::size_t>(n) * n);
  Eigen::MatrixXd A(3, n);
  std::vector<char> xa(static_cast<std::size_t>(n)), ya(static_cast<std::size_t>(n));
  std::vector<int> sigma(static_cast<std::size_t>(n));

  Eigen::Matrix3d FY, GY;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      FY.col(0) = Yc.col(s);
      FY.col(1) = Yc.col(t);
      FY.col(2) = FY.col(0).cross(FY.col(1));
      for (int orient = 0; orient < (proper ? 1 : 2); ++orient) {
        if (orient == 1) FY.col(2) = -FY.col(2);
        GY.noalias() = FY.transpose() * FY;
        if (((GY - GX).cwiseAbs().maxCoeff()) > gram_tol) continue;

        Eigen::Matrix3d T0 = FY * FXinv;
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(
            T0, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::Matrix3d T =
            svd.matrixU() * svd.matrixV().transpose();
        if (proper && T.determinant() < 0.0) continue;

        A.noalias() = T * Xc;
        cands.clear();
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i)
            cands.push_back({(A.col(j) - Yc.col(i)).squaredNorm(), j, i});
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& a, const Cand& b) {
                    if (a.dd != b.dd) return a.dd < b.dd;
                    if (a.j != b.j) return a.j < b.j;
                    return a.i < b.i;
                  });
        std::fill(xa.begin(), xa.end(), 0);
        std::fill(ya.begin(), ya.end(), 0);
        int matched = 0;
        double worst = 0.0;
        for (const Cand& c : cands) {
          if (xa[static_cast<std::size_t>(c.j)] ||
              ya[static_cast<std::size_t>(c.i)])
            continue;
          xa[static_cast<std::size_t>(c.j)] = 1;
          ya[static_cast<std::size_t>(c.i)] = 1;
          sigma[static_cast<std::size_t>(c.j)] = c.i;
          worst = std::max(worst, std::sqrt(c.dd));
          if (++matched == n) break;
        }
        if (worst < res.residual) {
          res.residual = worst;
          res.witness = make_witness(T, sigma, X, Y);
        }
      }
    }

  res.equivalent = res.residual <= tau;
  return res;
}

}  // namespace

AlignmentResult align_exhaustive(const PointCloud& X, const PointCloud& Y,
                                 bool proper, double tol) {
  check_shapes(X, Y);
  if (X.cols() > 8)
    throw std::invalid_argument(
        "align_exhaustive: n = " + std::to_string(X.cols()) +
        " exceeds the n <= 8 budget; use align_frames for larger clouds");
  const bool swap = should_swap(X, Y);
  AlignmentResult res = swap ? exhaustive_impl(Y, X, proper, tol)
                             : exhaustive_impl(X, Y, proper, tol);
  if (swap && res.witness) res.witness = invert(*res.witness);
  return res;
}

AlignmentResult align_frames(const PointCloud& X, const PointCloud& Y,
                             bool proper, double tol) {
  check_shapes(X, Y);
  if (X.rows() != 3)
    throw std::invalid_argument("align_frames: requires d = 3");
  const bool swap = should_swap(X, Y);
  AlignmentResult res = swap ? frames_impl(Y, X, proper, tol)
                             : frames_impl(X, Y, proper, tol);
  if (swap && res.witness) res.witness = invert(*res.witness);
  return res;
}

}  // namespace geosep

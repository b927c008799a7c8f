#include "geosep/embed.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace geosep {

PsiKind parse_psi(std::string_view name) {
  if (name == "sort") return PsiKind::sort;
  if (name == "pow") return PsiKind::pow;
  throw std::invalid_argument("unknown psi '" + std::string(name) +
                              "', expected sort or pow");
}

std::string_view psi_name(PsiKind k) {
  return k == PsiKind::sort ? "sort" : "pow";
}

int embed_output_dim(const EmbedParams& p) {
  return p.K + (p.psi == PsiKind::pow ? 1 : 0);
}

EmbedParams sample_embed_params(int K, int D, int N, int F, PsiKind psi,
                                Rng& rng) {
  if (K < 1 || D < 1 || N < 1 || F < 0)
    throw std::invalid_argument("sample_embed_params: need K,D,N >= 1, F >= 0");
  EmbedParams p;
  p.K = K;
  p.D = D;
  p.N = N;
  p.F = F;
  p.psi = psi;
  p.a.resize(D, K);
  rng.fill_gaussian(p.a);
  p.b.resize(N, K);
  rng.fill_gaussian(p.b);
  p.c.resize(F, K);
  if (F > 0) rng.fill_gaussian(p.c);
  return p;
}

Eigen::VectorXd psi_sort(Eigen::VectorXd v) {
  sort_ascending(v.data(), v.size());
  return v;
}

Eigen::VectorXd psi_pow(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n < 1) throw std::invalid_argument("psi_pow: empty input");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double t = v[k];
    for (Eigen::Index e = 0; e < n; ++e) {
      out[e] += t;
      t *= v[k];
    }
  }
  if (!out.allFinite())
    throw std::runtime_error(
        "psi_pow: power sums overflowed; inputs of magnitude " +
        std::to_string(v.cwiseAbs().maxCoeff()) + " are too large");
  return out;
}

namespace {

void check_multiset(const EmbedParams& p, const Eigen::MatrixXd& M) {
  if (p.K < 1) throw std::invalid_argument("embed: parameters are empty");
  if (M.cols() == 0) throw std::invalid_argument("embed: empty multiset");
  if (M.rows() != p.D || M.cols() != p.N)
    throw std::invalid_argument(
        "embed: multiset is " + std::to_string(M.rows()) + "x" +
        std::to_string(M.cols()) + ", parameters expect " +
        std::to_string(p.D) + "x" + std::to_string(p.N));
}

// Projections of the multiset onto the K directions. Computed one column at
// a time so each column's accumulation order is identical no matter where
// the column sits; that is what makes sort-based outputs permutation-stable
// bit for bit.
Eigen::MatrixXd project(const EmbedParams& p, const Eigen::MatrixXd& M) {
  Eigen::MatrixXd S(p.K, p.N);
  for (int k = 0; k < p.N; ++k)
    S.col(k).noalias() = p.a.transpose() * M.col(k);
  return S;
}

Eigen::VectorXd reduce(const EmbedParams& p, Eigen::MatrixXd& S) {
  const int out_dim = embed_output_dim(p);
  Eigen::VectorXd out(out_dim);
  Eigen::VectorXd row(p.N);
  if (p.psi == PsiKind::sort) {
    for (int j = 0; j < p.K; ++j) {
      row = S.row(j);
      sort_ascending(row.data(), row.size());
      out[j] = p.b.col(j).dot(row);
    }
    return out;
  }
  // pow: one global guard scale keeps every power sum bounded by N.
  const double m = std::max(1.0, S.cwiseAbs().maxCoeff());
  const double inv = 1.0 / m;
  Eigen::VectorXd sums(p.N);
  for (int j = 0; j < p.K; ++j) {
    sums.setZero();
    for (int k = 0; k < p.N; ++k) {
      const double s = S(j, k) * inv;
      double t = s;
      for (int e = 0; e < p.N; ++e) {
        sums[e] += t;
        t *= s;
      }
    }
    out[j] = p.b.col(j).dot(sums);
  }
  out[p.K] = m;
  return out;
}

}  // namespace

Eigen::VectorXd embed_multiset(const EmbedParams& p, const Eigen::MatrixXd& M) {
  check_multiset(p, M);
  if (p.F != 0)
    throw std::invalid_argument(
        "embed_multiset: parameters carry a vector part; use "
        "embed_vector_multiset");
  Eigen::MatrixXd S = project(p, M);
  return reduce(p, S);
}

Eigen::VectorXd embed_vector_multiset(const EmbedParams& p,
                                      const Eigen::VectorXd& h,
                                      const Eigen::MatrixXd& M) {
  check_multiset(p, M);
  if (p.F < 1)
    throw std::invalid_argument(
        "embed_vector_multiset: parameters lack a vector part");
  if (h.size() != p.F)
    throw std::invalid_argument(
        "embed_vector_multiset: vector length " + std::to_string(h.size()) +
        ", parameters expect " + std::to_string(p.F));
  Eigen::MatrixXd S = project(p, M);
  Eigen::VectorXd out = reduce(p, S);
  for (int j = 0; j < p.K; ++j) out[j] += p.c.col(j).dot(h);
  return out;
}

}  // namespace geosep

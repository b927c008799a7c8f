#pragma once

#include "geosep/core.hpp"

namespace geosep {

// Two interchangeable multiset summaries: ascending sort, or power sums
// (s_1 + ... + s_N, s_1^2 + ... , ..., sum of N-th powers).
enum class PsiKind { sort, pow };

PsiKind parse_psi(std::string_view name);  // "sort" | "pow"
std::string_view psi_name(PsiKind k);

// Parameters of one multiset embedding: component j of the output is
//   <b_j, psi(a_j' M)>  (+ <c_j, h> for the vector-multiset form),
// with a_j, b_j, c_j the j-th columns of a, b, c. K components separate
// multisets of N points in R^D for almost every parameter draw as soon as
// K >= 2 * intrinsic_dim + 1; embedding_dim() applies that rule.
struct EmbedParams {
  int K = 0;  // output components (before the pow-scale component)
  int D = 0;  // point dimension
  int N = 0;  // multiset size
  int F = 0;  // attached vector dimension, 0 for the plain multiset form
  PsiKind psi = PsiKind::sort;
  Eigen::MatrixXd a;  // D x K
  Eigen::MatrixXd b;  // N x K
  Eigen::MatrixXd c;  // F x K, empty when F = 0
};

constexpr int embedding_dim(int intrinsic_dim) { return 2 * intrinsic_dim + 1; }

// Output length: K, plus one trailing scale component for psi = pow.
int embed_output_dim(const EmbedParams& p);

// Standard Gaussian entries drawn from the given stream, a then b then c,
// each filled column-major.
EmbedParams sample_embed_params(int K, int D, int N, int F, PsiKind psi,
                                Rng& rng);

// Ascending sort (bitwise total order; see sort_ascending).
Eigen::VectorXd psi_sort(Eigen::VectorXd v);

// Raw power sums of orders 1..N, N = v.size(). Errors when a sum overflows;
// the embeddings below avoid that by rescaling, this public form does not.
// Costs O(N^2).
Eigen::VectorXd psi_pow(const Eigen::VectorXd& v);

// M holds the multiset, one point per column. Output depends on M only
// through the multiset of its columns: permuting columns reproduces the
// result bit for bit with psi = sort, and within roundoff with psi = pow.
//
// For psi = pow the projections are scaled by 1/m, m = max(1, largest
// |projection|), before the powers are taken, and m is appended as one extra
// output component. Scaled and scale together still determine the input, so
// separation is preserved while the power sums stay bounded by N.
Eigen::VectorXd embed_multiset(const EmbedParams& p, const Eigen::MatrixXd& M);

// Component j additionally carries <c_j, h>: separates (vector, multiset)
// pairs for almost every parameter draw.
Eigen::VectorXd embed_vector_multiset(const EmbedParams& p,
                                      const Eigen::VectorXd& h,
                                      const Eigen::MatrixXd& M);

}  // namespace geosep

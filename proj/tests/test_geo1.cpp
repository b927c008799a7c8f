#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geosep/geo1.hpp"
#include "geosep/instances.hpp"
#include "geosep/oracle.hpp"
#include "test_util.hpp"

using namespace geosep;
using testutil::bit_equal;
using testutil::permute_cols;
using testutil::rand_cloud;
using testutil::rand_element;

TEST_CASE("geometric degree of a 3-4-5 triangle") {
  PointCloud X(2, 3);
  X << 0, 3, 0,
       0, 0, 4;
  Eigen::VectorXd d0 = geometric_degree(X, 0);
  CHECK(d0[0] == 0.0);
  CHECK(d0[1] == 3.0);
  CHECK(d0[2] == 4.0);
  Eigen::VectorXd d1 = geometric_degree(X, 1);
  CHECK(d1[0] == 0.0);
  CHECK(d1[1] == 3.0);
  CHECK(d1[2] == 5.0);
  Eigen::VectorXd d2 = geometric_degree(X, 2);
  CHECK(d2[0] == 0.0);
  CHECK(d2[1] == 4.0);
  CHECK(d2[2] == 5.0);

  const auto h = degree_histogram(X);
  REQUIRE(h.size() == 3);
  CHECK(bit_equal(h[0], d0));
  CHECK(bit_equal(h[1], d1));
  CHECK(bit_equal(h[2], d2));

  CHECK_THROWS_AS(geometric_degree(X, 3), std::invalid_argument);
  CHECK_THROWS_AS(geometric_degree(X, -1), std::invalid_argument);
}

TEST_CASE("degree histogram is invariant under rigid motion and relabeling") {
  for (Seed s = 0; s < 10; ++s) {
    const PointCloud X = rand_cloud(3, 7, s);
    const GroupElement g = rand_element(3, 7, /*proper=*/false,
                                        /*translate=*/true, s + 100);
    const auto hx = degree_histogram(X);
    const auto hy = degree_histogram(apply(g, X));
    REQUIRE(hx.size() == hy.size());
    const double scale = std::max(1.0, diameter(X));
    for (std::size_t i = 0; i < hx.size(); ++i)
      CHECK((hx[i] - hy[i]).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("is_distinct spots repeated degree vectors") {
  CHECK(is_distinct(rand_cloud(3, 6, 42), 1e-9));
  CHECK(is_distinct(PointCloud::Zero(3, 1), 1e-9));

  const InstancePair pair = gen_cholesky_pair(3);
  CHECK_FALSE(is_distinct(pair.X, 1e-9));
  CHECK_FALSE(is_distinct(pair.Y, 1e-9));

  // two points at equal mutual distance share their degree vector
  PointCloud P(2, 2);
  P << 0, 1,
       0, 0;
  CHECK_FALSE(is_distinct(P, 1e-9));
}

TEST_CASE("feature is invariant under the full orthogonal group") {
  const Geo1Config cfg = Geo1Config::make(6, 2, 11, PsiKind::sort);
  const PointCloud X = rand_cloud(3, 6, 11);
  const Eigen::VectorXd f = f_1geo(X, cfg);
  for (Seed s = 0; s < 20; ++s) {
    const GroupElement g =
        rand_element(3, 6, /*proper=*/s % 2 == 0, /*translate=*/true, s);
    CHECK(relative_gap(f, f_1geo(apply(g, X), cfg)) <= 1e-6);
  }
}

TEST_CASE("permutation alone changes nothing, bit for bit") {
  const Geo1Config cfg = Geo1Config::make(5, 2, 3, PsiKind::sort);
  const PointCloud X = rand_cloud(3, 5, 3);
  const Eigen::VectorXd f = f_1geo(X, cfg);
  Rng rng = derive_stream(3, "test.perm");
  for (int trial = 0; trial < 10; ++trial) {
    const PointCloud Y = permute_cols(X, rng.permutation(5));
    CHECK(bit_equal(f_1geo(Y, cfg), f));
  }
}

TEST_CASE("equal distance profiles collapse the feature") {
  const InstancePair pair = gen_cholesky_pair(3);
  const int n = static_cast<int>(pair.X.cols());

  const Geo1Config sort_cfg = Geo1Config::make(n, 2, 5, PsiKind::sort);
  CHECK(relative_gap(f_1geo(pair.X, sort_cfg), f_1geo(pair.Y, sort_cfg)) <=
        1e-12);

  const Geo1Config pow_cfg = Geo1Config::make(n, 2, 5, PsiKind::pow);
  CHECK(relative_gap(f_1geo(pair.X, pow_cfg), f_1geo(pair.Y, pow_cfg)) <=
        1e-6);

  // the larger family collapses the same way
  const InstancePair big = gen_cholesky_pair(4);
  const Geo1Config big_cfg =
      Geo1Config::make(static_cast<int>(big.X.cols()), 2, 5, PsiKind::sort);
  CHECK(relative_gap(f_1geo(big.X, big_cfg), f_1geo(big.Y, big_cfg)) <= 1e-12);
}

TEST_CASE("distinct inequivalent clouds separate at two rounds") {
  int checked = 0;
  for (Seed s = 0; s < 40 && checked < 20; ++s) {
    const PointCloud X = rand_cloud(3, 6, 2 * s);
    const PointCloud Y = rand_cloud(3, 6, 2 * s + 1);
    if (!is_distinct(X, 1e-9) || !is_distinct(Y, 1e-9)) continue;
    if (align_exhaustive(X, Y, /*proper=*/false).equivalent) continue;
    const Geo1Config cfg = Geo1Config::make(6, 2, s, PsiKind::sort);
    CHECK(relative_gap(f_1geo(X, cfg), f_1geo(Y, cfg)) > 1e-6);
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("separation seen at one round survives a second round") {
  for (Seed s = 0; s < 10; ++s) {
    const PointCloud X = rand_cloud(3, 5, 3 * s);
    const PointCloud Y = rand_cloud(3, 5, 3 * s + 1);
    const Geo1Config one = Geo1Config::make(5, 1, s, PsiKind::sort);
    const Geo1Config two = Geo1Config::make(5, 2, s, PsiKind::sort);
    if (relative_gap(f_1geo(X, one), f_1geo(Y, one)) > 1e-3)
      CHECK(relative_gap(f_1geo(X, two), f_1geo(Y, two)) > 1e-6);
  }
}

TEST_CASE("feature width and determinism") {
  const Geo1Config cfg = Geo1Config::make(4, 2, 77, PsiKind::sort);
  CHECK(cfg.K == embedding_dim(3 * 4));
  const PointCloud X = rand_cloud(3, 4, 77);
  const Eigen::VectorXd f = f_1geo(X, cfg);
  CHECK(f.size() == cfg.K);
  CHECK(bit_equal(f, f_1geo(X, Geo1Config::make(4, 2, 77, PsiKind::sort))));
  CHECK_FALSE(bit_equal(f, f_1geo(X, Geo1Config::make(4, 2, 78, PsiKind::sort))));

  const Geo1Config pw = Geo1Config::make(4, 1, 7, PsiKind::pow);
  CHECK(f_1geo(X, pw).size() == pw.K + 1);
}

TEST_CASE("two points is the smallest supported cloud") {
  PointCloud X(1, 2);
  X << 0, 2;
  const Geo1Config cfg = Geo1Config::make(2, 2, 1, PsiKind::sort);
  const Eigen::VectorXd f = f_1geo(X, cfg);
  PointCloud Y(1, 2);
  Y << 5, 3;  // same distance, shifted and relabeled
  CHECK(relative_gap(f, f_1geo(Y, cfg)) <= 1e-9);
  PointCloud Z(1, 2);
  Z << 0, 3;
  CHECK(relative_gap(f, f_1geo(Z, cfg)) > 1e-6);
}

TEST_CASE("config and cloud must agree") {
  const Geo1Config cfg = Geo1Config::make(6, 2, 1, PsiKind::sort);
  CHECK_THROWS_AS(f_1geo(rand_cloud(3, 5, 1), cfg), std::invalid_argument);
  CHECK_THROWS_AS(f_1geo(PointCloud::Zero(3, 1), cfg), std::invalid_argument);
  Geo1Config broken = cfg;
  broken.T = 3;
  CHECK_THROWS_AS(f_1geo(rand_cloud(3, 6, 1), broken), std::invalid_argument);
  CHECK_THROWS_AS(Geo1Config::make(1, 2, 1, PsiKind::sort),
                  std::invalid_argument);
  CHECK_THROWS_AS(Geo1Config::make(4, 0, 1, PsiKind::sort),
                  std::invalid_argument);
  CHECK_THROWS_AS(Geo1Config::make(4, 2, 0, 1, PsiKind::sort),
                  std::invalid_argument);
}

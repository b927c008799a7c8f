#pragma once

// Command-line surface. tools/geosep.cpp is a thin shell around main_impl;
// everything here is callable from tests as well.
//
// Exit codes: 0 success, 1 usage error, 2 computation error, 3 selftest
// failure.

#include <iosfwd>
#include <string>

#include "geosep/embed.hpp"
#include "geosep/instances.hpp"

namespace geosep::cli {

// Feature of one cloud under the named test. Tests: 1geo, 2geo-so, 2geo-o,
// dgeo, 3wl, geoegnn. All embedding parameters descend from `seed` through
// the test's documented stream names, so a (test, seed, psi, shape) tuple
// pins the feature map. `variant` picks the geoegnn orientation handling
// (o = reflection invariant, the default) and is ignored by the other tests.
Eigen::VectorXd compute_feature(const std::string& test, const PointCloud& X,
                                Seed seed, PsiKind psi,
                                GroupKind variant = GroupKind::o);

struct BenchConfig {
  std::string test = "dgeo";
  int samples = 1000;
  double sigma = 0.1;
  Seed seed = 1;
  double tol = 1e-6;
  PsiKind psi = PsiKind::sort;
  GroupKind group = GroupKind::so;  // echoed in the report
  GroupKind variant = GroupKind::o;  // geoegnn orientation handling
  bool translate = false;
};

struct BenchReport {
  BenchConfig config;
  std::string pair_name;
  int total_first = 0;
  int correct_first = 0;
  int total_second = 0;
  int correct_second = 0;
  double accuracy = 0.0;       // (correct_first + correct_second) / samples
  double prototype_gap = 0.0;  // relative feature gap between the prototypes
  double runtime_seconds = 0.0;
};

// Nearest-prototype classification: sample i picks a prototype from the
// "bench.pick" stream, is transformed and noised under the seed
// derive_seed(seed, "bench.sample", i), and is classified to the prototype
// with the nearer feature (Euclidean). Reports are deterministic per config,
// runtime aside.
BenchReport run_bench(const InstancePair& pair, const BenchConfig& cfg);

void print_report(std::ostream& out, const BenchReport& r);

// Reduced invariant checks of every module, one named line each; returns the
// number of failures. corrupt_tolerance deliberately breaks one tolerance so
// the failure path stays observable.
int run_selftest(std::ostream& out, bool corrupt_tolerance);

int main_impl(int argc, const char* const* argv);

}  // namespace geosep::cli

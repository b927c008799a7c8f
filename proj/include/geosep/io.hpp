#pragma once

#include "geosep/core.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace geosep {

// Cloud file: a header line "d n", then n lines of d coordinates each.
// Coordinates are written with %.17g so a write/read round trip is bitwise
// exact. Lines whose first non-blank character is '#' are comments and are
// ignored everywhere. A pair file holds two such blocks separated by one
// blank line. Parse errors name the offending line.

PointCloud read_cloud(std::istream& in, const std::string& source = "<stream>");
PointCloud read_cloud_file(const std::string& path);
void write_cloud(std::ostream& out, const PointCloud& X,
                 const std::vector<std::string>& comments = {});
void write_cloud_file(const std::string& path, const PointCloud& X,
                      const std::vector<std::string>& comments = {});

std::pair<PointCloud, PointCloud> read_pair(std::istream& in,
                                            const std::string& source = "<stream>");
std::pair<PointCloud, PointCloud> read_pair_file(const std::string& path);
void write_pair(std::ostream& out, const PointCloud& X, const PointCloud& Y,
                const std::vector<std::string>& comments = {});
void write_pair_file(const std::string& path, const PointCloud& X,
                     const PointCloud& Y,
                     const std::vector<std::string>& comments = {});

// Feature file: a header line "K", then K values, one per line, full
// precision.
Eigen::VectorXd read_feature(std::istream& in,
                             const std::string& source = "<stream>");
Eigen::VectorXd read_feature_file(const std::string& path);
void write_feature(std::ostream& out, const Eigen::VectorXd& f);
void write_feature_file(const std::string& path, const Eigen::VectorXd& f);

}  // namespace geosep

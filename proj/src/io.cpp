#include "geosep/io.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace geosep {

namespace {

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

bool blank_or_comment(const std::string& line, bool* comment) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    *comment = (c == '#');
    return *comment;
  }
  *comment = false;
  return true;
}

struct LineReader {
  std::istream& in;
  std::string source;
  int lineno = 0;

  bool next_raw(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  // Next line that is neither blank nor a comment; false at end of input.
  bool next_content(std::string& line) {
    bool comment = false;
    while (next_raw(line))
      if (!blank_or_comment(line, &comment)) return true;
    return false;
  }
};

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

long parse_int(const std::string& tok, const std::string& source, int line) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (errno != 0 || end == tok.c_str() || *end != '\0')
    fail(source, line, "expected an integer, found '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, const std::string& source,
                    int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    fail(source, line, "expected a number, found '" + tok + "'");
  if (!std::isfinite(v))
    fail(source, line, "coordinate '" + tok + "' is not finite");
  return v;
}

// One cloud block: header plus n coordinate lines. Leaves anything after the
// last coordinate line unread.
PointCloud read_block(LineReader& r) {
  std::string line;
  if (!r.next_content(line)) fail(r.source, r.lineno, "missing header line");
  const int header_line = r.lineno;
  const auto head = split_tokens(line);
  if (head.size() != 2)
    fail(r.source, header_line, "malformed header, expected 'd n'");
  const long d = parse_int(head[0], r.source, header_line);
  const long n = parse_int(head[1], r.source, header_line);
  if (d < 1 || n < 1)
    fail(r.source, header_line, "header requires d >= 1 and n >= 1");

  PointCloud X(d, n);
  for (long j = 0; j < n; ++j) {
    if (!r.next_content(line))
      fail(r.source, r.lineno,
           "expected " + std::to_string(n) + " points, found " +
               std::to_string(j));
    const auto toks = split_tokens(line);
    if (static_cast<long>(toks.size()) != d)
      fail(r.source, r.lineno,
           "expected " + std::to_string(d) + " coordinates, found " +
               std::to_string(toks.size()));
    for (long i = 0; i < d; ++i)
      X(i, j) = parse_double(toks[static_cast<std::size_t>(i)], r.source,
                             r.lineno);
  }
  return X;
}

void expect_end(LineReader& r, long n) {
  std::string line;
  if (r.next_content(line))
    fail(r.source, r.lineno,
         "expected " + std::to_string(n) + " points but found more data");
}

const char* fmt17(double v, char (&buf)[40]) {
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_block(std::ostream& out, const PointCloud& X) {
  validate(X);
  char buf[40];
  out << X.rows() << ' ' << X.cols() << '\n';
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (i) out << ' ';
      out << fmt17(X(i, j), buf);
    }
    out << '\n';
  }
}

void write_comments(std::ostream& out, const std::vector<std::string>& cs) {
  for (const auto& c : cs) out << "# " << c << '\n';
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error(path + ": cannot open for reading");
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  return f;
}

}  // namespace

PointCloud read_cloud(std::istream& in, const std::string& source) {
  LineReader r{in, source};
  PointCloud X = read_block(r);
  expect_end(r, X.cols());
  validate(X);
  return X;
}

PointCloud read_cloud_file(const std::string& path) {
  auto f = open_in(path);
  return read_cloud(f, path);
}

void write_cloud(std::ostream& out, const PointCloud& X,
                 const std::vector<std::string>& comments) {
  write_comments(out, comments);
  write_block(out, X);
}

void write_cloud_file(const std::string& path, const PointCloud& X,
                      const std::vector<std::string>& comments) {
  auto f = open_out(path);
  write_cloud(f, X, comments);
}

std::pair<PointCloud, PointCloud> read_pair(std::istream& in,
                                            const std::string& source) {
  LineReader r{in, source};
  PointCloud X = read_block(r);
  PointCloud Y = read_block(r);
  if (Y.rows() != X.rows())
    fail(source, r.lineno,
         "pair blocks disagree in dimension (d=" + std::to_string(X.rows()) +
             " vs d=" + std::to_string(Y.rows()) + ")");
  expect_end(r, Y.cols());
  validate(X);
  validate(Y);
  return {std::move(X), std::move(Y)};
}

std::pair<PointCloud, PointCloud> read_pair_file(const std::string& path) {
  auto f = open_in(path);
  return read_pair(f, path);
}

void write_pair(std::ostream& out, const PointCloud& X, const PointCloud& Y,
                const std::vector<std::string>& comments) {
  write_comments(out, comments);
  write_block(out, X);
  out << '\n';
  write_block(out, Y);
}

void write_pair_file(const std::string& path, const PointCloud& X,
                     const PointCloud& Y,
                     const std::vector<std::string>& comments) {
  auto f = open_out(path);
  write_pair(f, X, Y, comments);
}

Eigen::VectorXd read_feature(std::istream& in, const std::string& source) {
  LineReader r{in, source};
  std::string line;
  if (!r.next_content(line)) fail(source, r.lineno, "missing header line");
  const auto head = split_tokens(line);
  if (head.size() != 1)
    fail(source, r.lineno, "malformed feature header, expected 'K'");
  const long k = parse_int(head[0], source, r.lineno);
  if (k < 1) fail(source, r.lineno, "feature header requires K >= 1");
  Eigen::VectorXd f(k);
  for (long i = 0; i < k; ++i) {
    if (!r.next_content(line))
      fail(source, r.lineno,
           "expected " + std::to_string(k) + " values, found " +
               std::to_string(i));
    const auto toks = split_tokens(line);
    if (toks.size() != 1)
      fail(source, r.lineno, "expected one value per line");
    f[i] = parse_double(toks[0], source, r.lineno);
  }
  expect_end(r, k);
  return f;
}

Eigen::VectorXd read_feature_file(const std::string& path) {
  auto f = open_in(path);
  return read_feature(f, path);
}

void write_feature(std::ostream& out, const Eigen::VectorXd& f) {
  if (f.size() < 1)
    throw std::invalid_argument("write_feature: empty feature");
  char buf[40];
  out << f.size() << '\n';
  for (Eigen::Index i = 0; i < f.size(); ++i) out << fmt17(f[i], buf) << '\n';
}

void write_feature_file(const std::string& path, const Eigen::VectorXd& f) {
  auto out = open_out(path);
  write_feature(out, f);
}

}  // namespace geosep

#include "alexprobe/metric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "alexprobe/error.hpp"

namespace alexprobe {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Shape: return "shape error";
    case ErrorCode::Value: return "value error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Index: return "index error";
    case ErrorCode::Precondition: return "precondition error";
    case ErrorCode::Spec: return "spec error";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Internal: return "internal consistency error";
    case ErrorCode::Io: return "I/O error";
  }
  return "error";
}

struct MetricAccess {
  static DistanceMatrix make(std::size_t n, std::vector<double> d) {
    return DistanceMatrix(n, std::move(d));
  }
};

RawMatrix::RawMatrix(std::initializer_list<std::initializer_list<double>> init) {
  rows = init.size();
  cols = rows == 0 ? 0 : init.begin()->size();
  for (const auto& row : init) {
    if (row.size() != cols) throw Error(ErrorCode::Shape, "ragged initializer");
    values.insert(values.end(), row.begin(), row.end());
  }
}

double DistanceMatrix::max_distance() const noexcept {
  double m = 0.0;
  for (double v : d_) m = std::max(m, v);
  return m;
}

DistanceMatrix DistanceMatrix::select(std::span<const std::size_t> indices) const {
  const std::size_t k = indices.size();
  std::vector<double> out(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    if (indices[a] >= n_) throw Error(ErrorCode::Index, "select: index out of range");
    for (std::size_t b = 0; b < k; ++b) out[a * k + b] = (*this)(indices[a], indices[b]);
  }
  return DistanceMatrix(k, std::move(out));
}

RawMatrix DistanceMatrix::raw() const {
  RawMatrix m(n_, n_);
  m.values = d_;
  return m;
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::NegativeEntry: return "NegativeEntry";
    case ViolationKind::Asymmetry: return "Asymmetry";
    case ViolationKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ViolationKind::TriangleViolation: return "TriangleViolation";
  }
  return "?";
}

std::string describe(const MetricViolation& v) {
  std::ostringstream os;
  os << to_string(v.kind) << " at (";
  for (std::size_t i = 0; i < v.indices.size(); ++i) {
    if (v.kind == ViolationKind::TriangleViolation && i == 2) {
      os << ") via " << v.indices[i];
      break;
    }
    os << (i ? "," : "") << v.indices[i];
  }
  if (v.kind != ViolationKind::TriangleViolation) os << ")";
  os << ", magnitude " << v.magnitude;
  return os.str();
}

ValidationResult validate_metric(const RawMatrix& raw, double slack) {
  if (!(slack >= 0.0)) throw Error(ErrorCode::Domain, "slack must be nonnegative");
  if (raw.rows != raw.cols) {
    throw Error(ErrorCode::Shape, "matrix is " + std::to_string(raw.rows) + "x" +
                                      std::to_string(raw.cols) + ", expected square");
  }
  const std::size_t n = raw.rows;
  if (n < 2 || n > kMaxPoints) {
    throw Error(ErrorCode::Shape, "point count " + std::to_string(n) + " outside [2, " +
                                      std::to_string(kMaxPoints) + "]");
  }
  double largest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = raw(i, j);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::Value, "non-finite entry at (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
      }
      largest = std::max(largest, std::abs(v));
    }
  }
  const double allowance = slack * largest;

  ValidationResult result;
  auto& out = result.violations;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(raw(i, i)) > allowance) {
      out.push_back({ViolationKind::NonzeroDiagonal, {i, i}, std::abs(raw(i, i))});
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && raw(i, j) < 0.0) {
        out.push_back({ViolationKind::NegativeEntry, {i, j}, -raw(i, j)});
      }
      if (i < j) {
        const double gap = std::abs(raw(i, j) - raw(j, i));
        if (gap > allowance) out.push_back({ViolationKind::Asymmetry, {i, j}, gap});
      }
    }
  }
  // Triangle checks run on the symmetrized upper triangle so an asymmetric
  // pair is not reported twice under two different kinds.
  auto sym = [&](std::size_t a, std::size_t b) {
    return a == b ? 0.0 : 0.5 * (raw(a, b) + raw(b, a));
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double excess = sym(i, k) - sym(i, j) - sym(j, k);
        if (excess > allowance) {
          out.push_back({ViolationKind::TriangleViolation, {i, k, j}, excess});
        }
      }
    }
  }
  if (!out.empty()) return result;

  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = sym(i, j);
  }
  result.metric = MetricAccess::make(n, std::move(d));
  return result;
}

DistanceMatrix require_metric(const RawMatrix& raw, double slack) {
  auto result = validate_metric(raw, slack);
  if (!result) {
    std::string msg = "not a metric:";
    for (const auto& v : result.violations) msg += " " + describe(v) + ";";
    throw Error(ErrorCode::Domain, msg);
  }
  return std::move(*result.metric);
}

namespace {

bool is_separator(char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; }

}  // namespace

RawMatrix parse_matrix(std::string_view text) {
  RawMatrix m;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;

    const std::size_t first = line.find_first_not_of(" \t\r,");
    if (first == std::string_view::npos || line[first] == '#') continue;

    std::vector<double> row;
    std::size_t i = first;
    while (i < line.size()) {
      while (i < line.size() && is_separator(line[i])) ++i;
      if (i >= line.size()) break;
      std::size_t end = i;
      while (end < line.size() && !is_separator(line[end])) ++end;
      const char* b = line.data() + i;
      const char* e = line.data() + end;
      if (*b == '+') ++b;  // from_chars rejects a leading plus
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || ptr != e) {
        throw Error(ErrorCode::Parse, "malformed number '" + std::string(line.substr(i, end - i)) +
                                          "' at line " + std::to_string(line_no) + ", column " +
                                          std::to_string(i + 1));
      }
      row.push_back(v);
      i = end;
    }
    if (m.rows == 0) {
      m.cols = row.size();
    } else if (row.size() != m.cols) {
      throw Error(ErrorCode::Shape, "line " + std::to_string(line_no) + " has " +
                                        std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(m.cols));
    }
    m.values.insert(m.values.end(), row.begin(), row.end());
    ++m.rows;
  }
  if (m.rows == 0) throw Error(ErrorCode::Shape, "no matrix rows found");
  return m;
}

std::string serialize(const RawMatrix& m) {
  std::string out;
  char buf[64];
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      auto res = std::to_chars(buf, buf + sizeof buf, m(r, c));
      if (c) out += ' ';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

std::string serialize(const DistanceMatrix& d) { return serialize(d.raw()); }

DistanceMatrix scale(const DistanceMatrix& d, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::Domain, "scale factor must be a positive finite real");
  }
  std::vector<double> v(d.values().begin(), d.values().end());
  for (double& x : v) x *= lambda;
  return MetricAccess::make(d.size(), std::move(v));
}

}  // namespace alexprobe

#pragma once

// Finite metric arrays: raw matrices as read from text, and validated
// distance matrices.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace alexprobe {

inline constexpr std::size_t kMaxPoints = 16;
inline constexpr double kDefaultSlack = 1e-9;

/// Row-major rectangular array of reals, unvalidated.
struct RawMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  RawMatrix() = default;
  RawMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  RawMatrix(std::initializer_list<std::initializer_list<double>> init);

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  bool operator==(const RawMatrix&) const = default;
};

/// Symmetric, zero-diagonal, nonnegative matrix satisfying the triangle
/// inequality up to the slack it was validated with. Only obtainable through
/// validate_metric() or require_metric().
class DistanceMatrix {
 public:
  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  std::span<const double> values() const noexcept { return d_; }
  double max_distance() const noexcept;

  /// Principal submatrix on the given indices, in the given order.
  DistanceMatrix select(std::span<const std::size_t> indices) const;

  RawMatrix raw() const;

  bool operator==(const DistanceMatrix&) const = default;

 private:
  friend struct MetricAccess;
  DistanceMatrix(std::size_t n, std::vector<double> d) : n_(n), d_(std::move(d)) {}

  std::size_t n_ = 0;
  std::vector<double> d_;
};

enum class ViolationKind { NegativeEntry, Asymmetry, NonzeroDiagonal, TriangleViolation };

const char* to_string(ViolationKind kind) noexcept;

/// One failed metric axiom. For TriangleViolation the indices are
/// (i, k, j): d[i][k] exceeds d[i][j] + d[j][k] by `magnitude`.
struct MetricViolation {
  ViolationKind kind;
  std::vector<std::size_t> indices;
  double magnitude;
};

std::string describe(const MetricViolation& v);

struct ValidationResult {
  std::optional<DistanceMatrix> metric;
  std::vector<MetricViolation> violations;

  explicit operator bool() const noexcept { return metric.has_value(); }
};

/// Checks every metric axiom and reports all violations, not just the first.
/// `slack` is relative to the largest entry. Throws Error(Shape) for
/// non-square input or n outside [2, 16], Error(Value) for non-finite
/// entries, Error(Domain) for negative slack.
ValidationResult validate_metric(const RawMatrix& raw, double slack = kDefaultSlack);

/// validate_metric that throws Error(Domain) listing the violations.
DistanceMatrix require_metric(const RawMatrix& raw, double slack = kDefaultSlack);

/// Parses whitespace- or comma-separated rows, one per line. Blank lines and
/// lines starting with '#' are skipped. Errors carry 1-based line/column.
RawMatrix parse_matrix(std::string_view text);

/// Shortest round-trip decimal representation, one row per line.
std::string serialize(const RawMatrix& m);
std::string serialize(const DistanceMatrix& d);

/// Multiplies every entry by lambda > 0.
DistanceMatrix scale(const DistanceMatrix& d, double lambda);

}  // namespace alexprobe

#pragma once

// Combinatorial type of 4- and 5-point arrays.
//
// When the associated form has k negative eigenvalues (k = 1 for quadruples,
// k = 2 for quintuples), the simplex vertices are projected along the negative
// subspace onto a plane. The number of projected vertices in strictly convex
// position is the type: Quadra3/Quadra4 and Penta3/Penta4/Penta5.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alexprobe/forms.hpp"
#include "alexprobe/metric.hpp"

namespace alexprobe {

inline constexpr double kDefaultEps = 1e-9;

enum class TypeTag { PSD, Quadra3, Quadra4, OneNegative5, Penta3, Penta4, Penta5, Degenerate };

enum class DegenerateReason { None, MarginalEigenvalue, CollinearProjection, CoincidentProjection };

inline constexpr std::array<TypeTag, 8> kAllTags = {
    TypeTag::PSD,    TypeTag::Quadra3, TypeTag::Quadra4, TypeTag::OneNegative5,
    TypeTag::Penta3, TypeTag::Penta4,  TypeTag::Penta5,  TypeTag::Degenerate};

inline constexpr std::array<DegenerateReason, 3> kAllReasons = {
    DegenerateReason::MarginalEigenvalue, DegenerateReason::CollinearProjection,
    DegenerateReason::CoincidentProjection};

const char* to_string(TypeTag tag) noexcept;
const char* to_string(DegenerateReason reason) noexcept;
/// Case-insensitive; accepts "quadra3", "Penta5", "psd", ...
std::optional<TypeTag> parse_tag(std::string_view name) noexcept;
std::optional<DegenerateReason> parse_reason(std::string_view name) noexcept;

/// Number of points a tag applies to (4 or 5), 0 for PSD/Degenerate.
std::size_t tag_arity(TypeTag tag) noexcept;
/// Number of negative eigenvalues the tag certifies.
int tag_negatives(TypeTag tag) noexcept;
/// Hull count the tag requires, 0 when the tag has no projection.
int tag_hull(TypeTag tag) noexcept;

struct ComparisonType {
  TypeTag tag = TypeTag::PSD;
  DegenerateReason reason = DegenerateReason::None;

  bool operator==(const ComparisonType&) const = default;
};

std::string to_string(const ComparisonType& t);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Projection2D {
  std::vector<Point2> points;             // one per array point, original labels
  std::vector<std::size_t> hull_indices;  // counter-clockwise
};

/// Orthonormal basis (as columns) of the span of the k most negative
/// eigenvectors. Throws Error(Precondition) unless the spectrum has exactly k
/// certified negative eigenvalues and nothing marginal.
Matrix negative_subspace(const Spectrum& s, int k);

/// Orthonormal basis (as columns) completing `subspace` to R^dim, built by
/// Gram-Schmidt against the standard basis.
Matrix orthogonal_complement(const Matrix& subspace);

/// Projects the simplex vertices e_1, ..., e_(n-1), 0 orthogonally along
/// `subspace` and expresses them in an orthonormal frame of the complement.
/// `subspace` must be (n-1) x (n-3). Output order: e_1, ..., e_(n-1), origin.
std::vector<Point2> project_simplex(std::size_t n, const Matrix& subspace);

struct HullResult {
  int count = 0;                         // 0 when degenerate
  std::vector<std::size_t> cyclic_hull;  // counter-clockwise
  DegenerateReason reason = DegenerateReason::None;

  bool degenerate() const noexcept { return reason != DegenerateReason::None; }
};

/// Gift-wrapping hull of 4 or 5 points. Any triple whose orientation
/// determinant is within eps * diag^2 (diag = bounding-box diagonal) is
/// reported as CollinearProjection; points closer than eps * diag as
/// CoincidentProjection.
HullResult hull_count(std::span<const Point2> points, double eps = kDefaultEps);

struct ClassifyOptions {
  double tol = kDefaultTol;
  double eps = kDefaultEps;
  std::optional<std::size_t> base;  // default n-1
};

struct Classification {
  ComparisonType type;
  std::size_t arity = 0;
  Spectrum spectrum;
  NegativeIndex index;
  std::optional<Projection2D> projection;
};

/// n = 4. Throws Error(Shape) otherwise, Error(Internal) when a metric
/// quadruple shows two or more negative eigenvalues.
Classification classify_quadruple(const DistanceMatrix& d, const ClassifyOptions& opt = {});

/// n = 5. Throws Error(Shape) otherwise, Error(Internal) on three or more
/// negative eigenvalues.
Classification classify_quintuple(const DistanceMatrix& d, const ClassifyOptions& opt = {});

/// Dispatches on size; n outside {4, 5} throws Error(Unsupported).
Classification classify(const DistanceMatrix& d, const ClassifyOptions& opt = {});

}  // namespace alexprobe

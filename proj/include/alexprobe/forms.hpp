#pragma once

// Associated quadratic form of a point array, its spectrum and inertia, and
// Euclidean realization of embeddable arrays.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "alexprobe/metric.hpp"

namespace alexprobe {

inline constexpr double kDefaultTol = 1e-9;

/// Dense row-major matrix, used for forms, eigenvector frames and subspaces.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::vector<double> column(std::size_t c) const;
  Matrix transpose() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Matrix of the unique quadratic form W on R^(n-1) with W(v_i - v_j) = d_ij^2,
/// where v_base = 0 and the remaining vertices are the standard basis vectors
/// in increasing index order.
struct AssociatedForm {
  std::size_t base = 0;
  Matrix m;

  std::size_t dim() const noexcept { return m.rows(); }
  /// Coordinate of point `index` in the form's basis; nullopt for the base.
  std::optional<std::size_t> coordinate(std::size_t index) const noexcept;
  double evaluate(std::span<const double> v) const;
};

/// Throws Error(Index) when base >= n. Default base is n-1.
AssociatedForm associated_form(const DistanceMatrix& d, std::optional<std::size_t> base = {});

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // column k pairs with eigenvalues[k]
  double scale = 0.0;               // max |eigenvalue|
  double tol = kDefaultTol;

  /// Half-width of the marginal band around zero.
  double band() const noexcept { return tol * scale; }
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (dim <= 15).
Spectrum spectrum(const Matrix& symmetric, double tol = kDefaultTol);

struct NegativeIndex {
  int count = 0;          // eigenvalues strictly below -band
  bool marginal = false;  // some eigenvalue inside [-band, band]
};

NegativeIndex negative_index(const Spectrum& s);

/// True iff the associated form has no certified negative eigenvalue; a
/// marginal spectrum counts as embeddable.
bool is_euclidean(const DistanceMatrix& d, double tol = kDefaultTol);

/// Points in R^(n-1) reproducing d, with the base vertex (n-1) at the origin.
/// Throws Error(Precondition) naming the most negative eigenvalue when the
/// array does not embed.
std::vector<std::vector<double>> realize_points(const DistanceMatrix& d, double tol = kDefaultTol);

}  // namespace alexprobe

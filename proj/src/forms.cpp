#include "alexprobe/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "alexprobe/error.hpp"

namespace alexprobe {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::Shape, "matrix product dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::optional<std::size_t> AssociatedForm::coordinate(std::size_t index) const noexcept {
  if (index == base) return std::nullopt;
  return index < base ? index : index - 1;
}

double AssociatedForm::evaluate(std::span<const double> v) const {
  if (v.size() != dim()) throw Error(ErrorCode::Shape, "vector dimension does not match form");
  double sum = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) sum += v[i] * m(i, j) * v[j];
  return sum;
}

AssociatedForm associated_form(const DistanceMatrix& d, std::optional<std::size_t> base) {
  const std::size_t n = d.size();
  const std::size_t b = base.value_or(n - 1);
  if (b >= n) throw Error(ErrorCode::Index, "base vertex " + std::to_string(b) + " out of range");

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (i != b) idx.push_back(i);

  AssociatedForm f{b, Matrix(n - 1, n - 1)};
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double dr = d(idx[r], b);
    f.m(r, r) = dr * dr;
    for (std::size_t c = r + 1; c < idx.size(); ++c) {
      const double dc = d(idx[c], b);
      const double drc = d(idx[r], idx[c]);
      const double v = 0.5 * (dr * dr + dc * dc - drc * drc);
      f.m(r, c) = v;
      f.m(c, r) = v;
    }
  }
  return f;
}

namespace {

double max_offdiagonal(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double max_diagonal(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, i)));
  return m;
}

// Applies the rotation in the (p, q) plane that annihilates a(p, q).
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

Spectrum spectrum(const Matrix& symmetric, double tol) {
  const std::size_t n = symmetric.rows();
  if (n != symmetric.cols()) throw Error(ErrorCode::Shape, "spectrum: matrix is not square");
  if (n == 0 || n > kMaxPoints - 1) throw Error(ErrorCode::Shape, "spectrum: dimension out of range");
  if (!(tol >= 0.0)) throw Error(ErrorCode::Domain, "spectrum: tolerance must be nonnegative");

  Matrix a = symmetric;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (max_offdiagonal(a) <= 1e-14 * max_diagonal(a)) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  Spectrum s;
  s.tol = tol;
  s.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = a(order[k], order[k]);
    s.eigenvalues.push_back(lambda);
    s.scale = std::max(s.scale, std::abs(lambda));
    for (std::size_t r = 0; r < n; ++r) s.eigenvectors(r, k) = v(r, order[k]);
  }
  return s;
}

NegativeIndex negative_index(const Spectrum& s) {
  NegativeIndex out;
  const double band = s.band();
  for (double lambda : s.eigenvalues) {
    if (lambda < -band) {
      ++out.count;
    } else if (lambda <= band) {
      out.marginal = true;
    }
  }
  return out;
}

bool is_euclidean(const DistanceMatrix& d, double tol) {
  return negative_index(spectrum(associated_form(d).m, tol)).count == 0;
}

std::vector<std::vector<double>> realize_points(const DistanceMatrix& d, double tol) {
  const AssociatedForm form = associated_form(d);
  const Spectrum s = spectrum(form.m, tol);
  if (negative_index(s).count > 0) {
    std::ostringstream os;
    os << "array is not Euclidean: most negative eigenvalue " << s.eigenvalues.front();
    throw Error(ErrorCode::Precondition, os.str());
  }
  const std::size_t n = d.size();
  const std::size_t dim = form.dim();
  std::vector<double> root(dim);
  for (std::size_t k = 0; k < dim; ++k) root[k] = std::sqrt(std::max(s.eigenvalues[k], 0.0));

  std::vector<std::vector<double>> points(n, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto coord = form.coordinate(i);
    if (!coord) continue;
    for (std::size_t k = 0; k < dim; ++k) points[i][k] = root[k] * s.eigenvectors(*coord, k);
  }
  return points;
}

}  // namespace alexprobe

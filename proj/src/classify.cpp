#include "alexprobe/classify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "alexprobe/error.hpp"

namespace alexprobe {

const char* to_string(TypeTag tag) noexcept {
  switch (tag) {
    case TypeTag::PSD: return "PSD";
    case TypeTag::Quadra3: return "Quadra3";
    case TypeTag::Quadra4: return "Quadra4";
    case TypeTag::OneNegative5: return "OneNegative5";
    case TypeTag::Penta3: return "Penta3";
    case TypeTag::Penta4: return "Penta4";
    case TypeTag::Penta5: return "Penta5";
    case TypeTag::Degenerate: return "Degenerate";
  }
  return "?";
}

const char* to_string(DegenerateReason reason) noexcept {
  switch (reason) {
    case DegenerateReason::None: return "None";
    case DegenerateReason::MarginalEigenvalue: return "MarginalEigenvalue";
    case DegenerateReason::CollinearProjection: return "CollinearProjection";
    case DegenerateReason::CoincidentProjection: return "CoincidentProjection";
  }
  return "?";
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::optional<TypeTag> parse_tag(std::string_view name) noexcept {
  for (TypeTag t : kAllTags)
    if (iequals(name, to_string(t))) return t;
  return std::nullopt;
}

std::optional<DegenerateReason> parse_reason(std::string_view name) noexcept {
  for (DegenerateReason r : kAllReasons)
    if (iequals(name, to_string(r))) return r;
  return std::nullopt;
}

std::size_t tag_arity(TypeTag tag) noexcept {
  switch (tag) {
    case TypeTag::Quadra3:
    case TypeTag::Quadra4: return 4;
    case TypeTag::OneNegative5:
    case TypeTag::Penta3:
    case TypeTag::Penta4:
    case TypeTag::Penta5: return 5;
    default: return 0;
  }
}

int tag_negatives(TypeTag tag) noexcept {
  switch (tag) {
    case TypeTag::Quadra3:
    case TypeTag::Quadra4:
    case TypeTag::OneNegative5: return 1;
    case TypeTag::Penta3:
    case TypeTag::Penta4:
    case TypeTag::Penta5: return 2;
    default: return 0;
  }
}

int tag_hull(TypeTag tag) noexcept {
  switch (tag) {
    case TypeTag::Quadra3:
    case TypeTag::Penta3: return 3;
    case TypeTag::Quadra4:
    case TypeTag::Penta4: return 4;
    case TypeTag::Penta5: return 5;
    default: return 0;
  }
}

std::string to_string(const ComparisonType& t) {
  std::string s = to_string(t.tag);
  if (t.tag == TypeTag::Degenerate) s += std::string("(") + to_string(t.reason) + ")";
  return s;
}

Matrix negative_subspace(const Spectrum& s, int k) {
  const NegativeIndex idx = negative_index(s);
  if (k < 1 || idx.count != k || idx.marginal) {
    throw Error(ErrorCode::Precondition,
                "negative_subspace: expected exactly " + std::to_string(k) +
                    " certified negative eigenvalue(s), found " + std::to_string(idx.count) +
                    (idx.marginal ? " with a marginal eigenvalue" : ""));
  }
  const std::size_t dim = s.eigenvectors.rows();
  Matrix basis(dim, static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c)
    for (std::size_t r = 0; r < dim; ++r) basis(r, c) = s.eigenvectors(r, c);
  return basis;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Removes the components along `frame` (twice, for numerical orthogonality).
void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& frame) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& u : frame) {
      const double c = dot(v, u);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
    }
}

}  // namespace

Matrix orthogonal_complement(const Matrix& subspace) {
  const std::size_t dim = subspace.rows();
  std::vector<std::vector<double>> frame;
  for (std::size_t c = 0; c < subspace.cols(); ++c) {
    auto v = subspace.column(c);
    orthogonalize(v, frame);
    const double norm = std::sqrt(dot(v, v));
    if (norm < 1e-12) throw Error(ErrorCode::Precondition, "subspace basis is rank deficient");
    for (double& x : v) x /= norm;
    frame.push_back(std::move(v));
  }
  const std::size_t k = frame.size();
  if (k > dim) throw Error(ErrorCode::Precondition, "subspace larger than ambient space");

  std::vector<std::vector<double>> complement;
  while (frame.size() < dim) {
    // Take the standard basis vector with the largest residual.
    std::vector<double> best;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < dim; ++j) {
      std::vector<double> e(dim, 0.0);
      e[j] = 1.0;
      orthogonalize(e, frame);
      const double norm = std::sqrt(dot(e, e));
      if (norm > best_norm + 1e-12) {
        best_norm = norm;
        best = std::move(e);
      }
    }
    for (double& x : best) x /= best_norm;
    frame.push_back(best);
    complement.push_back(std::move(best));
  }

  Matrix out(dim, complement.size());
  for (std::size_t c = 0; c < complement.size(); ++c)
    for (std::size_t r = 0; r < dim; ++r) out(r, c) = complement[c][r];
  return out;
}

std::vector<Point2> project_simplex(std::size_t n, const Matrix& subspace) {
  if (n != 4 && n != 5) throw Error(ErrorCode::Precondition, "project_simplex: n must be 4 or 5");
  if (subspace.rows() != n - 1 || subspace.cols() != n - 3) {
    throw Error(ErrorCode::Precondition, "project_simplex: subspace must have dimension " +
                                             std::to_string(n - 3) + " inside R^" +
                                             std::to_string(n - 1));
  }
  const Matrix frame = orthogonal_complement(subspace);
  std::vector<Point2> pts(n);
  for (std::size_t j = 0; j + 1 < n; ++j) pts[j] = {frame(j, 0), frame(j, 1)};
  pts[n - 1] = {0.0, 0.0};
  return pts;
}

namespace {

double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

HullResult hull_count(std::span<const Point2> points, double eps) {
  const std::size_t n = points.size();
  if (n < 3 || n > 5) throw Error(ErrorCode::Precondition, "hull_count: expects 3 to 5 points");
  if (!(eps >= 0.0)) throw Error(ErrorCode::Domain, "hull_count: eps must be nonnegative");

  double xmin = points[0].x, xmax = points[0].x, ymin = points[0].y, ymax = points[0].y;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double diag2 = (xmax - xmin) * (xmax - xmin) + (ymax - ymin) * (ymax - ymin);

  HullResult out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = points[i].x - points[j].x;
      const double dy = points[i].y - points[j].y;
      if (diag2 == 0.0 || dx * dx + dy * dy <= eps * eps * diag2) {
        out.reason = DegenerateReason::CoincidentProjection;
        return out;
      }
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (std::abs(orient(points[i], points[j], points[k])) <= eps * diag2) {
          out.reason = DegenerateReason::CollinearProjection;
          return out;
        }

  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (points[i].y < points[start].y ||
        (points[i].y == points[start].y && points[i].x < points[start].x))
      start = i;
  }
  std::size_t current = start;
  do {
    out.cyclic_hull.push_back(current);
    std::size_t next = current == 0 ? 1 : 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == current || r == next) continue;
      if (orient(points[current], points[next], points[r]) < 0.0) next = r;
    }
    current = next;
  } while (current != start && out.cyclic_hull.size() <= n);
  if (current != start) throw Error(ErrorCode::Internal, "hull_count: gift wrapping did not close");

  out.count = static_cast<int>(out.cyclic_hull.size());
  return out;
}

namespace {

Classification classify_impl(const DistanceMatrix& d, const ClassifyOptions& opt,
                             std::size_t arity) {
  if (d.size() != arity) {
    throw Error(ErrorCode::Shape, "expected a " + std::to_string(arity) + "-point array, got " +
                                      std::to_string(d.size()));
  }
  const AssociatedForm form = associated_form(d, opt.base);
  Classification c;
  c.arity = arity;
  c.spectrum = spectrum(form.m, opt.tol);
  c.index = negative_index(c.spectrum);

  const int max_negative = arity == 4 ? 1 : 2;
  if (c.index.count > max_negative) {
    throw Error(ErrorCode::Internal,
                std::to_string(arity) + "-point metric array shows " +
                    std::to_string(c.index.count) + " negative eigenvalues; at most " +
                    std::to_string(max_negative) + " are possible");
  }
  if (c.index.count == 0) {
    c.type = {TypeTag::PSD, DegenerateReason::None};
    return c;
  }
  if (arity == 5 && c.index.count == 1) {
    c.type = {TypeTag::OneNegative5, DegenerateReason::None};
    return c;
  }
  if (c.index.marginal) {
    c.type = {TypeTag::Degenerate, DegenerateReason::MarginalEigenvalue};
    return c;
  }

  const Matrix sub = negative_subspace(c.spectrum, max_negative);
  const std::vector<Point2> simplex = project_simplex(arity, sub);

  // Relabel from simplex order (basis vectors, then origin) to point indices.
  Projection2D proj;
  proj.points.resize(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    const auto coord = form.coordinate(i);
    proj.points[i] = coord ? simplex[*coord] : simplex[arity - 1];
  }
  const HullResult hull = hull_count(proj.points, opt.eps);
  if (hull.degenerate()) {
    c.type = {TypeTag::Degenerate, hull.reason};
    c.projection = std::move(proj);
    return c;
  }
  proj.hull_indices = hull.cyclic_hull;
  c.projection = std::move(proj);

  if (arity == 4) {
    c.type.tag = hull.count == 4 ? TypeTag::Quadra4 : TypeTag::Quadra3;
  } else {
    c.type.tag = hull.count == 5 ? TypeTag::Penta5
                 : hull.count == 4 ? TypeTag::Penta4
                                   : TypeTag::Penta3;
  }
  return c;
}

}  // namespace

Classification classify_quadruple(const DistanceMatrix& d, const ClassifyOptions& opt) {
  return classify_impl(d, opt, 4);
}

Classification classify_quintuple(const DistanceMatrix& d, const ClassifyOptions& opt) {
  return classify_impl(d, opt, 5);
}

Classification classify(const DistanceMatrix& d, const ClassifyOptions& opt) {
  if (d.size() != 4 && d.size() != 5) {
    throw Error(ErrorCode::Unsupported, "unsupported arity " + std::to_string(d.size()) +
                                            " for classification; use embed-check");
  }
  return classify_impl(d, opt, d.size());
}

}  // namespace alexprobe

#include "alexprobe/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "alexprobe/error.hpp"

namespace alexprobe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kModelTolerance = 1e-9;

void require_dim(const Point& p, std::size_t dim, const char* what) {
  if (p.size() != dim) {
    throw Error(ErrorCode::Domain, std::string(what) + ": point has " + std::to_string(p.size()) +
                                       " coordinates, expected " + std::to_string(dim));
  }
}

std::size_t as_index(const Point& p, std::size_t count, const char* what) {
  require_dim(p, 1, what);
  const double v = p[0];
  if (!(v >= 0.0) || v != std::floor(v) || v >= static_cast<double>(count)) {
    throw Error(ErrorCode::Domain, std::string(what) + ": point is not a valid index");
  }
  return static_cast<std::size_t>(v);
}

double sphere_distance(const SphereSpace& s, const Point& a, const Point& b) {
  require_dim(a, 3, "sphere");
  require_dim(b, 3, "sphere");
  const double r2 = s.radius * s.radius;
  for (const Point* p : {&a, &b}) {
    const double norm2 = (*p)[0] * (*p)[0] + (*p)[1] * (*p)[1] + (*p)[2] * (*p)[2];
    if (std::abs(norm2 - r2) > kModelTolerance * r2) {
      throw Error(ErrorCode::Domain, "sphere: point is off the sphere");
    }
  }
  // Angle via atan2(|a x b|, a . b): same value as arccos(<a,b>/r^2), but
  // accurate for nearly coincident and nearly antipodal pairs.
  const double cx = a[1] * b[2] - a[2] * b[1];
  const double cy = a[2] * b[0] - a[0] * b[2];
  const double cz = a[0] * b[1] - a[1] * b[0];
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  return s.radius * std::atan2(cross, dot);
}

// Minkowski form with signature (+, +, -).
double minkowski(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]; }

double hyperbolic_distance(const Point& a, const Point& b) {
  require_dim(a, 3, "hyperbolic");
  require_dim(b, 3, "hyperbolic");
  for (const Point* p : {&a, &b}) {
    const double q = minkowski(*p, *p);
    if ((*p)[2] <= 0.0 || std::abs(q + 1.0) > kModelTolerance * std::max(1.0, (*p)[2] * (*p)[2])) {
      throw Error(ErrorCode::Domain, "hyperbolic: point is off the upper hyperboloid sheet");
    }
  }
  // arccosh(-<a,b>) rewritten as 2 asinh(|a-b|/2), where |a-b|^2 = -2 - 2<a,b>
  // is evaluated from the difference vector to avoid cancellation.
  const Point diff{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  double chord2 = minkowski(diff, diff);
  const double size = std::max(a[2], b[2]);
  if (chord2 < -kModelTolerance * size * size) {
    throw Error(ErrorCode::Domain, "hyperbolic: points are not on a common sheet");
  }
  chord2 = std::max(chord2, 0.0);
  return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

double normed_distance(const NormedPlane& s, const Point& a, const Point& b) {
  require_dim(a, 2, "normed");
  require_dim(b, 2, "normed");
  const double dx = std::abs(a[0] - b[0]);
  const double dy = std::abs(a[1] - b[1]);
  const double m = std::max(dx, dy);
  if (std::isinf(s.p) || m == 0.0) return m;
  if (s.p == 1.0) return dx + dy;
  if (s.p == 2.0) return std::hypot(dx, dy);
  return m * std::pow(std::pow(dx / m, s.p) + std::pow(dy / m, s.p), 1.0 / s.p);
}

}  // namespace

std::string space_name(const SpaceSpec& spec) {
  return std::visit(overloaded{
                        [](const EuclideanSpace&) { return std::string("euclidean"); },
                        [](const SphereSpace&) { return std::string("sphere"); },
                        [](const HyperbolicSpace&) { return std::string("hyperbolic"); },
                        [](const NormedPlane&) { return std::string("normed"); },
                        [](const GraphSpace&) { return std::string("graph"); },
                        [](const ExplicitSpace&) { return std::string("explicit"); },
                    },
                    spec);
}

void validate_space(const SpaceSpec& spec) {
  std::visit(overloaded{
                 [](const EuclideanSpace& s) {
                   if (s.dim < 1) throw Error(ErrorCode::Spec, "euclidean: dim must be >= 1");
                 },
                 [](const SphereSpace& s) {
                   if (!(s.radius > 0.0) || !std::isfinite(s.radius))
                     throw Error(ErrorCode::Spec, "sphere: radius must be positive");
                 },
                 [](const HyperbolicSpace& s) {
                   if (!(s.r_max > 0.0) || !std::isfinite(s.r_max))
                     throw Error(ErrorCode::Spec, "hyperbolic: rmax must be positive");
                 },
                 [](const NormedPlane& s) {
                   if (!(s.p >= 1.0)) throw Error(ErrorCode::Spec, "normed: p must be >= 1");
                 },
                 [](const GraphSpace& s) {
                   if (!s.tables) throw Error(ErrorCode::Spec, "graph: not built with make_graph");
                 },
                 [](const ExplicitSpace&) {},
             },
             spec);
}

std::vector<double> shortest_paths(std::size_t vertices, const std::vector<WeightedEdge>& edges) {
  if (vertices == 0) throw Error(ErrorCode::Spec, "graph: no vertices");
  // Floyd-Warshall is cubic and the table quadratic; keep both bounded.
  if (vertices > kMaxGraphVertices) {
    throw Error(ErrorCode::Spec, "graph: at most " + std::to_string(kMaxGraphVertices) + " vertices");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices;
  std::vector<double> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw Error(ErrorCode::Spec, "graph: edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw Error(ErrorCode::Spec, "graph: edge weights must be positive and finite");
    if (e.u == e.v) continue;
    d[e.u * n + e.v] = std::min(d[e.u * n + e.v], e.weight);
    d[e.v * n + e.u] = std::min(d[e.v * n + e.u], e.weight);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      if (dik == inf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double via = dik + d[k * n + j];
        if (via < d[i * n + j]) d[i * n + j] = via;
      }
    }
  for (std::size_t j = 1; j < n; ++j)
    if (d[j] == inf) {
      throw Error(ErrorCode::Spec, "graph: disconnected, no path between vertices 0 and " +
                                       std::to_string(j));
    }
  return d;
}

GraphSpace make_graph(std::size_t vertices, std::vector<WeightedEdge> edges) {
  auto tables = std::make_shared<GraphSpace::Tables>();
  tables->distances = shortest_paths(vertices, edges);
  tables->adjacency.resize(vertices);
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    tables->adjacency[e.u].push_back(e.v);
    tables->adjacency[e.v].push_back(e.u);
  }
  for (auto& adj : tables->adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  GraphSpace g;
  g.vertices = vertices;
  g.edges = std::move(edges);
  g.tables = std::move(tables);
  return g;
}

DistanceMatrix graph_metric(std::size_t vertices, const std::vector<WeightedEdge>& edges) {
  if (vertices > kMaxPoints) {
    throw Error(ErrorCode::Shape, "graph_metric: at most " + std::to_string(kMaxPoints) +
                                      " vertices fit in a DistanceMatrix");
  }
  RawMatrix raw(vertices, vertices);
  raw.values = shortest_paths(vertices, edges);
  return require_metric(raw, 0.0);
}

double pairwise_distance(const SpaceSpec& spec, const Point& a, const Point& b) {
  return std::visit(
      overloaded{
          [&](const EuclideanSpace& s) {
            require_dim(a, s.dim, "euclidean");
            require_dim(b, s.dim, "euclidean");
            double sum = 0.0;
            for (std::size_t i = 0; i < s.dim; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(sum);
          },
          [&](const SphereSpace& s) { return sphere_distance(s, a, b); },
          [&](const HyperbolicSpace&) { return hyperbolic_distance(a, b); },
          [&](const NormedPlane& s) { return normed_distance(s, a, b); },
          [&](const GraphSpace& s) {
            return s.distance(as_index(a, s.vertices, "graph"), as_index(b, s.vertices, "graph"));
          },
          [&](const ExplicitSpace& s) {
            const std::size_t n = s.matrix.size();
            return s.matrix(as_index(a, n, "explicit"), as_index(b, n, "explicit"));
          },
      },
      spec);
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index));
}

namespace {

Point hyperboloid_point(double x, double y) { return {x, y, std::sqrt(1.0 + x * x + y * y)}; }

std::size_t space_cardinality(const SpaceSpec& spec) {
  if (const auto* g = std::get_if<GraphSpace>(&spec)) return g->vertices;
  if (const auto* e = std::get_if<ExplicitSpace>(&spec)) return e->matrix.size();
  return std::numeric_limits<std::size_t>::max();
}

}  // namespace

Point sample_point(const SpaceSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  return std::visit(
      overloaded{
          [&](const EuclideanSpace& s) {
            Point p(s.dim);
            for (double& x : p) x = unit(rng);
            return p;
          },
          [&](const SphereSpace& s) {
            for (;;) {
              Point p{gauss(rng), gauss(rng), gauss(rng)};
              const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
              if (norm < 1e-12) continue;
              for (double& x : p) x *= s.radius / norm;
              return p;
            }
          },
          [&](const HyperbolicSpace& s) {
            // Area element sinh(r) dr dtheta: invert cosh(r) - 1 proportionally.
            const double theta = 2.0 * std::numbers::pi * unit(rng);
            const double r = std::acosh(1.0 + unit(rng) * (std::cosh(s.r_max) - 1.0));
            return hyperboloid_point(std::sinh(r) * std::cos(theta), std::sinh(r) * std::sin(theta));
          },
          [&](const NormedPlane&) { return Point{unit(rng), unit(rng)}; },
          [&](const GraphSpace& s) {
            std::uniform_int_distribution<std::size_t> pick(0, s.vertices - 1);
            return Point{static_cast<double>(pick(rng))};
          },
          [&](const ExplicitSpace& s) {
            std::uniform_int_distribution<std::size_t> pick(0, s.matrix.size() - 1);
            return Point{static_cast<double>(pick(rng))};
          },
      },
      spec);
}

Sample make_sample(const SpaceSpec& spec, std::vector<Point> points) {
  const std::size_t n = points.size();
  RawMatrix raw(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      raw(i, j) = raw(j, i) = pairwise_distance(spec, points[i], points[j]);
  return Sample{require_metric(raw, kDefaultSlack), std::move(points)};
}

namespace {

bool separated(const SpaceSpec& spec, const std::vector<Point>& placed, const Point& p) {
  const bool discrete =
      std::holds_alternative<GraphSpace>(spec) || std::holds_alternative<ExplicitSpace>(spec);
  for (const auto& q : placed) {
    if (discrete ? q[0] == p[0] : pairwise_distance(spec, q, p) < kMinSeparation) return false;
  }
  return true;
}

}  // namespace

Sample sample_array(const SpaceSpec& spec, std::size_t n, Rng& rng) {
  validate_space(spec);
  if (n > space_cardinality(spec)) {
    throw Error(ErrorCode::Spec, space_name(spec) + ": cannot draw " + std::to_string(n) +
                                     " distinct points from " +
                                     std::to_string(space_cardinality(spec)));
  }
  constexpr int kMaxAttempts = 10000;
  std::vector<Point> points;
  points.reserve(n);
  while (points.size() < n) {
    int attempts = 0;
    for (;;) {
      Point p = sample_point(spec, rng);
      if (separated(spec, points, p)) {
        points.push_back(std::move(p));
        break;
      }
      if (++attempts == kMaxAttempts) {
        throw Error(ErrorCode::Spec, space_name(spec) + ": cannot find separated points");
      }
    }
  }
  return make_sample(spec, std::move(points));
}

Point perturb_point(const SpaceSpec& spec, const Point& p, double step, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  return std::visit(
      overloaded{
          [&](const EuclideanSpace&) {
            Point q = p;
            for (double& x : q) x += step * gauss(rng);
            return q;
          },
          [&](const SphereSpace& s) {
            Point q = p;
            for (double& x : q) x += step * s.radius * gauss(rng);
            const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
            if (norm < 1e-12) return p;
            for (double& x : q) x *= s.radius / norm;
            return q;
          },
          [&](const HyperbolicSpace& s) {
            double x = p[0] + step * gauss(rng);
            double y = p[1] + step * gauss(rng);
            const double limit = std::sinh(s.r_max);
            const double rho = std::hypot(x, y);
            if (rho > limit) {
              x *= limit / rho;
              y *= limit / rho;
            }
            return hyperboloid_point(x, y);
          },
          [&](const NormedPlane&) {
            return Point{p[0] + step * gauss(rng), p[1] + step * gauss(rng)};
          },
          [&](const GraphSpace& s) {
            const auto& adj = s.tables->adjacency[as_index(p, s.vertices, "graph")];
            if (adj.empty()) return p;
            std::uniform_int_distribution<std::size_t> pick(0, adj.size() - 1);
            return Point{static_cast<double>(adj[pick(rng)])};
          },
          [&](const ExplicitSpace& s) {
            std::uniform_int_distribution<std::size_t> pick(0, s.matrix.size() - 1);
            return Point{static_cast<double>(pick(rng))};
          },
      },
      spec);
}

SampleBatch sample_batch(const SpaceSpec& spec, std::size_t arity, std::size_t count,
                         std::uint64_t seed) {
  SampleBatch batch{spec, arity, seed, {}};
  batch.arrays.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    batch.arrays.push_back(sample_array(spec, arity, rng));
  }
  return batch;
}

}  // namespace alexprobe

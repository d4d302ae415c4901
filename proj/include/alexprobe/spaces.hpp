#pragma once

// Model metric spaces: point sampling, exact geodesic distances, and
// model-preserving perturbations used by the search.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "alexprobe/metric.hpp"

namespace alexprobe {

using Point = std::vector<double>;
using Rng = std::mt19937_64;

/// Reported in every census/search so runs can be reproduced.
inline constexpr const char* kRngDescription =
    "mt19937_64 (libstdc++ distributions), per-array seed = splitmix64(seed ^ splitmix64(index))";

inline constexpr double kMinSeparation = 1e-6;

/// Points sampled from the unit cube [0,1]^dim.
struct EuclideanSpace {
  std::size_t dim = 3;
};

/// Round 2-sphere with its intrinsic (great-circle) metric.
struct SphereSpace {
  double radius = 1.0;
};

/// Hyperboloid model of the hyperbolic plane; samples lie in the disc of
/// radius r_max about (0, 0, 1).
struct HyperbolicSpace {
  double r_max = 3.0;
};

/// R^2 with the l^p norm; p = infinity gives the max norm. Samples from the
/// unit square.
struct NormedPlane {
  double p = 2.0;
};

struct WeightedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Shortest-path metric on a connected, positively weighted graph. Points are
/// vertices. Build with make_graph().
struct GraphSpace {
  std::size_t vertices = 0;
  std::vector<WeightedEdge> edges;

  struct Tables {
    std::vector<double> distances;  // vertices x vertices, row-major
    std::vector<std::vector<std::size_t>> adjacency;
  };
  std::shared_ptr<const Tables> tables;

  double distance(std::size_t a, std::size_t b) const { return tables->distances[a * vertices + b]; }
};

/// A fixed finite metric; points are row indices.
struct ExplicitSpace {
  DistanceMatrix matrix;
};

using SpaceSpec =
    std::variant<EuclideanSpace, SphereSpace, HyperbolicSpace, NormedPlane, GraphSpace, ExplicitSpace>;

/// Lower-case variant name: euclidean, sphere, hyperbolic, normed, graph, explicit.
std::string space_name(const SpaceSpec& spec);

/// Throws Error(Spec) when a parameter invariant fails.
void validate_space(const SpaceSpec& spec);

inline constexpr std::size_t kMaxGraphVertices = 2048;

/// Floyd-Warshall all-pairs shortest paths, row-major. Throws Error(Spec) for
/// nonpositive weights, bad endpoints, a disconnected graph (naming a
/// separated pair), or more than kMaxGraphVertices vertices.
std::vector<double> shortest_paths(std::size_t vertices, const std::vector<WeightedEdge>& edges);

/// Validates the graph and precomputes its distance table.
GraphSpace make_graph(std::size_t vertices, std::vector<WeightedEdge> edges);

/// Shortest-path metric as a DistanceMatrix (at most 16 vertices).
DistanceMatrix graph_metric(std::size_t vertices, const std::vector<WeightedEdge>& edges);

/// Geodesic distance in the model. Throws Error(Domain) for points off the
/// model by more than 1e-9.
double pairwise_distance(const SpaceSpec& spec, const Point& a, const Point& b);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;
/// Seed for the index-th array of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

struct Sample {
  DistanceMatrix metric;
  std::vector<Point> points;
};

Point sample_point(const SpaceSpec& spec, Rng& rng);

/// Builds the distance matrix of `points`; validated at slack 1e-9.
Sample make_sample(const SpaceSpec& spec, std::vector<Point> points);

/// n points drawn from the space's sampling region, pairwise separated by at
/// least kMinSeparation (distinct vertices for graphs and explicit spaces).
/// Throws Error(Spec) when the space has fewer than n points.
Sample sample_array(const SpaceSpec& spec, std::size_t n, Rng& rng);

/// A nearby point of the model: Gaussian moves of size `step` (relative to
/// the radius on the sphere), a random neighbour on graphs, a random index on
/// explicit spaces.
Point perturb_point(const SpaceSpec& spec, const Point& p, double step, Rng& rng);

struct SampleBatch {
  SpaceSpec spec;
  std::size_t arity = 0;
  std::uint64_t seed = 0;
  std::vector<Sample> arrays;
};

/// Array i is drawn from Rng(derive_seed(seed, i)).
SampleBatch sample_batch(const SpaceSpec& spec, std::size_t arity, std::size_t count,
                         std::uint64_t seed);

}  // namespace alexprobe

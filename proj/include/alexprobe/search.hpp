#pragma once

// Type censuses over sampled arrays and hill-climbing search for arrays of a
// target type. Absence of a type is only ever "not found within budget".

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "alexprobe/classify.hpp"
#include "alexprobe/spaces.hpp"

namespace alexprobe {

struct CensusOptions {
  double tol = kDefaultTol;
  double eps = kDefaultEps;
  unsigned threads = 1;  // 0 = hardware concurrency
  std::size_t max_witnesses = 10;
};

struct Witness {
  std::size_t index = 0;  // sample index within the run
  DistanceMatrix metric;
  std::vector<Point> points;
};

struct Census {
  SpaceSpec spec;
  std::size_t arity = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  double eps = kDefaultEps;

  std::map<TypeTag, std::size_t> counts;  // every tag except Degenerate
  std::map<DegenerateReason, std::size_t> degenerate_reasons;
  std::vector<std::size_t> negative_index_counts;  // [k] = arrays with k certified negatives
  std::map<TypeTag, std::vector<Witness>> witnesses;  // non-PSD tags, Degenerate included

  std::size_t count(TypeTag tag) const;
  std::size_t degenerate() const;
};

/// Classifies `samples` arrays, array i drawn with derive_seed(seed, i).
/// Results do not depend on the thread count.
Census census(const SpaceSpec& spec, std::size_t arity, std::size_t samples, std::uint64_t seed,
              const CensusOptions& opt = {});

struct MarginTerms {
  double spectral = 0.0;
  std::optional<double> hull;  // evaluated only when the spectral gate passes
};

/// Components of type_margin. Throws Error(Unsupported) for PSD/Degenerate
/// targets and Error(Shape) when the arity does not match the target.
MarginTerms type_margin_terms(const DistanceMatrix& d, TypeTag target, const ClassifyOptions& opt = {});

/// Continuous score, positive iff the target's spectral gate is certified and
/// the projection has the target hull count. The spectral term is -lambda_k /
/// scale (k = 1 for Quadra*, the second smallest eigenvalue for Penta*); when
/// it passes but the hull count is wrong the (negative) hull-depth term is
/// returned instead.
double type_margin(const DistanceMatrix& d, TypeTag target, const ClassifyOptions& opt = {});

struct SearchOptions {
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  double step = 0.1;
  double tol = kDefaultTol;
  double eps = kDefaultEps;
};

struct SearchResult {
  TypeTag target = TypeTag::PSD;
  bool found = false;
  std::optional<DistanceMatrix> array;
  std::vector<Point> points;
  double margin = 0.0;  // of `array` when found, else the best margin seen
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
};

/// Random restarts plus one-point-at-a-time perturbation in model
/// coordinates, accepting moves that raise type_margin; the step halves
/// after 50 non-improving moves and a restart follows once it collapses.
/// Explicit spaces are searched only when their size equals the target
/// arity (Error(Unsupported) otherwise).
SearchResult find_type(const SpaceSpec& spec, TypeTag target, const SearchOptions& opt);

struct NormedScanEntry {
  double p = 2.0;
  Census census;
  SearchResult penta3;
  SearchResult penta4;
};

struct NormedScanOptions {
  CensusOptions census;
  std::size_t search_budget = 10000;
};

/// One census per p plus Penta3/Penta4 searches. Entry i uses
/// derive_seed(seed, i) for its census and searches.
std::vector<NormedScanEntry> normed_plane_scan(const std::vector<double>& p_values, std::size_t arity,
                                               std::size_t samples, std::uint64_t seed,
                                               const NormedScanOptions& opt = {});

}  // namespace alexprobe

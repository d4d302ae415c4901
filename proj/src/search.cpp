#include "alexprobe/search.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "alexprobe/error.hpp"

namespace alexprobe {

std::size_t Census::count(TypeTag tag) const {
  if (tag == TypeTag::Degenerate) return degenerate();
  auto it = counts.find(tag);
  return it == counts.end() ? 0 : it->second;
}

std::size_t Census::degenerate() const {
  std::size_t total = 0;
  for (const auto& [reason, n] : degenerate_reasons) total += n;
  return total;
}

namespace {

struct Partial {
  std::map<TypeTag, std::size_t> counts;
  std::map<DegenerateReason, std::size_t> reasons;
  std::vector<std::size_t> index_counts;
  std::map<TypeTag, std::vector<Witness>> witnesses;
};

Partial census_range(const SpaceSpec& spec, std::size_t arity, std::size_t begin, std::size_t end,
                     std::uint64_t seed, const CensusOptions& opt) {
  Partial part;
  part.index_counts.assign(arity - 2, 0);
  const ClassifyOptions copt{opt.tol, opt.eps, std::nullopt};
  for (std::size_t i = begin; i < end; ++i) {
    Rng rng(derive_seed(seed, i));
    Sample s = sample_array(spec, arity, rng);
    const Classification c = classify(s.metric, copt);
    ++part.index_counts[static_cast<std::size_t>(c.index.count)];
    if (c.type.tag == TypeTag::Degenerate) {
      ++part.reasons[c.type.reason];
    } else {
      ++part.counts[c.type.tag];
    }
    if (c.type.tag != TypeTag::PSD) {
      auto& list = part.witnesses[c.type.tag];
      if (list.size() < opt.max_witnesses) {
        list.push_back(Witness{i, std::move(s.metric), std::move(s.points)});
      }
    }
  }
  return part;
}

}  // namespace

Census census(const SpaceSpec& spec, std::size_t arity, std::size_t samples, std::uint64_t seed,
              const CensusOptions& opt) {
  if (arity != 4 && arity != 5) throw Error(ErrorCode::Unsupported, "census arity must be 4 or 5");
  if (samples < 1) throw Error(ErrorCode::Domain, "census needs at least one sample");
  validate_space(spec);

  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, samples));

  std::vector<Partial> parts(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto bounds = [&](unsigned t) { return samples * t / threads; };
  if (threads == 1) {
    parts[0] = census_range(spec, arity, 0, samples, seed, opt);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          parts[t] = census_range(spec, arity, bounds(t), bounds(t + 1), seed, opt);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Census out;
  out.spec = spec;
  out.arity = arity;
  out.samples = samples;
  out.seed = seed;
  out.tol = opt.tol;
  out.eps = opt.eps;
  out.negative_index_counts.assign(arity - 2, 0);
  for (auto& part : parts) {
    for (const auto& [tag, n] : part.counts) out.counts[tag] += n;
    for (const auto& [reason, n] : part.reasons) out.degenerate_reasons[reason] += n;
    for (std::size_t k = 0; k < part.index_counts.size(); ++k)
      out.negative_index_counts[k] += part.index_counts[k];
    for (auto& [tag, list] : part.witnesses) {
      auto& dst = out.witnesses[tag];
      for (auto& w : list) {
        if (dst.size() >= opt.max_witnesses) break;
        dst.push_back(std::move(w));
      }
    }
  }
  return out;
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; tolerates duplicates and collinear input.
std::vector<Point2> convex_polygon(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

double segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

// Positive distance from p to the convex hull of `others` when p lies outside,
// negative distance to its boundary when inside.
double signed_hull_depth(const Point2& p, const std::vector<Point2>& others) {
  const auto poly = convex_polygon(others);
  double dist = std::numeric_limits<double>::infinity();
  if (poly.size() == 1) return std::hypot(p.x - poly[0].x, p.y - poly[0].y);
  for (std::size_t i = 0; i < poly.size(); ++i)
    dist = std::min(dist, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  if (poly.size() < 3) return dist;
  bool inside = true;
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (cross(poly[i], poly[(i + 1) % poly.size()], p) <= 0) inside = false;
  return inside ? -dist : dist;
}

// Positive iff exactly `target` points are hull vertices, in units of the
// bounding-box diagonal.
double hull_term(const std::vector<Point2>& pts, int target) {
  double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double diag = std::hypot(xmax - xmin, ymax - ymin);
  if (diag == 0.0) return -1.0;

  std::vector<double> depth;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<Point2> others;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) others.push_back(pts[j]);
    depth.push_back(signed_hull_depth(pts[i], others) / diag);
  }
  std::sort(depth.begin(), depth.end(), std::greater<>());
  const auto k = static_cast<std::size_t>(target);
  double term = depth[k - 1];
  if (k < depth.size()) term = std::min(term, -depth[k]);
  return term;
}

void check_target(TypeTag target, std::size_t arity) {
  if (target == TypeTag::PSD || target == TypeTag::Degenerate) {
    throw Error(ErrorCode::Unsupported, std::string("unsupported target ") + to_string(target));
  }
  if (tag_arity(target) != arity) {
    throw Error(ErrorCode::Shape, std::string(to_string(target)) + " needs a " +
                                      std::to_string(tag_arity(target)) + "-point array, got " +
                                      std::to_string(arity));
  }
}

MarginTerms margin_from_spectrum(const Spectrum& s, TypeTag target, std::size_t arity) {
  MarginTerms terms;
  if (s.scale == 0.0) {
    terms.spectral = -1.0;
    return terms;
  }
  const auto& ev = s.eigenvalues;
  const int k = tag_negatives(target);
  terms.spectral = -ev[static_cast<std::size_t>(k - 1)] / s.scale;
  // OneNegative5 tolerates a marginal second eigenvalue, as the classifier does.
  if (target == TypeTag::OneNegative5) terms.spectral = std::min(terms.spectral, ev[1] / s.scale + 2.0 * s.tol);
  if (terms.spectral <= s.tol) {
    terms.spectral -= s.tol;  // uncertified gate never scores positive
    return terms;
  }
  if (tag_hull(target) == 0) return terms;

  Matrix sub(s.eigenvectors.rows(), static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c)
    for (std::size_t r = 0; r < sub.rows(); ++r) sub(r, c) = s.eigenvectors(r, c);
  const auto pts = project_simplex(arity, sub);
  terms.hull = hull_term(pts, tag_hull(target));
  return terms;
}

double combine(const MarginTerms& t) {
  if (!t.hull) return t.spectral;
  return *t.hull > 0.0 ? t.spectral : *t.hull;
}

}  // namespace

MarginTerms type_margin_terms(const DistanceMatrix& d, TypeTag target, const ClassifyOptions& opt) {
  check_target(target, d.size());
  const Spectrum s = spectrum(associated_form(d, opt.base).m, opt.tol);
  return margin_from_spectrum(s, target, d.size());
}

double type_margin(const DistanceMatrix& d, TypeTag target, const ClassifyOptions& opt) {
  return combine(type_margin_terms(d, target, opt));
}

namespace {

bool well_separated(const SpaceSpec& spec, const std::vector<Point>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pairwise_distance(spec, pts[i], pts[j]) < kMinSeparation) return false;
  return true;
}

}  // namespace

SearchResult find_type(const SpaceSpec& spec, TypeTag target, const SearchOptions& opt) {
  if (opt.budget < 1) throw Error(ErrorCode::Domain, "search budget must be at least 1");
  if (!(opt.step > 0.0)) throw Error(ErrorCode::Domain, "search step must be positive");
  validate_space(spec);
  const std::size_t arity = tag_arity(target);
  check_target(target, arity == 0 ? 4 : arity);
  if (const auto* e = std::get_if<ExplicitSpace>(&spec); e && e->matrix.size() != arity) {
    throw Error(ErrorCode::Unsupported,
                "explicit space: search needs a matrix of size equal to the target arity");
  }

  const ClassifyOptions copt{opt.tol, opt.eps, std::nullopt};
  SearchResult result;
  result.target = target;
  result.budget = opt.budget;
  result.seed = opt.seed;
  result.margin = -std::numeric_limits<double>::infinity();

  // Returns the margin, or nullopt once the target has been hit.
  auto evaluate = [&](Sample& s) -> std::optional<double> {
    ++result.evaluations;
    const Classification c = classify(s.metric, copt);
    const double m = combine(margin_from_spectrum(c.spectrum, target, arity));
    if (c.type.tag == target) {
      result.found = true;
      result.margin = m;
      result.array = s.metric;
      result.points = s.points;
      return std::nullopt;
    }
    result.margin = std::max(result.margin, m);
    return m;
  };

  constexpr int kPatience = 50;
  const double min_step = opt.step * 1e-6;
  while (result.evaluations < opt.budget) {
    Rng rng(derive_seed(opt.seed, result.restarts));
    ++result.restarts;
    Sample current = std::holds_alternative<ExplicitSpace>(spec)
                         ? make_sample(spec, [&] {
                             std::vector<Point> idx;
                             for (std::size_t i = 0; i < arity; ++i) idx.push_back({double(i)});
                             return idx;
                           }())
                         : sample_array(spec, arity, rng);
    auto score = evaluate(current);
    if (!score) return result;
    if (std::holds_alternative<ExplicitSpace>(spec)) return result;  // nothing to perturb

    double step = opt.step;
    int stale = 0;
    std::uniform_int_distribution<std::size_t> pick(0, arity - 1);
    while (result.evaluations < opt.budget && step > min_step) {
      std::vector<Point> pts = current.points;
      const std::size_t which = pick(rng);
      pts[which] = perturb_point(spec, pts[which], step, rng);
      std::optional<double> m;
      bool improved = false;
      if (well_separated(spec, pts)) {
        Sample candidate = make_sample(spec, std::move(pts));
        m = evaluate(candidate);
        if (!m) return result;
        if (*m > *score) {
          score = m;
          current = std::move(candidate);
          improved = true;
        }
      } else {
        ++result.evaluations;
      }
      if (improved) {
        stale = 0;
      } else if (++stale >= kPatience) {
        step *= 0.5;
        stale = 0;
      }
    }
  }
  return result;
}

std::vector<NormedScanEntry> normed_plane_scan(const std::vector<double>& p_values, std::size_t arity,
                                               std::size_t samples, std::uint64_t seed,
                                               const NormedScanOptions& opt) {
  std::vector<NormedScanEntry> out;
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    const SpaceSpec spec = NormedPlane{p_values[i]};
    validate_space(spec);
    const std::uint64_t s = derive_seed(seed, i);
    NormedScanEntry entry{p_values[i], census(spec, arity, samples, s, opt.census), {}, {}};
    SearchOptions sopt{opt.search_budget, mix64(s), 0.1, opt.census.tol, opt.census.eps};
    entry.penta3 = find_type(spec, TypeTag::Penta3, sopt);
    entry.penta4 = find_type(spec, TypeTag::Penta4, sopt);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace alexprobe

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Optional argv[1]: directory that receives the JSON reports built
// along the way (each is also checked with validate_report here).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "alexprobe/classify.hpp"
#include "alexprobe/error.hpp"
#include "alexprobe/report.hpp"
#include "alexprobe/search.hpp"
#include "alexprobe/spaces.hpp"
#include "oracles.hpp"

using namespace alexprobe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Note {
 public:
  template <class T>
  Note& operator<<(const T& v) {
    ss_ << v;
    return *this;
  }
  std::string str() const { return ss_.str(); }

 private:
  std::ostringstream ss_;
};

fs::path g_report_dir;
int g_report_errors = 0;

void keep_report(const std::string& name, json payload, std::uint64_t seed) {
  ReportMeta meta;
  meta.command = {"acceptance", name};
  meta.seed = seed;
  const json report = make_report(meta, std::move(payload));
  for (const auto& e : validate_report(report)) {
    std::fprintf(stderr, "report %s: %s\n", name.c_str(), e.c_str());
    ++g_report_errors;
  }
  if (!g_report_dir.empty()) std::ofstream(g_report_dir / (name + ".json")) << report.dump(2) << "\n";
}

unsigned worker_count() { return std::max(2u, std::thread::hardware_concurrency()); }

GraphSpace random_tree(std::size_t vertices, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.1, 2.0);
  std::vector<WeightedEdge> edges;
  for (std::size_t v = 1; v < vertices; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    edges.push_back({parent(rng), v, w(rng)});
  }
  return make_graph(vertices, std::move(edges));
}

int certified_negatives(const DistanceMatrix& d) {
  return negative_index(spectrum(associated_form(d).m)).count;
}

// ---------------------------------------------------------------------------

Outcome inertia_bounds() {
  std::mt19937_64 rng(1001);
  std::mt19937_64 tree_rng(1002);
  std::vector<SpaceSpec> spaces = {SphereSpace{}, HyperbolicSpace{}, EuclideanSpace{3}, NormedPlane{1.0},
                                   NormedPlane{1.5}, NormedPlane{3.0}, NormedPlane{INFINITY}};
  for (int t = 0; t < 3; ++t) spaces.push_back(random_tree(12, tree_rng));
  std::size_t violations = 0, drawn = 0, max_seen[6] = {};
  for (std::size_t n : {4u, 5u}) {
    const int bound = static_cast<int>(n) - 3;
    for (int i = 0; i < 10000; ++i) {
      DistanceMatrix d = i % 2 == 0 ? require_metric(oracle::random_metric(n, rng, 1.0 + (i / 2) % 6))
                                    : sample_array(spaces[(i / 2) % spaces.size()], n, rng).metric;
      const int k = certified_negatives(d);
      max_seen[n] = std::max<std::size_t>(max_seen[n], static_cast<std::size_t>(k));
      if (k > bound) ++violations;
      ++drawn;
    }
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = (Note() << drawn << " arrays, violations " << violations << ", max negative index " << max_seen[4]
                     << " (n=4) / " << max_seen[5] << " (n=5)")
                 .str();
  return o;
}

Outcome euclidean_soundness() {
  Outcome o;
  Note note;
  for (std::size_t n : {4u, 5u}) {
    auto c = census(EuclideanSpace{3}, n, 10000, 2000 + n, {.threads = 0});
    const std::size_t psd = c.count(TypeTag::PSD), deg = c.degenerate();
    const bool ok = psd + deg == 10000 && deg < 100;
    o.pass &= ok;
    note << "n=" << n << ": PSD " << psd << ", Degenerate " << deg << "; ";
    keep_report("euclidean_" + std::to_string(n), to_json(c), c.seed);
  }
  o.detail = note.str();
  return o;
}

Outcome sphere_census() {
  auto q = census(SphereSpace{1.0}, 4, 100000, 3004, {.threads = 0});
  auto p = census(SphereSpace{1.0}, 5, 100000, 3005, {.threads = 0});
  keep_report("sphere_4", to_json(q), q.seed);
  keep_report("sphere_5", to_json(p), p.seed);
  Outcome o;
  o.pass = q.count(TypeTag::Quadra3) == 0 && q.count(TypeTag::Quadra4) >= 1 && p.count(TypeTag::Penta3) == 0 &&
           p.count(TypeTag::Penta4) == 0;
  o.detail = (Note() << "quadruples Quadra3 " << q.count(TypeTag::Quadra3) << ", Quadra4 "
                     << q.count(TypeTag::Quadra4) << "; quintuples Penta3 " << p.count(TypeTag::Penta3)
                     << ", Penta4 " << p.count(TypeTag::Penta4) << ", Penta5 " << p.count(TypeTag::Penta5))
                 .str();
  return o;
}

Outcome hyperbolic_census() {
  auto q = census(HyperbolicSpace{}, 4, 100000, 4004, {.threads = 0});
  auto p = census(HyperbolicSpace{}, 5, 100000, 4005, {.threads = 0});
  keep_report("hyperbolic_4", to_json(q), q.seed);
  keep_report("hyperbolic_5", to_json(p), p.seed);
  std::size_t two = 0;
  for (std::size_t k = 2; k < p.negative_index_counts.size(); ++k) two += p.negative_index_counts[k];
  Outcome o;
  o.pass = q.count(TypeTag::Quadra4) == 0 && q.count(TypeTag::Quadra3) >= 1 && two == 0;
  o.detail = (Note() << "quadruples Quadra4 " << q.count(TypeTag::Quadra4) << ", Quadra3 "
                     << q.count(TypeTag::Quadra3) << "; quintuples with two negatives " << two)
                 .str();
  return o;
}

Outcome tree_witness() {
  auto tripod = graph_metric(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
  const auto tag = classify_quadruple(tripod).type.tag;
  std::mt19937_64 rng(5005);
  std::size_t q4 = 0, q3 = 0, total = 0;
  for (int t = 0; t < 10; ++t) {
    auto tree = random_tree(8 + 2 * t, rng);
    auto c = census(tree, 4, 100, derive_seed(5006, t));
    q4 += c.count(TypeTag::Quadra4);
    q3 += c.count(TypeTag::Quadra3);
    total += c.samples;
  }
  Outcome o;
  o.pass = tag == TypeTag::Quadra3 && q4 == 0 && total == 1000;
  o.detail = (Note() << "tripod " << to_string(tag) << "; " << total << " tree quadruples: Quadra4 " << q4
                     << ", Quadra3 " << q3)
                 .str();
  return o;
}

Outcome penta5_existence() {
  auto r = find_type(SphereSpace{1.0}, TypeTag::Penta5, {.budget = 10000, .seed = 6006});
  keep_report("search_sphere_penta5", to_json(r, SphereSpace{1.0}), 6006);
  const bool recheck = r.found && r.array && classify(*r.array).type.tag == TypeTag::Penta5;

  auto gc = require_metric(oracle::great_circle(5));
  const auto tag = classify_quintuple(gc).type.tag;
  const auto f = oracle::form(gc, 4);
  const bool two_neg = oracle::leading_minor(f, 4) > 0 && oracle::leading_minor(f, 3) < 0 && oracle::trace(f) > 0;
  const int hull = oracle::projected_hull_count(gc, 4);

  Outcome o;
  o.pass = r.found && recheck && tag == TypeTag::Penta5 && two_neg && hull == 5;
  o.detail = (Note() << "search " << (r.found ? "found" : "not found") << " after " << r.evaluations
                     << " evaluations; great-circle quintuple " << to_string(tag) << ", elimination two negatives "
                     << (two_neg ? "yes" : "no") << ", oracle hull " << hull)
                 .str();
  return o;
}

// Hull count read along an arbitrary basis of a negative subspace.
int hull_along(std::size_t n, const Matrix& basis) {
  Matrix q = basis;
  // Gram-Schmidt so project_simplex sees an orthonormal frame of the same span.
  for (std::size_t c = 0; c < q.cols(); ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      double dot = 0;
      for (std::size_t r = 0; r < q.rows(); ++r) dot += q(r, c) * q(r, p);
      for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) -= dot * q(r, p);
    }
    double nn = 0;
    for (std::size_t r = 0; r < q.rows(); ++r) nn += q(r, c) * q(r, c);
    nn = std::sqrt(nn);
    for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) /= nn;
  }
  const auto pts = project_simplex(n, q);
  const auto h = hull_count(pts);
  return h.degenerate() ? -1 : h.count;
}

struct InvarianceTally {
  std::size_t arrays = 0, checks = 0, mismatches = 0, degenerate = 0, frame_checks = 0;
  std::size_t alt_checks = 0, alt_mismatches = 0, alt5_checks = 0, alt5_mismatches = 0;
};

void invariance_one(const DistanceMatrix& d, std::mt19937_64& rng, InvarianceTally& t) {
  const std::size_t n = d.size();
  ++t.arrays;
  const auto ref = classify(d);
  if (ref.type.tag == TypeTag::Degenerate) {
    ++t.degenerate;
    return;
  }
  auto compare = [&](const Classification& c) {
    ++t.checks;
    if (c.type.tag == TypeTag::Degenerate) {
      ++t.degenerate;
      return;
    }
    if (c.type.tag != ref.type.tag) ++t.mismatches;
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  while (std::next_permutation(perm.begin(), perm.end())) compare(classify(d.select(perm)));
  for (std::size_t b = 0; b + 1 < n; ++b) compare(classify(d, {.base = b}));
  for (double lambda : {1e-3, 1e3}) compare(classify(scale(d, lambda)));

  const int k = tag_negatives(ref.type.tag);
  if (tag_hull(ref.type.tag) == 0) return;
  const auto form = associated_form(d);
  const auto& s = ref.spectrum;
  const Matrix neg = negative_subspace(s, k);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  std::normal_distribution<double> gauss;

  // Random rotation (or sign flip) inside the negative span.
  Matrix rot(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
  if (k == 1) {
    rot(0, 0) = -1.0;
  } else {
    const double a = ang(rng);
    rot(0, 0) = std::cos(a), rot(0, 1) = -std::sin(a), rot(1, 0) = std::sin(a), rot(1, 1) = std::cos(a);
  }
  ++t.frame_checks;
  ++t.checks;
  const int rotated = hull_along(n, neg * rot);
  if (rotated < 0)
    ++t.degenerate;
  else if (rotated != tag_hull(ref.type.tag))
    ++t.mismatches;

  // A different negative direction/plane: tilt the eigenvectors toward the
  // nonnegative eigenspace while the form stays negative definite on the span.
  const std::size_t dim = form.dim();
  Matrix alt = neg;
  double worst = 0.0;
  for (int c = 0; c < k; ++c) worst = std::max(worst, s.eigenvalues[c]);  // closest to zero
  for (int c = 0; c < k; ++c) {
    std::vector<double> coef(dim, 0.0);
    double q = 0.0;
    for (std::size_t e = k; e < dim; ++e) {
      coef[e] = gauss(rng);
      q += coef[e] * coef[e] * std::max(s.eigenvalues[e], 0.0);
    }
    const double budget = 0.4 * std::fabs(worst) / static_cast<double>(k);
    const double f = q > 0 ? std::sqrt(budget / q) * std::uniform_real_distribution<double>(0.2, 1.0)(rng) : 0.0;
    for (std::size_t e = k; e < dim; ++e)
      for (std::size_t r = 0; r < dim; ++r) alt(r, c) += f * coef[e] * s.eigenvectors(r, e);
  }
  const auto gram = spectrum(alt.transpose() * form.m * alt);
  if (gram.eigenvalues.back() >= 0.0) return;
  const int tilted = hull_along(n, alt);
  if (tilted < 0) return;
  if (k == 1) {
    ++t.alt_checks;
    if (tilted != tag_hull(ref.type.tag)) ++t.alt_mismatches;
  } else {
    ++t.alt5_checks;
    if (tilted != tag_hull(ref.type.tag)) ++t.alt5_mismatches;
  }
}

Outcome invariance_suite() {
  std::mt19937_64 tree_rng(7007);
  std::vector<std::pair<std::string, SpaceSpec>> spaces = {
      {"sphere", SphereSpace{}},         {"hyperbolic", HyperbolicSpace{}},   {"euclidean", EuclideanSpace{3}},
      {"normed p=1", NormedPlane{1.0}},  {"normed p=1.5", NormedPlane{1.5}},  {"normed p=3", NormedPlane{3.0}},
      {"normed p=inf", NormedPlane{INFINITY}}, {"tree", random_tree(14, tree_rng)}};
  InvarianceTally t;
  std::size_t idx = 0;
  for (const auto& [name, spec] : spaces) {
    std::mt19937_64 rng(derive_seed(7008, idx++));
    for (int i = 0; i < 500; ++i) invariance_one(sample_array(spec, 4, rng).metric, rng, t);
    for (int i = 0; i < 200; ++i) invariance_one(sample_array(spec, 5, rng).metric, rng, t);
  }
  Outcome o;
  o.pass = t.mismatches == 0 && t.alt_mismatches == 0;
  o.detail = (Note() << t.arrays << " arrays over " << spaces.size() << " spaces, " << t.checks
                     << " comparisons, mismatches " << t.mismatches << ", Degenerate " << t.degenerate
                     << "; alternative w (n=4): " << t.alt_mismatches << "/" << t.alt_checks
                     << " mismatches; alternative plane (n=5, recorded): " << t.alt5_mismatches << "/"
                     << t.alt5_checks)
                 .str();
  return o;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(8008);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::size_t sign_mismatch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 2;
    Matrix a(n, n);
    oracle::Mat m(n, oracle::Vec(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        a(i, j) = a(j, i) = u(rng);
        m[i][j] = m[j][i] = a(i, j);
      }
    const auto s = spectrum(a);
    const int neg = negative_index(s).count;
    int pos = 0;
    for (double v : s.eigenvalues) pos += v > s.band();
    oracle::Mat minus = m;
    for (auto& row : minus)
      for (auto& v : row) v = -v;
    if (neg != oracle::sturm_negative_count(m) || pos != oracle::sturm_negative_count(minus)) ++sign_mismatch;
  }

  std::size_t realize_fail = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 15, dim = 1 + trial % 5;
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
      for (double& x : p) x = u(rng) * (trial % 3 == 0 ? 100.0 : 1.0);
    RawMatrix raw(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s2 = 0;
        for (std::size_t k = 0; k < dim; ++k) s2 += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
        raw(i, j) = std::sqrt(s2);
      }
    const auto d = require_metric(raw);
    if (!is_euclidean(d)) {
      ++realize_fail;
      continue;
    }
    const auto q = realize_points(d);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s2 = 0;
        for (std::size_t k = 0; k < q[i].size(); ++k) s2 += (q[i][k] - q[j][k]) * (q[i][k] - q[j][k]);
        err = std::max(err, std::fabs(std::sqrt(s2) - d(i, j)) / d.max_distance());
      }
    worst = std::max(worst, err);
    if (err > 1e-7) ++realize_fail;
  }
  Outcome o;
  o.pass = sign_mismatch == 0 && realize_fail == 0;
  o.detail = (Note() << "Sturm sign mismatches " << sign_mismatch << "/100; realize failures " << realize_fail
                     << "/100, worst relative error " << worst)
                 .str();
  return o;
}

bool same_census(const Census& a, const Census& b) {
  if (a.counts != b.counts || a.degenerate_reasons != b.degenerate_reasons ||
      a.negative_index_counts != b.negative_index_counts || a.witnesses.size() != b.witnesses.size())
    return false;
  for (const auto& [tag, list] : a.witnesses) {
    const auto it = b.witnesses.find(tag);
    if (it == b.witnesses.end() || it->second.size() != list.size()) return false;
    for (std::size_t i = 0; i < list.size(); ++i)
      if (list[i].index != it->second[i].index || !(list[i].metric == it->second[i].metric) ||
          list[i].points != it->second[i].points)
        return false;
  }
  return true;
}

Outcome determinism() {
  const unsigned n = worker_count();
  std::size_t runs = 0, diffs = 0;
  const std::pair<SpaceSpec, std::size_t> cases[] = {
      {SphereSpace{}, 5}, {HyperbolicSpace{}, 4}, {NormedPlane{1.0}, 5}};
  std::uint64_t seed = 9009;
  for (const auto& [spec, arity] : cases) {
    auto base = census(spec, arity, 10000, seed, {.threads = 1});
    for (unsigned threads : {1u, n, n}) {
      ++runs;
      if (!same_census(base, census(spec, arity, 10000, seed, {.threads = threads}))) ++diffs;
    }
    // Through the report as well: payloads are byte-identical.
    if (to_json(base).dump() != to_json(census(spec, arity, 10000, seed, {.threads = n})).dump()) ++diffs;
    ++seed;
  }
  const std::pair<SpaceSpec, TypeTag> searches[] = {
      {SphereSpace{}, TypeTag::Penta5}, {NormedPlane{1.0}, TypeTag::Quadra3}, {HyperbolicSpace{}, TypeTag::Quadra4}};
  for (const auto& [spec, target] : searches) {
    const SearchOptions opt{.budget = 3000, .seed = seed++};
    auto a = find_type(spec, target, opt), b = find_type(spec, target, opt);
    ++runs;
    if (to_json(a, spec).dump() != to_json(b, spec).dump()) ++diffs;
  }
  Outcome o;
  o.pass = diffs == 0;
  o.detail = (Note() << runs << " repeated runs at 1 and " << n << " threads, differences " << diffs).str();
  return o;
}

Outcome normed_scan() {
  const std::vector<double> ps = {1.0, 1.5, 2.0, 3.0, INFINITY};
  auto scan = normed_plane_scan(ps, 5, 10000, 10010, {.census = {.threads = 0}, .search_budget = 10000});
  std::size_t witnesses = 0, bad = 0;
  bool p2_psd = false;
  Note note;
  for (const auto& e : scan) {
    const NormedPlane plane{e.p};
    for (const auto& [tag, list] : e.census.witnesses)
      for (const auto& w : list) {
        ++witnesses;
        const auto fresh = make_sample(plane, w.points).metric;
        if (classify(fresh).type.tag != tag || classify(w.metric).type.tag != tag) ++bad;
      }
    for (const SearchResult* r : {&e.penta3, &e.penta4})
      if (r->found) {
        ++witnesses;
        if (!r->array || classify(*r->array).type.tag != r->target) ++bad;
      }
    if (e.p == 2.0) p2_psd = e.census.count(TypeTag::PSD) == e.census.samples;
    std::ostringstream p;
    p << e.p;
    keep_report("normed_p" + p.str(), to_json(e.census), e.census.seed);
    note << "p=" << p.str() << " [PSD " << e.census.count(TypeTag::PSD) << ", 1neg "
         << e.census.count(TypeTag::OneNegative5) << ", P3 " << e.census.count(TypeTag::Penta3) << ", P4 "
         << e.census.count(TypeTag::Penta4) << ", P5 " << e.census.count(TypeTag::Penta5) << ", Deg "
         << e.census.degenerate() << "; search P3 " << (e.penta3.found ? "found" : "none") << ", P4 "
         << (e.penta4.found ? "found" : "none") << "] ";
  }
  Outcome o;
  o.pass = scan.size() == ps.size() && bad == 0 && p2_psd;
  o.detail = (Note() << note.str() << "| witnesses re-verified " << witnesses - bad << "/" << witnesses
                     << ", p=2 all PSD " << (p2_psd ? "yes" : "no"))
                 .str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    g_report_dir = argv[1];
    fs::create_directories(g_report_dir);
  }
  struct Criterion {
    const char* name;
    double limit_seconds;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 inertia bounds", 30, inertia_bounds},
      {"2 Euclidean soundness", 30, euclidean_soundness},
      {"3 sphere census", 180, sphere_census},
      {"4 hyperbolic census", 180, hyperbolic_census},
      {"5 tree witness", 0, tree_witness},
      {"6 Penta5 on the sphere", 0, penta5_existence},
      {"7 invariance suite", 0, invariance_suite},
      {"8 oracle equivalence", 0, oracle_equivalence},
      {"9 determinism", 0, determinism},
      {"10 normed plane scan", 300, normed_scan},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail += " [over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit]";
    }
    std::printf("%s  criterion %-24s %6.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  if (g_report_errors > 0) std::printf("FAIL  %d report schema error(s)\n", g_report_errors);
  return failed == 0 && g_report_errors == 0 ? 0 : 1;
}

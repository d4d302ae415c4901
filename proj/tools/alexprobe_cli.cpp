// alexprobe command-line driver. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 usage/I/O/parse failure, 2 invalid metric,
// 3 negative verdict (not embeddable, target not found within budget).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alexprobe/alexprobe.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalidMetric = 2;
constexpr int kExitNegative = 3;

constexpr const char* kValidTargets = "quadra3, quadra4, penta3, penta4, penta5";

struct Deleter {
  void operator()(alexprobe_matrix* p) const { alexprobe_matrix_free(p); }
  void operator()(alexprobe_metric* p) const { alexprobe_metric_free(p); }
  void operator()(alexprobe_space* p) const { alexprobe_space_free(p); }
  void operator()(alexprobe_census* p) const { alexprobe_census_free(p); }
  void operator()(alexprobe_search* p) const { alexprobe_search_free(p); }
  void operator()(char* p) const { alexprobe_string_free(p); }
};
template <class T>
using Handle = std::unique_ptr<T, Deleter>;

struct Options {
  double tol = 1e-9;
  double eps = 1e-9;
  double slack = 1e-9;
  bool json = false;
  std::string path;
  std::string space;
  std::string target;
  std::string out;
  std::string realize;
  std::size_t arity = 4;
  std::size_t samples = 1000;
  std::size_t budget = 10000;
  double step = 0.1;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

using Clock = std::chrono::steady_clock;

int report_error(const char* what) {
  std::cerr << "alexprobe: " << what << ": " << alexprobe_last_error() << "\n";
  return kExitFailure;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

unsigned resolve_threads(const Options& o) {
  if (o.threads) return *o.threads;
  if (const char* env = std::getenv("ALEXPROBE_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "alexprobe: ignoring ALEXPROBE_THREADS='" << env << "'\n";
    }
  }
  return 0;
}

// Wraps `payload` in the report envelope; empty string on failure.
std::string build_report(const std::vector<std::string>& argv, const Options& o,
                         std::optional<std::uint64_t> seed, Clock::time_point start,
                         const char* payload) {
  std::vector<const char*> args;
  for (const auto& a : argv) args.push_back(a.c_str());
  alexprobe_report_meta meta{};
  meta.argv = args.data();
  meta.argc = args.size();
  meta.has_seed = seed.has_value();
  meta.seed = seed.value_or(0);
  meta.tol = o.tol;
  meta.eps = o.eps;
  meta.slack = o.slack;
  meta.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  char* raw = nullptr;
  if (alexprobe_report_build(&meta, payload, &raw) != ALEXPROBE_OK) {
    report_error("building report");
    return {};
  }
  Handle<char> owned(raw);
  return raw;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return true;
  }
  std::ofstream out(path);
  if (!out || !(out << text << "\n")) {
    std::cerr << "alexprobe: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

// Loads and validates a matrix file. Returns an exit code when the command
// should stop, nullopt on success.
std::optional<int> load_metric(const std::vector<std::string>& argv, const Options& o,
                               Clock::time_point start, Handle<alexprobe_metric>& metric) {
  alexprobe_matrix* raw = nullptr;
  if (alexprobe_matrix_load(o.path.c_str(), &raw) != ALEXPROBE_OK) return report_error("reading matrix");
  Handle<alexprobe_matrix> matrix(raw);

  alexprobe_metric* d = nullptr;
  std::vector<alexprobe_violation> violations(64);
  std::size_t count = 0;
  const auto status = alexprobe_metric_validate(matrix.get(), o.slack, &d, violations.data(),
                                                violations.size(), &count);
  if (status == ALEXPROBE_E_METRIC) {
    char* payload = nullptr;
    if (alexprobe_violations_json(matrix.get(), o.slack, &payload) != ALEXPROBE_OK) {
      return report_error("listing violations");
    }
    Handle<char> owned(payload);
    std::cerr << "invalid metric: " << count << " violation(s)\n";
    static const char* kinds[] = {"NegativeEntry", "Asymmetry", "NonzeroDiagonal", "TriangleViolation"};
    for (std::size_t i = 0; i < std::min(count, violations.size()); ++i) {
      const auto& v = violations[i];
      std::cerr << "  " << kinds[v.kind] << " (" << v.indices[0] << "," << v.indices[1] << ")";
      if (v.index_count == 3) std::cerr << " via " << v.indices[2];
      std::cerr << " magnitude " << v.magnitude << "\n";
    }
    if (o.json) write_output("", build_report(argv, o, std::nullopt, start, payload));
    return kExitInvalidMetric;
  }
  if (status != ALEXPROBE_OK) return report_error("validating matrix");
  metric.reset(d);
  return std::nullopt;
}

int cmd_classify(const std::vector<std::string>& argv, const Options& o) {
  const auto start = Clock::now();
  Handle<alexprobe_metric> metric;
  if (auto stop = load_metric(argv, o, start, metric)) return *stop;

  const std::size_t n = alexprobe_metric_size(metric.get());
  if (n != 3 && n != 4 && n != 5) {
    std::cerr << "alexprobe: unsupported arity for classification; use embed-check\n";
    return kExitFailure;
  }
  char* payload = nullptr;
  if (alexprobe_classify_json(metric.get(), o.tol, o.eps, &payload) != ALEXPROBE_OK) {
    return report_error("classifying");
  }
  Handle<char> owned(payload);

  std::ostringstream summary;
  if (n == 3) {
    int embeddable = 0;
    double eig[ALEXPROBE_MAX_EIGEN];
    std::size_t count = 0;
    alexprobe_embed_check(metric.get(), o.tol, &embeddable, eig, &count);
    summary << (embeddable ? "PSD" : "Degenerate(MarginalEigenvalue)") << "\n";
    summary << "eigenvalues:";
    for (std::size_t i = 0; i < count; ++i) summary << " " << eig[i];
    summary << "\n";
  } else {
    alexprobe_classification c{};
    if (alexprobe_classify(metric.get(), o.tol, o.eps, &c) != ALEXPROBE_OK) return report_error("classifying");
    summary << alexprobe_tag_name(c.tag);
    if (c.tag == ALEXPROBE_DEGENERATE) summary << "(" << alexprobe_reason_name(c.reason) << ")";
    summary << "\neigenvalues:";
    for (std::size_t i = 0; i < c.eigen_count; ++i) summary << " " << c.eigenvalues[i];
    summary << "\n";
    if (c.hull_count > 0) {
      summary << "hull order:";
      for (int i = 0; i < c.hull_count; ++i) summary << " " << c.hull_order[i];
      summary << "\n";
    }
  }
  if (o.json) {
    std::cerr << summary.str();
    const auto report = build_report(argv, o, std::nullopt, start, payload);
    if (report.empty() || !write_output("", report)) return kExitFailure;
  } else {
    std::cout << summary.str();
  }
  return kExitOk;
}

int cmd_embed_check(const std::vector<std::string>& argv, const Options& o) {
  const auto start = Clock::now();
  Handle<alexprobe_metric> metric;
  if (auto stop = load_metric(argv, o, start, metric)) return *stop;

  const std::size_t n = alexprobe_metric_size(metric.get());
  int embeddable = 0;
  double eig[ALEXPROBE_MAX_EIGEN];
  std::size_t count = 0;
  if (alexprobe_embed_check(metric.get(), o.tol, &embeddable, eig, &count) != ALEXPROBE_OK) {
    return report_error("checking embeddability");
  }

  std::ostringstream summary;
  summary << (embeddable ? "embeddable" : "not embeddable") << "\neigenvalues:";
  for (std::size_t i = 0; i < count; ++i) summary << " " << eig[i];
  summary << "\n";
  if (!embeddable) summary << "most negative eigenvalue: " << eig[0] << "\n";

  if (embeddable && !o.realize.empty()) {
    std::vector<double> coords(n * (n - 1));
    if (alexprobe_realize(metric.get(), o.tol, coords.data(), coords.size()) != ALEXPROBE_OK) {
      return report_error("realizing points");
    }
    std::ofstream out(o.realize);
    out.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k + 1 < n; ++k) out << (k ? " " : "") << coords[i * (n - 1) + k];
      out << "\n";
    }
    if (!out) {
      std::cerr << "alexprobe: cannot write '" << o.realize << "'\n";
      return kExitFailure;
    }
    summary << "coordinates written to " << o.realize << "\n";
  }

  if (o.json) {
    char* payload = nullptr;
    if (alexprobe_embed_check_json(metric.get(), o.tol, !o.realize.empty(), &payload) != ALEXPROBE_OK) {
      return report_error("building payload");
    }
    Handle<char> owned(payload);
    std::cerr << summary.str();
    const auto report = build_report(argv, o, std::nullopt, start, payload);
    if (report.empty() || !write_output("", report)) return kExitFailure;
  } else {
    std::cout << summary.str();
  }
  return embeddable ? kExitOk : kExitNegative;
}

std::optional<Handle<alexprobe_space>> load_space(const std::string& text) {
  alexprobe_space* raw = nullptr;
  std::error_code ec;
  const bool is_file = std::filesystem::is_regular_file(text, ec);
  const auto status = is_file ? alexprobe_space_load(text.c_str(), &raw) : alexprobe_space_parse(text.c_str(), &raw);
  if (status != ALEXPROBE_OK) {
    std::cerr << "alexprobe: bad space specification: " << alexprobe_last_error() << "\n";
    return std::nullopt;
  }
  return Handle<alexprobe_space>(raw);
}

int cmd_scan(const std::vector<std::string>& argv, const Options& o) {
  const auto start = Clock::now();
  auto space = load_space(o.space);
  if (!space) return kExitFailure;
  const std::uint64_t seed = resolve_seed(o);

  alexprobe_census* raw = nullptr;
  if (alexprobe_census_run(space->get(), o.arity, o.samples, seed, o.tol, o.eps, resolve_threads(o), &raw) !=
      ALEXPROBE_OK) {
    return report_error("running census");
  }
  Handle<alexprobe_census> census(raw);

  std::cerr << "census of " << o.samples << " " << o.arity << "-point arrays, seed " << seed << "\n";
  for (int t = ALEXPROBE_PSD; t < ALEXPROBE_DEGENERATE; ++t) {
    const auto tag = static_cast<alexprobe_tag>(t);
    const bool quadra = tag == ALEXPROBE_QUADRA3 || tag == ALEXPROBE_QUADRA4;
    if ((o.arity == 4 && !quadra && tag != ALEXPROBE_PSD) || (o.arity == 5 && quadra)) continue;
    std::cerr << "  " << alexprobe_tag_name(tag) << ": " << alexprobe_census_count(census.get(), tag) << "\n";
  }
  std::cerr << "  Degenerate: " << alexprobe_census_degenerate(census.get(), ALEXPROBE_REASON_NONE) << "\n";

  char* payload = nullptr;
  if (alexprobe_census_json(census.get(), &payload) != ALEXPROBE_OK) return report_error("serializing census");
  Handle<char> owned(payload);
  const auto report = build_report(argv, o, seed, start, payload);
  if (report.empty() || !write_output(o.out, report)) return kExitFailure;
  return kExitOk;
}

int cmd_search(const std::vector<std::string>& argv, const Options& o) {
  const auto start = Clock::now();
  alexprobe_tag target{};
  const std::string t = o.target;
  if (alexprobe_tag_parse(t.c_str(), &target) != ALEXPROBE_OK || target == ALEXPROBE_PSD ||
      target == ALEXPROBE_DEGENERATE || target == ALEXPROBE_ONE_NEGATIVE5) {
    std::cerr << "alexprobe: unknown target '" << t << "'; valid targets: " << kValidTargets << "\n";
    return kExitFailure;
  }
  auto space = load_space(o.space);
  if (!space) return kExitFailure;
  const std::uint64_t seed = resolve_seed(o);

  alexprobe_search* raw = nullptr;
  if (alexprobe_search_run(space->get(), target, o.budget, seed, o.step, o.tol, o.eps, &raw) != ALEXPROBE_OK) {
    return report_error("searching");
  }
  Handle<alexprobe_search> result(raw);
  const bool found = alexprobe_search_found(result.get()) != 0;
  std::cerr << alexprobe_tag_name(target) << ": "
            << (found ? "found" : "not found within budget of " + std::to_string(o.budget) + " evaluations")
            << " after " << alexprobe_search_evaluations(result.get()) << " evaluations, seed " << seed << "\n";

  char* payload = nullptr;
  if (alexprobe_search_json(result.get(), &payload) != ALEXPROBE_OK) return report_error("serializing result");
  Handle<char> owned(payload);
  const auto report = build_report(argv, o, seed, start, payload);
  if (report.empty() || !write_output(o.out, report)) return kExitFailure;
  return found ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  Options o;

  CLI::App app{"Classify 4- and 5-point metric arrays by the inertia and projection type of their "
               "associated quadratic form"};
  app.set_version_flag("--version", std::string(alexprobe_version()));
  app.require_subcommand(1);

  auto add_tolerances = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "relative spectral tolerance")->capture_default_str();
    sub->add_option("--eps", o.eps, "relative hull predicate tolerance")->capture_default_str();
  };

  auto* classify = app.add_subcommand("classify", "classify a 3-, 4- or 5-point distance matrix");
  classify->add_option("path", o.path, "distance matrix file")->required();
  add_tolerances(classify);
  classify->add_option("--slack", o.slack, "relative triangle-inequality slack")->capture_default_str();
  classify->add_flag("--json", o.json, "write a JSON report to stdout");

  auto* scan = app.add_subcommand("scan", "run a type census over a model space");
  scan->add_option("--space", o.space, "inline spec (\"sphere r=1\") or SpaceSpec document file")->required();
  scan->add_option("--arity", o.arity, "points per array")->check(CLI::IsMember({4, 5}))->capture_default_str();
  scan->add_option("--samples", o.samples, "arrays to classify")->check(CLI::PositiveNumber)->capture_default_str();
  scan->add_option("--seed", o.seed, "64-bit seed (random when omitted; always echoed)");
  scan->add_option("--out", o.out, "report file (stdout when omitted)");
  scan->add_option("--threads", o.threads, "worker threads (default ALEXPROBE_THREADS or all cores)");
  add_tolerances(scan);

  auto* search = app.add_subcommand("search", "search a model space for an array of a given type");
  search->add_option("--space", o.space, "inline spec or SpaceSpec document file")->required();
  search->add_option("--target", o.target, std::string("one of ") + kValidTargets)->required();
  search->add_option("--budget", o.budget, "classification budget")->check(CLI::PositiveNumber)->capture_default_str();
  search->add_option("--seed", o.seed, "64-bit seed (random when omitted; always echoed)");
  search->add_option("--step", o.step, "initial perturbation size")->capture_default_str();
  search->add_option("--out", o.out, "report file (stdout when omitted)");
  search->add_option("--threads", o.threads, "accepted for symmetry with scan; the search is sequential");
  add_tolerances(search);

  auto* embed = app.add_subcommand("embed-check", "decide Euclidean embeddability of an n-point array");
  embed->add_option("path", o.path, "distance matrix file")->required();
  embed->add_option("--realize", o.realize, "write realized coordinates, one point per line");
  embed->add_option("--tol", o.tol, "relative spectral tolerance")->capture_default_str();
  embed->add_option("--slack", o.slack, "relative triangle-inequality slack")->capture_default_str();
  embed->add_flag("--json", o.json, "write a JSON report to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFailure;
  }

  if (classify->parsed()) return cmd_classify(args, o);
  if (scan->parsed()) return cmd_scan(args, o);
  if (search->parsed()) return cmd_search(args, o);
  if (embed->parsed()) return cmd_embed_check(args, o);
  return kExitFailure;
}

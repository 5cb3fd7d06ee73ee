#include "papseries/cli/cli.hpp"

#include "papseries/analysis/diffapprox.hpp"
#include "papseries/analysis/stieltjes.hpp"
#include "papseries/cli/pipeline.hpp"
#include "papseries/dyck/dyck.hpp"
#include "papseries/perm/enumerate.hpp"
#include "papseries/series/dataset.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <algorithm>
#include <sstream>

namespace papseries {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceCap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("invalid " + what + ": " + s);
}

// "1/2", "3" or a decimal such as "0.25", exactly.
BigRational parse_rational(const std::string& s) {
  BigRational q;
  const auto dot = s.find('.');
  try {
    if (dot == std::string::npos) {
      q = BigRational(s);
    } else {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      BigInt den(1);
      for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
      q = BigRational(BigInt(digits), den);
    }
  } catch (const std::exception&) {
    throw UsageError("invalid rational: " + s);
  }
  q.canonicalize();
  return q;
}

std::size_t term_count(const std::vector<std::string>& parts, std::size_t at, std::size_t fallback) {
  if (parts.size() <= at) return fallback;
  const long n = parse_long(parts[at], "term count");
  if (n < 1) throw UsageError("term count must be positive");
  return static_cast<std::size_t>(n);
}

SeriesFormat series_format(const std::string& f) {
  if (f == "json") return SeriesFormat::Json;
  if (f == "csv") return SeriesFormat::Csv;
  return SeriesFormat::BFile;
}

struct Globals {
  unsigned digits = kDefaultDigits;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::string format = "text";
  Precision precision() const { return Precision{digits}; }
};

ExactSeries exact_or_usage(const SeriesRef& ref, const std::string& command) {
  if (const auto* s = std::get_if<ExactSeries>(&ref)) return *s;
  throw UsageError(command + " needs an integer series");
}

ExactSeries with_terms(ExactSeries s, std::size_t terms) {
  if (terms == 0) return s;
  if (terms > s.coeffs.size()) {
    throw UsageError(s.name + " has " + std::to_string(s.coeffs.size()) + " terms, " + std::to_string(terms) +
                     " requested");
  }
  return s.prefix(terms);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string safe_name(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s;
}

void write_plots(const AnalysisReport& rep, const std::string& dir) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  for (const auto& p : rep.plots) {
    write_file(std::filesystem::path(dir) / (safe_name(rep.series) + "_" + p.name + ".dat"), plot_columns(p));
  }
}

int cmd_enumerate(const Globals& g, const std::vector<std::string>& patterns, int max_n, std::optional<long> max_nodes,
                  std::optional<double> max_seconds, std::ostream& out) {
  std::vector<Permutation> perms;
  for (const auto& p : patterns)
    for (const auto& one : split(p, ',')) perms.push_back(Permutation::parse(one));
  EnumerationLimits limits;
  if (max_nodes) limits.max_nodes = static_cast<std::uint64_t>(*max_nodes);
  limits.max_seconds = max_seconds;
  limits.threads = g.threads;
  const CountVector cv = count_avoiders(PatternSet(std::move(perms)), max_n, limits);
  if (g.format == "json") {
    nlohmann::ordered_json j;
    j["patterns"] = cv.id;
    j["requested_n"] = cv.requested_n;
    j["last_complete_n"] = cv.last_complete_n;
    auto& c = j["counts"] = nlohmann::json::array();
    for (const auto& v : cv.counts) c.push_back(v.get_str());
    out << j.dump(2) << '\n';
  } else {
    if (g.format == "csv") out << "n,count\n";
    const char sep = g.format == "csv" ? ',' : ' ';
    for (std::size_t n = 0; n < cv.counts.size(); ++n) out << n << sep << cv.counts[n] << '\n';
  }
  if (!cv.complete()) {
    throw ResourceCap("enumeration stopped at n = " + std::to_string(cv.last_complete_n) + " of " +
                      std::to_string(cv.requested_n));
  }
  return kExitOk;
}

int cmd_classify(const Globals& g, int length, int max_n, std::ostream& out) {
  const auto classes = classify_wilf(length, max_n, g.threads);
  if (g.format == "json") {
    nlohmann::ordered_json j = nlohmann::json::array();
    for (const auto& c : classes) {
      nlohmann::ordered_json e;
      e["representative"] = c.patterns.front().to_string();
      auto& m = e["patterns"] = nlohmann::json::array();
      for (const auto& p : c.patterns) m.push_back(p.to_string());
      auto& k = e["counts"] = nlohmann::json::array();
      for (const auto& v : c.counts) k.push_back(v.get_str());
      j.push_back(e);
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  if (g.format == "csv") out << "class,size,patterns,s_max_n\n";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    std::string members;
    for (const auto& p : c.patterns) members += (members.empty() ? "" : " ") + p.to_string();
    if (g.format == "csv") {
      out << i + 1 << ',' << c.patterns.size() << ',' << members << ',' << c.counts.back() << '\n';
    } else {
      out << "class " << i + 1 << " (" << c.patterns.size() << "): " << members << "  s_" << max_n << " = "
          << c.counts.back() << '\n';
    }
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string series;
  std::string mode = "powerlaw";
  std::string sigma;
  std::string mu;
  std::string g;
  std::size_t terms = 0;
  std::size_t extend = 0;
  std::vector<int> orders{3};
  double tolerance = 1e-6;
  bool no_bounds = false;
  std::string plots;
};

int cmd_analyze(const Globals& gl, const AnalyzeArgs& a, std::ostream& out) {
  const Precision P = gl.precision();
  AnalysisOptions o;
  o.precision = P;
  o.threads = gl.threads;
  o.extend = a.extend;
  o.orders = a.orders;
  o.reliable_tolerance = a.tolerance;
  o.bounds = !a.no_bounds;
  if (!a.mu.empty()) o.mu = HPFloat(parse_rational(a.mu), P);
  if (!a.g.empty()) o.g = HPFloat(parse_rational(a.g), P);
  const SeriesRef ref = resolve_series(a.series, gl.seed);

  AnalysisReport rep;
  if (a.mode == "powerlaw") {
    rep = analyze_powerlaw(with_terms(exact_or_usage(ref, "powerlaw analysis"), a.terms), o);
  } else if (a.mode == "stretched") {
    if (a.sigma.empty()) throw UsageError("stretched mode needs --sigma");
    const BigRational sigma = parse_rational(a.sigma);
    if (const auto* rs = std::get_if<RationalSeries>(&ref)) {
      if (a.extend > 0) throw UsageError("weighted series cannot be extended");
      RationalSeries s = *rs;
      if (a.terms > 0 && a.terms < s.coeffs.size()) s.coeffs.resize(a.terms);
      rep = analyze_stretched(s, sigma, o);
    } else {
      rep = analyze_stretched(with_terms(std::get<ExactSeries>(ref), a.terms), sigma, o);
    }
  } else {
    throw UsageError("unknown mode " + a.mode);
  }
  write_plots(rep, a.plots);
  if (gl.format == "json") {
    out << rep.to_json() << '\n';
  } else if (gl.format == "csv") {
    out << rep.to_csv();
  } else {
    out << rep.to_text();
  }
  return kExitOk;
}

int cmd_bounds(const Globals& gl, const std::string& series, std::size_t terms, std::optional<double> theta,
               std::ostream& out) {
  const ExactSeries s = with_terms(exact_or_usage(resolve_series(series, gl.seed), "bounds"), terms);
  BoundReport rep = stieltjes_bounds(s, gl.precision());
  if (theta) extrapolate_bounds(rep, bound_beta(*theta));
  if (gl.format == "json") {
    out << rep.to_json() << '\n';
  } else if (gl.format == "csv") {
    out << "n,b_n\n";
    for (const auto& [n, b] : rep.hhr_bounds) out << n << ',' << b.to_string(15) << '\n';
  } else {
    out << rep.source << '\n';
    out << "log-convex bound: " << rep.logconvex_bound.to_string(10) << '\n';
    out << "Stieltjes bound:  " << rep.max_bound.to_string(10) << (rep.conjectural ? " (conjectural)" : " (proven)")
        << '\n';
    if (rep.extrapolated) {
      out << "extrapolated:     " << rep.extrapolated->first.to_string(10) << " (beta = " << rep.extrapolated->second
          << ")\n";
    }
  }
  return kExitOk;
}

struct ExtendArgs {
  std::string series;
  std::size_t count = 0;
  std::size_t terms = 0;
  std::vector<int> orders{3};
  int l_min = -1;
  int l_max = 2;
  std::string report;
};

int cmd_extend(const Globals& gl, const ExtendArgs& a, std::ostream& out) {
  const ExactSeries s = with_terms(exact_or_usage(resolve_series(a.series, gl.seed), "extend"), a.terms);
  EnsembleOptions eo;
  eo.precision = gl.precision();
  eo.threads = gl.threads;
  const auto grid = default_grid(s.coeffs.size(), a.orders, a.l_min, a.l_max);
  if (grid.empty()) throw UsageError("no approximant fits in " + std::to_string(s.coeffs.size()) + " terms");
  const PredictionEnsemble ens = extend_series(s, a.count, grid, eo);
  if (!a.report.empty()) write_file(a.report, ens.to_json() + "\n");
  const ExactSeries ext = ens.apply(s);
  if (gl.format == "text") {
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) out << s.offset + static_cast<long>(i) << ' ' << s.coeffs[i] << '\n';
    for (std::size_t i = 0; i < ens.ratios.size(); ++i) {
      out << ens.first_index + static_cast<long>(i) << ' ' << ens.coefficients[i].value.to_string(20) << " +- "
          << ens.coefficients[i].uncertainty.to_string(2) << "  ratio " << ens.ratios[i].value.to_string(15) << " +- "
          << ens.ratios[i].uncertainty.to_string(2) << '\n';
    }
  } else {
    out << export_series(ext, series_format(gl.format));
  }
  return kExitOk;
}

}  // namespace

SeriesRef resolve_series(const std::string& ref, std::uint64_t seed) {
  const auto parts = split(ref, ':');
  const std::string head = parts.empty() ? "" : parts[0];
  if (head == "catalan") {
    ExactSeries s;
    s.name = "catalan";
    const std::size_t n = term_count(parts, 1, 30);
    for (unsigned long k = 0; k < n; ++k) {
      BigInt b;
      mpz_bin_uiui(b.get_mpz_t(), 2 * k, k);
      s.coeffs.push_back(b / (k + 1));
    }
    return s;
  }
  if (head == "geometric") {
    if (parts.size() < 2) throw UsageError("geometric needs a ratio, e.g. geometric:4");
    const long q = parse_long(parts[1], "ratio");
    ExactSeries s;
    s.name = "geometric(" + parts[1] + ")";
    BigInt c(1);
    for (std::size_t k = 0, n = term_count(parts, 2, 30); k < n; ++k, c *= q) s.coeffs.push_back(c);
    return s;
  }
  if (head == "random") {
    // Moments of a random positive measure on four distinct integer points, so
    // the S-fraction has exactly seven positive coefficients.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> w(1, 9);
    std::vector<int> nodes(12);
    std::iota(nodes.begin(), nodes.end(), 1);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<std::pair<int, int>> atoms;
    for (int i = 0; i < 4; ++i) atoms.emplace_back(w(rng), nodes[i]);
    ExactSeries s;
    s.name = "random(seed=" + std::to_string(seed) + ")";
    for (std::size_t k = 0, n = term_count(parts, 1, 30); k < n; ++k) {
      BigInt c(0);
      for (const auto& [wi, xi] : atoms) {
        BigInt p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(xi), k);
        c += wi * p;
      }
      s.coeffs.push_back(c);
    }
    return s;
  }
  if (head == "dyck") {
    if (parts.size() < 2) throw UsageError("dyck needs a height weight, e.g. dyck:1/2");
    const BigRational y = parse_rational(parts[1]);
    if (sgn(y) <= 0 || y >= 1) throw UsageError("dyck weight must lie in (0, 1)");
    return dyck_series(y, static_cast<int>(term_count(parts, 2, 401)) - 1);
  }
  if (std::filesystem::exists(ref)) {
    if (ref.size() > 5 && ref.substr(ref.size() - 5) == ".json") {
      std::ifstream in(ref);
      std::stringstream buf;
      buf << in.rdbuf();
      return ingest_json(buf.str());
    }
    return ingest_bfile_path(ref);
  }
  try {
    return dataset_series(ref);
  } catch (const std::exception&) {
    throw UsageError("unknown series " + ref + " (dataset key, file path, catalan, geometric:q, random, dyck:y)");
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counting and asymptotic analysis of pattern-avoiding permutations"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  if (const char* env = std::getenv("PAPSERIES_PRECISION")) {
    try {
      g.digits = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      err << "ignoring PAPSERIES_PRECISION=" << env << "\n";
    }
  }
  app.add_option("--precision", g.digits, "Working precision in decimal digits (default from PAPSERIES_PRECISION or 100)")
      ->check(CLI::Range(10u, 100000u));
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", g.seed, "Seed for randomized test data");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));

  std::vector<std::string> patterns;
  int max_n = 10;
  std::optional<long> max_nodes;
  std::optional<double> max_seconds;
  auto* en = app.add_subcommand("enumerate", "Count permutations avoiding a pattern set");
  en->add_option("--pattern", patterns, "Pattern, or comma separated set; repeatable")->required();
  en->add_option("--max-n", max_n, "Largest length")->required()->check(CLI::Range(0, 20));
  en->add_option("--max-nodes", max_nodes, "Stop after visiting this many permutations");
  en->add_option("--max-seconds", max_seconds, "Stop after this many seconds");

  int length = 5, cl_max_n = 9;
  auto* cl = app.add_subcommand("classify", "Group all patterns of a length into Wilf classes");
  cl->add_option("--length", length, "Pattern length")->required()->check(CLI::Range(1, 7));
  cl->add_option("--max-n", cl_max_n, "Largest length compared")->check(CLI::Range(1, 14));

  AnalyzeArgs an_args;
  auto* an = app.add_subcommand("analyze", "Ratio and fitting analysis of a series");
  an->add_option("series", an_args.series, "Dataset key, file, or generator")->required();
  an->add_option("--mode", an_args.mode, "powerlaw or stretched")->check(CLI::IsMember({"powerlaw", "stretched"}));
  an->add_option("--sigma", an_args.sigma, "Stretched exponent, e.g. 1/2");
  an->add_option("--mu", an_args.mu, "Growth constant taken as known");
  an->add_option("--g", an_args.g, "Exponent used in the amplitude fit");
  an->add_option("--terms", an_args.terms, "Use only the first N exact terms");
  an->add_option("--extend", an_args.extend, "Coefficients to predict with differential approximants first");
  an->add_option("--orders", an_args.orders, "Approximant orders for the extension")->delimiter(',');
  an->add_option("--tolerance", an_args.tolerance, "Relative ratio uncertainty kept in fits");
  an->add_flag("--no-bounds", an_args.no_bounds, "Skip the Stieltjes bound report");
  an->add_option("--plots", an_args.plots, "Directory for two-column plot files");

  std::string b_series;
  std::size_t b_terms = 0;
  std::optional<double> theta;
  auto* bo = app.add_subcommand("bounds", "Log-convex and Stieltjes lower bounds on the growth constant");
  bo->add_option("series", b_series, "Dataset key, file, or generator")->required();
  bo->add_option("--terms", b_terms, "Use only the first N exact terms");
  bo->add_option("--theta", theta, "Extrapolate bounds assuming this stretched exponent");

  ExtendArgs ex_args;
  auto* ex = app.add_subcommand("extend", "Predict further coefficients with differential approximants");
  ex->add_option("series", ex_args.series, "Dataset key, file, or generator")->required();
  ex->add_option("--count", ex_args.count, "Coefficients to predict")->required()->check(CLI::Range(1, 100000));
  ex->add_option("--terms", ex_args.terms, "Use only the first N exact terms");
  ex->add_option("--orders", ex_args.orders, "Approximant orders")->delimiter(',');
  ex->add_option("--l-min", ex_args.l_min, "Smallest inhomogeneous degree (-1 = homogeneous)");
  ex->add_option("--l-max", ex_args.l_max, "Largest inhomogeneous degree");
  ex->add_option("--report", ex_args.report, "Write the ensemble report (JSON) here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::stringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*en) return cmd_enumerate(g, patterns, max_n, max_nodes, max_seconds, out);
    if (*cl) return cmd_classify(g, length, cl_max_n, out);
    if (*an) return cmd_analyze(g, an_args, out);
    if (*bo) return cmd_bounds(g, b_series, b_terms, theta, out);
    if (*ex) return cmd_extend(g, ex_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceCap& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}

}  // namespace papseries

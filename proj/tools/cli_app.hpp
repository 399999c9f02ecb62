#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hoqmc/hoqmc.hpp"

namespace hoqmc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRefusal = 2, kIo = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::string out;
  std::string format;
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

struct Source {
  std::string matrices_file;
  std::string points_file;
  std::size_t d = 0;
  std::size_t alpha = 1;
  std::size_t m = 0;

  bool inline_params() const { return d > 0; }
};

inline void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "write output to PATH instead of stdout");
  cmd->add_option("--format", c.format, "output format (default: json, csv for points and study)")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1U, 1024U));
  cmd->add_option("--seed", c.seed, "seed for random N in the study");
}

inline void add_generator(CLI::App* cmd, Source& s) {
  cmd->add_option("--matrices", s.matrices_file, "matrix JSON file");
  cmd->add_option("--d", s.d, "dimension")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  cmd->add_option("--alpha", s.alpha, "interlacing order")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  cmd->add_option("--m", s.m, "log2 of the number of points / matrix columns")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
}

inline GeneratingMatrixSet load_generator(const Source& s) {
  if (!s.matrices_file.empty() && s.inline_params()) throw UsageError("give either --matrices or --d/--alpha/--m");
  if (!s.matrices_file.empty()) return io::parse_matrices(io::read_file(s.matrices_file));
  if (!s.inline_params() || s.m == 0) throw UsageError("need --matrices FILE or --d, --m (and optionally --alpha)");
  if (s.alpha * s.m > kMaxPrecision) {
    throw RefusalError("alpha*m = " + std::to_string(s.alpha * s.m) + " digits exceed the 64-digit precision");
  }
  return build_interlaced(s.d, s.alpha, s.m);
}

inline unsigned checked_precision(const GeneratingMatrixSet& g) {
  if (g.rows() > kMaxPrecision) {
    throw RefusalError("matrices have " + std::to_string(g.rows()) + " rows; points keep at most 64 digits");
  }
  return static_cast<unsigned>(g.rows());
}

inline void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    io::write_file(c.out, text);
  }
}

inline std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

// ---- matrices ----

inline std::string cmd_matrices(const Source& s, const Common& c) {
  if (c.format != "json") throw UsageError("matrices: only --format json is supported");
  if (!s.inline_params() || s.m == 0) throw UsageError("matrices: need --d and --m");
  return dump(io::to_json(load_generator(s)));
}

// ---- points ----

inline std::string cmd_points(const Source& s, std::optional<std::uint64_t> n, std::optional<unsigned> precision,
                              const Common& c) {
  if (c.format != "csv") throw UsageError("points: only --format csv is supported");
  const auto g = load_generator(s);
  const unsigned w = precision.value_or(checked_precision(g));
  const std::uint64_t count = n.value_or(g.cols() >= 64 ? 0 : std::uint64_t{1} << g.cols());
  return io::points_csv(generate_points(g, count, w));
}

// ---- measure ----

struct MeasureArgs {
  std::string measure = "per-l2";
  std::string method = "kernel";
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> truncation;
  bool cross_check = false;
};

inline std::string report_csv(const std::vector<MeasureReport>& reps) {
  std::string s = "measure,method,value,squared,N,d,truncation,tail_bound,generator\n";
  for (const auto& r : reps) {
    s += std::string(to_string(r.measure)) + "," + std::string(to_string(r.method)) + "," + io::format_real(r.value) +
         "," + io::format_real(r.squared) + "," + std::to_string(r.n) + "," + std::to_string(r.d) + "," +
         (r.truncation ? std::to_string(*r.truncation) : "") + "," +
         (r.tail_bound ? io::format_real(*r.tail_bound) : "") + ",\"" + r.generator + "\"\n";
  }
  return s;
}

inline std::string cmd_measure(const Source& s, const MeasureArgs& a, const Common& c) {
  const Measure measure = a.measure == "per-l2" ? Measure::periodic_l2 : Measure::diaphony;
  std::vector<MeasureReport> reps;

  if (a.method == "walsh") {
    if (measure != Measure::periodic_l2) throw UsageError("measure: the walsh method computes per-l2 only");
    if (!s.points_file.empty()) throw UsageError("measure: the walsh method needs generating matrices, not points");
    const auto g = load_generator(s);
    std::size_t m = g.cols();
    if (a.n) {
      if (*a.n == 0 || std::popcount(*a.n) != 1) throw UsageError("measure: the walsh method needs N = 2^m");
      m = static_cast<std::size_t>(std::countr_zero(*a.n));
      if (m > g.cols()) throw DimensionError("measure: N exceeds 2^cols");
    }
    const auto net = g.left_upper(g.rows(), m);
    const auto cap = static_cast<unsigned>(a.truncation.value_or(std::min<std::uint64_t>(g.rows() + 4, 24 / g.dimension())));
    reps.push_back(walsh::walsh_series_l2(net, std::nullopt, cap));
  } else {
    PointSet p;
    if (!s.points_file.empty()) {
      if (!s.matrices_file.empty() || s.inline_params()) throw UsageError("measure: give points or a generator, not both");
      p = io::parse_points_csv(io::read_file(s.points_file));
      if (a.n) throw UsageError("measure: --n applies to generators only");
    } else {
      const auto g = load_generator(s);
      const std::uint64_t count = a.n.value_or(g.cols() >= 64 ? 0 : std::uint64_t{1} << g.cols());
      p = generate_points(g, count, checked_precision(g));
    }
    if (p.empty()) throw UsageError("measure: empty point set");
    const auto h = a.truncation.value_or(512);
    if (a.method == "kernel" || a.cross_check) reps.push_back(measure_kernel(measure, p, c.threads));
    if (a.method == "fourier" || a.cross_check) reps.push_back(fourier_truncated(p, WeightScheme::of(measure), h));
  }

  if (c.format == "csv") return report_csv(reps);
  if (reps.size() == 1) return dump(io::to_json(reps.front()));
  io::json j;
  j["reports"] = io::json::array();
  for (const auto& r : reps) j["reports"].push_back(io::to_json(r));
  j["gap"] = std::fabs(reps[0].squared - reps[1].squared);
  return dump(j);
}

// ---- tvalue ----

struct TvalueArgs {
  std::optional<std::size_t> order;
  std::optional<std::size_t> m_min;
  std::optional<std::size_t> m_max;
  std::uint64_t node_cap = 10'000'000;
  bool pad_rows = false;
};

inline std::string cmd_tvalue(const Source& s, const TvalueArgs& a, const Common& c) {
  const auto g = load_generator(s);
  const std::size_t alpha = a.order.value_or(g.alpha);
  const std::size_t hi = a.m_max.value_or(std::min(g.cols(), a.pad_rows ? g.cols() : g.rows() / alpha));
  const std::size_t lo = a.m_min.value_or(1);
  if (lo < 1 || lo > hi) throw UsageError("tvalue: need 1 <= m-min <= m-max");
  if (hi > g.cols()) throw DimensionError("tvalue: m-max exceeds the matrix columns");
  QualityOptions opt;
  opt.node_cap = a.node_cap;
  opt.pad_rows = a.pad_rows;
  std::vector<NetQualityReport> reps;
  for (std::size_t m = lo; m <= hi; ++m) reps.push_back(minimal_t(g, alpha, m, opt));
  if (c.format == "csv") {
    std::string out = "alpha,m,d,t,exhaustive,formula_t,witness\n";
    for (const auto& r : reps) {
      std::string w;
      for (const auto& x : r.witness) w += (w.empty() ? "" : " ") + std::to_string(x.j) + ":" + std::to_string(x.i);
      out += std::to_string(r.alpha) + "," + std::to_string(r.m) + "," + std::to_string(r.d) + "," +
             std::to_string(r.t) + "," + (r.exhaustive ? "true" : "false") + "," +
             (r.formula_t ? std::to_string(*r.formula_t) : "") + "," + w + "\n";
    }
    return out;
  }
  io::json j = io::json::array();
  for (const auto& r : reps) j.push_back(io::to_json(r));
  return dump(j);
}

// ---- study ----

struct StudyArgs {
  std::size_t d = 2;
  std::optional<std::size_t> alpha;
  std::size_t m_min = 6;
  std::size_t m_max = 13;
  bool non_powers = false;
  std::size_t random_count = 0;
  bool timing = false;
  bool self_test = false;
};

struct StudyRow {
  std::uint64_t n = 0;
  std::size_t d = 0;
  std::size_t alpha = 0;
  std::size_t s = 0;
  double l2 = 0.0;
  double diaphony = 0.0;
  double ratio = 0.0;
  double seconds = 0.0;
};

// N L2 / ((log N)^{(d-1)/2} sqrt(S(N))).
inline double normalized_ratio(std::uint64_t n, std::size_t d, double l2) {
  const auto nn = static_cast<double>(n);
  return nn * l2 / (std::pow(std::log(nn), (static_cast<double>(d) - 1.0) / 2.0) *
                    std::sqrt(static_cast<double>(sum_of_digits(n))));
}

inline std::size_t study_alpha(const StudyArgs& a) {
  const std::size_t feasible = kMaxPrecision / a.m_max;
  if (a.alpha) {
    if (*a.alpha * a.m_max > kMaxPrecision) {
      throw RefusalError("study: alpha*m_max = " + std::to_string(*a.alpha * a.m_max) +
                         " digits exceed the 64-digit precision; largest feasible alpha is " +
                         std::to_string(feasible));
    }
    return *a.alpha;
  }
  if (feasible == 0) throw RefusalError("study: m_max above 64 leaves no feasible alpha");
  return std::min<std::size_t>(5, feasible);
}

inline std::vector<std::uint64_t> study_sizes(const StudyArgs& a, std::uint64_t seed) {
  std::set<std::uint64_t> ns;
  for (std::size_t m = a.m_min; m <= a.m_max; ++m) {
    const std::uint64_t p = std::uint64_t{1} << m;
    ns.insert(p);
    if (a.non_powers) {
      if (p - 1 >= 2) ns.insert(p - 1);
      if (m >= 2) ns.insert(3 * (p >> 2));
    }
  }
  if (a.random_count > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> dist(std::max<std::uint64_t>(2, std::uint64_t{1} << a.m_min),
                                                      std::uint64_t{1} << a.m_max);
    for (std::size_t i = 0; i < a.random_count; ++i) ns.insert(dist(rng));
  }
  return {ns.begin(), ns.end()};
}

// Shift by 1/3 truncated to the point precision, added modulo 1 on numerators.
inline PointSet torus_shifted(const PointSet& p) {
  PointSet out(p.dimension(), p.precision(), p.generator());
  const std::uint64_t mask = low_mask(p.precision());
  const std::uint64_t shift = mask / 3;
  std::vector<std::uint64_t> x(p.dimension());
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = (p.numerator(n, j) + shift * (j + 1)) & mask;
    out.push_back(x);
  }
  return out;
}

struct StudyResult {
  std::size_t alpha = 0;
  std::vector<StudyRow> rows;
  std::vector<std::string> self_test_failures;
};

inline StudyResult run_study(const StudyArgs& a, const Common& c) {
  if (a.d < 1) throw UsageError("study: d must be positive");
  if (a.m_min < 1 || a.m_min > a.m_max) throw UsageError("study: need 1 <= m-min <= m-max");
  StudyResult res;
  res.alpha = study_alpha(a);
  const auto g = build_interlaced(a.d, res.alpha, a.m_max);
  const auto w = static_cast<unsigned>(g.rows());
  for (const auto n : study_sizes(a, c.seed)) {
    const auto start = std::chrono::steady_clock::now();
    const auto p = generate_points(g, n, w);
    const auto sums = pair_kernel_sums(p, c.threads);
    const double l2 = kernel_report(Measure::periodic_l2, p, sums.periodic_l2).value;
    const double dia = kernel_report(Measure::diaphony, p, sums.diaphony).value;
    const auto stop = std::chrono::steady_clock::now();
    res.rows.push_back({n, a.d, res.alpha, sum_of_digits(n), l2, dia, normalized_ratio(n, a.d, l2),
                        std::chrono::duration<double>(stop - start).count()});
    if (a.self_test) {
      auto close = [](double x, double y) { return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y)); };
      const std::string tag = "N=" + std::to_string(n) + ": ";
      if (a.d == 1 && !close(std::numbers::pi * std::numbers::sqrt2 * l2, dia)) {
        res.self_test_failures.push_back(tag + "diaphony is not pi*sqrt(2)*L2");
      }
      const auto q = torus_shifted(p);
      const auto shifted = pair_kernel_sums(q, c.threads);
      if (!close(kernel_report(Measure::periodic_l2, q, shifted.periodic_l2).value, l2) ||
          !close(kernel_report(Measure::diaphony, q, shifted.diaphony).value, dia)) {
        res.self_test_failures.push_back(tag + "measures change under a torus shift");
      }
    }
  }
  return res;
}

inline std::string format_study(const StudyArgs& a, const StudyResult& res, const Common& c) {
  if (c.format == "json") {
    io::json j;
    j["d"] = a.d;
    j["alpha"] = res.alpha;
    j["rows"] = io::json::array();
    for (const auto& r : res.rows) {
      io::json row;
      row["N"] = r.n;
      row["d"] = r.d;
      row["alpha"] = r.alpha;
      row["S"] = r.s;
      row["per_l2"] = r.l2;
      row["diaphony"] = r.diaphony;
      row["ratio"] = r.ratio;
      if (a.timing) row["seconds"] = r.seconds;
      j["rows"].push_back(row);
    }
    return dump(j);
  }
  std::string out = "# study d=" + std::to_string(a.d) + " alpha=" + std::to_string(res.alpha) +
                    " m=" + std::to_string(a.m_min) + ".." + std::to_string(a.m_max) + "\n";
  out += "N,d,alpha,S,per_l2,diaphony,ratio";
  out += a.timing ? ",seconds\n" : "\n";
  for (const auto& r : res.rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.d) + "," + std::to_string(r.alpha) + "," +
           std::to_string(r.s) + "," + io::format_real(r.l2) + "," + io::format_real(r.diaphony) + "," +
           io::format_real(r.ratio);
    out += a.timing ? "," + io::format_real(r.seconds) + "\n" : "\n";
  }
  return out;
}

// ---- entry point ----

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher-order digital sequences: construction, discrepancy and t-values", "hoqmc"};
  app.require_subcommand(1);

  Source src;
  Common common;
  std::optional<std::uint64_t> n_points;
  std::optional<unsigned> precision;
  MeasureArgs margs;
  TvalueArgs targs;
  StudyArgs sargs;

  auto* matrices = app.add_subcommand("matrices", "write generating matrices as JSON");
  add_generator(matrices, src);
  add_common(matrices, common);

  auto* points = app.add_subcommand("points", "write points as CSV");
  add_generator(points, src);
  add_common(points, common);
  points->add_option("--n", n_points, "number of points (default 2^cols)");
  points->add_option("--precision", precision, "binary digits per coordinate (default: matrix rows)");

  auto* measure = app.add_subcommand("measure", "periodic L2-discrepancy or diaphony");
  add_generator(measure, src);
  add_common(measure, common);
  measure->add_option("--points", src.points_file, "point CSV file");
  measure->add_option("--n", margs.n, "number of generated points (default 2^cols)");
  measure->add_option("--measure", margs.measure)->check(CLI::IsMember({"per-l2", "diaphony"}));
  measure->add_option("--method", margs.method)->check(CLI::IsMember({"kernel", "fourier", "walsh"}));
  measure->add_option("--truncation", margs.truncation, "Fourier H or Walsh cap level");
  measure->add_flag("--cross-check", margs.cross_check, "run kernel and fourier and report the gap");

  auto* tvalue = app.add_subcommand("tvalue", "verified minimal t per m");
  add_generator(tvalue, src);
  add_common(tvalue, common);
  tvalue->add_option("--order", targs.order, "order alpha to verify (default: the matrices' alpha)");
  tvalue->add_option("--m-min", targs.m_min);
  tvalue->add_option("--m-max", targs.m_max);
  tvalue->add_option("--node-cap", targs.node_cap, "search nodes before giving up");
  tvalue->add_flag("--pad-rows", targs.pad_rows, "treat missing rows as zero rows");

  auto* study = app.add_subcommand("study", "scaling of N*L2 along the interlaced sequence");
  add_common(study, common);
  study->add_option("--d", sargs.d)->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  study->add_option("--alpha", sargs.alpha, "interlacing order (default min(5, 64/m-max))");
  study->add_option("--m-min", sargs.m_min);
  study->add_option("--m-max", sargs.m_max);
  study->add_flag("--non-powers", sargs.non_powers, "add N = 2^m - 1 and 3*2^(m-2)");
  study->add_option("--random", sargs.random_count, "add this many random N drawn with --seed");
  study->add_flag("--timing", sargs.timing, "add a wall-time column");
  study->add_flag("--self-test", sargs.self_test, "check d=1 proportionality and shift invariance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "hoqmc: " << e.what() << "\n";
    return kUsage;
  }

  if (common.format.empty()) common.format = points->parsed() || study->parsed() ? "csv" : "json";

  try {
    std::string text;
    if (matrices->parsed()) {
      text = cmd_matrices(src, common);
    } else if (points->parsed()) {
      text = cmd_points(src, n_points, precision, common);
    } else if (measure->parsed()) {
      text = cmd_measure(src, margs, common);
    } else if (tvalue->parsed()) {
      text = cmd_tvalue(src, targs, common);
    } else if (study->parsed()) {
      const auto res = run_study(sargs, common);
      text = format_study(sargs, res, common);
      emit(common, text, out);
      if (!res.self_test_failures.empty()) {
        for (const auto& f : res.self_test_failures) err << "hoqmc: self-test: " << f << "\n";
        return kRefusal;
      }
      return kOk;
    }
    emit(common, text, out);
    return kOk;
  } catch (const UsageError& e) {
    err << "hoqmc: " << e.what() << "\n";
    return kUsage;
  } catch (const RefusalError& e) {
    err << "hoqmc: refused: " << e.what() << "\n";
    return kRefusal;
  } catch (const IoError& e) {
    err << "hoqmc: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    err << "hoqmc: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "hoqmc: " << e.what() << "\n";
    return kUsage;
  } catch (const std::bad_alloc&) {
    err << "hoqmc: refused: out of memory\n";
    return kRefusal;
  }
}

}  // namespace hoqmc::cli

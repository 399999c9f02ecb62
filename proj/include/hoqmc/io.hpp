#pragma once

// Text formats: generating matrices and reports as JSON, points as CSV.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "hoqmc/dyadic.hpp"
#include "hoqmc/error.hpp"
#include "hoqmc/generating_matrices.hpp"
#include "hoqmc/measures.hpp"
#include "hoqmc/quality.hpp"
#include "hoqmc/sequence.hpp"

namespace hoqmc::io {

using json = nlohmann::ordered_json;

// Shortest form is not wanted here: always 17 significant digits.
inline std::string format_real(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return {buf, r.ptr};
}

inline std::string format_hex(std::uint64_t numerator, unsigned precision) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, numerator, 16);
  std::string s = "0x";
  for (char* c = buf; c != r.ptr; ++c) s += static_cast<char>(*c >= 'a' ? *c - 'a' + 'A' : *c);
  return s + "/" + std::to_string(precision);
}

// "0xA/4" -> {10, 4}.
inline Dyadic parse_hex(std::string_view s) {
  const auto slash = s.find('/');
  if (s.size() < 4 || s.substr(0, 2) != "0x" || slash == std::string_view::npos) {
    throw FormatError("bad hex numerator '" + std::string(s) + "'");
  }
  std::uint64_t num = 0;
  unsigned prec = 0;
  const auto a = std::from_chars(s.data() + 2, s.data() + slash, num, 16);
  const auto b = std::from_chars(s.data() + slash + 1, s.data() + s.size(), prec, 10);
  if (a.ec != std::errc{} || a.ptr != s.data() + slash || b.ec != std::errc{} || b.ptr != s.data() + s.size()) {
    throw FormatError("bad hex numerator '" + std::string(s) + "'");
  }
  try {
    return Dyadic::make(num, prec);
  } catch (const Error& e) {
    throw FormatError("bad hex numerator '" + std::string(s) + "': " + e.what());
  }
}

// ---- generating matrices ----

inline json to_json(const GeneratingMatrixSet& g) {
  json j;
  j["dimension"] = g.dimension();
  j["alpha"] = g.alpha;
  j["t"] = g.t;
  j["rows"] = g.rows();
  j["cols"] = g.cols();
  j["matrices"] = json::array();
  for (const auto& m : g.matrices) j["matrices"].push_back(m.to_strings());
  j["polynomials"] = json::array();
  for (const auto& p : g.polynomials) j["polynomials"].push_back(p.mask());
  return j;
}

inline GeneratingMatrixSet matrices_from_json(const json& j) {
  try {
    GeneratingMatrixSet g;
    g.alpha = j.at("alpha").get<std::size_t>();
    g.t = j.at("t").get<std::size_t>();
    for (const auto& rows : j.at("matrices")) {
      const auto strings = rows.get<std::vector<std::string>>();
      g.matrices.push_back(gf2::BitMatrix::from_strings(strings));
    }
    if (j.contains("polynomials")) {
      for (const auto& p : j.at("polynomials")) g.polynomials.push_back(Poly2::from_mask(p.get<std::uint64_t>()));
    }
    g.validate();
    if (j.at("dimension").get<std::size_t>() != g.dimension() || j.at("rows").get<std::size_t>() != g.rows() ||
        j.at("cols").get<std::size_t>() != g.cols()) {
      throw FormatError("matrix JSON: dimension/rows/cols disagree with the matrices");
    }
    return g;
  } catch (const json::exception& e) {
    throw FormatError(std::string("matrix JSON: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("matrix JSON: ") + e.what());
  }
}

inline GeneratingMatrixSet parse_matrices(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("matrix JSON: ") + e.what());
  }
  return matrices_from_json(j);
}

// ---- reports ----

inline json to_json(const MeasureReport& r) {
  json j;
  j["measure"] = std::string(to_string(r.measure));
  j["method"] = std::string(to_string(r.method));
  j["value"] = r.value;
  j["squared"] = r.squared;
  j["N"] = r.n;
  j["d"] = r.d;
  j["truncation"] = r.truncation ? json(*r.truncation) : json(nullptr);
  if (r.tail_bound) j["tail_bound"] = *r.tail_bound;
  j["generator"] = r.generator;
  return j;
}

inline json to_json(const NetQualityReport& r) {
  json j;
  j["alpha"] = r.alpha;
  j["m"] = r.m;
  j["d"] = r.d;
  j["t"] = r.t;
  j["exhaustive"] = r.exhaustive;
  j["witness"] = json::array();
  for (const auto& w : r.witness) j["witness"].push_back({w.j, w.i});
  if (r.formula_t) j["formula_t"] = *r.formula_t;
  return j;
}

// ---- points ----

inline void write_points_csv(std::ostream& os, const PointSet& p) {
  os << "# generator: " << p.generator() << '\n';
  os << 'n';
  for (std::size_t j = 1; j <= p.dimension(); ++j) os << ",x" << j << "_hex,x" << j;
  os << '\n';
  for (std::size_t n = 0; n < p.size(); ++n) {
    os << n;
    for (std::size_t j = 0; j < p.dimension(); ++j) {
      os << ',' << format_hex(p.numerator(n, j), p.precision()) << ',' << format_real(p.value(n, j));
    }
    os << '\n';
  }
}

inline std::string points_csv(const PointSet& p) {
  std::ostringstream os;
  write_points_csv(os, p);
  return os.str();
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto c = line.find(',', start);
    out.push_back(line.substr(start, c == std::string_view::npos ? std::string_view::npos : c - start));
    if (c == std::string_view::npos) return out;
    start = c + 1;
  }
}

}  // namespace detail

// Reads the hex columns; decimal columns are ignored.
inline PointSet read_points_csv(std::istream& is) {
  std::string line;
  std::string generator;
  std::size_t d = 0;
  bool header = false;
  std::vector<std::vector<Dyadic>> rows;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view tag = "# generator: ";
      if (line.rfind(tag, 0) == 0) generator = line.substr(tag.size());
      continue;
    }
    const auto fields = detail::split_commas(line);
    if (!header) {
      if (fields.empty() || fields[0] != "n" || fields.size() < 3 || (fields.size() - 1) % 2 != 0) {
        throw FormatError("points CSV: bad header on line " + std::to_string(lineno));
      }
      d = (fields.size() - 1) / 2;
      header = true;
      continue;
    }
    if (fields.size() != 1 + 2 * d) throw FormatError("points CSV: wrong field count on line " + std::to_string(lineno));
    std::vector<Dyadic> x;
    for (std::size_t j = 0; j < d; ++j) x.push_back(parse_hex(fields[1 + 2 * j]));
    rows.push_back(std::move(x));
  }
  if (!header) throw FormatError("points CSV: missing header");
  unsigned w = 0;
  for (const auto& r : rows) {
    for (const auto& x : r) w = std::max(w, x.precision);
  }
  PointSet p(d, w, generator);
  std::vector<std::uint64_t> c(d);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) c[j] = align_numerator(r[j].numerator, r[j].precision, w);
    p.push_back(c);
  }
  return p;
}

inline PointSet parse_points_csv(const std::string& text) {
  std::istringstream is(text);
  return read_points_csv(is);
}

// ---- files ----

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.flush();
  if (!f) throw IoError("error writing '" + path + "'");
}

}  // namespace hoqmc::io

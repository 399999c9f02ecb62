#pragma once

// Order-alpha digital (t,m,d)-net property over Z2.
//
// For each coordinate j pick rows i_{j,1} > i_{j,2} > ... > i_{j,nu_j} of
// C_j. Whenever sum_j sum_{l <= min(nu_j, alpha)} i_{j,l} <= alpha m - t, the
// selected rows must be linearly independent. Only the top alpha indices of
// a coordinate cost anything, so once alpha indices are chosen every row
// below the last one comes for free; the search adds them all at once.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hoqmc/error.hpp"
#include "hoqmc/generating_matrices.hpp"
#include "hoqmc/gf2.hpp"

namespace hoqmc {

enum class Verdict { holds, fails, inconclusive };

constexpr const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

// Row i (1-based) of C_j (1-based).
struct RowChoice {
  std::size_t j = 0;
  std::size_t i = 0;
  friend bool operator==(const RowChoice&, const RowChoice&) = default;
};

struct QualityOptions {
  std::uint64_t node_cap = 10'000'000;
  // Matrices with fewer than alpha m rows are zero-padded instead of rejected.
  bool pad_rows = false;
};

struct CheckResult {
  Verdict verdict = Verdict::holds;
  std::vector<RowChoice> witness;  // dependent selection when verdict == fails
  std::uint64_t nodes = 0;

  bool holds() const noexcept { return verdict == Verdict::holds; }
};

struct NetQualityReport {
  std::size_t alpha = 1;
  std::size_t m = 0;
  std::size_t d = 0;
  std::size_t t = 0;
  bool exhaustive = true;
  std::vector<RowChoice> witness;  // failing selection for t - 1
  std::optional<std::size_t> formula_t;
};

namespace detail {

class NetSearch {
 public:
  NetSearch(std::vector<std::vector<std::uint64_t>> rows, std::size_t budget, std::uint64_t node_cap, std::size_t alpha)
      : rows_(std::move(rows)), budget_(budget), node_cap_(node_cap), alpha_(alpha) {}

  CheckResult run() {
    CheckResult r;
    gf2::XorBasis basis;
    const bool ok = coordinate(0, budget_, basis);
    r.nodes = nodes_;
    if (capped_) {
      r.verdict = Verdict::inconclusive;
    } else if (!ok) {
      r.verdict = Verdict::fails;
      r.witness = path_;
    }
    return r;
  }

 private:
  // Returns false on a dependent selection (path_ then holds it) or cap.
  bool coordinate(std::size_t j, std::size_t budget, const gf2::XorBasis& basis) {
    if (j == rows_.size()) return true;
    // nu_j = 0.
    if (!coordinate(j + 1, budget, basis)) return false;
    return pick(j, 0, rows_[j].size() + 1, budget, basis);
  }

  // Choose the next index below `above` for coordinate j; `chosen` indices
  // have been taken so far.
  bool pick(std::size_t j, std::size_t chosen, std::size_t above, std::size_t budget, const gf2::XorBasis& basis) {
    for (std::size_t i = 1; i < above && i <= budget; ++i) {
      if (++nodes_ > node_cap_) {
        capped_ = true;
        return false;
      }
      gf2::XorBasis next = basis;
      path_.push_back({j + 1, i});
      if (!next.insert(rows_[j][i - 1])) return false;
      bool ok;
      if (chosen + 1 == alpha_) {
        ok = add_free_rows(j, i, budget - i, next);
      } else {
        ok = coordinate(j + 1, budget - i, next) && pick(j, chosen + 1, i, budget - i, next);
      }
      if (!ok) return false;
      path_.pop_back();
    }
    return true;
  }

  bool add_free_rows(std::size_t j, std::size_t last, std::size_t budget, gf2::XorBasis basis) {
    const std::size_t mark = path_.size();
    for (std::size_t i = last - 1; i >= 1; --i) {
      path_.push_back({j + 1, i});
      if (!basis.insert(rows_[j][i - 1])) return false;
    }
    if (!coordinate(j + 1, budget, basis)) return false;
    path_.resize(mark);
    return true;
  }

  std::vector<std::vector<std::uint64_t>> rows_;
  std::size_t budget_;
  std::uint64_t node_cap_;
  std::size_t alpha_;
  std::uint64_t nodes_ = 0;
  bool capped_ = false;
  std::vector<RowChoice> path_;
};

inline std::vector<std::vector<std::uint64_t>> net_rows(std::span<const gf2::BitMatrix> c, std::size_t alpha,
                                                        std::size_t m, const QualityOptions& opt) {
  if (c.empty()) throw DimensionError("quality: no matrices");
  if (alpha == 0) throw ArgumentError("quality: alpha must be positive");
  if (m == 0 || m > 64) throw ArgumentError("quality: m must be in 1..64");
  const std::size_t p = alpha * m;
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& mat : c) {
    if (mat.cols() < m) throw DimensionError("quality: matrices have fewer than m columns");
    if (mat.rows() < p && !opt.pad_rows) {
      throw DimensionError("quality: matrices have " + std::to_string(mat.rows()) + " rows, need alpha*m = " +
                           std::to_string(p));
    }
    const auto sub = mat.resized(p, m);
    std::vector<std::uint64_t> r(p);
    for (std::size_t i = 0; i < p; ++i) r[i] = sub.row_word(i);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace detail

// Order-alpha (t,m,d)-net property of the left upper (alpha m) x m parts of c.
inline CheckResult check_order_alpha_t(std::span<const gf2::BitMatrix> c, std::size_t alpha, std::size_t m,
                                       std::size_t t, const QualityOptions& opt = {}) {
  auto rows = detail::net_rows(c, alpha, m, opt);
  if (t > alpha * m) throw ArgumentError("check_order_alpha_t: t exceeds alpha*m");
  return detail::NetSearch(std::move(rows), alpha * m - t, opt.node_cap, alpha).run();
}

inline NetQualityReport minimal_t(std::span<const gf2::BitMatrix> c, std::size_t alpha, std::size_t m,
                                  const QualityOptions& opt = {}) {
  NetQualityReport rep;
  rep.alpha = alpha;
  rep.m = m;
  rep.d = c.size();
  std::vector<RowChoice> last_witness;
  for (std::size_t t = 0; t <= alpha * m; ++t) {
    const auto r = check_order_alpha_t(c, alpha, m, t, opt);
    if (r.holds()) {
      rep.t = t;
      if (rep.exhaustive && t > 0) rep.witness = last_witness;
      return rep;
    }
    if (r.verdict == Verdict::inconclusive) {
      rep.exhaustive = false;
      last_witness.clear();
    } else {
      last_witness = r.witness;
    }
  }
  throw Error("minimal_t: property fails at t = alpha*m");  // unreachable: empty condition set
}

inline NetQualityReport minimal_t(const GeneratingMatrixSet& g, std::size_t alpha, std::size_t m,
                                  const QualityOptions& opt = {}) {
  auto rep = minimal_t(std::span<const gf2::BitMatrix>(g.matrices), alpha, m, opt);
  if (alpha == g.alpha) rep.formula_t = g.t;
  return rep;
}

struct SequenceCheck {
  Verdict verdict = Verdict::holds;
  std::size_t failing_m = 0;
  std::vector<RowChoice> witness;

  bool holds() const noexcept { return verdict == Verdict::holds; }
};

// Net property at every m with t/alpha < m <= m_max on the left upper
// (alpha m) x m submatrices.
inline SequenceCheck verify_sequence_property(const GeneratingMatrixSet& g, std::size_t alpha, std::size_t t,
                                              std::size_t m_max, const QualityOptions& opt = {}) {
  g.validate();
  if (alpha == 0) throw ArgumentError("verify_sequence_property: alpha must be positive");
  if ((g.rows() < alpha * m_max && !opt.pad_rows) || g.cols() < m_max) {
    throw DimensionError("verify_sequence_property: matrices do not cover alpha*m_max x m_max");
  }
  SequenceCheck out;
  for (std::size_t m = t / alpha + 1; m <= m_max; ++m) {
    const auto r = check_order_alpha_t(g.matrices, alpha, m, t, opt);
    if (r.verdict == Verdict::fails) return {Verdict::fails, m, r.witness};
    if (r.verdict == Verdict::inconclusive) out.verdict = Verdict::inconclusive;
  }
  return out;
}

}  // namespace hoqmc

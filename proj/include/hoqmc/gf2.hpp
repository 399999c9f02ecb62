#pragma once

// Dense bit vectors and bit matrices over the two-element field.
//
// Entries are packed 64 to a word, least significant bit first. Every
// operation is pure; values are freely shareable across threads once built.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hoqmc/error.hpp"

namespace hoqmc::gf2 {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

  // Entry i is bit i of `bits`; bits at positions >= len must be clear.
  static BitVector from_word(Word bits, std::size_t len) {
    if (len > kWordBits) throw DimensionError("BitVector::from_word: length exceeds 64");
    if (len < kWordBits && (bits >> len) != 0) throw ArgumentError("BitVector::from_word: bits beyond length");
    BitVector v(len);
    if (len > 0) v.words_[0] = bits;
    return v;
  }

  static BitVector from_string(std::string_view s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        v.set(i, true);
      } else if (s[i] != '0') {
        throw FormatError("BitVector: expected '0' or '1', got '" + std::string(1, s[i]) + "'");
      }
    }
    return v;
  }

  std::size_t size() const noexcept { return len_; }
  bool empty() const noexcept { return len_ == 0; }

  bool operator[](std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }

  bool test(std::size_t i) const {
    if (i >= len_) throw DimensionError("BitVector::test: index out of range");
    return (*this)[i];
  }

  void set(std::size_t i, bool value) {
    if (i >= len_) throw DimensionError("BitVector::set: index out of range");
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  BitVector& operator^=(const BitVector& other) {
    if (other.len_ != len_) throw DimensionError("BitVector xor: length mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }

  friend BitVector operator^(BitVector lhs, const BitVector& rhs) {
    lhs ^= rhs;
    return lhs;
  }

  bool any() const noexcept {
    return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // Inner product over Z2.
  bool dot(const BitVector& other) const {
    if (other.len_ != len_) throw DimensionError("BitVector::dot: length mismatch");
    Word acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return (std::popcount(acc) & 1) != 0;
  }

  Word to_word() const {
    if (len_ > kWordBits) throw DimensionError("BitVector::to_word: length exceeds 64");
    return words_.empty() ? 0 : words_[0];
  }

  std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i) {
      if ((*this)[i]) s[i] = '1';
    }
    return s;
  }

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t len_ = 0;
  std::vector<Word> words_;
};

class BitMatrix {
 public:
  BitMatrix() = default;

  BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), stride_(words_for(cols)) {
    if (rows == 0 || cols == 0) throw DimensionError("BitMatrix: dimensions must be positive");
    data_.assign(rows_ * stride_, 0);
  }

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static BitMatrix from_rows(std::span<const BitVector> rows) {
    if (rows.empty()) throw DimensionError("BitMatrix::from_rows: no rows");
    BitMatrix m(rows.size(), rows.front().size());
    for (std::size_t k = 0; k < rows.size(); ++k) m.set_row(k, rows[k]);
    return m;
  }

  // One string of '0'/'1' characters per row.
  static BitMatrix from_strings(std::span<const std::string> rows) {
    if (rows.empty()) throw FormatError("BitMatrix: no rows");
    std::vector<BitVector> parsed;
    parsed.reserve(rows.size());
    for (const auto& r : rows) {
      parsed.push_back(BitVector::from_string(r));
      if (parsed.back().size() != parsed.front().size()) throw FormatError("BitMatrix: ragged rows");
    }
    if (parsed.front().empty()) throw FormatError("BitMatrix: empty rows");
    return from_rows(parsed);
  }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    out.reserve(rows_);
    for (std::size_t k = 0; k < rows_; ++k) out.push_back(row(k).to_string());
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  bool operator()(std::size_t k, std::size_t l) const noexcept {
    return (data_[k * stride_ + l / kWordBits] >> (l % kWordBits)) & 1U;
  }

  bool get(std::size_t k, std::size_t l) const {
    check_index(k, l);
    return (*this)(k, l);
  }

  void set(std::size_t k, std::size_t l, bool value) {
    check_index(k, l);
    Word& w = data_[k * stride_ + l / kWordBits];
    const Word mask = Word{1} << (l % kWordBits);
    w = value ? (w | mask) : (w & ~mask);
  }

  BitVector row(std::size_t k) const {
    if (k >= rows_) throw DimensionError("BitMatrix::row: index out of range");
    BitVector v(cols_);
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(k * stride_), stride_, v.words().begin());
    return v;
  }

  void set_row(std::size_t k, const BitVector& v) {
    if (k >= rows_) throw DimensionError("BitMatrix::set_row: index out of range");
    if (v.size() != cols_) throw DimensionError("BitMatrix::set_row: length mismatch");
    std::copy(v.words().begin(), v.words().end(), data_.begin() + static_cast<std::ptrdiff_t>(k * stride_));
  }

  std::span<const Word> row_words(std::size_t k) const { return {data_.data() + k * stride_, stride_}; }

  // Row k as a single word; only valid when cols <= 64.
  Word row_word(std::size_t k) const {
    if (cols_ > kWordBits) throw DimensionError("BitMatrix::row_word: more than 64 columns");
    return data_[k * stride_];
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t k = 0; k < rows_; ++k) {
      for (std::size_t l = 0; l < cols_; ++l) {
        if ((*this)(k, l)) t.set(l, k, true);
      }
    }
    return t;
  }

  // Left-upper block with `rows` x `cols` entries. Positions beyond the
  // stored extent read as zero, so this both truncates and zero-pads.
  BitMatrix resized(std::size_t rows, std::size_t cols) const {
    BitMatrix out(rows, cols);
    const std::size_t rmax = std::min(rows, rows_);
    const std::size_t cmax = std::min(cols, cols_);
    for (std::size_t k = 0; k < rmax; ++k) {
      for (std::size_t l = 0; l < cmax; ++l) {
        if ((*this)(k, l)) out.set(k, l, true);
      }
    }
    return out;
  }

  bool is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](Word w) { return w == 0; });
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  void check_index(std::size_t k, std::size_t l) const {
    if (k >= rows_ || l >= cols_) throw DimensionError("BitMatrix: index out of range");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

inline BitVector matvec(const BitMatrix& m, const BitVector& v) {
  if (v.size() != m.cols()) {
    throw DimensionError("matvec: vector length " + std::to_string(v.size()) + " != matrix columns " +
                         std::to_string(m.cols()));
  }
  BitVector out(m.rows());
  const auto vw = v.words();
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const auto rw = m.row_words(k);
    Word acc = 0;
    for (std::size_t w = 0; w < rw.size(); ++w) acc ^= rw[w] & vw[w];
    if (std::popcount(acc) & 1) out.set(k, true);
  }
  return out;
}

namespace detail {

// Rank of a row-major packed matrix, destroying its contents.
inline std::size_t eliminate(std::vector<Word>& data, std::size_t rows, std::size_t cols, std::size_t stride) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    const std::size_t w = col / kWordBits;
    const Word bit = Word{1} << (col % kWordBits);
    std::size_t pivot = rank;
    while (pivot < rows && !(data[pivot * stride + w] & bit)) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      std::swap_ranges(data.begin() + static_cast<std::ptrdiff_t>(pivot * stride),
                       data.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * stride),
                       data.begin() + static_cast<std::ptrdiff_t>(rank * stride));
    }
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (data[r * stride + w] & bit) {
        for (std::size_t x = w; x < stride; ++x) data[r * stride + x] ^= data[rank * stride + x];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

inline std::size_t rank(const BitMatrix& m) {
  const std::size_t stride = words_for(m.cols());
  std::vector<Word> data;
  data.reserve(m.rows() * stride);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const auto rw = m.row_words(k);
    data.insert(data.end(), rw.begin(), rw.end());
  }
  return detail::eliminate(data, m.rows(), m.cols(), stride);
}

// True iff the rows are linearly independent. The empty family is independent.
inline bool rows_independent(std::span<const BitVector> rows) {
  if (rows.empty()) return true;
  const std::size_t len = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != len) throw DimensionError("rows_independent: rows of different length");
  }
  if (rows.size() > len) return false;
  const std::size_t stride = words_for(len);
  std::vector<Word> data;
  data.reserve(rows.size() * stride);
  for (const auto& r : rows) data.insert(data.end(), r.words().begin(), r.words().end());
  return detail::eliminate(data, rows.size(), len, stride) == rows.size();
}

// Incremental echelon basis for vectors of at most 64 entries. Each stored
// vector has a distinct leading bit, so insertion is a single reduction pass.
class XorBasis {
 public:
  // Returns false (and leaves the basis unchanged) if v is already spanned.
  bool insert(Word v) noexcept {
    for (std::size_t i = 0; i < size_; ++i) {
      if (v & lead_[i]) v ^= basis_[i];
    }
    if (v == 0) return false;
    const Word lead = std::bit_floor(v);
    for (std::size_t i = 0; i < size_; ++i) {
      if (basis_[i] & lead) basis_[i] ^= v;
    }
    basis_[size_] = v;
    lead_[size_] = lead;
    ++size_;
    return true;
  }

  std::size_t size() const noexcept { return size_; }

 private:
  Word basis_[kWordBits] = {};
  Word lead_[kWordBits] = {};
  std::size_t size_ = 0;
};

}  // namespace hoqmc::gf2

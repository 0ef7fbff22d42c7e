#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iforge {

using Element = std::uint32_t;

/// The prime field GF(p) for a small prime p (2 <= p <= 97).
class PrimeField {
 public:
  static constexpr std::uint32_t kMaxPrime = 97;

  explicit PrimeField(std::uint32_t p);

  [[nodiscard]] std::uint32_t p() const { return p_; }

  [[nodiscard]] Element reduce(std::int64_t v) const {
    auto r = v % static_cast<std::int64_t>(p_);
    return static_cast<Element>(r < 0 ? r + p_ : r);
  }
  [[nodiscard]] Element add(Element a, Element b) const { return (a + b) % p_; }
  [[nodiscard]] Element sub(Element a, Element b) const { return (a + p_ - b) % p_; }
  [[nodiscard]] Element mul(Element a, Element b) const { return (a * b) % p_; }
  [[nodiscard]] Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  /// Multiplicative inverse; throws std::domain_error on zero.
  [[nodiscard]] Element inv(Element a) const;
  [[nodiscard]] Element div(Element a, Element b) const { return mul(a, inv(b)); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
  std::vector<Element> inverse_;
};

bool is_prime(std::uint32_t n);

/// Dense row-major matrix over a prime field.
class FieldMatrix {
 public:
  FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols);
  /// Entries are reduced mod p; entries.size() must equal rows*cols.
  FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols, std::span<const std::int64_t> entries);

  static FieldMatrix identity(PrimeField field, std::size_t n);
  static FieldMatrix from_rows(PrimeField field, const std::vector<std::vector<std::int64_t>>& rows);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] const PrimeField& field() const { return field_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }

  [[nodiscard]] Element at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Element v) { data_[r * cols_ + c] = v % field_.p(); }
  [[nodiscard]] std::span<const Element> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] const std::vector<Element>& entries() const { return data_; }

  [[nodiscard]] FieldMatrix transpose() const;
  [[nodiscard]] FieldMatrix select(std::span<const std::size_t> rowIdx, std::span<const std::size_t> colIdx) const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_identity() const;

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> data_;
};

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix mat_add(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix mat_scale(const FieldMatrix& a, Element s);
/// Horizontal concatenation [a | b].
FieldMatrix hconcat(const FieldMatrix& a, const FieldMatrix& b);
/// Vertical concatenation [a ; b].
FieldMatrix vconcat(const FieldMatrix& a, const FieldMatrix& b);

std::size_t mat_rank(const FieldMatrix& a);

/// Inverse of a square matrix, or std::nullopt when singular.
std::optional<FieldMatrix> mat_inverse(const FieldMatrix& a);

/// Reduced row echelon form; pivot columns are the leftmost nonzero of each row.
struct RowEchelon {
  FieldMatrix reduced;
  std::vector<std::size_t> pivots;
};
RowEchelon rref(FieldMatrix a);

/// Columns of the result span the right nullspace of a (cols x nullity).
FieldMatrix nullspace(const FieldMatrix& a);

/// Solves a x = b for one particular x, or std::nullopt when inconsistent.
std::optional<std::vector<Element>> solve_linear(const FieldMatrix& a, std::span<const Element> b);

/// Given m (k x N) and n (N x k) with m*n = I_k and N > k, returns (mPrime, nPrime)
/// such that [m; mPrime] * [n | nPrime] = I_N.
struct InverseCompletion {
  FieldMatrix mPrime;
  FieldMatrix nPrime;
};
InverseCompletion complete_to_inverse(const FieldMatrix& m, const FieldMatrix& n);

/// `p=<prime>; rows=<r>; cols=<c>; data=<rows separated by ';', entries by spaces>`
std::string format_matrix(const FieldMatrix& a);
FieldMatrix parse_matrix(std::string_view text);

}  // namespace iforge

#include "iforge/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace iforge {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p) || p > kMaxPrime) {
    throw std::invalid_argument("field characteristic must be a prime <= 97, got " + std::to_string(p));
  }
  inverse_.assign(p, 0);
  for (Element a = 1; a < p; ++a) {
    for (Element b = 1; b < p; ++b) {
      if ((a * b) % p == 1) {
        inverse_[a] = b;
        break;
      }
    }
  }
}

Element PrimeField::inv(Element a) const {
  a %= p_;
  if (a == 0) throw std::domain_error("inverse of zero");
  return inverse_[a];
}

FieldMatrix::FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FieldMatrix::FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols,
                         std::span<const std::int64_t> entries)
    : FieldMatrix(std::move(field), rows, cols) {
  if (entries.size() != rows * cols) throw std::invalid_argument("matrix entry count mismatch");
  for (std::size_t i = 0; i < entries.size(); ++i) data_[i] = field_.reduce(entries[i]);
}

FieldMatrix FieldMatrix::identity(PrimeField field, std::size_t n) {
  FieldMatrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

FieldMatrix FieldMatrix::from_rows(PrimeField field, const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows.front().size();
  FieldMatrix m(std::move(field), r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.data_[i * c + j] = m.field_.reduce(rows[i][j]);
  }
  return m;
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = data_[i * cols_ + j];
  return t;
}

FieldMatrix FieldMatrix::select(std::span<const std::size_t> rowIdx, std::span<const std::size_t> colIdx) const {
  FieldMatrix s(field_, rowIdx.size(), colIdx.size());
  for (std::size_t i = 0; i < rowIdx.size(); ++i)
    for (std::size_t j = 0; j < colIdx.size(); ++j) s.data_[i * colIdx.size() + j] = at(rowIdx[i], colIdx[j]);
  return s;
}

bool FieldMatrix::is_zero() const {
  for (auto v : data_)
    if (v != 0) return false;
  return true;
}

bool FieldMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (data_[i * cols_ + j] != (i == j ? 1u : 0u)) return false;
  return true;
}

namespace {

void require_same_field(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.field() != b.field()) throw std::invalid_argument("matrices over different fields");
}

}  // namespace

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  const auto p = a.field().p();
  FieldMatrix c(a.field(), a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      auto aik = a.at(i, k);
      if (aik == 0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] += static_cast<std::uint64_t>(aik) * brow[j];
    }
    for (std::size_t j = 0; j < b.cols(); ++j) c.set(i, j, static_cast<Element>(acc[j] % p));
  }
  return c;
}

FieldMatrix mat_add(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum dimension mismatch");
  FieldMatrix c(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.set(i, j, a.field().add(a.at(i, j), b.at(i, j)));
  return c;
}

FieldMatrix mat_scale(const FieldMatrix& a, Element s) {
  FieldMatrix c(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.set(i, j, a.field().mul(a.at(i, j), s % a.field().p()));
  return c;
}

FieldMatrix hconcat(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows()) throw std::invalid_argument("hconcat row mismatch");
  FieldMatrix c(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c.set(i, j, a.at(i, j));
    for (std::size_t j = 0; j < b.cols(); ++j) c.set(i, a.cols() + j, b.at(i, j));
  }
  return c;
}

FieldMatrix vconcat(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.cols()) throw std::invalid_argument("vconcat column mismatch");
  FieldMatrix c(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.set(i, j, a.at(i, j));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c.set(a.rows() + i, j, b.at(i, j));
  return c;
}

RowEchelon rref(FieldMatrix a) {
  const auto& f = a.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a.at(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r) {
      auto x = a.row(piv);
      auto y = a.row(r);
      std::swap_ranges(x.begin(), x.end(), y.begin());
    }
    auto s = f.inv(a.at(r, c));
    auto prow = a.row(r);
    for (auto& v : prow) v = f.mul(v, s);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      auto factor = a.at(i, c);
      if (factor == 0) continue;
      auto irow = a.row(i);
      for (std::size_t j = c; j < a.cols(); ++j) irow[j] = f.sub(irow[j], f.mul(factor, prow[j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

std::size_t mat_rank(const FieldMatrix& a) { return rref(a).pivots.size(); }

std::optional<FieldMatrix> mat_inverse(const FieldMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  const auto n = a.rows();
  auto ech = rref(hconcat(a, FieldMatrix::identity(a.field(), n)));
  if (ech.pivots.size() < n || (n > 0 && ech.pivots[n - 1] != n - 1)) return std::nullopt;
  std::vector<std::size_t> rowsIdx(n), colsIdx(n);
  for (std::size_t i = 0; i < n; ++i) {
    rowsIdx[i] = i;
    colsIdx[i] = n + i;
  }
  return ech.reduced.select(rowsIdx, colsIdx);
}

FieldMatrix nullspace(const FieldMatrix& a) {
  const auto& f = a.field();
  auto ech = rref(a);
  std::vector<bool> isPivot(a.cols(), false);
  for (auto c : ech.pivots) isPivot[c] = true;
  std::vector<std::size_t> freeCols;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!isPivot[c]) freeCols.push_back(c);
  FieldMatrix basis(f, a.cols(), freeCols.size());
  for (std::size_t k = 0; k < freeCols.size(); ++k) {
    basis.set(freeCols[k], k, 1);
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
      basis.set(ech.pivots[r], k, f.neg(ech.reduced.at(r, freeCols[k])));
    }
  }
  return basis;
}

std::optional<std::vector<Element>> solve_linear(const FieldMatrix& a, std::span<const Element> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("right-hand side length mismatch");
  FieldMatrix rhs(a.field(), a.rows(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs.set(i, 0, b[i]);
  auto ech = rref(hconcat(a, rhs));
  if (!ech.pivots.empty() && ech.pivots.back() == a.cols()) return std::nullopt;
  std::vector<Element> x(a.cols(), 0);
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) x[ech.pivots[r]] = ech.reduced.at(r, a.cols());
  return x;
}

InverseCompletion complete_to_inverse(const FieldMatrix& m, const FieldMatrix& n) {
  require_same_field(m, n);
  const auto k = m.rows();
  const auto big = m.cols();
  if (n.rows() != big || n.cols() != k) throw std::invalid_argument("complete_to_inverse shape mismatch");
  if (big < k) throw std::invalid_argument("complete_to_inverse requires cols >= rows");
  if (!mat_mul(m, n).is_identity()) throw std::invalid_argument("complete_to_inverse requires m*n = I");
  const auto& f = m.field();

  // Extend m with unit rows until it has full rank.
  FieldMatrix extra(f, 0, big);
  FieldMatrix current = m;
  std::size_t rank = mat_rank(current);
  for (std::size_t e = 0; e < big && rank < big; ++e) {
    FieldMatrix unit(f, 1, big);
    unit.set(0, e, 1);
    auto trial = vconcat(current, unit);
    auto r = mat_rank(trial);
    if (r > rank) {
      current = std::move(trial);
      extra = vconcat(extra, unit);
      rank = r;
    }
  }
  // m' = m'' - m'' n m kills the overlap with the columns of n.
  auto correction = mat_mul(mat_mul(extra, n), m);
  auto mPrime = mat_add(extra, mat_scale(correction, f.p() - 1));
  auto full = mat_inverse(vconcat(m, mPrime));
  if (!full) throw std::logic_error("complete_to_inverse: completion is singular");
  std::vector<std::size_t> allRows(big), tailCols(big - k);
  for (std::size_t i = 0; i < big; ++i) allRows[i] = i;
  for (std::size_t j = 0; j < big - k; ++j) tailCols[j] = k + j;
  return {std::move(mPrime), full->select(allRows, tailCols)};
}

std::string format_matrix(const FieldMatrix& a) {
  std::ostringstream os;
  os << "p=" << a.field().p() << "; rows=" << a.rows() << "; cols=" << a.cols() << "; data=";
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i > 0) os << ';';
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j > 0) os << ' ';
      os << a.at(i, j);
    }
  }
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t to_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("malformed integer '" + std::string(s) + "' in matrix literal");
  }
  return v;
}

std::string_view take_key(std::string_view& text, std::string_view key) {
  text = trim(text);
  if (text.substr(0, key.size()) != key || text.size() <= key.size() || text[key.size()] != '=') {
    throw std::invalid_argument("matrix literal: expected '" + std::string(key) + "='");
  }
  text.remove_prefix(key.size() + 1);
  if (key == "data") {
    auto v = text;
    text = {};
    return v;
  }
  auto semi = text.find(';');
  if (semi == std::string_view::npos) throw std::invalid_argument("matrix literal: missing ';'");
  auto v = text.substr(0, semi);
  text.remove_prefix(semi + 1);
  return v;
}

}  // namespace

FieldMatrix parse_matrix(std::string_view text) {
  auto p = to_int(take_key(text, "p"));
  auto rows = to_int(take_key(text, "rows"));
  auto cols = to_int(take_key(text, "cols"));
  if (p < 0 || rows < 0 || cols < 0) throw std::invalid_argument("matrix literal: negative header value");
  auto data = trim(take_key(text, "data"));
  PrimeField f(static_cast<std::uint32_t>(p));
  std::vector<std::int64_t> entries;
  std::size_t rowCount = 0;
  if (rows > 0) {
    std::size_t start = 0;
    while (true) {
      auto semi = data.find(';', start);
      auto line = trim(data.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
      std::size_t count = 0;
      std::size_t pos = 0;
      while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        auto end = pos;
        while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
        entries.push_back(to_int(line.substr(pos, end - pos)));
        ++count;
        pos = end;
      }
      if (count != static_cast<std::size_t>(cols)) {
        throw std::invalid_argument("matrix literal: row " + std::to_string(rowCount + 1) + " has " +
                                    std::to_string(count) + " entries, expected " + std::to_string(cols));
      }
      ++rowCount;
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
  } else if (!data.empty()) {
    throw std::invalid_argument("matrix literal: data given for zero rows");
  }
  if (rowCount != static_cast<std::size_t>(rows)) {
    throw std::invalid_argument("matrix literal: expected " + std::to_string(rows) + " rows, got " +
                                std::to_string(rowCount));
  }
  return FieldMatrix(f, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), entries);
}

}  // namespace iforge

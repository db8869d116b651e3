#include "knotcert/linalg.hpp"

#include <utility>

namespace knotcert {

int rank(IntMatrix m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  mpz_class prev = 1;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

bool RowSpace::add(std::vector<mpz_class> row) {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    int p = pivots_[k];
    if (row[p] == 0) continue;
    mpz_class a = rows_[k][p], b = row[p];
    for (int j = 0; j < columns_; ++j) row[j] = a * row[j] - b * rows_[k][j];
  }
  int p = -1;
  for (int j = 0; j < columns_; ++j)
    if (row[j] != 0) {
      p = j;
      break;
    }
  if (p < 0) return false;
  mpz_class g = content(row);
  for (auto& x : row) x /= g;
  rows_.push_back(std::move(row));
  pivots_.push_back(p);
  return true;
}

mpz_class content(const std::vector<mpz_class>& v) {
  mpz_class g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

}  // namespace knotcert

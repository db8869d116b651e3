#pragma once

#include <vector>

#include <gmpxx.h>

namespace knotcert {

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Rank over the rationals by fraction-free elimination.
int rank(IntMatrix m);

/// Incrementally maintained row echelon basis over the rationals.
class RowSpace {
 public:
  explicit RowSpace(int columns) : columns_(columns) {}
  /// Adds a row; returns true when it was independent of the rows added so far.
  bool add(std::vector<mpz_class> row);
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  int columns_;
  std::vector<std::vector<mpz_class>> rows_;
  std::vector<int> pivots_;
};

/// gcd of the absolute values; 0 for an all-zero vector.
mpz_class content(const std::vector<mpz_class>& v);

}  // namespace knotcert

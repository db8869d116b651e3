#pragma once

#include <array>
#include <cstdint>

namespace knotcert {

/// Permutation of {0,1,2,3}; image of i is p[i].
class Perm4 {
 public:
  constexpr Perm4() : img_{0, 1, 2, 3} {}
  constexpr Perm4(int a, int b, int c, int d) : img_{int8_t(a), int8_t(b), int8_t(c), int8_t(d)} {}

  constexpr int operator[](int i) const { return img_[i]; }

  constexpr Perm4 inverse() const {
    Perm4 r;
    for (int i = 0; i < 4; ++i) r.img_[img_[i]] = int8_t(i);
    return r;
  }
  /// (this * q)(i) = this(q(i)).
  constexpr Perm4 operator*(const Perm4& q) const {
    Perm4 r;
    for (int i = 0; i < 4; ++i) r.img_[i] = img_[q.img_[i]];
    return r;
  }
  constexpr int sign() const {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (img_[i] > img_[j]) ++inv;
    return (inv & 1) ? -1 : 1;
  }
  constexpr bool operator==(const Perm4&) const = default;

  /// Lexicographic rank in S4, 0..23.
  constexpr int index() const {
    int idx = 0;
    for (int i = 0; i < 4; ++i) {
      int smaller = 0;
      for (int j = i + 1; j < 4; ++j)
        if (img_[j] < img_[i]) ++smaller;
      idx = idx * (4 - i) + smaller;
    }
    return idx;
  }
  static constexpr Perm4 from_index(int idx) {
    std::array<int, 4> digits{};
    for (int i = 3; i >= 0; --i) {
      digits[i] = idx % (4 - i);
      idx /= (4 - i);
    }
    std::array<bool, 4> used{};
    Perm4 r;
    for (int i = 0; i < 4; ++i) {
      int k = digits[i];
      for (int v = 0; v < 4; ++v) {
        if (used[v]) continue;
        if (k-- == 0) {
          r.img_[i] = int8_t(v);
          used[v] = true;
          break;
        }
      }
    }
    return r;
  }
  static constexpr Perm4 swap(int a, int b) {
    Perm4 r;
    r.img_[a] = int8_t(b);
    r.img_[b] = int8_t(a);
    return r;
  }

 private:
  std::array<int8_t, 4> img_;
};

/// Edge numbering inside a tetrahedron: 01,02,03,12,13,23.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int edge_number(int a, int b) {
  if (a > b) {
    int t = a;
    a = b;
    b = t;
  }
  constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[a][b];
}

/// Vertices of face f (opposite vertex f), ascending.
constexpr std::array<int, 3> face_vertices(int f) {
  std::array<int, 3> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != f) out[k++] = v;
  return out;
}

}  // namespace knotcert

#include "knotcert/normal_cone.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "knotcert/linalg.hpp"

namespace knotcert {

mpz_class HakenCone::evaluate(int i, const NormalVector& v) const {
  mpz_class s = 0;
  for (auto [k, coef] : rows[i].terms) s += coef * v[k];
  return s;
}

HakenCone matching_equations(const Triangulation& t) {
  HakenCone c;
  c.tetrahedra = t.size();
  c.num_coordinates = 7 * t.size();
  for (int a = 0; a < t.size(); ++a) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(a, f);
      if (g.boundary()) continue;
      const int b = g.tet, bf = g.perm[f];
      if (b < a || (b == a && bf < f)) continue;  // each interior face once
      for (int v = 0; v < 4; ++v) {
        if (v == f) continue;
        const int w = g.perm[v];
        std::map<int, int> coef;
        coef[7 * a + kTriangle0 + v] += 1;
        coef[7 * a + kQuad0 + quad_of_pair(v, f)] += 1;
        coef[7 * b + kTriangle0 + w] -= 1;
        coef[7 * b + kQuad0 + quad_of_pair(w, bf)] -= 1;
        MatchingRow row;
        for (auto [k, x] : coef)
          if (x != 0) row.terms.push_back({k, x});
        if (row.terms.empty()) continue;
        row.face_tet = a;
        row.face = f;
        row.vertex = v;
        c.rows.push_back(std::move(row));
      }
    }
  }
  return c;
}

bool quads_compatible(const HakenCone& c, const NormalVector& v) {
  for (int a = 0; a < c.tetrahedra; ++a) {
    int positive = 0;
    for (int q = 0; q < 3; ++q)
      if (v[7 * a + kQuad0 + q] > 0) ++positive;
    if (positive > 1) return false;
  }
  return true;
}

bool in_cone(const HakenCone& c, const NormalVector& v) {
  if (static_cast<int>(v.size()) != c.coordinates())
    throw std::invalid_argument("normal vector has length " + std::to_string(v.size()) + ", expected " +
                                std::to_string(c.coordinates()));
  for (const auto& x : v)
    if (x < 0) return false;
  for (int i = 0; i < static_cast<int>(c.rows.size()); ++i)
    if (c.evaluate(i, v) != 0) return false;
  return true;
}

bool is_admissible(const HakenCone& c, const NormalVector& v) { return in_cone(c, v) && quads_compatible(c, v); }

std::vector<std::vector<mpz_class>> dense_rows(const HakenCone& c) {
  std::vector<std::vector<mpz_class>> out;
  for (const auto& r : c.rows) {
    std::vector<mpz_class> row(c.coordinates(), 0);
    for (auto [k, x] : r.terms) row[k] = x;
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
mpz_class checked_mul(const mpz_class& a, const mpz_class& b) { return a * b; }
mpz_class checked_add(const mpz_class& a, const mpz_class& b) { return a + b; }
std::int64_t gcd_of(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
mpz_class gcd_of(const mpz_class& a, const mpz_class& b) { return gcd(a, b); }
int sign_of(std::int64_t a) { return (a > 0) - (a < 0); }
int sign_of(const mpz_class& a) { return sgn(a); }

using Bits = std::vector<std::uint64_t>;

bool subset(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}
int popcount(const Bits& a) {
  int n = 0;
  for (auto w : a) n += __builtin_popcountll(w);
  return n;
}

template <class T>
struct Ray {
  std::vector<T> x;
  Bits zero;
};

template <class T>
class DoubleDescription {
 public:
  DoubleDescription(const HakenCone& c, const EnumerationOptions& o) : cone_(c), opt_(o) {
    n_ = c.coordinates();
    words_ = (n_ + 63) / 64;
  }

  std::vector<NormalVector> run() {
    std::vector<Ray<T>> rays;
    for (int i = 0; i < n_; ++i) {
      Ray<T> r;
      r.x.assign(n_, T(0));
      r.x[i] = T(1);
      r.zero.assign(words_, 0);
      for (int j = 0; j < n_; ++j)
        if (j != i) r.zero[j / 64] |= std::uint64_t(1) << (j % 64);
      rays.push_back(std::move(r));
    }
    // process equations in order of the tetrahedra they touch
    std::vector<int> order(cone_.rows.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int i) {
      const auto& t = cone_.rows[i].terms;
      return std::make_pair(t.back().first, t.front().first);
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });

    RowSpace space(n_);
    auto dense = dense_rows(cone_);
    for (int idx : order) {
      space.add(dense[idx]);
      const int threshold = n_ - 2 - space.rank();
      rays = insert(rays, cone_.rows[idx], threshold);
      opt_.budget.check_count(static_cast<std::int64_t>(rays.size()), "vertex enumeration");
      opt_.budget.check_time("vertex enumeration");
    }
    std::vector<NormalVector> out;
    for (const auto& r : rays) {
      NormalVector v(n_);
      for (int i = 0; i < n_; ++i) v[i] = mpz_class(r.x[i]);
      out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  bool compatible(const Bits& zero_a, const Bits& zero_b) const {
    if (!opt_.admissible_only) return true;
    for (int a = 0; a < cone_.tetrahedra; ++a) {
      int used = 0;
      for (int q = 0; q < 3; ++q) {
        int k = 7 * a + kQuad0 + q;
        bool za = zero_a[k / 64] >> (k % 64) & 1, zb = zero_b[k / 64] >> (k % 64) & 1;
        if (!za || !zb) ++used;
      }
      if (used > 1) return false;
    }
    return true;
  }

  T evaluate(const MatchingRow& row, const Ray<T>& r) const {
    T s(0);
    for (auto [k, coef] : row.terms) s = checked_add(s, checked_mul(T(coef), r.x[k]));
    return s;
  }

  std::vector<Ray<T>> insert(const std::vector<Ray<T>>& rays, const MatchingRow& row, int threshold) {
    std::vector<T> value(rays.size());
    std::vector<int> pos, neg;
    std::vector<Ray<T>> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      value[i] = evaluate(row, rays[i]);
      int s = sign_of(value[i]);
      if (s > 0)
        pos.push_back(static_cast<int>(i));
      else if (s < 0)
        neg.push_back(static_cast<int>(i));
      else
        next.push_back(rays[i]);
    }
    if (pos.empty() || neg.empty()) return next;

    const int workers = std::max(1, opt_.workers);
    std::vector<std::vector<Ray<T>>> found(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](int w) {
      try {
        Bits common(words_);
        std::int64_t tests = 0;
        const std::size_t lo = pos.size() * w / workers, hi = pos.size() * (w + 1) / workers;
        for (std::size_t pi = lo; pi < hi; ++pi) {
          const auto& p = rays[pos[pi]];
          for (int qi : neg) {
            const auto& q = rays[qi];
            for (int k = 0; k < words_; ++k) common[k] = p.zero[k] & q.zero[k];
            if (popcount(common) < threshold) continue;
            if (!compatible(p.zero, q.zero)) continue;
            if ((++tests & 1023) == 0) opt_.budget.check_time("vertex enumeration");
            bool adjacent = true;
            for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
              if (static_cast<int>(r) == pos[pi] || static_cast<int>(r) == qi) continue;
              if (subset(common, rays[r].zero)) adjacent = false;
            }
            if (!adjacent) continue;
            const T& vp = value[pos[pi]];
            T vq = -value[qi];
            Ray<T> nr;
            nr.x.resize(n_);
            T g(0);
            for (int k = 0; k < n_; ++k) {
              nr.x[k] = checked_add(checked_mul(vq, p.x[k]), checked_mul(vp, q.x[k]));
              g = gcd_of(g, nr.x[k]);
            }
            for (auto& x : nr.x) x /= g;
            nr.zero = common;
            found[w].push_back(std::move(nr));
          }
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
      for (auto& th : threads) th.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    // contiguous chunks concatenate to the single-worker order
    for (int w = 0; w < workers; ++w)
      for (auto& r : found[w]) next.push_back(std::move(r));
    return next;
  }

  const HakenCone& cone_;
  EnumerationOptions opt_;
  int n_ = 0;
  int words_ = 0;
};

}  // namespace

std::vector<NormalVector> vertex_solutions(const HakenCone& c, const EnumerationOptions& options) {
  if (c.coordinates() == 0) return {};
  try {
    return DoubleDescription<std::int64_t>(c, options).run();
  } catch (const Overflow&) {
    return DoubleDescription<mpz_class>(c, options).run();
  }
}

int dimension(const HakenCone& c) {
  EnumerationOptions o;
  o.admissible_only = false;
  IntMatrix m;
  for (auto& v : vertex_solutions(c, o)) m.push_back(v);
  return rank(std::move(m));
}

std::vector<mpz_class> hilbert_box(const HakenCone& c) {
  EnumerationOptions o;
  o.admissible_only = false;
  std::vector<mpz_class> box(c.coordinates(), 0);
  for (const auto& v : vertex_solutions(c, o))
    for (int i = 0; i < c.coordinates(); ++i) box[i] += v[i];
  if (c.tetrahedra > 0) {
    mpz_class cap = c.tetrahedra;
    cap <<= 7 * c.tetrahedra + 2;
    for (auto& b : box) b = std::min(b, cap);
  }
  return box;
}

namespace {

/// Depth-first search over integer vectors with lower[i] <= x_i <= upper[i], pruning rows whose
/// remaining range cannot reach zero.
class BoxSearch {
 public:
  BoxSearch(const HakenCone& c, std::vector<long> upper, bool quads, std::int64_t limit, const char* what)
      : c_(c), upper_(std::move(upper)), quads_(quads), limit_(limit), what_(what) {
    const int n = c.coordinates();
    rows_of_.assign(n, {});
    for (int i = 0; i < static_cast<int>(c.rows.size()); ++i)
      for (auto [k, coef] : c.rows[i].terms) rows_of_[k].push_back(i);
    x_.assign(n, 0);
  }

  void run(const std::function<bool(const std::vector<long>&)>& visit) {
    visit_ = &visit;
    stop_ = false;
    descend(0);
  }

 private:
  bool row_feasible(int r, int assigned) const {
    long lo = 0, hi = 0;
    for (auto [k, coef] : c_.rows[r].terms) {
      if (k < assigned) {
        lo += coef * x_[k];
        hi += coef * x_[k];
      } else if (coef > 0) {
        hi += coef * upper_[k];
      } else {
        lo += coef * upper_[k];
      }
    }
    return lo <= 0 && 0 <= hi;
  }

  void descend(int i) {
    if (stop_) return;
    if (++nodes_ > limit_) throw BudgetExceeded(std::string(what_) + ": search budget exceeded");
    const int n = c_.coordinates();
    if (i == n) {
      if ((*visit_)(x_)) stop_ = true;
      return;
    }
    long top = upper_[i];
    if (quads_ && i < 7 * c_.tetrahedra && i % 7 >= kQuad0) {
      int base = i - i % 7 + kQuad0;
      for (int k = base; k < i; ++k)
        if (x_[k] > 0) top = 0;
    }
    for (long val = 0; val <= top && !stop_; ++val) {
      x_[i] = val;
      bool ok = true;
      for (int r : rows_of_[i])
        if (!row_feasible(r, i + 1)) {
          ok = false;
          break;
        }
      if (ok) descend(i + 1);
    }
    x_[i] = 0;
  }

  const HakenCone& c_;
  std::vector<long> upper_;
  bool quads_;
  std::int64_t limit_;
  const char* what_;
  std::vector<std::vector<int>> rows_of_;
  std::vector<long> x_;
  std::int64_t nodes_ = 0;
  bool stop_ = false;
  const std::function<bool(const std::vector<long>&)>* visit_ = nullptr;
};

NormalVector to_normal(const std::vector<long>& x) {
  NormalVector v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i];
  return v;
}

long small(const mpz_class& x, const char* what) {
  if (!x.fits_slong_p()) throw BudgetExceeded(std::string(what) + ": box too large");
  return x.get_si();
}

}  // namespace

std::vector<NormalVector> hilbert_basis(const HakenCone& c, std::int64_t node_limit) {
  std::vector<long> upper;
  for (const auto& b : hilbert_box(c)) upper.push_back(small(b, "hilbert basis"));
  std::vector<std::vector<long>> points;
  BoxSearch(c, upper, false, node_limit, "hilbert basis").run([&](const std::vector<long>& x) {
    if (std::any_of(x.begin(), x.end(), [](long a) { return a != 0; })) points.push_back(x);
    return false;
  });
  auto total = [](const std::vector<long>& x) { return std::accumulate(x.begin(), x.end(), 0L); };
  std::stable_sort(points.begin(), points.end(), [&](const auto& a, const auto& b) { return total(a) < total(b); });
  std::vector<std::vector<long>> basis;
  for (const auto& p : points) {
    bool reducible = false;
    for (const auto& h : basis) {
      bool below = true;
      for (std::size_t i = 0; i < p.size() && below; ++i) below = h[i] <= p[i];
      if (below && h != p) {
        reducible = true;
        break;
      }
    }
    if (!reducible) basis.push_back(p);
  }
  std::vector<NormalVector> out;
  for (const auto& b : basis) out.push_back(to_normal(b));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_fundamental(const HakenCone& c, const NormalVector& v, std::int64_t node_limit) {
  if (!in_cone(c, v)) return false;
  std::vector<long> upper;
  for (const auto& x : v) upper.push_back(small(x, "fundamental check"));
  if (std::all_of(upper.begin(), upper.end(), [](long a) { return a == 0; })) return false;
  bool split = false;
  BoxSearch(c, upper, false, node_limit, "fundamental check").run([&](const std::vector<long>& w) {
    bool zero = std::all_of(w.begin(), w.end(), [](long a) { return a == 0; });
    if (zero || w == upper) return false;
    split = true;
    return true;
  });
  return !split;
}

void for_each_admissible_in_box(const HakenCone& c, int bound, std::int64_t node_limit,
                                const std::function<void(const NormalVector&)>& visit) {
  std::vector<long> upper(c.coordinates(), bound);
  BoxSearch(c, upper, true, node_limit, "admissible box").run([&](const std::vector<long>& x) {
    if (std::any_of(x.begin(), x.end(), [](long a) { return a != 0; })) visit(to_normal(x));
    return false;
  });
}

std::string to_string(const NormalVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += v[i].get_str();
  }
  return s;
}

std::string dump_cone(const HakenCone& c, const std::vector<NormalVector>& vertices) {
  std::ostringstream out;
  for (const auto& row : dense_rows(c)) out << to_string(row) << '\n';
  out << '\n';
  for (const auto& v : vertices) out << to_string(v) << '\n';
  return out.str();
}

}  // namespace knotcert

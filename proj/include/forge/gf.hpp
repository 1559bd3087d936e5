#pragma once

// Small Galois fields GF(q) with table-driven arithmetic, plus the vector /
// matrix / subspace utilities the incidence-geometry builders need.
// Elements are encoded as 0..q-1; for q = p^k the encoding is base-p
// coefficients of the residue polynomial.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace forge::gf {

using elt = std::uint8_t;

struct unsupported_order : std::runtime_error {
  explicit unsupported_order(int q)
      : std::runtime_error("unsupported field order q=" + std::to_string(q)) {}
};

namespace detail {
// Irreducible polynomial for GF(p^k), encoded as coefficient digits base p
// (constant term first), degree k, leading coefficient implicit 1.
inline std::vector<int> irreducible(int p, int k) {
  if (p == 2 && k == 2) return {1, 1};     // x^2 + x + 1
  if (p == 2 && k == 3) return {1, 1, 0};  // x^3 + x + 1
  if (p == 3 && k == 2) return {1, 0};     // x^2 + 1
  if (p == 5 && k == 2) return {3, 0};     // x^2 + 3 = x^2 - 2, 2 a non-square mod 5
  throw unsupported_order(1);
}
}  // namespace detail

class Field {
 public:
  explicit Field(int q) : q_(q) {
    int p = smallest_prime_factor(q);
    int k = 0, m = q;
    while (m > 1) {
      if (m % p != 0) throw unsupported_order(q);
      m /= p;
      ++k;
    }
    p_ = p;
    k_ = k;
    build_tables();
  }

  int q() const { return q_; }
  int characteristic() const { return p_; }

  elt add(elt a, elt b) const { return add_[a * q_ + b]; }
  elt sub(elt a, elt b) const { return add(a, neg(b)); }
  elt mul(elt a, elt b) const { return mul_[a * q_ + b]; }
  elt neg(elt a) const { return neg_[a]; }
  elt inv(elt a) const {
    if (a == 0) throw std::domain_error("field inverse of zero");
    return inv_[a];
  }

  static bool is_prime_power(int q) {
    if (q < 2) return false;
    int p = smallest_prime_factor(q);
    while (q % p == 0) q /= p;
    return q == 1;
  }

 private:
  static int smallest_prime_factor(int n) {
    for (int d = 2; d * d <= n; ++d)
      if (n % d == 0) return d;
    return n;
  }

  void build_tables() {
    add_.assign(q_ * q_, 0);
    mul_.assign(q_ * q_, 0);
    neg_.assign(q_, 0);
    inv_.assign(q_, 0);
    if (k_ == 1) {
      for (int a = 0; a < q_; ++a) {
        neg_[a] = elt((q_ - a) % q_);
        for (int b = 0; b < q_; ++b) {
          add_[a * q_ + b] = elt((a + b) % q_);
          mul_[a * q_ + b] = elt((a * b) % q_);
        }
      }
    } else {
      auto digits = [&](int a) {
        std::vector<int> d(k_);
        for (int i = 0; i < k_; ++i) { d[i] = a % p_; a /= p_; }
        return d;
      };
      auto undigits = [&](const std::vector<int>& d) {
        int a = 0;
        for (int i = k_ - 1; i >= 0; --i) a = a * p_ + d[i];
        return a;
      };
      std::vector<int> irr = detail::irreducible(p_, k_);
      for (int a = 0; a < q_; ++a) {
        auto da = digits(a);
        std::vector<int> dn(k_);
        for (int i = 0; i < k_; ++i) dn[i] = (p_ - da[i]) % p_;
        neg_[a] = elt(undigits(dn));
        for (int b = 0; b < q_; ++b) {
          auto db = digits(b);
          std::vector<int> ds(k_);
          for (int i = 0; i < k_; ++i) ds[i] = (da[i] + db[i]) % p_;
          add_[a * q_ + b] = elt(undigits(ds));
          // polynomial product reduced by the irreducible
          std::vector<int> prod(2 * k_ - 1, 0);
          for (int i = 0; i < k_; ++i)
            for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
          for (int d = 2 * k_ - 2; d >= k_; --d) {
            int c = prod[d];
            if (c == 0) continue;
            prod[d] = 0;
            // x^d = x^(d-k) * (-irr)
            for (int i = 0; i < k_; ++i)
              prod[d - k_ + i] = ((prod[d - k_ + i] - c * irr[i]) % p_ + p_) % p_;
          }
          prod.resize(k_);
          mul_[a * q_ + b] = elt(undigits(prod));
        }
      }
    }
    for (int a = 1; a < q_; ++a)
      for (int b = 1; b < q_; ++b)
        if (mul_[a * q_ + b] == 1) inv_[a] = elt(b);
  }

  int q_, p_ = 0, k_ = 0;
  std::vector<elt> add_, mul_, neg_, inv_;
};

// Interned field instances with program lifetime.  Long-lived objects that
// keep Field pointers (Laurent series, lattice vertices) must come from
// here rather than from a stack-local Field.
inline const Field& shared_field(int q) {
  static std::map<int, Field>* registry = new std::map<int, Field>();
  auto it = registry->find(q);
  if (it == registry->end()) it = registry->emplace(q, Field(q)).first;
  return it->second;
}

using Vec = std::vector<elt>;

// Dense row-major matrix over a shared Field.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<elt> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(r * c, 0) {}
  elt& at(int r, int c) { return a[r * cols + c]; }
  elt at(int r, int c) const { return a[r * cols + c]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  friend bool operator==(const Mat&, const Mat&) = default;
};

inline Mat mat_mul(const Field& F, const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mat_mul shape mismatch");
  Mat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      elt v = x.at(i, k);
      if (!v) continue;
      for (int j = 0; j < y.cols; ++j)
        z.at(i, j) = F.add(z.at(i, j), F.mul(v, y.at(k, j)));
    }
  return z;
}

inline Vec mat_vec(const Field& F, const Mat& m, const Vec& v) {
  if (int(v.size()) != m.cols) throw std::invalid_argument("mat_vec shape mismatch");
  Vec r(m.rows, 0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      r[i] = F.add(r[i], F.mul(m.at(i, j), v[j]));
  return r;
}

inline elt dot(const Field& F, const Vec& u, const Vec& v) {
  elt s = 0;
  for (size_t i = 0; i < u.size(); ++i) s = F.add(s, F.mul(u[i], v[i]));
  return s;
}

// Row reduction in place; returns rank.
inline int rref(const Field& F, Mat& m) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r)
      if (m.at(r, col)) { pivot = r; break; }
    if (pivot < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.a[pivot * m.cols + j], m.a[rank * m.cols + j]);
    elt pinv = F.inv(m.at(rank, col));
    for (int j = 0; j < m.cols; ++j) m.at(rank, j) = F.mul(m.at(rank, j), pinv);
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || !m.at(r, col)) continue;
      elt f = m.at(r, col);
      for (int j = 0; j < m.cols; ++j)
        m.at(r, j) = F.sub(m.at(r, j), F.mul(f, m.at(rank, j)));
    }
    ++rank;
  }
  return rank;
}

inline elt det(const Field& F, Mat m) {
  if (m.rows != m.cols) throw std::invalid_argument("det of non-square matrix");
  elt d = 1;
  for (int col = 0; col < m.cols; ++col) {
    int pivot = -1;
    for (int r = col; r < m.rows; ++r)
      if (m.at(r, col)) { pivot = r; break; }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int j = 0; j < m.cols; ++j) std::swap(m.a[pivot * m.cols + j], m.a[col * m.cols + j]);
      d = F.neg(d);
    }
    d = F.mul(d, m.at(col, col));
    elt pinv = F.inv(m.at(col, col));
    for (int r = col + 1; r < m.rows; ++r) {
      if (!m.at(r, col)) continue;
      elt f = F.mul(m.at(r, col), pinv);
      for (int j = col; j < m.cols; ++j)
        m.at(r, j) = F.sub(m.at(r, j), F.mul(f, m.at(col, j)));
    }
  }
  return d;
}

inline Mat inverse(const Field& F, const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
  int n = m.rows;
  Mat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  if (rref(F, aug) != n) throw std::domain_error("matrix not invertible");
  Mat inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

// Projective normalization: scale so the first nonzero coordinate is 1.
inline Vec projectivize(const Field& F, Vec v) {
  for (elt c : v)
    if (c) {
      elt s = F.inv(c);
      for (auto& x : v) x = F.mul(x, s);
      return v;
    }
  throw std::invalid_argument("projectivize of zero vector");
}

// All 1-dimensional subspaces of GF(q)^n as normalized representatives,
// lexicographically ordered (this fixes the point ids of every geometry).
inline std::vector<Vec> projective_points(const Field& F, int n) {
  std::vector<Vec> pts;
  Vec v(n, 0);
  // enumerate all vectors in lex order, keep those already normalized
  while (true) {
    int i = n - 1;
    while (i >= 0 && v[i] == F.q() - 1) { v[i] = 0; --i; }
    if (i < 0) break;
    ++v[i];
    for (int j = 0; j < n; ++j) {
      if (v[j] == 0) continue;
      if (v[j] == 1) pts.push_back(v);
      break;
    }
  }
  return pts;
}

// Canonical key of a subspace spanned by the given rows: its RREF matrix.
inline Mat span_rref(const Field& F, const std::vector<Vec>& basis, int n) {
  Mat m(int(basis.size()), n);
  for (int i = 0; i < int(basis.size()); ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = basis[i][j];
  int rank = rref(F, m);
  Mat out(rank, n);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = m.at(i, j);
  return out;
}

// All 2-dimensional subspaces of GF(q)^n, as canonical RREF bases in
// deterministic (lex of key) order.
inline std::vector<Mat> two_dim_subspaces(const Field& F, int n) {
  std::set<std::vector<elt>> seen;
  std::vector<Mat> out;
  auto pts = projective_points(F, n);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      Mat m = span_rref(F, {pts[i], pts[j]}, n);
      if (m.rows != 2) continue;
      if (seen.insert(m.a).second) out.push_back(m);
    }
  return out;
}

inline bool subspace_contains(const Field& F, const Mat& space, const Vec& v) {
  std::vector<Vec> basis;
  for (int i = 0; i < space.rows; ++i)
    basis.emplace_back(space.a.begin() + i * space.cols, space.a.begin() + (i + 1) * space.cols);
  basis.push_back(v);
  Mat m = span_rref(F, basis, space.cols);
  return m.rows == space.rows;
}

}  // namespace forge::gf

#pragma once

// Exact truncated Laurent series over GF(q) and the 3x3 matrix algorithms
// the affine building needs: Hermite canonical bases over the power-series
// ring, Smith normal form with unimodular transforms, Iwasawa (triangular)
// valuations, determinants, and Newton polygons of characteristic
// polynomials.  Series carry their own absolute precision; running out of
// known coefficients raises PrecisionExhausted instead of wrapping around.

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/gf.hpp"
#include "forge/numeric.hpp"
#include "json.hpp"

namespace forge::laurent {

inline constexpr int kExactPrec = 1 << 28;  // "all coefficients known"
inline constexpr int kInfVal = 1 << 28;     // valuation of the exact zero

class Series {
 public:
  explicit Series(const gf::Field& F) : F_(&F) {}

  static Series zero(const gf::Field& F) { return Series(F); }
  static Series one(const gf::Field& F) { return monomial(F, 1, 0); }
  static Series monomial(const gf::Field& F, gf::elt c, int exp) {
    Series s(F);
    if (c != 0) {
      s.lo_ = exp;
      s.c_ = {c};
    }
    return s;
  }
  static Series from_terms(const gf::Field& F, const std::map<int, int>& terms) {
    Series s(F);
    for (auto [e, c] : terms)
      if (c % F.q() != 0) s = s + monomial(F, gf::elt(((c % F.q()) + F.q()) % F.q()), e);
    return s;
  }

  const gf::Field& field() const { return *F_; }
  int prec() const { return prec_; }
  bool is_exact() const { return prec_ >= kExactPrec; }
  bool is_zero_known() const { return c_.empty() && is_exact(); }
  bool is_truncated_zero() const { return c_.empty() && !is_exact(); }

  // valuation: kInfVal for the exact zero; throws when unknowable
  int val() const {
    if (!c_.empty()) return lo_;
    if (is_exact()) return kInfVal;
    throw PrecisionExhausted("valuation unknown: series is zero up to precision " +
                             std::to_string(prec_));
  }

  gf::elt coeff(int e) const {
    if (e >= prec_) throw PrecisionExhausted("coefficient beyond known precision");
    if (c_.empty() || e < lo_ || e >= lo_ + int(c_.size())) return 0;
    return c_[e - lo_];
  }

  Series truncated(int new_prec) const {
    Series s(*F_);
    s.prec_ = std::min(prec_, new_prec);
    if (!c_.empty() && lo_ < s.prec_) {
      s.lo_ = lo_;
      int keep = std::min(int(c_.size()), s.prec_ - lo_);
      s.c_.assign(c_.begin(), c_.begin() + keep);
    }
    s.trim();
    return s;
  }

  Series shifted(int k) const {
    Series s = *this;
    if (!s.c_.empty()) s.lo_ += k;
    if (!s.is_exact()) s.prec_ += k;
    return s;
  }

  friend Series operator+(const Series& a, const Series& b) {
    const gf::Field& F = *a.F_;
    Series s(F);
    s.prec_ = std::min(a.prec_, b.prec_);
    int lo = std::min(a.c_.empty() ? s.prec_ : a.lo_, b.c_.empty() ? s.prec_ : b.lo_);
    int hi = std::min(s.prec_, std::max(a.upper(), b.upper()));
    if (lo < hi) {
      s.lo_ = lo;
      s.c_.assign(hi - lo, 0);
      for (int e = lo; e < hi; ++e) s.c_[e - lo] = F.add(a.at(e), b.at(e));
    }
    s.trim();
    return s;
  }

  Series operator-() const {
    Series s = *this;
    for (auto& c : s.c_) c = F_->neg(c);
    return s;
  }
  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  friend Series operator*(const Series& a, const Series& b) {
    const gf::Field& F = *a.F_;
    if (a.is_zero_known() || b.is_zero_known()) return Series(F);
    Series s(F);
    // prec(ab) = min(prec(a) + vlow(b), prec(b) + vlow(a))
    long pa = long(a.prec_) + b.vlow();
    long pb = long(b.prec_) + a.vlow();
    s.prec_ = int(std::min({pa, pb, long(kExactPrec)}));
    if (a.c_.empty() || b.c_.empty()) return s;  // truncated zero of that precision
    int lo = a.lo_ + b.lo_;
    long top = long(a.lo_) + int(a.c_.size()) - 1 + b.lo_ + int(b.c_.size()) - 1 + 1;
    int hi = int(std::min(top, long(s.prec_)));
    if (lo < hi) {
      s.lo_ = lo;
      s.c_.assign(hi - lo, 0);
      for (size_t i = 0; i < a.c_.size(); ++i) {
        if (!a.c_[i]) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) {
          int e = a.lo_ + int(i) + b.lo_ + int(j);
          if (e >= hi) break;
          s.c_[e - lo] = F.add(s.c_[e - lo], F.mul(a.c_[i], b.c_[j]));
        }
      }
    }
    s.trim();
    return s;
  }

  // 1/s truncated at absolute precision target_prec.
  Series inverse(int target_prec) const {
    const gf::Field& F = *F_;
    int v = val();  // throws on truncated zero
    if (v == kInfVal) throw SingularBasis("inverse of zero series");
    // relative precision available for the unit part
    int rel_in = is_exact() ? kExactPrec : prec_ - v;
    int rel_needed = target_prec + v;  // result valuation is -v
    int rel = std::min(rel_in, rel_needed);
    if (rel <= 0)
      throw PrecisionExhausted("inverse: no known coefficients at the requested precision");
    // invert the unit u = t^{-v} * this by the standard recurrence
    std::vector<gf::elt> u(rel, 0);
    for (int k = 0; k < rel; ++k) {
      int e = v + k;
      u[k] = (e < lo_ + int(c_.size()) && e >= lo_) ? c_[e - lo_] : 0;
    }
    std::vector<gf::elt> w(rel, 0);
    gf::elt u0inv = F.inv(u[0]);
    w[0] = u0inv;
    for (int k = 1; k < rel; ++k) {
      gf::elt acc = 0;
      for (int j = 1; j <= k; ++j) acc = F.add(acc, F.mul(u[j], w[k - j]));
      w[k] = F.mul(F.neg(acc), u0inv);
    }
    Series s(F);
    s.lo_ = -v;
    s.c_ = std::move(w);
    s.prec_ = -v + rel;
    s.trim();
    return s;
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.lo_ == b.lo_ && a.c_ == b.c_ && a.prec_ == b.prec_;
  }

  // equality of the underlying series where both are known; throws if they
  // agree on the known window but the window is finite and they might differ
  bool same_series(const Series& b) const {
    int p = std::min(prec_, b.prec_);
    int lo = std::min(vlow_finite(), b.vlow_finite());
    for (int e = lo; e < p; ++e)
      if (at(e) != b.at(e)) return false;
    if (upper() > p || b.upper() > p) return false;
    return true;
  }

  std::string to_string() const {
    if (c_.empty()) return is_exact() ? "0" : "O(t^" + std::to_string(prec_) + ")";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (!c_[i]) continue;
      if (!first) os << " + ";
      first = false;
      int e = lo_ + int(i);
      if (int(c_[i]) != 1 || e == 0) os << int(c_[i]);
      if (e != 0) {
        if (int(c_[i]) != 1) os << "*";
        os << "t";
        if (e != 1) os << "^" << e;
      }
    }
    if (!is_exact()) os << " + O(t^" << prec_ << ")";
    return os.str();
  }

  // {"exponent": coefficient} with string keys, the wire format for matrices
  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (size_t i = 0; i < c_.size(); ++i)
      if (c_[i]) j[std::to_string(lo_ + int(i))] = int(c_[i]);
    return j;
  }
  static Series from_json(const gf::Field& F, const nlohmann::json& j) {
    std::map<int, int> terms;
    for (auto it = j.begin(); it != j.end(); ++it) terms[std::stoi(it.key())] = it.value().get<int>();
    return from_terms(F, terms);
  }

  // stored content bounds: coefficients are zero outside [content_lower,
  // content_upper)
  int content_lower() const { return c_.empty() ? 0 : lo_; }
  int content_upper() const { return c_.empty() ? 0 : lo_ + int(c_.size()); }

  // stable content key (used to hash canonical lattice bases)
  void append_key(std::string& out) const {
    out += std::to_string(lo_);
    out.push_back(':');
    out.append(c_.begin(), c_.end());
    out.push_back(';');
  }

 private:
  int upper() const { return c_.empty() ? (is_exact() ? 0 : prec_) : lo_ + int(c_.size()); }
  int vlow() const { return c_.empty() ? (is_exact() ? kInfVal : prec_) : lo_; }
  int vlow_finite() const { return c_.empty() ? prec_ : lo_; }
  gf::elt at(int e) const {
    if (c_.empty() || e < lo_ || e >= lo_ + int(c_.size())) return 0;
    return c_[e - lo_];
  }
  void trim() {
    while (!c_.empty() && c_.front() == 0) {
      c_.erase(c_.begin());
      ++lo_;
    }
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    if (c_.empty()) lo_ = 0;
  }

  const gf::Field* F_;
  int lo_ = 0;
  std::vector<gf::elt> c_;
  int prec_ = kExactPrec;
};

// ---------------------------------------------------------------------------
// Matrices of series

struct SMat {
  int rows = 0, cols = 0;
  std::vector<Series> a;

  SMat(const gf::Field& F, int r, int c) : rows(r), cols(c), a(r * c, Series(F)) {}
  Series& at(int r, int c) { return a[r * cols + c]; }
  const Series& at(int r, int c) const { return a[r * cols + c]; }

  static SMat identity(const gf::Field& F, int n) {
    SMat m(F, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Series::one(F);
    return m;
  }

  SMat truncated(int prec) const {
    SMat m = *this;
    for (auto& s : m.a) s = s.truncated(prec);
    return m;
  }

  void swap_cols(int i, int j) {
    for (int r = 0; r < rows; ++r) std::swap(at(r, i), at(r, j));
  }
  void swap_rows(int i, int j) {
    for (int c = 0; c < cols; ++c) std::swap(at(i, c), at(j, c));
  }
  // col_i += f * col_j
  void add_col(int i, int j, const Series& f) {
    for (int r = 0; r < rows; ++r) at(r, i) = at(r, i) + f * at(r, j);
  }
  void add_row(int i, int j, const Series& f) {
    for (int c = 0; c < cols; ++c) at(i, c) = at(i, c) + f * at(j, c);
  }
  void scale_col(int i, const Series& f) {
    for (int r = 0; r < rows; ++r) at(r, i) = f * at(r, i);
  }
  void scale_row(int i, const Series& f) {
    for (int c = 0; c < cols; ++c) at(i, c) = f * at(i, c);
  }

  std::string key() const {
    std::string out;
    for (const auto& s : a) s.append_key(out);
    return out;
  }
};

inline SMat mat_mul(const SMat& x, const SMat& y) {
  if (x.cols != y.rows) throw Error("series mat_mul shape mismatch");
  const gf::Field& F = x.a.front().field();
  SMat z(F, x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (x.at(i, k).is_zero_known()) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) = z.at(i, j) + x.at(i, k) * y.at(k, j);
    }
  return z;
}

inline Series det3(const SMat& m) {
  if (m.rows != 3 || m.cols != 3) throw Error("det3 wants a 3x3 matrix");
  auto term = [&](int a, int b, int c) { return m.at(0, a) * (m.at(1, b) * m.at(2, c)); };
  return term(0, 1, 2) - term(0, 2, 1) - term(1, 0, 2) + term(1, 2, 0) + term(2, 0, 1) -
         term(2, 1, 0);
}

// Adjugate-based inverse, truncated at the given absolute precision.
inline SMat inverse3(const SMat& m, int prec) {
  const gf::Field& F = m.a.front().field();
  Series d = det3(m);
  if (d.is_zero_known()) throw SingularBasis("inverse of a singular series matrix");
  Series dinv = d.inverse(prec);
  auto minor2 = [&](int r0, int r1, int c0, int c1) {
    return m.at(r0, c0) * m.at(r1, c1) - m.at(r0, c1) * m.at(r1, c0);
  };
  SMat inv(F, 3, 3);
  int rs[3][2] = {{1, 2}, {0, 2}, {0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Series cof = minor2(rs[j][0], rs[j][1], rs[i][0], rs[i][1]);
      if ((i + j) % 2 == 1) cof = -cof;
      inv.at(i, j) = (cof * dinv).truncated(prec);
    }
  return inv;
}

// ---------------------------------------------------------------------------
// Hermite canonical basis over the power-series ring.
//
// Column operations over O = GF(q)[[t]] bring any generating set of a rank-3
// lattice to the unique upper-triangular form with exact monomial diagonal
// t^{a_i} and off-diagonal entries reduced modulo the diagonal of their row.
// The caller normalizes homothety separately.

namespace detail {

// index of the column (among active ones) whose entry in `row` has minimal
// valuation; throws PrecisionExhausted when truncation hides the answer
inline int pivot_column(const SMat& m, int row, int first_col, int last_col) {
  int best = -1, best_val = 0;
  int blind_prec = kExactPrec;  // smallest precision among truncated zeros
  for (int c = first_col; c <= last_col; ++c) {
    const Series& s = m.at(row, c);
    if (s.is_zero_known()) continue;
    if (s.is_truncated_zero()) {
      blind_prec = std::min(blind_prec, s.prec());
      continue;
    }
    int v = s.val();
    if (best < 0 || v < best_val) {
      best = c;
      best_val = v;
    }
  }
  if (best >= 0 && best_val > blind_prec)
    throw PrecisionExhausted("pivot hidden below the truncation window");
  if (best < 0 && blind_prec < kExactPrec)
    throw PrecisionExhausted("entire row vanished below the truncation window");
  return best;
}

}  // namespace detail

// Column-reduces a 3 x m generating matrix to the canonical 3x3 basis.
// prec is the working absolute precision for unit inversions.
inline SMat hermite_basis(SMat m, int prec) {
  if (m.rows != 3 || m.cols < 3) throw Error("hermite_basis wants a 3 x (>=3) matrix");
  const gf::Field& F = m.a.front().field();
  // triangularize bottom-up: row r gets its pivot in column r; columns > 2
  // stay eligible until they are emptied, locked pivot columns do not
  for (int r = 2; r >= 0; --r) {
    auto candidates = [&]() {
      std::vector<int> cs;
      for (int c = 0; c <= r; ++c) cs.push_back(c);
      for (int c = 3; c < m.cols; ++c) cs.push_back(c);
      return cs;
    }();
    int pc = -1, pv = 0, blind = kExactPrec;
    for (int c : candidates) {
      const Series& s = m.at(r, c);
      if (s.is_zero_known()) continue;
      if (s.is_truncated_zero()) {
        blind = std::min(blind, s.prec());
        continue;
      }
      if (pc < 0 || s.val() < pv) {
        pc = c;
        pv = s.val();
      }
    }
    if (pc >= 0 && pv > blind) throw PrecisionExhausted("pivot hidden below the truncation window");
    if (pc < 0) {
      if (blind < kExactPrec)
        throw PrecisionExhausted("entire row vanished below the truncation window");
      throw SingularBasis("generators do not span a rank-3 lattice");
    }
    if (pc != r) m.swap_cols(pc, r);
    // normalize the pivot to an exact monomial t^a
    Series pivot = m.at(r, r);
    int a = pivot.val();
    Series unit_inv = pivot.shifted(-a).inverse(prec);
    m.scale_col(r, unit_inv);
    m.at(r, r) = Series::monomial(F, 1, a);  // exact by construction
    // eliminate this row from the still-eligible columns
    for (int c : candidates) {
      if (c == r) continue;
      const Series& e = m.at(r, c);
      if (e.is_zero_known()) continue;
      if (e.is_truncated_zero()) {
        if (e.prec() < a) throw PrecisionExhausted("elimination blocked by truncation");
        continue;
      }
      Series f = e.shifted(-a);  // in O because a was minimal over the candidates
      if (f.val() < 0) throw Error("internal: pivot was not minimal");
      m.add_col(c, r, -f);
      m.at(r, c) = Series::zero(F);  // exact cancellation
    }
  }
  SMat basis(F, 3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) basis.at(i, j) = m.at(i, j);
  // verify leftover generator columns are (known or truncated) zero
  for (int c = 3; c < m.cols; ++c)
    for (int r = 0; r < 3; ++r)
      if (!m.at(r, c).is_zero_known() && !m.at(r, c).is_truncated_zero())
        throw Error("internal: extra generator column did not reduce to zero");
  // reduce the off-diagonal entries modulo the diagonal of their row:
  // h12 by column 1, then h01 and h02 by column 0
  auto reduce = [&](int row, int col) {
    const Series& diag = basis.at(row, row);
    int a = diag.val();
    const Series& e = basis.at(row, col);
    if (e.is_zero_known() || e.is_truncated_zero()) return;
    // strip the part with exponents >= a
    Series keep(F);
    for (int exp = e.val(); exp < std::min(e.prec(), a); ++exp) {
      gf::elt c0 = e.coeff(exp);
      if (c0) keep = keep + Series::monomial(F, c0, exp);
    }
    Series drop = e - keep;  // exponents >= a, divisible by the pivot
    if (!drop.is_zero_known() && !drop.is_truncated_zero()) {
      basis.add_col(col, row, -drop.shifted(-a));
    }
    basis.at(row, col) = keep.truncated(e.prec());
  };
  reduce(1, 2);
  reduce(0, 1);
  reduce(0, 2);
  return basis;
}

// ---------------------------------------------------------------------------
// Smith normal form with transforms: m = U * diag(t^{d0..d2}) * V with U, V
// invertible over O and d0 <= d1 <= d2.

struct SmithResult {
  SMat U;
  SMat V;
  std::array<int, 3> vals{};
};

inline SmithResult smith3(SMat m, int prec) {
  if (m.rows != 3 || m.cols != 3) throw Error("smith3 wants 3x3");
  const gf::Field& F = m.a.front().field();
  SmithResult res{SMat::identity(F, 3), SMat::identity(F, 3), {}};
  for (int k = 0; k < 3; ++k) {
    // locate the global minimum valuation in the trailing submatrix
    int br = -1, bc = -1, bv = 0;
    int blind = kExactPrec;
    for (int r = k; r < 3; ++r)
      for (int c = k; c < 3; ++c) {
        const Series& s = m.at(r, c);
        if (s.is_zero_known()) continue;
        if (s.is_truncated_zero()) {
          blind = std::min(blind, s.prec());
          continue;
        }
        if (br < 0 || s.val() < bv) {
          br = r;
          bc = c;
          bv = s.val();
        }
      }
    if (br >= 0 && bv > blind)
      throw PrecisionExhausted("smith3: pivot hidden below truncation");
    if (br < 0) {
      if (blind < kExactPrec) throw PrecisionExhausted("smith3: pivot hidden below truncation");
      throw SingularBasis("smith3: matrix is singular");
    }
    if (br != k) {
      m.swap_rows(br, k);
      res.U.swap_cols(br, k);
    }
    if (bc != k) {
      m.swap_cols(bc, k);
      res.V.swap_rows(bc, k);
    }
    // scale row k so the pivot becomes the exact monomial t^bv
    Series unit = m.at(k, k).shifted(-bv);
    Series unit_inv = unit.inverse(prec);
    m.scale_row(k, unit_inv);
    res.U.scale_col(k, unit.truncated(prec));
    m.at(k, k) = Series::monomial(F, 1, bv);
    // clear the rest of row k and column k
    for (int r = k + 1; r < 3; ++r) {
      const Series& e = m.at(r, k);
      if (e.is_zero_known()) continue;
      if (e.is_truncated_zero()) {
        if (e.prec() < bv) throw PrecisionExhausted("smith3 elimination blocked");
        continue;
      }
      Series f = e.shifted(-bv);
      m.add_row(r, k, -f);
      res.U.add_col(k, r, f);
      m.at(r, k) = Series::zero(F);
    }
    for (int c = k + 1; c < 3; ++c) {
      const Series& e = m.at(k, c);
      if (e.is_zero_known()) continue;
      if (e.is_truncated_zero()) {
        if (e.prec() < bv) throw PrecisionExhausted("smith3 elimination blocked");
        continue;
      }
      Series f = e.shifted(-bv);
      m.add_col(c, k, -f);
      res.V.add_row(k, c, f);
      m.at(k, c) = Series::zero(F);
    }
    res.vals[k] = bv;
  }
  return res;
}

// Valuations of the diagonal after column reduction to upper-triangular form
// (right multiplication by GL3(O) only).  Row i's valuation is the Iwasawa
// coordinate of the lattice with respect to the Borel group of the row
// order; see the building module for the Busemann use.
inline std::array<int, 3> iwasawa_valuations(SMat m, int prec) {
  if (m.rows != 3 || m.cols != 3) throw Error("iwasawa wants 3x3");
  const gf::Field& F = m.a.front().field();
  for (int r = 2; r >= 0; --r) {
    int pc = detail::pivot_column(m, r, 0, r);
    if (pc < 0) throw SingularBasis("iwasawa: singular matrix");
    if (pc != r) m.swap_cols(pc, r);
    Series pivot = m.at(r, r);
    int a = pivot.val();
    Series unit_inv = pivot.shifted(-a).inverse(prec);
    m.scale_col(r, unit_inv);
    m.at(r, r) = Series::monomial(F, 1, a);
    for (int c = 0; c < r; ++c) {
      const Series& e = m.at(r, c);
      if (e.is_zero_known()) continue;
      if (e.is_truncated_zero()) {
        if (e.prec() < a) throw PrecisionExhausted("iwasawa elimination blocked");
        continue;
      }
      m.add_col(c, r, -e.shifted(-a));
      m.at(r, c) = Series::zero(F);
    }
  }
  return {m.at(0, 0).val(), m.at(1, 1).val(), m.at(2, 2).val()};
}

// ---------------------------------------------------------------------------
// Characteristic polynomial and Newton polygon

// coefficients [c0, c1, c2, c3] of det(x I - m) = c3 x^3 + ... + c0
inline std::array<Series, 4> char_poly3(const SMat& m) {
  const gf::Field& F = m.a.front().field();
  Series tr = m.at(0, 0) + m.at(1, 1) + m.at(2, 2);
  auto principal_minor = [&](int skip) {
    int r0 = (skip == 0) ? 1 : 0, r1 = (skip == 2) ? 1 : 2;
    return m.at(r0, r0) * m.at(r1, r1) - m.at(r0, r1) * m.at(r1, r0);
  };
  Series e2 = principal_minor(0) + principal_minor(1) + principal_minor(2);
  Series d = det3(m);
  return {-d, e2, -tr, Series::one(F)};
}

// Valuations of the roots of a degree-3 polynomial via the lower Newton
// polygon, returned in descending order (multiplicities expanded).
inline std::array<Rational, 3> newton_root_valuations(const std::array<Series, 4>& c) {
  struct Pt {
    int i;
    int v;
  };
  std::vector<Pt> pts;
  for (int i = 0; i < 4; ++i) {
    if (c[i].is_zero_known()) continue;
    pts.push_back({i, c[i].val()});  // truncated zero throws, by design
  }
  if (pts.empty() || pts.front().i != 0)
    throw SingularBasis("newton polygon: zero constant term (singular matrix)");
  if (pts.back().i != 3) throw Error("newton polygon: leading coefficient vanished");
  // lower convex hull, left to right
  std::vector<Pt> hull;
  for (const Pt& p : pts) {
    while (hull.size() >= 2) {
      const Pt& a = hull[hull.size() - 2];
      const Pt& b = hull[hull.size() - 1];
      // drop b if it lies on or above segment a-p
      long lhs = long(b.v - a.v) * (p.i - a.i);
      long rhs = long(p.v - a.v) * (b.i - a.i);
      if (lhs >= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  std::vector<Rational> vals;
  for (size_t s = 0; s + 1 < hull.size(); ++s) {
    int width = hull[s + 1].i - hull[s].i;
    Rational slope(hull[s + 1].v - hull[s].v, width);
    for (int k = 0; k < width; ++k) vals.push_back(-slope);
  }
  if (vals.size() != 3) throw Error("newton polygon: expected three root valuations");
  std::sort(vals.begin(), vals.end(), [](const Rational& a, const Rational& b) { return b < a; });
  return {vals[0], vals[1], vals[2]};
}

// ---------------------------------------------------------------------------
// Matrix JSON: array of rows, each entry an {exponent: coefficient} object

inline nlohmann::json mat_to_json(const SMat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c).to_json());
    rows.push_back(row);
  }
  return rows;
}

inline SMat mat_from_json(const gf::Field& F, const nlohmann::json& j) {
  int rows = int(j.size());
  int cols = rows ? int(j.at(0).size()) : 0;
  SMat m(F, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(r, c) = Series::from_json(F, j.at(r).at(c));
  return m;
}

}  // namespace forge::laurent

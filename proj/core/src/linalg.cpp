#include "kenv/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace kenv {

int rref_inplace(QMat& m, std::vector<int>* pivots) {
  if (pivots) pivots->clear();
  if (m.empty()) return 0;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && is_zero(m[sel][c])) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[r]);
    Scalar inv = 1 / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      Scalar f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    if (pivots) pivots->push_back(static_cast<int>(c));
    ++r;
  }
  return static_cast<int>(r);
}

int rank_of(QMat m) { return rref_inplace(m); }

QMat kernel_basis(const QMat& m) {
  if (m.empty()) return {};
  size_t cols = m[0].size();
  QMat red = m;
  std::vector<int> pivots;
  rref_inplace(red, &pivots);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  QMat basis;
  for (size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    QVec v(cols, Scalar(0));
    v[free_col] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) {
      v[pivots[i]] = -red[i][free_col];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVec> solve(const QMat& m, const QVec& b) {
  if (m.empty()) {
    for (const auto& x : b)
      if (!is_zero(x)) return std::nullopt;
    return QVec{};
  }
  size_t rows = m.size(), cols = m[0].size();
  QMat aug(rows, QVec(cols + 1, Scalar(0)));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = m[i][j];
    aug[i][cols] = b[i];
  }
  std::vector<int> pivots;
  rref_inplace(aug, &pivots);
  for (size_t i = 0; i < rows; ++i) {
    bool all_zero = true;
    for (size_t j = 0; j < cols; ++j)
      if (!is_zero(aug[i][j])) {
        all_zero = false;
        break;
      }
    if (all_zero && !is_zero(aug[i][cols])) return std::nullopt;
  }
  QVec x(cols, Scalar(0));
  for (size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == static_cast<int>(cols)) return std::nullopt;  // pivot in rhs
    x[pivots[i]] = aug[i][cols];
  }
  return x;
}

void RowSpan::reduce(QVec& v) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Scalar& c = v[pivot_cols_[i]];
    if (is_zero(c)) continue;
    Scalar f = c;
    const QVec& row = rows_[i];
    for (size_t j = pivot_cols_[i]; j < width_; ++j) v[j] -= f * row[j];
  }
}

bool RowSpan::add(QVec v) {
  if (v.size() != width_) throw std::invalid_argument("RowSpan width mismatch");
  reduce(v);
  int pivot = -1;
  for (size_t j = 0; j < width_; ++j) {
    if (!is_zero(v[j])) {
      pivot = static_cast<int>(j);
      break;
    }
  }
  if (pivot < 0) return false;
  Scalar inv = 1 / v[pivot];
  for (size_t j = pivot; j < width_; ++j) v[j] *= inv;
  // Back-substitute into existing rows so the span stays fully reduced.
  for (size_t i = 0; i < rows_.size(); ++i) {
    Scalar f = rows_[i][pivot];
    if (is_zero(f)) continue;
    for (size_t j = pivot; j < width_; ++j) rows_[i][j] -= f * v[j];
  }
  size_t at = 0;
  while (at < pivot_cols_.size() && pivot_cols_[at] < pivot) ++at;
  rows_.insert(rows_.begin() + at, std::move(v));
  pivot_cols_.insert(pivot_cols_.begin() + at, pivot);
  return true;
}

bool RowSpan::contains(QVec v) const {
  reduce(v);
  for (const auto& c : v)
    if (!is_zero(c)) return false;
  return true;
}

namespace {

struct Constraint {
  QVec a;     // coefficients over remaining variables
  Scalar b;   // a . phi >= b
};

}  // namespace

std::optional<QVec> fourier_motzkin_solve(const QMat& a, const QVec& rhs) {
  size_t nvars = a.empty() ? 0 : a[0].size();
  std::vector<std::vector<Constraint>> stages(nvars + 1);
  std::vector<Constraint> cur;
  for (size_t i = 0; i < a.size(); ++i) cur.push_back({a[i], rhs[i]});

  // Eliminate variables from the back.
  for (size_t v = nvars; v-- > 0;) {
    stages[v + 1] = cur;
    std::vector<Constraint> next;
    std::vector<const Constraint*> pos, neg;
    for (const auto& c : cur) {
      if (sgn(c.a[v]) > 0) pos.push_back(&c);
      else if (sgn(c.a[v]) < 0) neg.push_back(&c);
      else next.push_back(c);
    }
    for (const auto* p : pos)
      for (const auto* q : neg) {
        // p->a[v] * (q scaled) + |q->a[v]| * (p scaled) eliminates v.
        Scalar cp = p->a[v], cq = -q->a[v];
        Constraint c;
        c.a.assign(nvars, Scalar(0));
        for (size_t j = 0; j < nvars; ++j) c.a[j] = cq * p->a[j] + cp * q->a[j];
        c.b = cq * p->b + cp * q->b;
        next.push_back(std::move(c));
      }
    cur = std::move(next);
  }
  for (const auto& c : cur) {
    if (sgn(c.b) > 0) return std::nullopt;  // 0 >= b with b > 0
  }

  // Back-substitute, picking a value inside the interval at each stage.
  QVec phi(nvars, Scalar(0));
  for (size_t v = 0; v < nvars; ++v) {
    bool has_lo = false, has_hi = false;
    Scalar lo(0), hi(0);
    for (const auto& c : stages[v + 1]) {
      if (is_zero(c.a[v])) continue;
      Scalar acc = c.b;
      for (size_t j = 0; j < v; ++j) acc -= c.a[j] * phi[j];
      // later variables not yet assigned must have zero coefficient here
      Scalar bound = acc / c.a[v];
      if (sgn(c.a[v]) > 0) {
        if (!has_lo || bound > lo) lo = bound, has_lo = true;
      } else {
        if (!has_hi || bound < hi) hi = bound, has_hi = true;
      }
    }
    if (has_lo && has_hi) {
      if (lo > hi) return std::nullopt;
      phi[v] = (lo + hi) / 2;
    } else if (has_lo) {
      phi[v] = lo;
    } else if (has_hi) {
      phi[v] = hi;
    }
  }
  return phi;
}

}  // namespace kenv

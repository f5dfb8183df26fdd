#pragma once
// Matrices whose entries are forms of a common degree, with the product
// (A B)(i, j) = sum_k A(i, k) ^ B(k, j), and the check/hat isomorphism
// between R^3-rows of forms and skew 3x3 matrices of forms.

#include <stdexcept>
#include <string>
#include <vector>

#include "g2frames/exterior.hpp"

namespace g2frames {

template <class S>
class MatrixForm {
 public:
  MatrixForm() = default;
  MatrixForm(int rows, int cols, int dim, int degree) : rows_(rows), cols_(cols), degree_(degree) {
    entries_.assign(rows * cols, Form<S>(dim, degree));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int degree() const { return degree_; }
  int dim() const { return entries_.empty() ? 0 : entries_.front().dim(); }

  const Form<S>& operator()(int i, int j) const { return entries_[i * cols_ + j]; }
  Form<S>& operator()(int i, int j) { return entries_[i * cols_ + j]; }

  /// Row vector (1 x n) from a list of forms.
  static MatrixForm row(const std::vector<Form<S>>& forms) {
    if (forms.empty()) throw DimensionError("empty row of forms");
    MatrixForm m(1, static_cast<int>(forms.size()), forms.front().dim(), forms.front().degree());
    for (int j = 0; j < m.cols_; ++j) m.set(0, j, forms[j]);
    return m;
  }

  void set(int i, int j, const Form<S>& f) {
    if (f.degree() != degree_ || f.dim() != dim())
      throw DimensionError("matrix entry of degree " + std::to_string(f.degree()) + " in a matrix of degree " +
                           std::to_string(degree_));
    (*this)(i, j) = f;
  }

  MatrixForm transpose() const {
    MatrixForm t(cols_, rows_, dim(), degree_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  MatrixForm& operator+=(const MatrixForm& o) {
    checkShape(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  MatrixForm& operator-=(const MatrixForm& o) {
    checkShape(o);
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  MatrixForm& operator*=(double s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }
  friend MatrixForm operator+(MatrixForm a, const MatrixForm& b) { return a += b; }
  friend MatrixForm operator-(MatrixForm a, const MatrixForm& b) { return a -= b; }
  friend MatrixForm operator*(double s, MatrixForm a) { return a *= s; }

  friend MatrixForm operator*(const MatrixForm& a, const MatrixForm& b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("matrix-of-forms product of shapes " + std::to_string(a.rows_) + "x" +
                           std::to_string(a.cols_) + " and " + std::to_string(b.rows_) + "x" +
                           std::to_string(b.cols_));
    const int n = a.dim();
    const int k = std::min(a.degree_ + b.degree_, n);
    MatrixForm out(a.rows_, b.cols_, n, k);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j)
        for (int l = 0; l < a.cols_; ++l) out(i, j) += wedge(a(i, l), b(l, j));
    return out;
  }

  /// Entry (0, 0) of a 1x1 matrix.
  const Form<S>& scalarEntry() const {
    if (rows_ != 1 || cols_ != 1) throw DimensionError("not a 1x1 matrix of forms");
    return entries_.front();
  }

 private:
  void checkShape(const MatrixForm& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || degree_ != o.degree_) throw DimensionError("matrix shapes differ");
  }

  int rows_ = 0;
  int cols_ = 0;
  int degree_ = 0;
  std::vector<Form<S>> entries_;
};

/// alpha = (a1, a2, a3)  ->  [[0, -a3, a2], [a3, 0, -a1], [-a2, a1, 0]].
template <class S>
MatrixForm<S> check(const MatrixForm<S>& row) {
  if (row.rows() != 1 || row.cols() != 3) throw DimensionError("check expects a row of exactly 3 forms");
  const auto& a1 = row(0, 0);
  const auto& a2 = row(0, 1);
  const auto& a3 = row(0, 2);
  MatrixForm<S> m(3, 3, row.dim(), row.degree());
  m(0, 1) = -a3;
  m(0, 2) = a2;
  m(1, 0) = a3;
  m(1, 2) = -a1;
  m(2, 0) = -a2;
  m(2, 1) = a1;
  return m;
}

template <class S>
MatrixForm<S> check(const std::vector<Form<S>>& row) {
  return check(MatrixForm<S>::row(row));
}

/// Left inverse of check: A -> (a32, -a31, a21).
template <class S>
MatrixForm<S> hat(const MatrixForm<S>& a) {
  if (a.rows() != 3 || a.cols() != 3) throw DimensionError("hat expects a 3x3 matrix of forms");
  return MatrixForm<S>::row({a(2, 1), -a(2, 0), a(1, 0)});
}

template <int D, int P>
  requires(P >= 1)
MatrixForm<Jet<D, P - 1>> exteriorDerivative(const MatrixForm<Jet<D, P>>& m) {
  const int k = std::min(m.degree() + 1, D);
  MatrixForm<Jet<D, P - 1>> out(m.rows(), m.cols(), D, k);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = exteriorDerivative(m(i, j));
  return out;
}

template <int Q, int D, int P>
MatrixForm<Jet<D, Q>> truncate(const MatrixForm<Jet<D, P>>& m) {
  MatrixForm<Jet<D, Q>> out(m.rows(), m.cols(), D, m.degree());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = truncate<Q>(m(i, j));
  return out;
}

template <int D2, int Q, int D1, int P>
MatrixForm<Jet<D2, Q>> liftMatrix(const MatrixForm<Jet<D1, P>>& m, int offset) {
  MatrixForm<Jet<D2, Q>> out(m.rows(), m.cols(), D2, m.degree());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = liftForm<D2, Q>(m(i, j), offset);
  return out;
}

template <int D, int P>
MatrixForm<double> value(const MatrixForm<Jet<D, P>>& m) {
  MatrixForm<double> out(m.rows(), m.cols(), D, m.degree());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = value(m(i, j));
  return out;
}

inline double maxAbs(const MatrixForm<double>& m) {
  double r = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r = std::max(r, maxAbs(m(i, j)));
  return r;
}

/// Max-abs of A(i, j) + A(j, i) over all entries.
inline double skewDefect(const MatrixForm<double>& m) {
  double r = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r = std::max(r, maxAbs(m(i, j) + m(j, i)));
  return r;
}

}  // namespace g2frames

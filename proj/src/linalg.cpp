#include "esdsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "esdsim/errors.hpp"

namespace esd {

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product shape mismatch");
  CMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const cplx aik = (*this)(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        out(i, j) += aik * rhs(k, j);
      }
    }
  }
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw DimensionMismatch("matrix sum shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw DimensionMismatch("matrix difference shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

CMatrix CMatrix::operator*(const cplx& s) const {
  CMatrix out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

CMatrix CMatrix::dagger() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

cplx CMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::unitarity_defect() const {
  if (rows_ != cols_) return 1.0;
  const CMatrix p = dagger() * (*this);
  return max_abs_diff(p, identity(rows_));
}

double CMatrix::hermiticity_defect() const {
  if (rows_ != cols_) return 1.0;
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("max_abs_diff shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

cplx determinant(CMatrix a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of non-square matrix");
  const std::size_t n = a.rows();
  cplx det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

// Cyclic Jacobi diagonalization of a Hermitian matrix, in place. When
// `accumulate` is non-null it is right-multiplied by every rotation, so a
// caller that passes the identity receives the eigenvector matrix.
static void jacobi_diagonalize(CMatrix& a, CMatrix* accumulate) {
  const std::size_t n = a.rows();
  // Symmetrize away rounding noise.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  double scale = std::max(1.0, a.max_abs());
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-15 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        // Phase-rotate the (p,q) entry real, then a real Jacobi rotation.
        const double phi = std::arg(apq);
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
        const double c = std::cos(theta), s = std::sin(theta);
        const cplx eip = std::polar(1.0, phi);
        // Column update: B = A * J with J[p][p]=c, J[q][p]=e^{-i phi} s,
        // J[p][q]=-s, J[q][q]=e^{-i phi} c.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * std::conj(eip) * s;
          a(k, q) = -akp * s + akq * std::conj(eip) * c;
        }
        // Row update: A = J^dag * B.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + eip * s * aqk;
          a(q, k) = -s * apk + eip * c * aqk;
        }
        if (accumulate) {
          CMatrix& v = *accumulate;
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = v(k, p), vkq = v(k, q);
            v(k, p) = vkp * c + vkq * std::conj(eip) * s;
            v(k, q) = -vkp * s + vkq * std::conj(eip) * c;
          }
        }
      }
    }
  }
}

std::vector<double> hermitian_eigenvalues(CMatrix a) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("eigenvalues of non-square matrix");
  const std::size_t n = a.rows();
  jacobi_diagonalize(a, nullptr);
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

void hermitian_eigensystem(CMatrix a, std::vector<double>& values,
                           CMatrix& vectors) {
  if (a.rows() != a.cols())
    throw DimensionMismatch("eigensystem of non-square matrix");
  const std::size_t n = a.rows();
  vectors = CMatrix::identity(n);
  jacobi_diagonalize(a, &vectors);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  values.resize(n);
  CMatrix sorted(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) sorted(i, j) = vectors(i, order[j]);
  }
  vectors = std::move(sorted);
}

CMatrix embed_unitary(const CMatrix& g, const std::vector<int>& targets,
                      int n_qubits) {
  const std::size_t k = targets.size();
  if (k < 1 || k > 2 || g.rows() != g.cols() || g.rows() != (1u << k))
    throw DimensionMismatch("embed_unitary expects a 2x2 or 4x4 gate");
  for (int t : targets)
    if (t < 0 || t >= n_qubits) throw BadTarget("embed_unitary target out of range");
  if (k == 2 && targets[0] == targets[1])
    throw BadTarget("embed_unitary repeated target");
  const std::size_t dim = std::size_t{1} << n_qubits;
  CMatrix out(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t sub_c = 0;
    for (std::size_t b = 0; b < k; ++b)
      sub_c |= ((col >> targets[b]) & 1u) << b;
    std::size_t base = col;
    for (std::size_t b = 0; b < k; ++b) base &= ~(std::size_t{1} << targets[b]);
    for (std::size_t sub_r = 0; sub_r < (std::size_t{1} << k); ++sub_r) {
      std::size_t row = base;
      for (std::size_t b = 0; b < k; ++b)
        if ((sub_r >> b) & 1u) row |= std::size_t{1} << targets[b];
      out(row, col) = g(sub_r, sub_c);
    }
  }
  return out;
}

std::vector<double> solve_linear_real(std::vector<double> a,
                                      std::vector<double> b, std::size_t n) {
  if (a.size() != n * n || b.size() != n)
    throw DimensionMismatch("solve_linear_real shape mismatch");
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (std::abs(a[pivot * n + col]) < 1e-12 * scale)
      throw Error("linear solve: matrix is singular to working precision");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[pivot * n + j], a[col * n + j]);
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

std::vector<double> nnls(const std::vector<double>& a, std::size_t m,
                         std::size_t n, const std::vector<double>& b) {
  if (a.size() != m * n || b.size() != m)
    throw DimensionMismatch("nnls shape mismatch");
  std::vector<double> x(n, 0.0);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12;

  auto residual_gradient = [&]() {
    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < n; ++j) s -= a[i * n + j] * x[j];
      r[i] = s;
    }
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += a[i * n + j] * r[i];
      w[j] = s;
    }
    return w;
  };

  // Least squares restricted to the passive set, via normal equations.
  auto solve_passive = [&]() {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    const std::size_t k = idx.size();
    std::vector<double> ata(k * k, 0.0), atb(k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = 0; q < k; ++q) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
          s += a[i * n + idx[p]] * a[i * n + idx[q]];
        ata[p * k + q] = s;
      }
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += a[i * n + idx[p]] * b[i];
      atb[p] = s;
    }
    std::vector<double> zk = solve_linear_real(std::move(ata), std::move(atb), k);
    std::vector<double> z(n, 0.0);
    for (std::size_t p = 0; p < k; ++p) z[idx[p]] = zk[p];
    return z;
  };

  for (std::size_t outer = 0; outer < 4 * n + 8; ++outer) {
    const std::vector<double> w = residual_gradient();
    std::size_t best = n;
    double best_w = tol;
    for (std::size_t j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best == n) break;
    passive[best] = true;

    for (std::size_t inner = 0; inner < 4 * n + 8; ++inner) {
      std::vector<double> z = solve_passive();
      bool feasible = true;
      double alpha = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= tol) {
          feasible = false;
          const double denom = x[j] - z[j];
          if (denom > 0) alpha = std::min(alpha, x[j] / denom);
        }
      }
      if (feasible) {
        x = std::move(z);
        break;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (!passive[j]) continue;
        x[j] += alpha * (z[j] - x[j]);
        if (x[j] <= tol) {
          x[j] = 0.0;
          passive[j] = false;
        }
      }
    }
  }
  return x;
}

}  // namespace esd

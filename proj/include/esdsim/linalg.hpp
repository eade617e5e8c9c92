#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace esd {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Registers here are at most five qubits, so
// every matrix is 32x32 or smaller and a plain vector is the right storage.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  CMatrix operator*(const CMatrix& rhs) const;
  CMatrix operator+(const CMatrix& rhs) const;
  CMatrix operator-(const CMatrix& rhs) const;
  CMatrix operator*(const cplx& s) const;

  CMatrix dagger() const;
  CMatrix transpose() const;
  cplx trace() const;
  double max_abs() const;
  // max |U^dag U - I|; zero for a unitary matrix.
  double unitarity_defect() const;
  // max |A - A^dag|.
  double hermiticity_defect() const;

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

// LU with partial pivoting; fine for the 4x4/32x32 sizes used here.
cplx determinant(CMatrix a);

// Eigenvalues of a Hermitian matrix (cyclic Jacobi), ascending. The input is
// symmetrized first so callers may pass matrices Hermitian only to rounding.
std::vector<double> hermitian_eigenvalues(CMatrix a);

// Same, also returning the unitary whose k-th column is the k-th eigenvector.
void hermitian_eigensystem(CMatrix a, std::vector<double>& values,
                           CMatrix& vectors);

// Lift a one- or two-qubit unitary to the full 2^n space. Qubit 0 is the least
// significant index bit; targets[0] is the low bit of the small matrix.
CMatrix embed_unitary(const CMatrix& g, const std::vector<int>& targets,
                      int n_qubits);

// Solve a (dense, row-major) real linear system in place; partial pivoting.
// Throws esd::Error when a pivot falls below tolerance.
std::vector<double> solve_linear_real(std::vector<double> a,
                                      std::vector<double> b, std::size_t n);

// Non-negative least squares (Lawson-Hanson): minimize |A x - b| with x >= 0.
// `a` is m x n row-major. Throws esd::Error if the active-set solve goes
// singular (rank-deficient A).
std::vector<double> nnls(const std::vector<double>& a, std::size_t m,
                         std::size_t n, const std::vector<double>& b);

}  // namespace esd

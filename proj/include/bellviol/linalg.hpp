#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace bellviol {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Value type; every operation returns a fresh
// result.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<Complex>& entries() const { return data_; }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  bool is_finite() const;
  // Largest |m(r,c) - conj(m(c,r))|.
  double hermiticity_defect() const;
  double max_abs_diff(const ComplexMatrix& other) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// I, sigma_x, sigma_y, sigma_z for i = 0..3. Throws std::out_of_range otherwise.
ComplexMatrix pauli(int i);

// Tr(a b) as sum_ij a_ij b_ji, without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

using RealVec3 = std::array<double, 3>;
using RealMat3 = std::array<std::array<double, 3>, 3>;

double dot(const RealVec3& a, const RealVec3& b);
double norm(const RealVec3& v);
RealVec3 cross(const RealVec3& a, const RealVec3& b);
// Some unit vector orthogonal to the unit vector u.
RealVec3 any_orthogonal(const RealVec3& u);
RealVec3 normalized(const RealVec3& v);
RealVec3 operator+(const RealVec3& a, const RealVec3& b);
RealVec3 operator-(const RealVec3& a, const RealVec3& b);
RealVec3 operator*(double s, const RealVec3& v);

// Point on the unit sphere, (cos t cos p, cos t sin p, sin t).
RealVec3 unit_from_angles(double theta, double phi);

// a . sigma
ComplexMatrix dot_sigma(const RealVec3& a);

// Symmetric 3x3 real matrix stored by its six independent entries.
struct RealSym3 {
  double xx = 0, yy = 0, zz = 0;
  double xy = 0, xz = 0, yz = 0;

  double trace() const { return xx + yy + zz; }
  double determinant() const;
  RealMat3 full() const;
};

// m^T m
RealSym3 gram(const RealMat3& m);

// Eigenvalues of a symmetric 3x3 matrix in descending order. Closed-form
// trigonometric solution of the characteristic cubic, falling back to cyclic
// Jacobi rotations when the spectrum is close to degenerate.
std::array<double, 3> eig_sym3(const RealSym3& m);

// Jacobi-only path, exposed for testing the fallback.
std::array<double, 3> eig_sym3_jacobi(const RealSym3& m);

struct SymEigen3 {
  std::array<double, 3> values;  // descending
  std::array<RealVec3, 3> vectors;  // vectors[k] belongs to values[k]
};

// Eigenpairs by cyclic Jacobi rotations.
SymEigen3 eig_sym3_vectors(const RealSym3& m);

}  // namespace bellviol

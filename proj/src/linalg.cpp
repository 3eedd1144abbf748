#include "bellviol/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellviol {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("ComplexMatrix: entry count does not match dimensions");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::is_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double ComplexMatrix::hermiticity_defect() const {
  if (!is_square()) return INFINITY;
  double worst = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("ComplexMatrix: dimension mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("ComplexMatrix: dimension mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("ComplexMatrix: dimension mismatch in *");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex ark = a(r, k);
      if (ark == 0.0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      if (s == 0.0) continue;
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

ComplexMatrix pauli(int i) {
  const Complex I(0.0, 1.0);
  switch (i) {
    case 0: return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, 1.0});
    case 1: return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0});
    case 2: return ComplexMatrix(2, 2, {0.0, -I, I, 0.0});
    case 3: return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0});
    default: throw std::out_of_range("pauli: index must be in 0..3");
  }
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
    throw std::invalid_argument("trace_product: dimension mismatch");
  const std::size_t n = a.rows();
  Complex t = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t += a(i, j) * b(j, i);
  return t;
}

double dot(const RealVec3& a, const RealVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const RealVec3& v) { return std::sqrt(dot(v, v)); }

RealVec3 cross(const RealVec3& a, const RealVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

RealVec3 any_orthogonal(const RealVec3& u) {
  std::size_t smallest = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(u[i]) < std::abs(u[smallest])) smallest = i;
  RealVec3 axis{};
  axis[smallest] = 1.0;
  return normalized(cross(u, axis));
}

RealVec3 normalized(const RealVec3& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
  return {v[0] / n, v[1] / n, v[2] / n};
}

RealVec3 operator+(const RealVec3& a, const RealVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
RealVec3 operator-(const RealVec3& a, const RealVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
RealVec3 operator*(double s, const RealVec3& v) { return {s * v[0], s * v[1], s * v[2]}; }

RealVec3 unit_from_angles(double theta, double phi) {
  const double ct = std::cos(theta);
  return {ct * std::cos(phi), ct * std::sin(phi), std::sin(theta)};
}

ComplexMatrix dot_sigma(const RealVec3& a) {
  const Complex I(0.0, 1.0);
  return ComplexMatrix(2, 2, {a[2], a[0] - I * a[1], a[0] + I * a[1], -a[2]});
}

double RealSym3::determinant() const {
  return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
}

RealMat3 RealSym3::full() const { return {{{xx, xy, xz}, {xy, yy, yz}, {xz, yz, zz}}}; }

RealSym3 gram(const RealMat3& m) {
  auto col_dot = [&](int a, int b) {
    return m[0][a] * m[0][b] + m[1][a] * m[1][b] + m[2][a] * m[2][b];
  };
  RealSym3 g;
  g.xx = col_dot(0, 0);
  g.yy = col_dot(1, 1);
  g.zz = col_dot(2, 2);
  g.xy = col_dot(0, 1);
  g.xz = col_dot(0, 2);
  g.yz = col_dot(1, 2);
  return g;
}

namespace {

std::array<double, 3> sorted_desc(std::array<double, 3> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

SymEigen3 eig_sym3_vectors(const RealSym3& m) {
  RealMat3 a = m.full();
  RealMat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    const double scale = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2] + off;
    if (off == 0.0 || off <= 1e-30 * scale) break;
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- J^T A J, V <- V J with J the (p,q) rotation.
        for (std::size_t k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  SymEigen3 out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t col = order[k];
    out.values[k] = a[col][col];
    out.vectors[k] = {v[0][col], v[1][col], v[2][col]};
  }
  return out;
}

std::array<double, 3> eig_sym3_jacobi(const RealSym3& m) { return eig_sym3_vectors(m).values; }

std::array<double, 3> eig_sym3(const RealSym3& m) {
  const double p1 = m.xy * m.xy + m.xz * m.xz + m.yz * m.yz;
  if (p1 == 0.0) return sorted_desc({m.xx, m.yy, m.zz});

  const double q = m.trace() / 3.0;
  const double dx = m.xx - q, dy = m.yy - q, dz = m.zz - q;
  const double p2 = dx * dx + dy * dy + dz * dz + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);

  RealSym3 b{dx / p, dy / p, dz / p, m.xy / p, m.xz / p, m.yz / p};
  const double r = b.determinant() / 2.0;
  // 1 - r^2 is the normalized discriminant of the characteristic cubic.
  if (1.0 - r * r < 1e-14) return eig_sym3_jacobi(m);

  const double phi = std::acos(std::clamp(r, -1.0, 1.0)) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  return sorted_desc({e1, e2, e3});
}

}  // namespace bellviol

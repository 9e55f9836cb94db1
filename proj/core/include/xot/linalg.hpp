#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace xot::linalg {

using cdouble = std::complex<double>;

// Tolerances shared across the library.
inline constexpr double kNormTol = 1e-12;      // state normalisation
inline constexpr double kHermitianTol = 1e-12; // max |M - M^dag| elementwise
inline constexpr double kPsdTol = 1e-10;       // min eigenvalue floor
inline constexpr double kSupportCutoff = 1e-12; // eigenvalues below this count as zero
inline constexpr double kJacobiOffTol = 1e-14; // off-diagonal Frobenius norm at convergence

class CMat;

// Dense complex vector of small dimension.
class CVec {
 public:
  CVec() = default;
  explicit CVec(int dim) : v_(dim) {}
  CVec(std::initializer_list<cdouble> xs) : v_(xs) {}
  static CVec basis(int dim, int k);

  int dim() const { return static_cast<int>(v_.size()); }
  cdouble& operator[](int i) { return v_[i]; }
  const cdouble& operator[](int i) const { return v_[i]; }

  double norm() const;
  bool is_normalized(double tol = kNormTol) const;
  CVec normalized() const;

  CVec& operator+=(const CVec& o);
  CVec& operator-=(const CVec& o);
  CVec& operator*=(cdouble s);

 private:
  std::vector<cdouble> v_;
};

CVec operator+(CVec a, const CVec& b);
CVec operator-(CVec a, const CVec& b);
CVec operator*(cdouble s, CVec a);

// <a|b>, conjugate-linear in the first argument.
cdouble inner(const CVec& a, const CVec& b);
// |a><b|
CMat outer(const CVec& a, const CVec& b);
CVec kron(const CVec& a, const CVec& b);

// Dense complex matrix, row-major.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), m_(rows * cols) {}
  static CMat identity(int n);
  static CMat diag(const std::vector<cdouble>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cdouble& at(int i, int j) { return m_[i * cols_ + j]; }
  const cdouble& at(int i, int j) const { return m_[i * cols_ + j]; }

  CMat adjoint() const;
  cdouble trace() const;
  double frobenius_norm() const;
  // Largest elementwise |M - M^dag|; zero for exactly Hermitian input.
  double max_asymmetry() const;
  bool is_hermitian(double tol = kHermitianTol) const;

  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat& operator*=(cdouble s);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cdouble> m_;
};

CMat operator+(CMat a, const CMat& b);
CMat operator-(CMat a, const CMat& b);
CMat operator*(cdouble s, CMat a);
CMat operator*(const CMat& a, const CMat& b);
CVec operator*(const CMat& m, const CVec& v);

// <v|M|v>
cdouble expectation(const CMat& m, const CVec& v);
double max_abs_diff(const CMat& a, const CMat& b);

struct EigResult {
  std::vector<double> values; // ascending
  CMat vectors;               // column k is the eigenvector for values[k]
};

// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
// Rejects non-Hermitian input (beyond kHermitianTol) with the max asymmetry in
// the message. Intended for dimensions up to ~32.
EigResult hermitian_eig(const CMat& m);

// Hermitian within kHermitianTol and min eigenvalue >= -kPsdTol.
bool is_psd(const CMat& m);

// m^(1/2) or m^(-1/2) for PSD m; half = +1 or -1. The inverse root is taken on
// the support only: eigenvalues below kSupportCutoff map to zero. Eigenvalues
// below -kPsdTol are rejected.
CMat mat_pow_half(const CMat& m, int half);

CMat kron(const CMat& a, const CMat& b);

enum class Keep { first, second };

// Partial trace of an operator on C^d1 (x) C^d2, keeping the named factor.
CMat partial_trace(const CMat& m, int d1, int d2, Keep keep);

double min_eigenvalue(const CMat& hermitian);

}  // namespace xot::linalg

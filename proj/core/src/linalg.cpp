#include "xot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace xot::linalg {

CVec CVec::basis(int dim, int k) {
  CVec v(dim);
  v[k] = 1.0;
  return v;
}

double CVec::norm() const {
  double s = 0.0;
  for (const auto& x : v_) s += std::norm(x);
  return std::sqrt(s);
}

bool CVec::is_normalized(double tol) const {
  double n2 = 0.0;
  for (const auto& x : v_) n2 += std::norm(x);
  return std::abs(n2 - 1.0) <= tol;
}

CVec CVec::normalized() const {
  double n = norm();
  if (n == 0.0) throw std::invalid_argument("CVec::normalized: zero vector");
  CVec out = *this;
  for (int i = 0; i < out.dim(); ++i) out[i] /= n;
  return out;
}

CVec& CVec::operator+=(const CVec& o) {
  for (int i = 0; i < dim(); ++i) v_[i] += o[i];
  return *this;
}
CVec& CVec::operator-=(const CVec& o) {
  for (int i = 0; i < dim(); ++i) v_[i] -= o[i];
  return *this;
}
CVec& CVec::operator*=(cdouble s) {
  for (auto& x : v_) x *= s;
  return *this;
}

CVec operator+(CVec a, const CVec& b) { return a += b; }
CVec operator-(CVec a, const CVec& b) { return a -= b; }
CVec operator*(cdouble s, CVec a) { return a *= s; }

cdouble inner(const CVec& a, const CVec& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  cdouble s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

CMat outer(const CVec& a, const CVec& b) {
  CMat m(a.dim(), b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) m.at(i, j) = a[i] * std::conj(b[j]);
  return m;
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

CMat CMat::identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMat CMat::diag(const std::vector<cdouble>& d) {
  CMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows(); ++i) m.at(i, i) = d[i];
  return m;
}

CMat CMat::adjoint() const {
  CMat out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
  return out;
}

cdouble CMat::trace() const {
  cdouble s = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) s += at(i, i);
  return s;
}

double CMat::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : m_) s += std::norm(x);
  return std::sqrt(s);
}

double CMat::max_asymmetry() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
  return worst;
}

bool CMat::is_hermitian(double tol) const { return max_asymmetry() <= tol; }

CMat& CMat::operator+=(const CMat& o) {
  for (std::size_t i = 0; i < m_.size(); ++i) m_[i] += o.m_[i];
  return *this;
}
CMat& CMat::operator-=(const CMat& o) {
  for (std::size_t i = 0; i < m_.size(); ++i) m_[i] -= o.m_[i];
  return *this;
}
CMat& CMat::operator*=(cdouble s) {
  for (auto& x : m_) x *= s;
  return *this;
}

CMat operator+(CMat a, const CMat& b) { return a += b; }
CMat operator-(CMat a, const CMat& b) { return a -= b; }
CMat operator*(cdouble s, CMat a) { return a *= s; }

CMat operator*(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("CMat multiply: dimension mismatch");
  CMat out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      cdouble aik = a.at(i, k);
      if (aik == cdouble(0.0)) continue;
      for (int j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

CVec operator*(const CMat& m, const CVec& v) {
  if (m.cols() != v.dim()) throw std::invalid_argument("CMat apply: dimension mismatch");
  CVec out(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    cdouble s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += m.at(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

cdouble expectation(const CMat& m, const CVec& v) { return inner(v, m * v); }

double max_abs_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
  return worst;
}

namespace {

double off_diagonal_norm(const CMat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a.at(i, j));
  return std::sqrt(s);
}

}  // namespace

EigResult hermitian_eig(const CMat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
  const double asym = m.max_asymmetry();
  if (asym > kHermitianTol) {
    std::ostringstream os;
    os << "hermitian_eig: input not Hermitian, max |M - M^dag| = " << asym;
    throw std::invalid_argument(os.str());
  }
  const int n = m.rows();

  // Work on the exactly Hermitian average (kills the sub-tolerance asymmetry).
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
  CMat v = CMat::identity(n);

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kJacobiOffTol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cdouble b = a.at(p, q);
        const double babs = std::abs(b);
        if (babs < 1e-300) continue;
        const cdouble phase = b / babs;
        const double app = a.at(p, p).real();
        const double aqq = a.at(q, q).real();
        // Rotation angle from tan(2 theta) = 2|b| / (app - aqq); |theta| <= pi/4.
        const double tau = (app - aqq) / (2.0 * babs);
        double t;
        if (tau >= 0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary J: J(p,p)=c, J(q,q)=c, J(p,q)=-s*phase, J(q,p)=s*conj(phase).
        // Update A <- J^dag A J.
        for (int i = 0; i < n; ++i) {
          const cdouble aip = a.at(i, p), aiq = a.at(i, q);
          a.at(i, p) = c * aip + s * std::conj(phase) * aiq;
          a.at(i, q) = -s * phase * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const cdouble apj = a.at(p, j), aqj = a.at(q, j);
          a.at(p, j) = c * apj + s * phase * aqj;
          a.at(q, j) = -s * std::conj(phase) * apj + c * aqj;
        }
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        a.at(p, p) = cdouble(a.at(p, p).real(), 0.0);
        a.at(q, q) = cdouble(a.at(q, q).real(), 0.0);
        for (int i = 0; i < n; ++i) {
          const cdouble vip = v.at(i, p), viq = v.at(i, q);
          v.at(i, p) = c * vip + s * std::conj(phase) * viq;
          v.at(i, q) = -s * phase * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a.at(i, i).real() < a.at(j, j).real(); });

  EigResult res;
  res.values.resize(n);
  res.vectors = CMat(n, n);
  for (int k = 0; k < n; ++k) {
    res.values[k] = a.at(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) res.vectors.at(i, k) = v.at(i, order[k]);
  }
  return res;
}

CMat mat_pow_half(const CMat& m, int half) {
  if (half != 1 && half != -1)
    throw std::invalid_argument("mat_pow_half: exponent must be +1 (sqrt) or -1 (inverse sqrt)");
  EigResult eig = hermitian_eig(m);
  for (double lam : eig.values) {
    if (lam < -kPsdTol) {
      std::ostringstream os;
      os << "mat_pow_half: matrix not PSD, eigenvalue " << lam;
      throw std::invalid_argument(os.str());
    }
  }
  const int n = m.rows();
  CMat out(n, n);
  for (int k = 0; k < n; ++k) {
    double lam = std::max(eig.values[k], 0.0);
    double f;
    if (half == 1) {
      f = std::sqrt(lam);
    } else {
      f = (lam < kSupportCutoff) ? 0.0 : 1.0 / std::sqrt(lam);
    }
    if (f == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.at(i, j) += f * eig.vectors.at(i, k) * std::conj(eig.vectors.at(j, k));
  }
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cdouble aij = a.at(i, j);
      if (aij == cdouble(0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out.at(i * b.rows() + k, j * b.cols() + l) = aij * b.at(k, l);
    }
  return out;
}

CMat partial_trace(const CMat& m, int d1, int d2, Keep keep) {
  if (m.rows() != m.cols() || m.rows() != d1 * d2)
    throw std::invalid_argument("partial_trace: dimensions do not match d1*d2");
  if (keep == Keep::first) {
    CMat out(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) {
        cdouble s = 0.0;
        for (int k = 0; k < d2; ++k) s += m.at(i * d2 + k, j * d2 + k);
        out.at(i, j) = s;
      }
    return out;
  }
  CMat out(d2, d2);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j) {
      cdouble s = 0.0;
      for (int k = 0; k < d1; ++k) s += m.at(k * d2 + i, k * d2 + j);
      out.at(i, j) = s;
    }
  return out;
}

double min_eigenvalue(const CMat& hermitian) {
  return hermitian_eig(hermitian).values.front();
}

bool is_psd(const CMat& m) {
  if (!m.is_hermitian()) return false;
  return min_eigenvalue(0.5 * (m + m.adjoint())) >= -kPsdTol;
}

}  // namespace xot::linalg

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "sknet/errors.hpp"
#include "sknet/rng.hpp"

namespace sknet {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Numeric acceptance thresholds shared across the toolkit.
struct Tolerances {
  double norm_rel = 1e-10;    ///< relative accuracy of operator-norm evaluation
  double unitary_tol = 1e-9;  ///< unitarity / speciality acceptance threshold
  double series_tol = 1e-14;  ///< truncation threshold for exp/log series

  void validate() const;
};

const Tolerances& default_tolerances();

/// Dense d x d complex matrix, the numeric substrate for everything else.
/// Values are immutable once handed to other modules; all operations below are
/// pure functions of their inputs and safe to share across threads.
class UMatrix {
 public:
  explicit UMatrix(int dim) : m_(CMatrix::Zero(dim, dim)) { check_dim(dim); }
  explicit UMatrix(CMatrix m);

  static UMatrix identity(int dim);
  static UMatrix zero(int dim) { return UMatrix(dim); }

  int dim() const { return static_cast<int>(m_.rows()); }

  Complex operator()(int i, int j) const { return m_(i, j); }
  Complex& operator()(int i, int j) { return m_(i, j); }

  const CMatrix& eigen() const { return m_; }

  UMatrix operator*(const UMatrix& rhs) const;
  UMatrix operator+(const UMatrix& rhs) const;
  UMatrix operator-(const UMatrix& rhs) const;
  UMatrix operator*(Complex s) const { return UMatrix(CMatrix(m_ * s)); }

  UMatrix adjoint() const { return UMatrix(CMatrix(m_.adjoint())); }
  Complex trace() const { return m_.trace(); }
  Complex determinant() const { return m_.determinant(); }
  double frobenius() const { return m_.norm(); }

  bool all_finite() const { return m_.allFinite(); }

  /// ||M^dag M - I|| <= tol, decided via op_norm.
  bool is_unitary(double tol = default_tolerances().unitary_tol) const;
  /// ||M - M^dag|| <= tol.
  bool is_hermitian(double tol = default_tolerances().unitary_tol) const;
  /// |det(M) - 1| <= tol.
  bool is_special(double tol = default_tolerances().unitary_tol) const;

 private:
  static void check_dim(int dim);
  CMatrix m_;
};

inline UMatrix operator*(Complex s, const UMatrix& m) { return m * s; }

enum class ExpSign { PlusI, MinusI };

/// Largest singular value, computed from the Gram matrix M^dag M by cyclic
/// Jacobi iteration; relative error well under tol.norm_rel. Deterministic
/// for fixed input.
double op_norm(const UMatrix& m, const Tolerances& tol = default_tolerances());

/// Operator-norm distance d(U, V) = ||U - V||; the bi-invariant metric used
/// throughout.
double dist(const UMatrix& u, const UMatrix& v,
            const Tolerances& tol = default_tolerances());

/// exp(+-i H) for Hermitian H with ||H|| <= 4, by truncated power series with
/// certified remainder <= tol.series_tol.
UMatrix mexp(const UMatrix& h, ExpSign sign,
             const Tolerances& tol = default_tolerances());

/// Principal-branch Hermitian H with Lambda = exp(iH), for special unitary
/// Lambda with dist(Lambda, I) < 1. Series-based; no diagonalization.
UMatrix mlog_principal(const UMatrix& lambda,
                       const Tolerances& tol = default_tolerances());

/// Group commutator A B A^dag B^dag (inverse = adjoint for unitaries).
UMatrix group_comm(const UMatrix& a, const UMatrix& b);

/// Haar-distributed element of SU(d): complex Gaussian matrix, QR with phase
/// correction (exact Haar on U(d)), then the principal d-th root of det^{-1}
/// as a global phase. Reproducible for fixed seed.
UMatrix haar_sample(int dim, std::uint64_t seed);

/// Random Hermitian with ||H|| = 1, traceless, direction Gaussian-uniform.
UMatrix random_hermitian_direction(int dim, Rng& rng,
                                   const Tolerances& tol = default_tolerances());

/// exp(iH) with H rescaled by bisection against the measured distance until
/// dist(result, I) lands in [0.99, 1.0] * target_dist. Requires
/// 0 < target_dist < 1.
UMatrix near_identity_sample(int dim, double target_dist, std::uint64_t seed,
                             const Tolerances& tol = default_tolerances());

/// Same contract with the range widened to (0, 2); net audits need samples in
/// the outer shells where distances exceed 1.
UMatrix near_identity_sample_wide(int dim, double target_dist,
                                  std::uint64_t seed,
                                  const Tolerances& tol = default_tolerances());

}  // namespace sknet

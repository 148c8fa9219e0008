#include "sknet/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sknet {
namespace {

constexpr double kMexpNormCap = 4.0;

}  // namespace

void Tolerances::validate() const {
  if (!(norm_rel > 0.0) || !(unitary_tol > 0.0) || !(series_tol > 0.0))
    throw ValidationError("tolerances must be strictly positive");
  if (!(series_tol < unitary_tol && unitary_tol < 1.0))
    throw ValidationError("require series_tol < unitary_tol < 1");
}

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

void UMatrix::check_dim(int dim) {
  if (dim < 1 || dim > 64) throw ValidationError("matrix dimension out of range [1, 64]");
}

UMatrix::UMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("matrix must be square");
  check_dim(static_cast<int>(m_.rows()));
}

UMatrix UMatrix::identity(int dim) {
  check_dim(dim);
  return UMatrix(CMatrix(CMatrix::Identity(dim, dim)));
}

UMatrix UMatrix::operator*(const UMatrix& rhs) const {
  if (dim() != rhs.dim()) throw ValidationError("dimension mismatch in matrix product");
  return UMatrix(CMatrix(m_ * rhs.m_));
}

UMatrix UMatrix::operator+(const UMatrix& rhs) const {
  if (dim() != rhs.dim()) throw ValidationError("dimension mismatch in matrix sum");
  return UMatrix(CMatrix(m_ + rhs.m_));
}

UMatrix UMatrix::operator-(const UMatrix& rhs) const {
  if (dim() != rhs.dim()) throw ValidationError("dimension mismatch in matrix difference");
  return UMatrix(CMatrix(m_ - rhs.m_));
}

bool UMatrix::is_unitary(double tol) const {
  UMatrix gram(CMatrix(m_.adjoint() * m_ - CMatrix::Identity(dim(), dim())));
  return op_norm(gram) <= tol;
}

bool UMatrix::is_hermitian(double tol) const {
  UMatrix skew(CMatrix(m_ - m_.adjoint()));
  return op_norm(skew) <= tol;
}

bool UMatrix::is_special(double tol) const {
  return std::abs(determinant() - Complex(1.0, 0.0)) <= tol;
}

double op_norm(const UMatrix& m, const Tolerances& tol) {
  if (!m.all_finite()) throw ValidationError("op_norm: non-finite entries");
  const int d = m.dim();
  CMatrix b = m.eigen().adjoint() * m.eigen();  // Hermitian PSD, lambda_max = sigma_max^2

  // Cyclic complex Jacobi on the Gram matrix. Power iteration with
  // Rayleigh-quotient stopping cannot certify norm_rel on clustered singular
  // values (the stall looks like convergence); Jacobi is deterministic, needs
  // no random start, and converges to machine precision at desk dimensions.
  const double frob = b.norm();
  if (frob == 0.0) return 0.0;
  const double off_target = 1e-2 * tol.norm_rel * tol.norm_rel * frob;
  for (int sweep = 0; sweep < 40; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) off += 2.0 * std::norm(b(p, q));
    if (std::sqrt(off) <= off_target) break;

    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const Complex bpq = b(p, q);
        const double abs_pq = std::abs(bpq);
        if (abs_pq <= 1e-300) continue;
        // Phase rotation makes the pivot real, then a real Givens annihilates.
        const Complex ephase = std::conj(bpq) / abs_pq;  // e^{-i beta}
        const double app = b(p, p).real();
        const double aqq = b(q, q).real();
        const double tau = (aqq - app) / (2.0 * abs_pq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // B <- J^dag B J with J = [[c, s], [-s e^{-i beta}, c e^{-i beta}]]
        for (int i = 0; i < d; ++i) {
          const Complex bip = b(i, p), biq = b(i, q);
          b(i, p) = c * bip - s * ephase * biq;
          b(i, q) = s * bip + c * ephase * biq;
        }
        for (int i = 0; i < d; ++i) {
          const Complex bpi = b(p, i), bqi = b(q, i);
          b(p, i) = c * bpi - s * std::conj(ephase) * bqi;
          b(q, i) = s * bpi + c * std::conj(ephase) * bqi;
        }
        b(p, q) = 0.0;
        b(q, p) = 0.0;
      }
    }
  }
  double lambda_max = 0.0;
  for (int i = 0; i < d; ++i) lambda_max = std::max(lambda_max, b(i, i).real());
  return std::sqrt(lambda_max);
}

double dist(const UMatrix& u, const UMatrix& v, const Tolerances& tol) {
  if (u.dim() != v.dim()) throw ValidationError("dist: dimension mismatch");
  return op_norm(u - v, tol);
}

UMatrix mexp(const UMatrix& h, ExpSign sign, const Tolerances& tol) {
  if (!h.all_finite()) throw ValidationError("mexp: non-finite entries");
  if (!h.is_hermitian(tol.unitary_tol)) throw ValidationError("mexp: input not Hermitian");
  const double hn = op_norm(h, tol);
  if (hn > kMexpNormCap) throw ValidationError("mexp: ||H|| exceeds series cap 4");

  const int d = h.dim();
  const Complex s = (sign == ExpSign::PlusI) ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
  const CMatrix sh = s * h.eigen();

  CMatrix sum = CMatrix::Identity(d, d);
  CMatrix term = CMatrix::Identity(d, d);
  double term_bound = 1.0;  // ||H||^k / k!
  for (int k = 1; k <= 200; ++k) {
    term = term * sh / static_cast<double>(k);
    sum += term;
    term_bound *= hn / static_cast<double>(k);
    // Geometric tail bound: sum_{j>k} ||H||^j/j! <= bound_{k+1} / (1 - ||H||/(k+2)).
    const double next_bound = term_bound * hn / static_cast<double>(k + 1);
    if (static_cast<double>(k + 2) > hn) {
      const double tail = next_bound / (1.0 - hn / static_cast<double>(k + 2));
      if (tail <= tol.series_tol) break;
    }
  }
  return UMatrix(std::move(sum));
}

namespace {

// Principal square root via Denman-Beavers; quadratically convergent for the
// near-identity spectra the log reduction feeds it (eigenphases within
// (-pi/3, pi/3) whenever dist(Lambda, I) < 1).
CMatrix principal_sqrt(const CMatrix& a, const Tolerances& tol) {
  const int d = static_cast<int>(a.rows());
  CMatrix y = a;
  CMatrix z = CMatrix::Identity(d, d);
  for (int it = 0; it < 60; ++it) {
    const CMatrix yn = 0.5 * (y + z.inverse());
    const CMatrix zn = 0.5 * (z + y.inverse());
    const double step = (yn - y).norm();
    y = yn;
    z = zn;
    if (step <= 0.25 * tol.series_tol * std::max(1.0, y.norm())) break;
  }
  return y;
}

}  // namespace

UMatrix mlog_principal(const UMatrix& lambda, const Tolerances& tol) {
  if (!lambda.is_unitary(tol.unitary_tol)) throw ValidationError("mlog_principal: input not unitary");
  if (!lambda.is_special(tol.unitary_tol)) throw ValidationError("mlog_principal: input not special");
  const double delta = dist(lambda, UMatrix::identity(lambda.dim()), tol);
  if (delta >= 1.0)
    throw BranchError("mlog_principal: dist(Lambda, I) >= 1, outside the principal branch");

  const int d = lambda.dim();
  // Square-root reduction until the Mercator series in X = A - I is fast.
  CMatrix a = lambda.eigen();
  int halvings = 0;
  while ((a - CMatrix::Identity(d, d)).norm() > 0.5 && halvings < 8) {
    a = principal_sqrt(a, tol);
    ++halvings;
  }

  const CMatrix x = a - CMatrix::Identity(d, d);
  const double xn = std::min(x.norm(), 0.9);  // Frobenius bounds operator norm from above

  CMatrix term = CMatrix::Identity(d, d);
  CMatrix log_sum = CMatrix::Zero(d, d);
  double bound = 1.0;
  for (int k = 1; k <= 400; ++k) {
    term = term * x;
    log_sum += ((k % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(k) * term;
    bound *= xn;
    if (bound / (static_cast<double>(k + 1) * (1.0 - xn)) <= 0.1 * tol.series_tol) break;
  }

  // Lambda = exp(iH): the anti-Hermitian log is i H.
  CMatrix h = std::pow(2.0, halvings) * (log_sum / Complex(0.0, 1.0));
  h = 0.5 * (h + h.adjoint().eval());  // clean rounding skew

  UMatrix result(std::move(h));
  if (std::abs(result.trace()) > tol.unitary_tol)
    throw NumericsError("mlog_principal: principal log has nonzero trace");
  const double hn = op_norm(result, tol);
  const double envelope = (M_PI / 3.0) / (1.0 - delta / 2.0) * delta;
  if (hn > envelope + tol.unitary_tol)
    throw NumericsError("mlog_principal: ||H|| outside certified envelope");
  return result;
}

UMatrix group_comm(const UMatrix& a, const UMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("group_comm: dimension mismatch");
  return a * b * a.adjoint() * b.adjoint();
}

UMatrix haar_sample(int dim, std::uint64_t seed) {
  if (dim < 2) throw ValidationError("haar_sample: dimension must be >= 2");
  Rng rng = Rng(seed).split(0x4841415ull);  // stream tag
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();

  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Phase correction makes the distribution exactly Haar on U(d).
  for (int j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const Complex phase = (std::abs(rjj) > 0.0) ? rjj / std::abs(rjj) : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  // Global phase into SU(d): principal dim-th root of det^{-1}.
  const Complex det = q.determinant();
  const Complex root = std::exp(-std::log(det) / static_cast<double>(dim));
  return UMatrix(CMatrix(root * q));
}

UMatrix random_hermitian_direction(int dim, Rng& rng, const Tolerances& tol) {
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
  CMatrix h = 0.5 * (g + g.adjoint().eval());
  h -= (h.trace() / static_cast<double>(dim)) * CMatrix::Identity(dim, dim);
  UMatrix direction(std::move(h));
  const double n = op_norm(direction, tol);
  if (n == 0.0) return random_hermitian_direction(dim, rng, tol);  // measure-zero draw
  return direction * Complex(1.0 / n, 0.0);
}

namespace {

UMatrix near_identity_impl(int dim, double target_dist, std::uint64_t seed,
                           const Tolerances& tol) {
  Rng rng = Rng(seed).split(0x4e454152ull);
  const UMatrix direction = random_hermitian_direction(dim, rng, tol);
  const UMatrix eye = UMatrix::identity(dim);

  // dist(exp(isH), I) is monotone in s on [0, pi] when ||H|| = 1; the analytic
  // guess 2 asin(t/2) already lands in band, bisection mops up rounding.
  auto measure = [&](double s) {
    return dist(mexp(direction * Complex(s, 0.0), ExpSign::PlusI, tol), eye, tol);
  };

  double s = 2.0 * std::asin(std::min(target_dist, 2.0 - 1e-12) / 2.0);
  double got = measure(s);
  if (got < 0.99 * target_dist || got > target_dist) {
    double lo = 0.0, hi = M_PI;
    if (got < 0.99 * target_dist) lo = s; else hi = s;
    for (int step = 0; step < 50; ++step) {
      s = 0.5 * (lo + hi);
      got = measure(s);
      if (got >= 0.99 * target_dist && got <= target_dist) break;
      if (got < 0.99 * target_dist) lo = s; else hi = s;
    }
  }
  return mexp(direction * Complex(s, 0.0), ExpSign::PlusI, tol);
}

}  // namespace

UMatrix near_identity_sample(int dim, double target_dist, std::uint64_t seed,
                             const Tolerances& tol) {
  if (!(target_dist > 0.0 && target_dist < 1.0))
    throw ValidationError("near_identity_sample: target_dist outside (0, 1)");
  return near_identity_impl(dim, target_dist, seed, tol);
}

UMatrix near_identity_sample_wide(int dim, double target_dist, std::uint64_t seed,
                                  const Tolerances& tol) {
  if (!(target_dist > 0.0 && target_dist < 2.0))
    throw ValidationError("near_identity_sample_wide: target_dist outside (0, 2)");
  return near_identity_impl(dim, target_dist, seed, tol);
}

}  // namespace sknet

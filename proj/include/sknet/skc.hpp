#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sknet/gates.hpp"
#include "sknet/matcore.hpp"
#include "sknet/nets.hpp"

namespace sknet {

/// Dimension-dependent constants of the recursion error ledger.
struct SKConstants {
  int dim = 2;
  double c_gc1 = 0.0;    ///< 8 (d(d-1)/2)^{3/2}
  double c_gc2 = 0.0;    ///< d^{1/2} ((d-1)/2)^{1/2}
  double c_approx = 0.0; ///< 16 (d(d-1)/2)^{1/2} + d + 8 (d(d-1)/2)^{3/2}
  double eps0_max = 0.0; ///< 1 / c_approx^2

  static SKConstants for_dim(int d);
};

/// Balanced Hermitian pair with [F, G] = iH for the off-diagonal input H.
struct CommutatorPair {
  UMatrix f = UMatrix::zero(1);
  UMatrix g = UMatrix::zero(1);
  double norm_bound = 0.0;  ///< certified cap on max(||F||, ||G||)
};

/// G = diag(-(d-1)/2 + j), F_{jk} = i H_{jk} / (G_{kk} - G_{jj}), then both
/// rescaled to equal norms sqrt(||F|| ||G||) <= d^{1/4} ((d-1)/2)^{1/2}
/// sqrt(||H||). The exact identity [F, G] = iH is verified to 1e-10 before
/// returning; H = 0 yields the zero pair.
CommutatorPair decompose_offdiag(const UMatrix& h,
                                 const Tolerances& tol = default_tolerances());

/// Conjugates a traceless diagonal Hermitian by the unitary DFT matrix
/// Phi_{jk} = e^{2 pi i jk / d} / sqrt(d), landing every diagonal entry on
/// tr(D)/d = 0. Returns (Phi D Phi^dag, Phi).
std::pair<UMatrix, UMatrix> offdiagonalize(const UMatrix& diag,
                                           const Tolerances& tol = default_tolerances());

struct LambdaCertificate {
  double epsilon = 0.0;       ///< dist(Lambda, I)
  double h_norm = 0.0;
  double ho_norm = 0.0;       ///< off-diagonal part
  double hd_norm = 0.0;       ///< diagonal part
  double product_dist = 0.0;  ///< measured dist([E1,E2][F1,F2], Lambda)
  double product_bound = 0.0; ///< c_gc1 epsilon^{3/2}
  std::array<double, 4> factor_dists{};  ///< dist(E_j, I), dist(F_j, I)
  double factor_bound = 0.0;  ///< c_gc2 sqrt(epsilon)
};

struct LambdaDecomposition {
  UMatrix e1 = UMatrix::zero(1), e2 = UMatrix::zero(1);
  UMatrix f1 = UMatrix::zero(1), f2 = UMatrix::zero(1);
  LambdaCertificate certificate;
};

/// Splits H = log(Lambda)/i into off-diagonal and diagonal parts, turns each
/// into a commutator pair (the diagonal one through the Fourier conjugation),
/// and exponentiates so that [E1,E2][F1,F2] tracks Lambda within
/// c_gc1 epsilon^{3/2}. Certificate violations are hard errors: the bound is
/// proven, so exceeding it signals a numerics bug.
LambdaDecomposition decompose_lambda(const UMatrix& lambda, const SKConstants& consts,
                                     const Tolerances& tol = default_tolerances());

/// Level-0 oracle the recursion bottoms out on. Implementations must return a
/// value equal to the claimed approximation; the word is the synthesis
/// currency (a placeholder for the mock).
class BaseApproximator {
 public:
  struct Query {
    Word word;
    UMatrix value = UMatrix::zero(1);
    double achieved = 0.0;
  };

  virtual ~BaseApproximator() = default;
  virtual int dim() const = 0;
  virtual double epsilon0() const = 0;
  virtual Query query(const UMatrix& target) = 0;
  virtual Word invert_word(const Word& w) const = 0;
};

/// Wraps a shell net: queries run zoom_synthesize at the net's native
/// delta_k resolution.
class NetBackend : public BaseApproximator {
 public:
  NetBackend(const ShellNet& net, const GateSet& gs,
             const Tolerances& tol = default_tolerances());
  int dim() const override { return net_.params().dim; }
  double epsilon0() const override;
  Query query(const UMatrix& target) override;
  Word invert_word(const Word& w) const override { return word_inverse(w, gs_); }

 private:
  const ShellNet& net_;
  const GateSet& gs_;
  Tolerances tol_;
};

/// Oracle that perturbs the target to a prescribed distance epsilon0 and
/// returns a placeholder single-letter word; tests the recursion's
/// contraction independently of net quality. epsilon0 = 0 echoes the target.
class MockBackend : public BaseApproximator {
 public:
  MockBackend(int dim, double epsilon0, std::uint64_t seed);
  int dim() const override { return dim_; }
  double epsilon0() const override { return epsilon0_; }
  Query query(const UMatrix& target) override;
  Word invert_word(const Word& w) const override { return w; }  // placeholder algebra

 private:
  int dim_;
  double epsilon0_;
  Rng seeds_;
};

struct LedgerEntry {
  double predicted = 0.0;  ///< epsilon_i = c_approx epsilon_{i-1}^{3/2} chain
  double measured = 0.0;   ///< dist of the level-i approximant to the target
};

struct SynthesisResult {
  Word word;
  UMatrix value = UMatrix::zero(1);  ///< assembled approximant
  double achieved = 0.0;             ///< recomputed dist(value, target)
  int levels = 0;
  std::vector<LedgerEntry> ledger;   ///< entries 0..levels
  int length = 0;                    ///< word length
};

/// The recursion: U_n = [E1', E2'][F1', F2'] U_{n-1} where the primed factors
/// are level-(n-1) syntheses of the decomposition of Lambda = U U_{n-1}^{-1}.
/// Residuals below series_tol short-circuit. Words and values assemble in the
/// same fixed order, so outputs are deterministic.
SynthesisResult sk_recurse(const UMatrix& target, int levels, BaseApproximator& base,
                           const SKConstants& consts,
                           const Tolerances& tol = default_tolerances());

/// Smallest integer strictly above log(log eps / log eps0) / log(3/2).
int iterations_needed(double epsilon, double epsilon0);

std::string synthesis_to_json(const SynthesisResult& result);

}  // namespace sknet

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hofa/functions.hpp"
#include "hofa/linear_systems.hpp"
#include "hofa/torus.hpp"
#include "hofa/uniformity.hpp"

namespace hofa {

/// Tuple of polynomials on a shared F_p^n. The atom of x is the tuple of
/// numerators (P_1(x), ..., P_C(x)), each read at its polynomial's depth.
class PolynomialFactor {
 public:
  PolynomialFactor(int p, int n, std::vector<NCPolynomial> polys);
  /// Declared degree/depth sequences must match the structural ones.
  PolynomialFactor(int p, int n, std::vector<NCPolynomial> polys, std::vector<int> degrees, std::vector<int> depths);

  int p() const noexcept { return p_; }
  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return polys_.size(); }
  const std::vector<NCPolynomial>& polynomials() const noexcept { return polys_; }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  const std::vector<int>& depths() const noexcept { return depths_; }

  /// tables()[i] has depth depths()[i].
  std::vector<TorusFunction> tables() const;

 private:
  int p_;
  int n_;
  std::vector<NCPolynomial> polys_;
  std::vector<int> degrees_;
  std::vector<int> depths_;
};

/// E[f | B]: every point receives the average of f over its atom.
RealFunction factor_project(const RealFunction& f, const PolynomialFactor& factor);
RealFunction factor_project(const BoolFunction& f, const PolynomialFactor& factor);

struct Decomposition {
  RealFunction f1;
  RealFunction f2;
  RealFunction f3;
  PolynomialFactor factor;
  double tau = 0;
  std::vector<std::uint64_t> large_characters;  // |f^(chi)| >= tau, chi != 0
};

/// decompose_degree1 refuses when the factor would exceed `max_complexity`;
/// any tau strictly above `succeeds_above()` stays within it.
class FactorComplexityError : public WorkLimitError {
 public:
  FactorComplexityError(double complexity, double ceiling, double succeeds_above)
      : WorkLimitError("work.factor_complexity", complexity, ceiling,
                       "factor complexity " + std::to_string(static_cast<int>(complexity)) + " exceeds " +
                           std::to_string(static_cast<int>(ceiling)) + "; any tau > " +
                           std::to_string(succeeds_above) + " succeeds"),
        succeeds_above_(succeeds_above) {}
  double succeeds_above() const noexcept { return succeeds_above_; }

 private:
  double succeeds_above_;
};

inline constexpr int kDefaultMaxFactorComplexity = 12;

/// Degree-1 decomposition over F_2^n. The factor is a basis of the span of
/// the characters with |f^(chi)| >= tau, f1 = E[f|B], f2 = f - f1, f3 = 0.
/// Every character outside the span has coefficient below tau, so
/// ||f2||_{U^2}^4 <= tau^2.
Decomposition decompose_degree1(const BoolFunction& f, double tau,
                                int max_complexity = kDefaultMaxFactorComplexity);

struct DecompApproxReport {
  Rational t_f;
  double t_f1 = 0;
  double gap = 0;
  std::size_t factor_complexity = 0;
  std::string bound_context;
};

/// |t_L(f) - t_L(f1)| for the degree-1 decomposition at threshold tau. The
/// system must declare true complexity 1.
DecompApproxReport decomp_approx_check(const BoolFunction& f, const LinearFormSystem& system, double tau,
                                       const RunOptions& options = {});

struct HighRankFamily {
  PolynomialFactor factor;
  int n_required = 0;
};

/// P_i = (1/p^(k_i+1)) (x_1 ... x_m + ... + x_{m(r-1)+1} ... x_{mr}) on its own
/// block of m_i * r variables, m_i = d_i - (p-1) k_i.
HighRankFamily high_rank_family(int p, const std::vector<int>& degrees, const std::vector<int>& depths, int r);

struct FactorRank {
  std::optional<int> rank;  // empty means infinite
  std::vector<std::int64_t> lambda;  // minimizing combination
};

/// Minimum over nonzero (lambda_i), 0 <= lambda_i < p^(k_i+1), of the rank of
/// sum lambda_i P_i at that combination's structural degree.
FactorRank factor_rank_small(const PolynomialFactor& factor, const RunOptions& options = {});

/// Pieces of a polynomial sum c_i|x_i|/p^(k+1) + R with R of depth < k.
struct DepthReduction {
  int k = 1;
  std::vector<int> linear_coeffs;  // c_i
  NCPolynomial A;                  // M / p^k, M = sum c_i |x_i|
  TorusFunction Bp;                // (M^p - M) / p^(k+1)
  NCPolynomial R;

  /// P(x) from A(x), Bp(x), R(x).
  TorusValue reconstruct(const TorusValue& a_value, const TorusValue& bp_value, const TorusValue& r_value) const;
};

DepthReduction depth_reduce(const NCPolynomial& poly, int k);

/// M = a + b p^k with 0 <= a < p^k, 0 <= b < p, for M in [0, p^(k+1)).
std::pair<std::uint64_t, std::uint64_t> split_top_digit(std::uint64_t M, int p, int k);

/// b p^k == (a + b p^k)^p - (a + b p^k) - (a^p - a)  (mod p^(k+1)), literally.
bool top_digit_identity_as_printed(std::uint64_t M, int p, int k);

/// b p^k == -[(a + b p^k)^p - (a + b p^k) - (a^p - a)]  (mod p^(k+1)).
/// For p = 2 this coincides with the printed form.
bool top_digit_identity_signed(std::uint64_t M, int p, int k);

/// Recovers b from a and beta = (M^p - M) mod p^(k+1), k >= 1.
std::uint64_t recover_top_digit(std::uint64_t a, std::uint64_t beta, int p, int k);

/// Q = sum_{s < floor(n/m)} |x_{sm+1}| ... |x_{sm+m}| / p^(depth+1).
NCPolynomial lowcorr_witness(int p, int m, int depth, int n);

struct CandidateFamily {
  std::vector<NCPolynomial> polys;
  bool exhaustive = false;  // every classical polynomial of the degree bound is present
};

/// All classical polynomials of degree <= max_degree in the first min(n, 4)
/// variables when there are at most `cap` of them, plus `random_extra`
/// seeded random classical polynomials on all n variables.
CandidateFamily default_candidate_family(int p, int n, int max_degree, std::uint64_t cap,
                                         std::uint64_t random_extra, RandomSeed seed);

struct CorrelationScan {
  double max_correlation = 0;
  std::size_t argmax = 0;
  std::vector<double> correlations;
};

/// |E_x e(Q(x) - R(x))| for every candidate R.
CorrelationScan correlation_scan(const NCPolynomial& q, const std::vector<NCPolynomial>& candidates,
                                 const RunOptions& options = {});

}  // namespace hofa

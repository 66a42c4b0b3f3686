#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hofa/functions.hpp"
#include "hofa/torus.hpp"

namespace hofa {

enum class NormMode { Exact, MonteCarlo };

struct NormEstimate {
  double value = 0;          // ||f||_{U^d}
  double inner = 0;          // E[Delta_{h_1}...Delta_{h_d} f(x)], real part
  NormMode mode = NormMode::Exact;
  std::uint64_t samples = 0;
  double standard_error = 0;  // of `inner`; zero in exact mode
};

/// e(F) = exp(2 pi i F).
ComplexFunction phase(const TorusFunction& f);
ComplexFunction phase(const NCPolynomial& poly);

/// f^(chi) = E_x f(x) e(-chi.x / p), indexed like the domain.
std::vector<std::complex<double>> fourier_transform(const ComplexFunction& f);

/// ||f||_{U^2} from sum_chi |f^(chi)|^4.
double gowers_u2_fourier(const ComplexFunction& f);

/// ||f||_{U^d} through ||f||_{U^{d+1}}^{2^{d+1}} = E_h ||Delta_h f||_{U^d}^{2^d}.
/// The recursion bottoms out at U^1 = |E f|, or at U^2 through the character
/// transform when `fourier_base` is set. Parallel over the outermost h with
/// a fixed chunk layout.
NormEstimate gowers_norm_exact(const ComplexFunction& f, int d, const RunOptions& options = {},
                               bool fourier_base = true);

double gowers_norm_exact_work(int p, int n, int d, bool fourier_base);

using ComplexOracle = std::function<std::complex<double>(std::uint64_t)>;

/// Sampled estimator of the same inner expectation.
NormEstimate gowers_norm_mc(const ComplexFunction& f, int d, std::uint64_t samples, RandomSeed seed);
NormEstimate gowers_norm_mc(const ComplexOracle& f, int p, int n, int d, std::uint64_t samples,
                            RandomSeed seed);

struct RankResult {
  std::optional<int> rank;  // empty means infinite
  std::vector<NCPolynomial> witness;

  bool infinite() const noexcept { return !rank.has_value(); }
};

/// Least r such that r polynomials of degree <= d-1 have a joint level-set
/// partition refining the level sets of P. Solved as a minimum set cover of
/// the point pairs that P separates. Refuses once p^n > 64 or the candidate
/// family exceeds the work ceiling.
RankResult rank_exact_small(const TorusFunction& f, int d, const RunOptions& options = {});
RankResult rank_exact_small(const NCPolynomial& poly, int d, const RunOptions& options = {});

/// ||e(P)||_{U^d}. A value bounded away from 0 certifies low d-rank in the
/// qualitative sense; no explicit rank bound is derived.
NormEstimate analytic_uniformity(const NCPolynomial& poly, int d, const RunOptions& options = {});

/// All nonzero zero-shift polynomials of degree <= max_degree on F_p^n, in
/// odometer order over the allowed monomials.
std::vector<Monomial> allowed_monomials(int p, int n, int max_degree, int max_depth);

}  // namespace hofa

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hofa/consistency.hpp"
#include "hofa/factors.hpp"
#include "hofa/linear_systems.hpp"

namespace hofa {

/// Distribution over patterns g: L -> {0,1}; bit i of a pattern is g(L_i).
struct RestrictionDistribution {
  LinearFormSystem system;
  std::vector<double> probabilities;          // 2^m entries
  std::optional<std::vector<Rational>> exact;  // rational mode
  bool consistent = true;                      // false when reconstructed moments were infeasible

  std::size_t patterns() const noexcept { return probabilities.size(); }
};

/// x -> f(Ax) for a seeded uniform affine A: F_p^k -> F_p^n.
BoolFunction restriction_sample(const BoolFunction& f, int k, RandomSeed seed);

/// Exact pattern distribution over independent uniform x_1, ..., x_ell.
RestrictionDistribution mu_f_exact(const BoolFunction& f, const LinearFormSystem& system,
                                   const RunOptions& options = {});
RestrictionDistribution mu_f_mc(const BoolFunction& f, const LinearFormSystem& system, std::uint64_t samples,
                                RandomSeed seed);

/// t_{L'}(f) for every sub-system, indexed by the mask of L' (t at mask 0 is 1).
std::vector<Rational> subsystem_averages(const BoolFunction& f, const LinearFormSystem& system,
                                         const RunOptions& options = {});

/// mu(g) = sum over S containing ones(g) of (-1)^|S \ ones(g)| t_S.
RestrictionDistribution mu_from_t(const LinearFormSystem& system, const std::vector<Rational>& t_values);
RestrictionDistribution mu_from_t(const LinearFormSystem& system, const std::vector<double>& t_values);

double tv_distance(const RestrictionDistribution& a, const RestrictionDistribution& b);
/// Exact when both carry rationals.
Rational tv_distance_exact(const RestrictionDistribution& a, const RestrictionDistribution& b);

/// Coordinate (j, k, i) of G_d: degree j, depth k, index i.
struct GdCoordinate {
  int j = 1;
  int k = 0;
  int i = 1;
  auto operator<=>(const GdCoordinate&) const = default;
};

/// Finite truncation of a limit object. table[idx] holds Gamma(b) with
/// idx = sum_c b_c * prod_{c' < c} p^(k_{c'}+1), so the first coordinate is
/// the fastest digit.
class LimitObject {
 public:
  LimitObject(int p, std::optional<int> d, std::vector<GdCoordinate> coords, std::vector<double> table);
  static LimitObject constant(int p, std::optional<int> d, double value);

  int p() const noexcept { return p_; }
  std::optional<int> d() const noexcept { return d_; }
  const std::vector<GdCoordinate>& coords() const noexcept { return coords_; }
  const std::vector<double>& table() const noexcept { return table_; }
  std::uint64_t radix(std::size_t c) const;

  std::uint64_t index_of(const std::vector<std::uint32_t>& b) const;
  std::vector<std::uint32_t> values_of(std::uint64_t index) const;
  double operator()(const std::vector<std::uint32_t>& b) const { return table_[index_of(b)]; }
  double mean() const;

 private:
  int p_;
  std::optional<int> d_;
  std::vector<GdCoordinate> coords_;
  std::vector<double> table_;
};

/// E over tuples consistent with L of prod_i Gamma(b_i).
double t_L_gamma(const LimitObject& gamma, const LinearFormSystem& system, const RunOptions& options = {});

/// Uniform consistent tuple, then g(L_i) = 1 with probability Gamma(b_i).
std::uint64_t mu_gamma_sample(const LimitObject& gamma, const LinearFormSystem& system, RandomSeed seed,
                              const RunOptions& options = {});

/// Batch of draws from mu_Gamma sharing one consistent-set enumeration;
/// draw s uses seed.split(s).
std::vector<std::uint64_t> mu_gamma_samples(const LimitObject& gamma, const LinearFormSystem& system,
                                            std::uint64_t count, RandomSeed seed, const RunOptions& options = {});

/// E[Gamma | G_d^t]: keeps coordinates with j <= t and i <= t.
LimitObject coarsen(const LimitObject& gamma, int t);

struct Realization {
  PolynomialFactor factor;
  RealFunction f_real;
  BoolFunction f;
};

/// f_real(x) = Gamma(P_1(x), ..., P_C(x)) for the high-rank family of Gamma's
/// (degree, depth) sequence; f(x) = 1 with probability f_real(x).
Realization realize(const LimitObject& gamma, int r, RandomSeed seed, const RunOptions& options = {});

struct ConvergenceReport {
  LinearFormSystem system;
  std::vector<std::vector<double>> distances;  // full TV matrix
  std::vector<double> consecutive;
  bool exact = true;
  bool convergent = false;
};

/// Cauchy check: convergent iff every consecutive distance from index
/// `burn_in` on is below eps. Distributions are exact within the work
/// ceiling and sampled with `samples` draws otherwise.
std::vector<ConvergenceReport> convergence_test(const std::vector<BoolFunction>& sequence,
                                                const std::vector<LinearFormSystem>& systems, double eps,
                                                std::size_t burn_in = 0, std::uint64_t samples = 100000,
                                                RandomSeed seed = {}, const RunOptions& options = {});

}  // namespace hofa

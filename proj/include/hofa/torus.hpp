#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hofa/error.hpp"
#include "hofa/field.hpp"

namespace hofa {

/// Largest depth k with p^(k+1) < 2^31 for the given prime.
int max_supported_depth(int p);

/// Exact element of U_{k+1} = (1/p^(k+1))Z/Z, stored as numerator / p^(k+1).
class TorusValue {
 public:
  explicit TorusValue(int p = 2) : p_(validate_prime(p)), depth_(0), num_(0) {}
  TorusValue(std::uint64_t numerator, int depth, int p);

  /// iota(x) = |x|/p mod 1.
  static TorusValue iota(int field_value, int p);

  int p() const noexcept { return p_; }
  int depth() const noexcept { return depth_; }
  std::uint64_t numerator() const noexcept { return num_; }
  std::uint64_t modulus() const { return checked_pow(p_, depth_ + 1); }

  /// Same value expressed with denominator p^(depth+1); depth must not shrink.
  TorusValue lifted(int depth) const;
  /// Same value with the smallest depth >= 0.
  TorusValue canonical() const;
  /// True iff the value lies in U_{k+1}.
  bool in_group(int k) const;
  double to_double() const;

  TorusValue operator+(const TorusValue& o) const;
  TorusValue operator-(const TorusValue& o) const;
  TorusValue operator-() const;
  TorusValue scaled(std::int64_t lambda) const;

  bool operator==(const TorusValue& o) const;
  std::strong_ordering operator<=>(const TorusValue& o) const;

 private:
  int p_;
  int depth_;
  std::uint64_t num_;
};

/// c * |x_1|^e_1 ... |x_n|^e_n / p^(k+1).
struct Monomial {
  std::vector<std::uint8_t> exps;
  int depth = 0;
  int coeff = 0;

  int total_exponent() const;
  int degree(int p) const { return total_exponent() + depth * (p - 1); }
};

/// Value table of F: F_p^n -> U_{depth+1}, numerators modulo p^(depth+1).
struct TorusFunction {
  int p = 2;
  int n = 0;
  int depth = 0;
  std::vector<std::uint32_t> num;

  TorusFunction() = default;
  TorusFunction(int p_, int n_, int depth_, std::vector<std::uint32_t> values);

  std::uint64_t size() const noexcept { return num.size(); }
  std::uint64_t modulus() const { return checked_pow(p, depth + 1); }
  TorusValue at(std::uint64_t x) const { return {num[x], depth, p}; }
  bool is_constant() const;
  /// Same function with numerators re-expressed at a larger depth.
  TorusFunction lifted(int new_depth) const;
  bool operator==(const TorusFunction&) const = default;
};

/// Non-classical polynomial with zero shift, in the unique representation
/// sum c |x_1|^e_1...|x_n|^e_n / p^(k+1) mod 1 with e_i, c in [0, p-1].
class NCPolynomial {
 public:
  NCPolynomial(int p, int n);
  /// Zero coefficients are dropped; duplicate (exps, depth) keys and
  /// out-of-range entries raise ValidationError("poly.monomial").
  NCPolynomial(int p, int n, std::vector<Monomial> monomials);

  int p() const noexcept { return p_; }
  int n() const noexcept { return n_; }
  /// Nonzero monomials ordered by (depth, total exponent, exponents).
  const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
  bool is_zero() const noexcept { return monomials_.empty(); }

  int degree() const;
  int depth() const;

  TorusValue eval(const FieldVector& x) const;
  TorusValue eval_index(std::uint64_t x) const;
  /// Table with depth equal to depth().
  TorusFunction table() const;

  NCPolynomial operator+(const NCPolynomial& o) const;
  NCPolynomial operator-() const;
  bool operator==(const NCPolynomial& o) const;

  /// Coefficients of every exponent vector as a p-adic integer modulo
  /// p^(top+1), where digit p^(top-k) holds the depth-k coefficient.
  std::map<std::vector<std::uint8_t>, std::uint64_t> padic_coefficients(int top) const;
  static NCPolynomial from_padic(int p, int n, int top,
                                 const std::map<std::vector<std::uint8_t>, std::uint64_t>& coeffs);

 private:
  int p_;
  int n_;
  std::vector<Monomial> monomials_;
};

/// (degree, depth); (0, 0) for the zero polynomial.
std::pair<int, int> degree_depth_structural(const NCPolynomial& poly);

/// lambda * P in canonical form. Each exponent vector carries a p-adic
/// coefficient; multiplying it by lambda and re-reading the digits moves
/// carries from depth k to depth k-1 and drops the carry out of depth 0.
NCPolynomial scalar_multiple(const NCPolynomial& poly, std::int64_t lambda);

/// iota o Q for a classical polynomial Q given by F_p coefficients.
NCPolynomial iota_embed(int p, int n, const std::vector<Monomial>& classical);

/// Unique monomial representation of a table with F(0) = 0. Peels off the
/// deepest layer by classical interpolation mod p, subtracts it over the
/// integers and divides by p.
NCPolynomial interpolate(const TorusFunction& f, const RunOptions& options = {});

/// lambda * P computed by re-expanding the value table; cross-check route
/// for scalar_multiple.
NCPolynomial scalar_multiple_via_table(const NCPolynomial& poly, std::int64_t lambda,
                                       const RunOptions& options = {});

/// x -> F(x + h) - F(x).
TorusFunction additive_derivative(const TorusFunction& f, const FieldVector& h);

struct DegreeResult {
  std::optional<int> degree;  // empty when the degree exceeds d_max
  double work = 0;            // table evaluations performed

  bool exceeds_max() const noexcept { return !degree.has_value(); }
};

/// Least d <= d_max with every (d+1)-fold derivative identically zero.
///
/// Uses that D_{h+h'}F = D_hF(. + h') + D_{h'}F, so F has degree <= d+1 iff every
/// basis-direction derivative D_{e_i}F has degree <= d. Derivatives commute,
/// so only non-decreasing direction sequences are walked. Throws
/// WorkLimitError when the estimated number of table evaluations exceeds the
/// ceiling.
DegreeResult degree_via_tables(const TorusFunction& f, int d_max, const RunOptions& options = {});

/// Estimated table evaluations of degree_via_tables.
double degree_via_tables_work(int p, int n, int depth, int d_max);

/// One-sided randomized test of "degree <= d": checks `trials` random
/// (d+1)-fold derivatives at random points.
bool degree_at_most_randomized(const TorusFunction& f, int d, std::uint64_t trials, RandomSeed seed);

}  // namespace hofa

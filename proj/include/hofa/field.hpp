#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hofa/error.hpp"

namespace hofa {

/// Primes supported by the enumeration kernels.
inline constexpr int kSupportedPrimes[] = {2, 3, 5, 7};

/// Returns p if it is one of the supported primes, throws ValidationError otherwise.
int validate_prime(int p);

/// base^exp, throwing ValidationError("arith.overflow") past 2^63.
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

/// Element of F_p.
class FieldScalar {
 public:
  FieldScalar(int value, int p);

  int value() const noexcept { return value_; }
  int p() const noexcept { return p_; }

  FieldScalar operator+(FieldScalar o) const;
  FieldScalar operator-(FieldScalar o) const;
  FieldScalar operator*(FieldScalar o) const;
  bool operator==(const FieldScalar&) const = default;

 private:
  int value_;
  int p_;
};

/// Vector in F_p^n. Index convention: x maps to sum_i |x_i| p^(i-1), so the
/// first coordinate is the least significant digit.
struct FieldVector {
  int p = 2;
  std::vector<std::uint8_t> coords;

  FieldVector() = default;
  FieldVector(int p_, std::vector<std::uint8_t> c);

  std::size_t dim() const noexcept { return coords.size(); }
  std::uint64_t index() const;
  static FieldVector from_index(int p, int n, std::uint64_t index);

  FieldVector operator+(const FieldVector& o) const;
  bool operator==(const FieldVector&) const = default;
};

/// Arithmetic on packed indices of F_p^n.
class VectorSpace {
 public:
  VectorSpace(int p, int n);

  int p() const noexcept { return p_; }
  int n() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return size_; }

  int digit(std::uint64_t x, int i) const noexcept {
    return static_cast<int>((x / pow_[i]) % p_);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept;
  std::uint64_t scale(int lambda, std::uint64_t a) const noexcept;

  /// perm[x] = index of x + h.
  std::vector<std::uint64_t> translation(std::uint64_t h) const;

 private:
  int p_;
  int n_;
  std::uint64_t size_;
  std::vector<std::uint64_t> pow_;
};

/// Evaluates the linear form with coefficients `coeffs` on the points `xs`.
FieldVector eval_linear_form(std::span<const int> coeffs, std::span<const FieldVector> xs);

/// A(x) = Lx + c with L an n x k matrix over F_p (row-major).
struct AffineMap {
  int p = 2;
  int in_dim = 0;   // k
  int out_dim = 0;  // n
  std::vector<std::uint8_t> linear;
  FieldVector shift;

  int entry(int row, int col) const { return linear[static_cast<std::size_t>(row) * in_dim + col]; }
  FieldVector apply(const FieldVector& x) const;
  std::uint64_t apply_index(std::uint64_t x) const;
};

/// Seed plus stream counter. Children produced by split() are independent of
/// each other and of the parent.
struct RandomSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RandomSeed split(std::uint64_t child) const;
  bool operator==(const RandomSeed&) const = default;
};

/// Portable generator: mt19937_64 engine with hand-rolled range reduction so
/// draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(RandomSeed seed);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double uniform01();

 private:
  std::mt19937_64 engine_;
};

/// Uniform affine map F_p^k -> F_p^n: every matrix entry and shift coordinate
/// independent and uniform, rank-deficient linear parts included.
AffineMap random_affine_map(int k, int n, int p, RandomSeed seed);

}  // namespace hofa

#pragma once

#include <boost/rational.hpp>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "hofa/functions.hpp"

namespace hofa {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Finite set of linear forms in `ell` variables over F_p.
class LinearFormSystem {
 public:
  LinearFormSystem(int p, int ell, std::vector<std::vector<int>> forms,
                   std::optional<int> declared_complexity = std::nullopt);

  int p() const noexcept { return p_; }
  int ell() const noexcept { return ell_; }
  std::size_t size() const noexcept { return forms_.size(); }
  const std::vector<std::vector<int>>& forms() const noexcept { return forms_; }
  const std::vector<int>& form(std::size_t i) const { return forms_.at(i); }
  std::optional<int> declared_complexity() const noexcept { return declared_complexity_; }

  /// Forms selected by the bits of `mask`, in order.
  LinearFormSystem subsystem(std::uint64_t mask) const;

 private:
  int p_;
  int ell_;
  std::vector<std::vector<int>> forms_;
  std::optional<int> declared_complexity_;
};

/// True iff every form has first coefficient 1 (vacuously true when empty).
bool is_affine_system(const LinearFormSystem& system);

/// Declared complexity, or m*p for an undeclared affine system.
int complexity_bound(const LinearFormSystem& system);

/// p^(n*ell) * m, the number of form evaluations of an exact average.
double t_L_work(int p, int n, const LinearFormSystem& system);

/// E_{x_1..x_ell} prod_j f(L_j(x)). The 0/1 overload counts exactly
/// (bit-packed, XOR images for p = 2) and returns count / p^(n*ell).
Rational t_L_exact(const BoolFunction& f, const LinearFormSystem& system, const RunOptions& options = {});
double t_L_exact(const RealFunction& f, const LinearFormSystem& system, const RunOptions& options = {});
std::complex<double> t_L_exact(const ComplexFunction& f, const LinearFormSystem& system,
                               const RunOptions& options = {});

struct AverageEstimate {
  double value = 0;
  double standard_error = 0;
  std::uint64_t samples = 0;
};

AverageEstimate t_L_mc(const RealFunction& f, const LinearFormSystem& system, std::uint64_t samples,
                       RandomSeed seed);
AverageEstimate t_L_mc(const BoolFunction& f, const LinearFormSystem& system, std::uint64_t samples,
                       RandomSeed seed);

/// Calls visit(images) for every tuple (x_1, ..., x_ell) with x_1 in [lo, hi),
/// where images[j] is the packed index of L_j(x).
template <class Visit>
void for_each_form_image(const VectorSpace& space, const LinearFormSystem& system, std::uint64_t lo,
                         std::uint64_t hi, Visit&& visit);

}  // namespace hofa

#include "hofa/detail/form_images.hpp"

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "hofa/field.hpp"

namespace hofa {

/// Value table of a function F_p^n -> T in the field-core index order.
template <class T>
struct FieldFunction {
  int p = 2;
  int n = 0;
  std::vector<T> values;

  FieldFunction() = default;
  FieldFunction(int p_, int n_, std::vector<T> v) : p(validate_prime(p_)), n(n_), values(std::move(v)) {
    if (values.size() != checked_pow(p, n)) {
      throw ValidationError("table.size", "table has " + std::to_string(values.size()) +
                                              " entries, expected p^n = " +
                                              std::to_string(checked_pow(p, n)));
    }
  }
  static FieldFunction filled(int p_, int n_, T v) {
    return FieldFunction(p_, n_, std::vector<T>(checked_pow(validate_prime(p_), n_), v));
  }

  std::uint64_t size() const noexcept { return values.size(); }
  const T& operator[](std::uint64_t i) const { return values[i]; }
  T& operator[](std::uint64_t i) { return values[i]; }
  VectorSpace space() const { return {p, n}; }
  bool operator==(const FieldFunction&) const = default;
};

/// {0,1}-valued table.
using BoolFunction = FieldFunction<std::uint8_t>;
using RealFunction = FieldFunction<double>;
using ComplexFunction = FieldFunction<std::complex<double>>;

/// Throws unless every entry is 0 or 1.
void validate_bool(const BoolFunction& f);

/// Throws unless |value| <= 1 + 1e-12 everywhere.
void validate_bounded(const ComplexFunction& f);

RealFunction to_real(const BoolFunction& f);
/// x -> (-1)^f(x).
ComplexFunction sign_embedding(const BoolFunction& f);
/// x -> f(x) as a complex number.
ComplexFunction indicator_embedding(const BoolFunction& f);
ComplexFunction to_complex(const RealFunction& f);

double mean(const RealFunction& f);

}  // namespace hofa

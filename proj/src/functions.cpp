#include "hofa/functions.hpp"

#include <cmath>

#include "hofa/parallel.hpp"

namespace hofa {

void validate_bool(const BoolFunction& f) {
  for (auto v : f.values) {
    if (v > 1) throw ValidationError("table.value", "boolean table entry is not 0 or 1");
  }
}

void validate_bounded(const ComplexFunction& f) {
  for (const auto& v : f.values) {
    if (!(std::abs(v) <= 1.0 + 1e-12)) {
      throw ValidationError("table.bound", "complex table entry exceeds modulus 1");
    }
  }
}

RealFunction to_real(const BoolFunction& f) {
  return {f.p, f.n, std::vector<double>(f.values.begin(), f.values.end())};
}

ComplexFunction sign_embedding(const BoolFunction& f) {
  std::vector<std::complex<double>> v(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) v[i] = f[i] ? -1.0 : 1.0;
  return {f.p, f.n, std::move(v)};
}

ComplexFunction indicator_embedding(const BoolFunction& f) {
  std::vector<std::complex<double>> v(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) v[i] = f[i] ? 1.0 : 0.0;
  return {f.p, f.n, std::move(v)};
}

ComplexFunction to_complex(const RealFunction& f) {
  return {f.p, f.n, std::vector<std::complex<double>>(f.values.begin(), f.values.end())};
}

double mean(const RealFunction& f) {
  CompensatedSum<double> s;
  for (double v : f.values) s.add(v);
  return s.value() / static_cast<double>(f.size());
}

}  // namespace hofa

#include "hofa/field.hpp"

#include <algorithm>
#include <string>

namespace hofa {

int validate_prime(int p) {
  if (std::find(std::begin(kSupportedPrimes), std::end(kSupportedPrimes), p) ==
      std::end(kSupportedPrimes)) {
    throw ValidationError("field.prime", "unsupported prime " + std::to_string(p) +
                                             " (supported: 2, 3, 5, 7)");
  }
  return p;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > (std::uint64_t{1} << 62) / base) {
      throw ValidationError("arith.overflow", "power " + std::to_string(base) + "^" +
                                                  std::to_string(exp) + " overflows");
    }
    r *= base;
  }
  return r;
}

FieldScalar::FieldScalar(int value, int p) : value_(value), p_(validate_prime(p)) {
  if (value < 0 || value >= p) {
    throw ValidationError("field.scalar", "scalar " + std::to_string(value) +
                                              " out of range for p=" + std::to_string(p));
  }
}

FieldScalar FieldScalar::operator+(FieldScalar o) const {
  return {(value_ + o.value_) % p_, p_};
}
FieldScalar FieldScalar::operator-(FieldScalar o) const {
  return {(value_ - o.value_ + p_) % p_, p_};
}
FieldScalar FieldScalar::operator*(FieldScalar o) const {
  return {(value_ * o.value_) % p_, p_};
}

FieldVector::FieldVector(int p_, std::vector<std::uint8_t> c) : p(validate_prime(p_)), coords(std::move(c)) {
  for (auto v : coords) {
    if (v >= p) throw ValidationError("field.vector", "coordinate out of range");
  }
}

std::uint64_t FieldVector::index() const {
  std::uint64_t idx = 0;
  for (std::size_t i = coords.size(); i-- > 0;) idx = idx * p + coords[i];
  return idx;
}

FieldVector FieldVector::from_index(int p, int n, std::uint64_t index) {
  std::vector<std::uint8_t> c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = static_cast<std::uint8_t>(index % p);
    index /= p;
  }
  return {p, std::move(c)};
}

FieldVector FieldVector::operator+(const FieldVector& o) const {
  if (o.p != p || o.dim() != dim()) throw ValidationError("field.mismatch", "vector shape mismatch");
  FieldVector r = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] = static_cast<std::uint8_t>((coords[i] + o.coords[i]) % p);
  return r;
}

VectorSpace::VectorSpace(int p, int n) : p_(validate_prime(p)), n_(n) {
  if (n < 0) throw ValidationError("field.dimension", "negative dimension");
  size_ = checked_pow(p, n);
  pow_.resize(n + 1);
  pow_[0] = 1;
  for (int i = 1; i <= n; ++i) pow_[i] = pow_[i - 1] * p;
}

std::uint64_t VectorSpace::add(std::uint64_t a, std::uint64_t b) const noexcept {
  if (p_ == 2) return a ^ b;
  std::uint64_t r = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    r = r * p_ + static_cast<std::uint64_t>((digit(a, i) + digit(b, i)) % p_);
  }
  return r;
}

std::uint64_t VectorSpace::sub(std::uint64_t a, std::uint64_t b) const noexcept {
  if (p_ == 2) return a ^ b;
  std::uint64_t r = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    r = r * p_ + static_cast<std::uint64_t>((digit(a, i) - digit(b, i) + p_) % p_);
  }
  return r;
}

std::uint64_t VectorSpace::scale(int lambda, std::uint64_t a) const noexcept {
  lambda %= p_;
  if (lambda == 0) return 0;
  if (lambda == 1) return a;
  std::uint64_t r = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    r = r * p_ + static_cast<std::uint64_t>((lambda * digit(a, i)) % p_);
  }
  return r;
}

std::vector<std::uint64_t> VectorSpace::translation(std::uint64_t h) const {
  std::vector<std::uint64_t> perm(size_);
  if (p_ == 2) {
    for (std::uint64_t x = 0; x < size_; ++x) perm[x] = x ^ h;
    return perm;
  }
  // Odometer over x, adding h digit by digit.
  std::vector<int> xd(n_, 0), hd(n_);
  for (int i = 0; i < n_; ++i) hd[i] = digit(h, i);
  for (std::uint64_t x = 0; x < size_; ++x) {
    std::uint64_t r = 0;
    for (int i = n_ - 1; i >= 0; --i) r = r * p_ + static_cast<std::uint64_t>((xd[i] + hd[i]) % p_);
    perm[x] = r;
    for (int i = 0; i < n_; ++i) {
      if (++xd[i] < p_) break;
      xd[i] = 0;
    }
  }
  return perm;
}

FieldVector eval_linear_form(std::span<const int> coeffs, std::span<const FieldVector> xs) {
  if (coeffs.size() != xs.size()) {
    throw ValidationError("form.arity", "form has " + std::to_string(coeffs.size()) +
                                            " coefficients but " + std::to_string(xs.size()) +
                                            " points were given");
  }
  if (xs.empty()) throw ValidationError("form.arity", "linear form needs at least one variable");
  const int p = xs.front().p;
  const std::size_t n = xs.front().dim();
  std::vector<int> acc(n, 0);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].p != p || xs[j].dim() != n) {
      throw ValidationError("form.mismatch", "points differ in modulus or dimension");
    }
    if (coeffs[j] < 0 || coeffs[j] >= p) throw ValidationError("form.coefficient", "coefficient out of range");
    for (std::size_t i = 0; i < n; ++i) acc[i] = (acc[i] + coeffs[j] * xs[j].coords[i]) % p;
  }
  std::vector<std::uint8_t> c(acc.begin(), acc.end());
  return {p, std::move(c)};
}

FieldVector AffineMap::apply(const FieldVector& x) const {
  if (x.p != p || static_cast<int>(x.dim()) != in_dim) {
    throw ValidationError("affine.mismatch", "input vector shape mismatch");
  }
  std::vector<std::uint8_t> out(out_dim);
  for (int r = 0; r < out_dim; ++r) {
    int acc = shift.coords[r];
    for (int c = 0; c < in_dim; ++c) acc += entry(r, c) * x.coords[c];
    out[r] = static_cast<std::uint8_t>(acc % p);
  }
  return {p, std::move(out)};
}

std::uint64_t AffineMap::apply_index(std::uint64_t x) const {
  return apply(FieldVector::from_index(p, in_dim, x)).index();
}

namespace {
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

RandomSeed RandomSeed::split(std::uint64_t child) const {
  return {seed, splitmix64(stream ^ splitmix64(child + 0x632be59bd9b4e019ULL))};
}

Rng::Rng(RandomSeed seed) : engine_(splitmix64(seed.seed) ^ splitmix64(~seed.stream)) {}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

AffineMap random_affine_map(int k, int n, int p, RandomSeed seed) {
  validate_prime(p);
  if (k < 1 || n < 1) throw ValidationError("affine.dimension", "k and n must be at least 1");
  Rng rng(seed);
  AffineMap a;
  a.p = p;
  a.in_dim = k;
  a.out_dim = n;
  a.linear.resize(static_cast<std::size_t>(n) * k);
  for (auto& e : a.linear) e = static_cast<std::uint8_t>(rng.below(p));
  std::vector<std::uint8_t> s(n);
  for (auto& e : s) e = static_cast<std::uint8_t>(rng.below(p));
  a.shift = FieldVector(p, std::move(s));
  return a;
}

}  // namespace hofa

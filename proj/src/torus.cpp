#include "hofa/torus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace hofa {

namespace {

constexpr std::uint64_t kTorusModulusLimit = std::uint64_t{1} << 31;

void validate_depth(int depth, int p) {
  if (depth < 0 || depth > max_supported_depth(p)) {
    throw ValidationError("torus.depth", "depth " + std::to_string(depth) +
                                             " outside supported range for p=" + std::to_string(p));
  }
}

std::uint64_t pow_u64(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::uint64_t mod_pow(std::uint64_t b, int e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e-- > 0) r = r * b % m;
  return r;
}

auto monomial_key(const Monomial& m) { return std::make_tuple(m.depth, m.total_exponent(), m.exps); }

// Applies a p x p matrix along every axis of a tensor of shape p^n, modulo m.
void axis_transform(std::vector<std::uint64_t>& a, int p, int n,
                    const std::vector<std::uint64_t>& matrix, std::uint64_t m) {
  std::vector<std::uint64_t> fiber(p), out(p);
  std::uint64_t stride = 1;
  for (int axis = 0; axis < n; ++axis) {
    const std::uint64_t block = stride * p;
    for (std::uint64_t base = 0; base < a.size(); base += block) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        for (int j = 0; j < p; ++j) fiber[j] = a[base + off + j * stride];
        for (int i = 0; i < p; ++i) {
          std::uint64_t acc = 0;
          for (int j = 0; j < p; ++j) acc = (acc + matrix[i * p + j] * fiber[j]) % m;
          out[i] = acc;
        }
        for (int i = 0; i < p; ++i) a[base + off + i * stride] = out[i];
      }
    }
    stride = block;
  }
}

// V[x][e] = x^e modulo m (with 0^0 = 1).
std::vector<std::uint64_t> vandermonde(int p, std::uint64_t m) {
  std::vector<std::uint64_t> v(p * p);
  for (int x = 0; x < p; ++x)
    for (int e = 0; e < p; ++e) v[x * p + e] = mod_pow(x, e, m);
  return v;
}

std::uint64_t inverse_mod_p(std::uint64_t a, int p) { return mod_pow(a, p - 2, p); }

// Inverse of the Vandermonde matrix over F_p by Gauss-Jordan elimination.
std::vector<std::uint64_t> inverse_vandermonde(int p) {
  auto v = vandermonde(p, p);
  std::vector<std::uint64_t> inv(p * p, 0);
  for (int i = 0; i < p; ++i) inv[i * p + i] = 1;
  for (int col = 0; col < p; ++col) {
    int pivot = col;
    while (v[pivot * p + col] == 0) ++pivot;
    for (int j = 0; j < p; ++j) {
      std::swap(v[col * p + j], v[pivot * p + j]);
      std::swap(inv[col * p + j], inv[pivot * p + j]);
    }
    const std::uint64_t s = inverse_mod_p(v[col * p + col], p);
    for (int j = 0; j < p; ++j) {
      v[col * p + j] = v[col * p + j] * s % p;
      inv[col * p + j] = inv[col * p + j] * s % p;
    }
    for (int r = 0; r < p; ++r) {
      if (r == col || v[r * p + col] == 0) continue;
      const std::uint64_t f = v[r * p + col];
      for (int j = 0; j < p; ++j) {
        v[r * p + j] = (v[r * p + j] + (p - f) * v[col * p + j]) % p;
        inv[r * p + j] = (inv[r * p + j] + (p - f) * inv[col * p + j]) % p;
      }
    }
  }
  return inv;
}

std::vector<std::uint8_t> exps_from_index(std::uint64_t idx, int p, int n) {
  std::vector<std::uint8_t> e(n);
  for (int i = 0; i < n; ++i) {
    e[i] = static_cast<std::uint8_t>(idx % p);
    idx /= p;
  }
  return e;
}

}  // namespace

int max_supported_depth(int p) {
  validate_prime(p);
  int k = 0;
  while (pow_u64(p, k + 2) < kTorusModulusLimit) ++k;
  return k;
}

// ---------------------------------------------------------------- TorusValue

TorusValue::TorusValue(std::uint64_t numerator, int depth, int p) : p_(validate_prime(p)), depth_(depth) {
  validate_depth(depth, p);
  num_ = numerator % pow_u64(p, depth + 1);
}

TorusValue TorusValue::iota(int field_value, int p) {
  validate_prime(p);
  if (field_value < 0 || field_value >= p) throw ValidationError("field.scalar", "field value out of range");
  return {static_cast<std::uint64_t>(field_value), 0, p};
}

TorusValue TorusValue::lifted(int depth) const {
  if (depth < depth_) throw ValidationError("torus.depth", "cannot lift to a smaller depth");
  validate_depth(depth, p_);
  return {num_ * pow_u64(p_, depth - depth_), depth, p_};
}

TorusValue TorusValue::canonical() const {
  int d = depth_;
  std::uint64_t n = num_;
  while (d > 0 && n % p_ == 0) {
    n /= p_;
    --d;
  }
  return {n, d, p_};
}

bool TorusValue::in_group(int k) const { return canonical().depth_ <= k; }

double TorusValue::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(pow_u64(p_, depth_ + 1));
}

TorusValue TorusValue::operator+(const TorusValue& o) const {
  if (o.p_ != p_) throw ValidationError("torus.prime", "torus values over different primes");
  const int d = std::max(depth_, o.depth_);
  return {lifted(d).num_ + o.lifted(d).num_, d, p_};
}

TorusValue TorusValue::operator-() const {
  const std::uint64_t m = pow_u64(p_, depth_ + 1);
  return {(m - num_) % m, depth_, p_};
}

TorusValue TorusValue::operator-(const TorusValue& o) const { return *this + (-o); }

TorusValue TorusValue::scaled(std::int64_t lambda) const {
  const auto m = static_cast<std::int64_t>(pow_u64(p_, depth_ + 1));
  const std::int64_t l = ((lambda % m) + m) % m;
  return {static_cast<std::uint64_t>(l) * num_, depth_, p_};
}

bool TorusValue::operator==(const TorusValue& o) const {
  if (o.p_ != p_) return false;
  const int d = std::max(depth_, o.depth_);
  return lifted(d).num_ == o.lifted(d).num_;
}

std::strong_ordering TorusValue::operator<=>(const TorusValue& o) const {
  if (auto c = p_ <=> o.p_; c != 0) return c;
  const int d = std::max(depth_, o.depth_);
  return lifted(d).num_ <=> o.lifted(d).num_;
}

// ------------------------------------------------------------------ Monomial

int Monomial::total_exponent() const { return std::accumulate(exps.begin(), exps.end(), 0); }

// ------------------------------------------------------------- TorusFunction

TorusFunction::TorusFunction(int p_, int n_, int depth_, std::vector<std::uint32_t> values)
    : p(validate_prime(p_)), n(n_), depth(depth_), num(std::move(values)) {
  validate_depth(depth, p);
  if (num.size() != checked_pow(p, n)) throw ValidationError("table.size", "torus table size is not p^n");
  const std::uint64_t m = modulus();
  for (auto v : num) {
    if (v >= m) throw ValidationError("table.value", "torus numerator out of range");
  }
}

bool TorusFunction::is_constant() const {
  return std::all_of(num.begin(), num.end(), [&](std::uint32_t v) { return v == num.front(); });
}

TorusFunction TorusFunction::lifted(int new_depth) const {
  if (new_depth < depth) throw ValidationError("torus.depth", "cannot lift to a smaller depth");
  validate_depth(new_depth, p);
  const std::uint64_t f = pow_u64(p, new_depth - depth);
  TorusFunction r = *this;
  r.depth = new_depth;
  for (auto& v : r.num) v = static_cast<std::uint32_t>(v * f);
  return r;
}

// -------------------------------------------------------------- NCPolynomial

NCPolynomial::NCPolynomial(int p, int n) : p_(validate_prime(p)), n_(n) {
  if (n < 0) throw ValidationError("poly.arity", "negative arity");
}

NCPolynomial::NCPolynomial(int p, int n, std::vector<Monomial> monomials) : NCPolynomial(p, n) {
  for (auto& m : monomials) {
    if (static_cast<int>(m.exps.size()) != n) {
      throw ValidationError("poly.monomial", "monomial has " + std::to_string(m.exps.size()) +
                                                 " exponents, expected " + std::to_string(n));
    }
    for (auto e : m.exps) {
      if (e >= p) throw ValidationError("poly.monomial", "exponent out of range [0, p-1]");
    }
    if (m.coeff < 0 || m.coeff >= p) throw ValidationError("poly.monomial", "coefficient out of range [0, p-1]");
    if (m.depth < 0 || m.depth > max_supported_depth(p)) {
      throw ValidationError("poly.monomial", "depth out of supported range");
    }
    if (m.coeff == 0) continue;
    if (m.total_exponent() == 0) {
      throw ValidationError("poly.monomial", "constant monomials (shifts) are not representable");
    }
    monomials_.push_back(std::move(m));
  }
  std::sort(monomials_.begin(), monomials_.end(),
            [](const Monomial& a, const Monomial& b) { return monomial_key(a) < monomial_key(b); });
  for (std::size_t i = 1; i < monomials_.size(); ++i) {
    if (monomial_key(monomials_[i]) == monomial_key(monomials_[i - 1])) {
      throw ValidationError("poly.monomial", "duplicate monomial key");
    }
  }
}

int NCPolynomial::degree() const {
  int d = 0;
  for (const auto& m : monomials_) d = std::max(d, m.degree(p_));
  return d;
}

int NCPolynomial::depth() const {
  int k = 0;
  for (const auto& m : monomials_) k = std::max(k, m.depth);
  return k;
}

TorusValue NCPolynomial::eval(const FieldVector& x) const {
  if (static_cast<int>(x.dim()) != n_ || x.p != p_) {
    throw ValidationError("poly.arity", "evaluation point does not match polynomial arity");
  }
  return eval_index(x.index());
}

TorusValue NCPolynomial::eval_index(std::uint64_t x) const {
  const int top = depth();
  const std::uint64_t m = pow_u64(p_, top + 1);
  std::vector<std::uint64_t> digits(n_);
  for (int i = 0; i < n_; ++i) {
    digits[i] = x % p_;
    x /= p_;
  }
  std::uint64_t acc = 0;
  for (const auto& mono : monomials_) {
    std::uint64_t term = static_cast<std::uint64_t>(mono.coeff) * pow_u64(p_, top - mono.depth) % m;
    for (int i = 0; i < n_ && term != 0; ++i) {
      if (mono.exps[i] != 0) term = term * mod_pow(digits[i], mono.exps[i], m) % m;
    }
    acc = (acc + term) % m;
  }
  return {acc, top, p_};
}

TorusFunction NCPolynomial::table() const {
  const int top = depth();
  const std::uint64_t m = pow_u64(p_, top + 1);
  const std::uint64_t size = checked_pow(p_, n_);
  // Per-monomial scaled coefficient and per-(variable, digit) powers.
  std::vector<std::uint32_t> out(size, 0);
  std::vector<std::uint64_t> power_table(static_cast<std::size_t>(p_) * p_);
  for (int v = 0; v < p_; ++v)
    for (int e = 0; e < p_; ++e) power_table[v * p_ + e] = mod_pow(v, e, m);
  std::vector<int> digits(n_, 0);
  for (std::uint64_t x = 0; x < size; ++x) {
    std::uint64_t acc = 0;
    for (const auto& mono : monomials_) {
      std::uint64_t term = static_cast<std::uint64_t>(mono.coeff) * pow_u64(p_, top - mono.depth) % m;
      for (int i = 0; i < n_ && term != 0; ++i) {
        if (mono.exps[i] != 0) term = term * power_table[digits[i] * p_ + mono.exps[i]] % m;
      }
      acc += term;
    }
    out[x] = static_cast<std::uint32_t>(acc % m);
    for (int i = 0; i < n_; ++i) {
      if (++digits[i] < p_) break;
      digits[i] = 0;
    }
  }
  return {p_, n_, top, std::move(out)};
}

std::map<std::vector<std::uint8_t>, std::uint64_t> NCPolynomial::padic_coefficients(int top) const {
  if (top < depth()) throw ValidationError("torus.depth", "p-adic precision below polynomial depth");
  const std::uint64_t m = pow_u64(p_, top + 1);
  std::map<std::vector<std::uint8_t>, std::uint64_t> out;
  for (const auto& mono : monomials_) {
    auto& c = out[mono.exps];
    c = (c + static_cast<std::uint64_t>(mono.coeff) * pow_u64(p_, top - mono.depth)) % m;
  }
  return out;
}

NCPolynomial NCPolynomial::from_padic(int p, int n, int top,
                                      const std::map<std::vector<std::uint8_t>, std::uint64_t>& coeffs) {
  validate_depth(top, p);
  const std::uint64_t m = pow_u64(p, top + 1);
  std::vector<Monomial> monos;
  for (const auto& [exps, raw] : coeffs) {
    const std::uint64_t c = raw % m;
    for (int k = 0; k <= top; ++k) {
      const int digit = static_cast<int>((c / pow_u64(p, top - k)) % p);
      if (digit != 0) monos.push_back({exps, k, digit});
    }
  }
  return {p, n, std::move(monos)};
}

NCPolynomial NCPolynomial::operator+(const NCPolynomial& o) const {
  if (o.p_ != p_ || o.n_ != n_) throw ValidationError("poly.mismatch", "polynomials over different spaces");
  const int top = std::max(depth(), o.depth());
  const std::uint64_t m = pow_u64(p_, top + 1);
  auto a = padic_coefficients(top);
  for (const auto& [exps, c] : o.padic_coefficients(top)) a[exps] = (a[exps] + c) % m;
  return from_padic(p_, n_, top, a);
}

NCPolynomial NCPolynomial::operator-() const { return scalar_multiple(*this, -1); }

bool NCPolynomial::operator==(const NCPolynomial& o) const {
  if (p_ != o.p_ || n_ != o.n_ || monomials_.size() != o.monomials_.size()) return false;
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    if (monomial_key(monomials_[i]) != monomial_key(o.monomials_[i]) ||
        monomials_[i].coeff != o.monomials_[i].coeff) {
      return false;
    }
  }
  return true;
}

std::pair<int, int> degree_depth_structural(const NCPolynomial& poly) {
  return {poly.degree(), poly.depth()};
}

NCPolynomial scalar_multiple(const NCPolynomial& poly, std::int64_t lambda) {
  const int top = poly.depth();
  const auto m = static_cast<std::int64_t>(pow_u64(poly.p(), top + 1));
  const auto l = static_cast<std::uint64_t>(((lambda % m) + m) % m);
  auto coeffs = poly.padic_coefficients(top);
  for (auto& [exps, c] : coeffs) c = c * l % static_cast<std::uint64_t>(m);
  return NCPolynomial::from_padic(poly.p(), poly.n(), top, coeffs);
}

NCPolynomial iota_embed(int p, int n, const std::vector<Monomial>& classical) {
  for (const auto& m : classical) {
    if (m.depth != 0) throw ValidationError("poly.monomial", "classical monomials must have depth 0");
  }
  return {p, n, classical};
}

NCPolynomial interpolate(const TorusFunction& f, const RunOptions& options) {
  const int p = f.p;
  const double work = static_cast<double>(f.size()) * f.n * p * (f.depth + 1);
  options.check(work, "interpolate");
  if (f.num.at(0) != 0) {
    throw ValidationError("torus.shift", "table has F(0) != 0; shifted polynomials are not representable");
  }
  const auto vinv = inverse_vandermonde(p);
  std::vector<std::uint64_t> cur(f.num.begin(), f.num.end());
  std::vector<Monomial> monos;
  for (int level = f.depth; level >= 0; --level) {
    std::vector<std::uint64_t> coeff(cur.size());
    for (std::size_t x = 0; x < cur.size(); ++x) coeff[x] = cur[x] % p;
    axis_transform(coeff, p, f.n, vinv, p);
    for (std::size_t e = 0; e < coeff.size(); ++e) {
      if (coeff[e] != 0) monos.push_back({exps_from_index(e, p, f.n), level, static_cast<int>(coeff[e])});
    }
    if (level == 0) break;
    const std::uint64_t m = pow_u64(p, level + 1);
    auto layer = coeff;
    axis_transform(layer, p, f.n, vandermonde(p, m), m);
    for (std::size_t x = 0; x < cur.size(); ++x) {
      const std::uint64_t diff = (cur[x] + m - layer[x]) % m;
      cur[x] = diff / p;
    }
  }
  return {p, f.n, std::move(monos)};
}

NCPolynomial scalar_multiple_via_table(const NCPolynomial& poly, std::int64_t lambda,
                                       const RunOptions& options) {
  auto t = poly.table();
  const auto m = static_cast<std::int64_t>(t.modulus());
  const auto l = static_cast<std::uint64_t>(((lambda % m) + m) % m);
  for (auto& v : t.num) v = static_cast<std::uint32_t>(v * l % static_cast<std::uint64_t>(m));
  return interpolate(t, options);
}

TorusFunction additive_derivative(const TorusFunction& f, const FieldVector& h) {
  if (h.p != f.p || static_cast<int>(h.dim()) != f.n) {
    throw ValidationError("torus.mismatch", "direction does not match table dimension");
  }
  const auto perm = VectorSpace(f.p, f.n).translation(h.index());
  const std::uint64_t m = f.modulus();
  TorusFunction out = f;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    out.num[x] = static_cast<std::uint32_t>((f.num[perm[x]] + m - f.num[x]) % m);
  }
  return out;
}

double degree_via_tables_work(int p, int n, int depth, int d_max) {
  const int cap = std::min(d_max, (n + depth) * (p - 1));
  // Non-decreasing direction sequences of length <= cap + 1 over n directions.
  double seqs = 1;
  for (int t = 1; t <= cap + 1; ++t) seqs = seqs * (n + t) / t;
  return seqs * std::pow(static_cast<double>(p), n);
}

DegreeResult degree_via_tables(const TorusFunction& f, int d_max, const RunOptions& options) {
  if (d_max < 0) throw ValidationError("degree.bound", "d_max must be non-negative");
  options.check(degree_via_tables_work(f.p, f.n, f.depth, d_max), "degree_via_tables");
  DegreeResult result;
  if (f.is_constant()) {
    result.degree = 0;
    return result;
  }
  VectorSpace space(f.p, f.n);
  std::vector<std::vector<std::uint64_t>> shifts(f.n);
  for (int i = 0; i < f.n; ++i) shifts[i] = space.translation(checked_pow(f.p, i));
  const std::uint64_t m = f.modulus();

  int best = 0;
  bool exceeded = false;
  // g is non-constant and was reached by `len` derivatives in directions < start.
  auto walk = [&](auto&& self, const std::vector<std::uint32_t>& g, int start, int len) -> void {
    best = std::max(best, len);
    if (len >= d_max) {
      exceeded = true;
      return;
    }
    std::vector<std::uint32_t> h(g.size());
    for (int i = start; i < f.n && !exceeded; ++i) {
      const auto& perm = shifts[i];
      bool constant = true;
      for (std::uint64_t x = 0; x < g.size(); ++x) {
        h[x] = static_cast<std::uint32_t>((g[perm[x]] + m - g[x]) % m);
        constant = constant && h[x] == h[0];
      }
      result.work += static_cast<double>(g.size());
      if (!constant) self(self, h, i, len + 1);
    }
  };
  walk(walk, f.num, 0, 0);
  if (!exceeded) result.degree = best + 1;
  return result;
}

bool degree_at_most_randomized(const TorusFunction& f, int d, std::uint64_t trials, RandomSeed seed) {
  if (d < 0 || d > 20) throw ValidationError("degree.bound", "randomized degree test needs 0 <= d <= 20");
  Rng rng(seed);
  VectorSpace space(f.p, f.n);
  const std::uint64_t m = f.modulus();
  const int dirs = d + 1;
  std::vector<std::uint64_t> h(dirs), corner(std::size_t{1} << dirs);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t x = rng.below(space.size());
    for (auto& v : h) v = rng.below(space.size());
    corner[0] = x;
    std::uint64_t acc = 0;
    for (std::size_t mask = 0; mask < corner.size(); ++mask) {
      if (mask != 0) {
        const int low = std::countr_zero(mask);
        corner[mask] = space.add(corner[mask & (mask - 1)], h[low]);
      }
      const bool negative = ((dirs - std::popcount(mask)) & 1) != 0;
      acc = (acc + (negative ? m - f.num[corner[mask]] : f.num[corner[mask]])) % m;
    }
    if (acc != 0) return false;
  }
  return true;
}

}  // namespace hofa

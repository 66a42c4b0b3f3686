#pragma once

// Brute-force reference implementations. Each one follows the defining
// formula directly and shares no kernel code with the library.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "hofa/functions.hpp"
#include "hofa/linear_systems.hpp"
#include "hofa/torus.hpp"

namespace oracle {

using hofa::BoolFunction;
using hofa::ComplexFunction;
using hofa::FieldVector;
using hofa::LinearFormSystem;
using hofa::NCPolynomial;
using hofa::Rational;
using hofa::TorusFunction;

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline std::vector<int> digits(std::uint64_t x, int p, int n) {
  std::vector<int> d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = static_cast<int>(x % p);
    x /= p;
  }
  return d;
}

inline std::uint64_t undigits(const std::vector<int>& d, int p) {
  std::uint64_t x = 0;
  for (std::size_t i = d.size(); i-- > 0;) x = x * p + static_cast<std::uint64_t>(((d[i] % p) + p) % p);
  return x;
}

inline std::uint64_t vadd(std::uint64_t a, std::uint64_t b, int p, int n) {
  auto da = digits(a, p, n), db = digits(b, p, n);
  for (int i = 0; i < n; ++i) da[i] += db[i];
  return undigits(da, p);
}

/// Numerator over p^(top+1) of P(x): every monomial summed over the integers.
inline std::uint64_t eval_numerator(const NCPolynomial& poly, std::uint64_t x, int top) {
  const int p = poly.p();
  const auto xs = digits(x, p, poly.n());
  const std::uint64_t q = ipow(p, top + 1);
  std::uint64_t acc = 0;
  for (const auto& m : poly.monomials()) {
    std::uint64_t term = static_cast<std::uint64_t>(m.coeff);
    for (int i = 0; i < poly.n(); ++i) term *= ipow(xs[i], m.exps[i]);
    acc = (acc + (term % q) * ipow(p, top - m.depth)) % q;
  }
  return acc;
}

/// ||f||_{U^d} from the full sum over (x, h_1, ..., h_d).
inline double gowers_direct(const ComplexFunction& f, int d) {
  const std::uint64_t N = f.values.size();
  const int p = f.p, n = f.n;
  std::complex<double> total = 0;
  std::vector<std::uint64_t> h(d, 0);
  const std::uint64_t tuples = ipow(N, d);
  // sums[S] = sum of h_i for i in S, recomputed per tuple
  std::vector<std::uint64_t> sums(std::uint64_t{1} << d);
  for (std::uint64_t t = 0; t < tuples; ++t) {
    std::uint64_t r = t;
    for (int i = 0; i < d; ++i) {
      h[i] = r % N;
      r /= N;
    }
    for (std::uint64_t S = 0; S < sums.size(); ++S) {
      std::uint64_t s = 0;
      for (int i = 0; i < d; ++i) {
        if ((S >> i) & 1) s = vadd(s, h[i], p, n);
      }
      sums[S] = s;
    }
    for (std::uint64_t x = 0; x < N; ++x) {
      std::complex<double> prod = 1;
      for (std::uint64_t S = 0; S < sums.size(); ++S) {
        const auto v = f.values[vadd(x, sums[S], p, n)];
        prod *= (std::popcount(S) % 2 == 0) ? v : std::conj(v);
      }
      total += prod;
    }
  }
  const double inner = (total / static_cast<double>(tuples * N)).real();
  return std::pow(std::max(inner, 0.0), 1.0 / std::pow(2.0, d));
}

/// Numerators of F(x + h) - F(x).
inline std::vector<std::uint64_t> derive(const std::vector<std::uint64_t>& F, std::uint64_t h, int p, int n,
                                         std::uint64_t q) {
  std::vector<std::uint64_t> out(F.size());
  for (std::uint64_t x = 0; x < F.size(); ++x) out[x] = (F[vadd(x, h, p, n)] + q - F[x]) % q;
  return out;
}

inline bool all_derivatives_vanish(const std::vector<std::uint64_t>& F, int order, std::uint64_t from, int p, int n,
                                   std::uint64_t q) {
  if (order == 0) {
    for (auto v : F) {
      if (v != 0) return false;
    }
    return true;
  }
  for (std::uint64_t h = from; h < F.size(); ++h) {
    if (!all_derivatives_vanish(derive(F, h, p, n, q), order - 1, h, p, n, q)) return false;
  }
  return true;
}

/// Least d <= d_max with every (d+1)-fold derivative zero, or d_max + 1.
inline int degree_brute(const TorusFunction& f, int d_max) {
  std::vector<std::uint64_t> F(f.num.begin(), f.num.end());
  const std::uint64_t q = ipow(f.p, f.depth + 1);
  for (int d = 0; d <= d_max; ++d) {
    if (all_derivatives_vanish(F, d + 1, 0, f.p, f.n, q)) return d;
  }
  return d_max + 1;
}

/// Points L_j(x_1, ..., x_ell) for the point tuple with packed index `t`.
inline std::vector<std::uint64_t> images(const LinearFormSystem& L, std::uint64_t t, int n) {
  const int p = L.p();
  const std::uint64_t N = ipow(p, n);
  std::vector<std::vector<int>> xs;
  for (int j = 0; j < L.ell(); ++j) {
    xs.push_back(digits(t % N, p, n));
    t /= N;
  }
  std::vector<std::uint64_t> out;
  for (const auto& form : L.forms()) {
    std::vector<int> y(n, 0);
    for (int j = 0; j < L.ell(); ++j) {
      for (int i = 0; i < n; ++i) y[i] += form[j] * xs[j][i];
    }
    out.push_back(undigits(y, p));
  }
  return out;
}

inline Rational t_L_naive(const BoolFunction& f, const LinearFormSystem& L) {
  const std::uint64_t tuples = ipow(ipow(f.p, f.n), L.ell());
  std::int64_t count = 0;
  for (std::uint64_t t = 0; t < tuples; ++t) {
    bool all = true;
    for (auto y : images(L, t, f.n)) all = all && f.values[y] == 1;
    count += all ? 1 : 0;
  }
  return {count, static_cast<std::int64_t>(tuples)};
}

inline std::vector<Rational> mu_naive(const BoolFunction& f, const LinearFormSystem& L) {
  const std::uint64_t tuples = ipow(ipow(f.p, f.n), L.ell());
  std::vector<std::int64_t> counts(std::size_t{1} << L.size(), 0);
  for (std::uint64_t t = 0; t < tuples; ++t) {
    const auto ys = images(L, t, f.n);
    std::size_t g = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) g |= static_cast<std::size_t>(f.values[ys[i]]) << i;
    ++counts[g];
  }
  std::vector<Rational> out;
  for (auto c : counts) out.emplace_back(c, static_cast<std::int64_t>(tuples));
  return out;
}

/// Every (exps, depth) with exps in [0, p-1]^n not all zero and
/// sum(exps) + depth(p-1) <= d, depth <= k.
inline std::vector<std::pair<std::vector<int>, int>> monomial_keys(int p, int n, int d, int k) {
  std::vector<std::pair<std::vector<int>, int>> keys;
  for (int depth = 0; depth <= k; ++depth) {
    for (std::uint64_t e = 1; e < ipow(p, n); ++e) {
      const auto exps = digits(e, p, n);
      int s = 0;
      for (int v : exps) s += v;
      if (s + depth * (p - 1) <= d) keys.emplace_back(exps, depth);
    }
  }
  return keys;
}

/// Tuples (P(lambda_1), ..., P(lambda_m)) over every polynomial of degree <= d,
/// depth <= k on F_p^ell, by direct enumeration of coefficient vectors.
inline std::set<std::vector<std::uint32_t>> consistent_brute(const LinearFormSystem& L, int d, int k) {
  const int p = L.p(), ell = L.ell();
  const auto keys = monomial_keys(p, ell, d, k);
  const std::uint64_t q = ipow(p, k + 1);
  std::set<std::vector<std::uint32_t>> out;
  const std::uint64_t polys = ipow(p, static_cast<int>(keys.size()));
  for (std::uint64_t c = 0; c < polys; ++c) {
    const auto coeffs = digits(c, p, static_cast<int>(keys.size()));
    std::vector<std::uint32_t> t;
    for (const auto& form : L.forms()) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < keys.size(); ++j) {
        if (coeffs[j] == 0) continue;
        std::uint64_t term = static_cast<std::uint64_t>(coeffs[j]) * ipow(p, k - keys[j].second);
        for (int i = 0; i < ell; ++i) term *= ipow(form[i], keys[j].first[i]);
        acc = (acc + term) % q;
      }
      t.push_back(static_cast<std::uint32_t>(acc));
    }
    out.insert(std::move(t));
  }
  return out;
}

/// f^(chi) = E_x f(x) (-1)^{chi . x} over F_2^n.
inline double walsh(const hofa::RealFunction& f, std::uint64_t chi) {
  double s = 0;
  for (std::uint64_t x = 0; x < f.values.size(); ++x) s += (std::popcount(x & chi) % 2 ? -1.0 : 1.0) * f.values[x];
  return s / static_cast<double>(f.values.size());
}

}  // namespace oracle

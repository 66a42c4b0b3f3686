#include "hofa/uniformity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "hofa/parallel.hpp"

namespace hofa {

namespace {

using cd = std::complex<double>;

double inner_to_norm(double inner, int d) {
  return std::pow(std::max(inner, 0.0), 1.0 / static_cast<double>(std::uint64_t{1} << d));
}

double mean_abs_sq(const std::vector<cd>& v) {
  CompensatedSum<cd> s;
  for (const auto& z : v) s.add(z);
  return std::norm(s.value() / static_cast<double>(v.size()));
}

std::vector<cd> transform_values(std::vector<cd> a, int p, int n) {
  std::vector<cd> roots(p);
  for (int j = 0; j < p; ++j) roots[j] = std::polar(1.0, -2.0 * std::numbers::pi * j / p);
  std::vector<cd> fiber(p);
  std::uint64_t stride = 1;
  for (int axis = 0; axis < n; ++axis) {
    const std::uint64_t block = stride * p;
    for (std::uint64_t base = 0; base < a.size(); base += block) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        for (int j = 0; j < p; ++j) fiber[j] = a[base + off + j * stride];
        for (int c = 0; c < p; ++c) {
          cd acc = 0;
          for (int x = 0; x < p; ++x) acc += roots[(c * x) % p] * fiber[x];
          a[base + off + c * stride] = acc;
        }
      }
    }
    stride = block;
  }
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& z : a) z *= scale;
  return a;
}

double u2_fourth_power(const std::vector<cd>& values, int p, int n) {
  const auto hat = transform_values(values, p, n);
  CompensatedSum<double> s;
  for (const auto& z : hat) s.add(std::norm(z) * std::norm(z));
  return s.value();
}

struct InnerContext {
  int p;
  int n;
  bool fourier_base;
  std::vector<std::vector<std::uint64_t>> shifts;  // shifts[h][x] = x + h
};

double inner_recursive(const InnerContext& ctx, const std::vector<cd>& f, int d) {
  if (d == 1) return mean_abs_sq(f);
  if (d == 2 && ctx.fourier_base) return u2_fourth_power(f, ctx.p, ctx.n);
  CompensatedSum<double> acc;
  std::vector<cd> g(f.size());
  for (std::uint64_t h = 0; h < f.size(); ++h) {
    const auto& perm = ctx.shifts[h];
    for (std::uint64_t x = 0; x < f.size(); ++x) g[x] = f[perm[x]] * std::conj(f[x]);
    acc.add(inner_recursive(ctx, g, d - 1));
  }
  return acc.value() / static_cast<double>(f.size());
}

}  // namespace

ComplexFunction phase(const TorusFunction& f) {
  const double m = static_cast<double>(f.modulus());
  std::vector<cd> v(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) v[x] = std::polar(1.0, 2.0 * std::numbers::pi * f.num[x] / m);
  return {f.p, f.n, std::move(v)};
}

ComplexFunction phase(const NCPolynomial& poly) { return phase(poly.table()); }

std::vector<cd> fourier_transform(const ComplexFunction& f) { return transform_values(f.values, f.p, f.n); }

double gowers_u2_fourier(const ComplexFunction& f) { return inner_to_norm(u2_fourth_power(f.values, f.p, f.n), 2); }

double gowers_norm_exact_work(int p, int n, int d, bool fourier_base) {
  const double size = std::pow(static_cast<double>(p), n);
  if (d == 1) return size;
  const int base = fourier_base ? 2 : 1;
  const double base_cost = fourier_base ? size * n * p : size;
  return std::pow(size, d - base) * (base_cost + size);
}

NormEstimate gowers_norm_exact(const ComplexFunction& f, int d, const RunOptions& options, bool fourier_base) {
  if (d < 1) throw ValidationError("gowers.order", "Gowers norm order must be at least 1");
  validate_bounded(f);
  options.check(gowers_norm_exact_work(f.p, f.n, d, fourier_base), "gowers_norm_exact");
  InnerContext ctx{f.p, f.n, fourier_base, {}};
  const int base = fourier_base ? 2 : 1;
  double inner;
  if (d <= base) {
    inner = inner_recursive(ctx, f.values, d);
  } else {
    VectorSpace space(f.p, f.n);
    ctx.shifts.resize(f.size());
    for (std::uint64_t h = 0; h < f.size(); ++h) ctx.shifts[h] = space.translation(h);
    const double total = chunked_sum<double>(f.size(), options.workers, [&](std::uint64_t lo, std::uint64_t hi) {
      CompensatedSum<double> acc;
      std::vector<cd> g(f.size());
      for (std::uint64_t h = lo; h < hi; ++h) {
        const auto& perm = ctx.shifts[h];
        for (std::uint64_t x = 0; x < f.size(); ++x) g[x] = f.values[perm[x]] * std::conj(f.values[x]);
        acc.add(inner_recursive(ctx, g, d - 1));
      }
      return acc.value();
    });
    inner = total / static_cast<double>(f.size());
  }
  NormEstimate est;
  est.inner = inner;
  est.value = inner_to_norm(inner, d);
  est.mode = NormMode::Exact;
  return est;
}

NormEstimate gowers_norm_mc(const ComplexOracle& f, int p, int n, int d, std::uint64_t samples, RandomSeed seed) {
  if (d < 1 || d > 20) throw ValidationError("gowers.order", "Monte-Carlo Gowers order must be in [1, 20]");
  if (samples < 1) throw ValidationError("gowers.samples", "at least one sample is required");
  VectorSpace space(p, n);
  Rng rng(seed);
  std::vector<std::uint64_t> h(d), corner(std::size_t{1} << d);
  CompensatedSum<cd> sum;
  // Welford on the real part.
  double mean_re = 0, m2 = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    corner[0] = rng.below(space.size());
    for (auto& v : h) v = rng.below(space.size());
    cd prod = f(corner[0]);
    for (std::size_t mask = 1; mask < corner.size(); ++mask) {
      corner[mask] = space.add(corner[mask & (mask - 1)], h[std::countr_zero(mask)]);
      const cd v = f(corner[mask]);
      prod *= (std::popcount(mask) & 1) ? std::conj(v) : v;
    }
    sum.add(prod);
    const double delta = prod.real() - mean_re;
    mean_re += delta / static_cast<double>(s + 1);
    m2 += delta * (prod.real() - mean_re);
  }
  const cd mean = sum.value() / static_cast<double>(samples);
  NormEstimate est;
  est.mode = NormMode::MonteCarlo;
  est.samples = samples;
  est.inner = mean.real();
  est.value = std::pow(std::abs(mean), 1.0 / static_cast<double>(std::uint64_t{1} << d));
  est.standard_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
  return est;
}

NormEstimate gowers_norm_mc(const ComplexFunction& f, int d, std::uint64_t samples, RandomSeed seed) {
  validate_bounded(f);
  return gowers_norm_mc([&](std::uint64_t x) { return f.values[x]; }, f.p, f.n, d, samples, seed);
}

std::vector<Monomial> allowed_monomials(int p, int n, int max_degree, int max_depth) {
  validate_prime(p);
  std::vector<Monomial> out;
  const std::uint64_t count = checked_pow(p, n);
  for (int k = 0; k <= max_depth; ++k) {
    const int budget = max_degree - k * (p - 1);
    if (budget < 1) break;
    for (std::uint64_t e = 1; e < count; ++e) {
      Monomial m;
      m.exps.resize(n);
      std::uint64_t r = e;
      for (int i = 0; i < n; ++i) {
        m.exps[i] = static_cast<std::uint8_t>(r % p);
        r /= p;
      }
      m.depth = k;
      m.coeff = 1;
      if (m.total_exponent() <= budget) out.push_back(std::move(m));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    return std::make_tuple(a.depth, a.total_exponent(), a.exps) < std::make_tuple(b.depth, b.total_exponent(), b.exps);
  });
  return out;
}

namespace {

using Mask = std::vector<std::uint64_t>;

bool subset_of(const Mask& a, const Mask& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] & ~b[i]) != 0) return false;
  }
  return true;
}

struct CoverSearch {
  std::vector<Mask> masks;
  std::vector<std::vector<std::size_t>> covering;  // pair -> masks covering it
  std::vector<std::size_t> chosen;

  bool solve(Mask& uncovered, int budget) {
    std::size_t first = 0;
    bool any = false;
    for (std::size_t w = 0; w < uncovered.size(); ++w) {
      if (uncovered[w] != 0) {
        first = w * 64 + std::countr_zero(uncovered[w]);
        any = true;
        break;
      }
    }
    if (!any) return true;
    if (budget == 0) return false;
    for (std::size_t c : covering[first]) {
      Mask next = uncovered;
      for (std::size_t w = 0; w < next.size(); ++w) next[w] &= ~masks[c][w];
      chosen.push_back(c);
      if (solve(next, budget - 1)) {
        uncovered = next;
        return true;
      }
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

RankResult rank_exact_small(const TorusFunction& f, int d, const RunOptions& options) {
  if (d < 1) throw ValidationError("rank.degree", "rank degree must be at least 1");
  RankResult result;
  if (f.is_constant()) {
    result.rank = 0;
    return result;
  }
  if (d == 1) return result;  // non-constant: infinite 1-rank

  const std::uint64_t points = f.size();
  if (points > 64) {
    throw WorkLimitError("work.rank_exact_small", static_cast<double>(points), 64,
                         "rank search supports at most 64 points (p^n <= 64)");
  }
  const int p = f.p;
  const int max_depth = std::max(0, (d - 2) / (p - 1));
  const auto monos = allowed_monomials(p, f.n, d - 1, max_depth);
  const double candidates = std::pow(static_cast<double>(p), static_cast<double>(monos.size()));
  options.check(candidates * static_cast<double>(points), "rank_exact_small");

  // Conflict pairs: points in different level sets of f.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t x = 0; x < points; ++x)
    for (std::uint32_t y = x + 1; y < points; ++y)
      if (f.num[x] != f.num[y]) pairs.emplace_back(x, y);
  const std::size_t words = (pairs.size() + 63) / 64;

  int top = 0;
  for (const auto& m : monos) top = std::max(top, m.depth);
  std::vector<std::vector<std::uint32_t>> mono_tables;
  for (const auto& m : monos) mono_tables.push_back(NCPolynomial(p, f.n, {m}).table().lifted(top).num);
  const std::uint32_t modulus = static_cast<std::uint32_t>(checked_pow(p, top + 1));

  std::map<Mask, std::vector<int>> unique;  // mask -> coefficient vector of first candidate
  std::vector<int> digits(monos.size(), 0);
  std::vector<std::uint32_t> q(points, 0);
  const auto total = static_cast<std::uint64_t>(candidates);
  for (std::uint64_t it = 1; it < total; ++it) {
    for (std::size_t j = 0; j < digits.size(); ++j) {
      const auto& t = mono_tables[j];
      if (++digits[j] < p) {
        for (std::uint64_t x = 0; x < points; ++x) q[x] = (q[x] + t[x]) % modulus;
        break;
      }
      digits[j] = 0;
      for (std::uint64_t x = 0; x < points; ++x) q[x] = (q[x] + modulus - static_cast<std::uint32_t>((p - 1) * static_cast<std::uint64_t>(t[x]) % modulus)) % modulus;
    }
    Mask mask(words, 0);
    bool nonempty = false;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (q[pairs[i].first] != q[pairs[i].second]) {
        mask[i / 64] |= std::uint64_t{1} << (i % 64);
        nonempty = true;
      }
    }
    if (nonempty) unique.try_emplace(std::move(mask), digits);
  }

  // Drop masks strictly dominated by another.
  std::vector<std::pair<Mask, std::vector<int>>> kept;
  std::vector<std::pair<Mask, std::vector<int>>> all(unique.begin(), unique.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
      if (i != j && subset_of(all[i].first, all[j].first)) dominated = true;
    }
    if (!dominated) kept.push_back(all[i]);
  }

  CoverSearch search;
  search.covering.resize(pairs.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    search.masks.push_back(kept[c].first);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if ((kept[c].first[i / 64] >> (i % 64)) & 1) search.covering[i].push_back(c);
    }
  }
  Mask full(words, 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) full[i / 64] |= std::uint64_t{1} << (i % 64);
  // Coordinate functions have degree 1 <= d-1 and separate every pair, so the
  // search terminates with r <= n.
  for (int r = 1; r <= std::max(1, f.n); ++r) {
    Mask uncovered = full;
    search.chosen.clear();
    if (search.solve(uncovered, r)) {
      result.rank = r;
      for (std::size_t c : search.chosen) {
        std::vector<Monomial> terms;
        for (std::size_t j = 0; j < monos.size(); ++j) {
          if (kept[c].second[j] != 0) terms.push_back({monos[j].exps, monos[j].depth, kept[c].second[j]});
        }
        result.witness.emplace_back(p, f.n, std::move(terms));
      }
      return result;
    }
  }
  throw ValidationError("rank.internal", "set cover search failed to terminate");
}

RankResult rank_exact_small(const NCPolynomial& poly, int d, const RunOptions& options) {
  return rank_exact_small(poly.table(), d, options);
}

NormEstimate analytic_uniformity(const NCPolynomial& poly, int d, const RunOptions& options) {
  return gowers_norm_exact(phase(poly), d, options);
}

}  // namespace hofa

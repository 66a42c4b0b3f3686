#include "hofa/factors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hofa/parallel.hpp"

namespace hofa {

// ---------------------------------------------------------- PolynomialFactor

PolynomialFactor::PolynomialFactor(int p, int n, std::vector<NCPolynomial> polys)
    : p_(validate_prime(p)), n_(n), polys_(std::move(polys)) {
  for (const auto& q : polys_) {
    if (q.p() != p_ || q.n() != n_) throw ValidationError("factor.mismatch", "factor polynomials must share (p, n)");
    degrees_.push_back(q.degree());
    depths_.push_back(q.depth());
  }
}

PolynomialFactor::PolynomialFactor(int p, int n, std::vector<NCPolynomial> polys, std::vector<int> degrees,
                                   std::vector<int> depths)
    : PolynomialFactor(p, n, std::move(polys)) {
  if (degrees != degrees_ || depths != depths_) {
    throw ValidationError("factor.declared", "declared degree/depth sequence differs from the polynomials");
  }
}

std::vector<TorusFunction> PolynomialFactor::tables() const {
  std::vector<TorusFunction> out;
  out.reserve(polys_.size());
  for (const auto& q : polys_) out.push_back(q.table());
  return out;
}

RealFunction factor_project(const RealFunction& f, const PolynomialFactor& factor) {
  if (f.p != factor.p() || f.n != factor.n()) throw ValidationError("factor.mismatch", "function and factor differ in (p, n)");
  const auto tables = factor.tables();
  std::map<std::vector<std::uint32_t>, std::vector<std::uint64_t>> atoms;
  std::vector<std::uint32_t> key(tables.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    for (std::size_t i = 0; i < tables.size(); ++i) key[i] = tables[i].num[x];
    atoms[key].push_back(x);
  }
  RealFunction out = f;
  for (const auto& [atom, members] : atoms) {
    CompensatedSum<double> s;
    for (auto x : members) s.add(f.values[x]);
    const double avg = s.value() / static_cast<double>(members.size());
    for (auto x : members) out.values[x] = avg;
  }
  return out;
}

RealFunction factor_project(const BoolFunction& f, const PolynomialFactor& factor) {
  validate_bool(f);
  return factor_project(to_real(f), factor);
}

// ---------------------------------------------------------- decomposition

namespace {

// Unnormalized Walsh-Hadamard transform: S(chi) = sum_x f(x) (-1)^{chi.x}.
std::vector<std::int64_t> walsh_sums(const BoolFunction& f) {
  std::vector<std::int64_t> a(f.values.begin(), f.values.end());
  for (std::size_t len = 1; len < a.size(); len <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const std::int64_t u = a[j], v = a[j + len];
        a[j] = u + v;
        a[j + len] = u - v;
      }
    }
  }
  return a;
}

// Reduces v against an F_2 echelon basis; returns true if v was independent.
bool insert_basis(std::vector<std::uint64_t>& basis, std::uint64_t v) {
  for (auto b : basis) v = std::min(v, v ^ b);
  if (v == 0) return false;
  basis.push_back(v);
  std::sort(basis.rbegin(), basis.rend());
  return true;
}

NCPolynomial linear_character(std::uint64_t chi, int n) {
  std::vector<Monomial> terms;
  for (int i = 0; i < n; ++i) {
    if ((chi >> i) & 1) {
      Monomial m;
      m.exps.assign(n, 0);
      m.exps[i] = 1;
      m.depth = 0;
      m.coeff = 1;
      terms.push_back(std::move(m));
    }
  }
  return {2, n, std::move(terms)};
}

}  // namespace

Decomposition decompose_degree1(const BoolFunction& f, double tau, int max_complexity) {
  if (f.p != 2) throw ValidationError("decompose.prime", "degree-1 decomposition is implemented for p = 2");
  if (!(tau > 0 && tau < 1)) throw ValidationError("decompose.tau", "tau must lie in (0, 1)");
  if (f.n > 62) throw ValidationError("decompose.dimension", "dimension too large");
  validate_bool(f);
  const auto sums = walsh_sums(f);
  const double scale = 1.0 / static_cast<double>(f.size());

  std::vector<std::pair<double, std::uint64_t>> large;
  for (std::uint64_t chi = 1; chi < sums.size(); ++chi) {
    const double mag = std::abs(static_cast<double>(sums[chi])) * scale;
    if (mag >= tau) large.emplace_back(mag, chi);
  }
  std::sort(large.begin(), large.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  std::vector<std::uint64_t> basis;
  for (const auto& [mag, chi] : large) {
    if (insert_basis(basis, chi) && static_cast<int>(basis.size()) > max_complexity) {
      throw FactorComplexityError(static_cast<double>(basis.size()), max_complexity, mag);
    }
  }
  std::sort(basis.begin(), basis.end());
  std::vector<NCPolynomial> polys;
  for (auto chi : basis) polys.push_back(linear_character(chi, f.n));
  PolynomialFactor factor(2, f.n, std::move(polys));

  RealFunction f1 = factor_project(f, factor);
  RealFunction f2 = f1;
  for (std::uint64_t x = 0; x < f.size(); ++x) f2.values[x] = static_cast<double>(f[x]) - f1.values[x];
  RealFunction f3 = RealFunction::filled(2, f.n, 0.0);

  std::vector<std::uint64_t> chars;
  for (const auto& [mag, chi] : large) chars.push_back(chi);
  std::sort(chars.begin(), chars.end());
  return {std::move(f1), std::move(f2), std::move(f3), std::move(factor), tau, std::move(chars)};
}

DecompApproxReport decomp_approx_check(const BoolFunction& f, const LinearFormSystem& system, double tau,
                                       const RunOptions& options) {
  if (system.declared_complexity() != 1) {
    throw ValidationError("decompose.complexity", "the system must declare true complexity 1");
  }
  const auto dec = decompose_degree1(f, tau);
  DecompApproxReport report;
  report.t_f = t_L_exact(f, system, options);
  report.t_f1 = t_L_exact(dec.f1, system, options);
  report.gap = std::abs(to_double(report.t_f) - report.t_f1);
  report.factor_complexity = dec.factor.size();
  std::ostringstream ctx;
  ctx << "m = " << system.size() << " forms; expanding t_L(f1 + f2 + f3) leaves 3^" << system.size() << " - 1 = "
      << (static_cast<int>(std::pow(3, system.size())) - 1)
      << " cross terms, each controlled by ||f2||_{U^2} <= tau^(1/2) = " << std::sqrt(tau)
      << " (f3 = 0, factor complexity " << dec.factor.size() << ")";
  report.bound_context = ctx.str();
  return report;
}

// ---------------------------------------------------------- constructions

HighRankFamily high_rank_family(int p, const std::vector<int>& degrees, const std::vector<int>& depths, int r) {
  validate_prime(p);
  if (degrees.size() != depths.size()) throw ValidationError("construct.shape", "degree and depth sequences differ in length");
  if (r < 1) throw ValidationError("construct.rank", "r must be positive");
  std::vector<int> block(degrees.size());
  int n = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 1) throw ValidationError("construct.degree", "degrees must be positive");
    if (depths[i] < 0 || depths[i] > (degrees[i] - 1) / (p - 1)) {
      throw ValidationError("construct.depth", "depth " + std::to_string(depths[i]) + " invalid for degree " +
                                                   std::to_string(degrees[i]));
    }
    block[i] = degrees[i] - (p - 1) * depths[i];
    n += block[i] * r;
  }
  std::vector<NCPolynomial> polys;
  int next = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    std::vector<Monomial> terms;
    for (int s = 0; s < r; ++s) {
      Monomial m;
      m.exps.assign(n, 0);
      for (int t = 0; t < block[i]; ++t) m.exps[next++] = 1;
      m.depth = depths[i];
      m.coeff = 1;
      terms.push_back(std::move(m));
    }
    polys.emplace_back(p, n, std::move(terms));
  }
  return {PolynomialFactor(p, n, std::move(polys), degrees, depths), n};
}

FactorRank factor_rank_small(const PolynomialFactor& factor, const RunOptions& options) {
  std::vector<std::int64_t> orders;
  double combos = 1;
  for (int k : factor.depths()) {
    orders.push_back(static_cast<std::int64_t>(checked_pow(factor.p(), k + 1)));
    combos *= static_cast<double>(orders.back());
  }
  options.check(combos, "factor_rank_small");
  FactorRank best;
  bool found = false;
  std::vector<std::int64_t> lambda(factor.size(), 0);
  for (std::uint64_t it = 1; it < static_cast<std::uint64_t>(combos); ++it) {
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (++lambda[i] < orders[i]) break;
      lambda[i] = 0;
    }
    NCPolynomial sum(factor.p(), factor.n());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (lambda[i] != 0) sum = sum + scalar_multiple(factor.polynomials()[i], lambda[i]);
    }
    std::optional<int> r;
    if (sum.is_zero()) {
      r = 0;
    } else {
      r = rank_exact_small(sum, sum.degree(), options).rank;
    }
    if (!r) {
      if (!found) {
        best.lambda = lambda;
        found = true;
      }
      continue;
    }
    if (!best.rank || *r < *best.rank) {
      best.rank = r;
      best.lambda = lambda;
      found = true;
      if (*r == 0) break;
    }
  }
  return best;
}

std::pair<std::uint64_t, std::uint64_t> split_top_digit(std::uint64_t M, int p, int k) {
  const std::uint64_t pk = checked_pow(p, k);
  if (M >= pk * p) throw ValidationError("dist.range", "M must lie in [0, p^(k+1))");
  return {M % pk, M / pk};
}

namespace {

std::uint64_t pow_mod(std::uint64_t b, int e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e-- > 0) r = r * b % m;
  return r;
}

// (a + b p^k)^p - (a + b p^k) - (a^p - a) mod p^(k+1)
std::uint64_t top_digit_rhs(std::uint64_t M, std::uint64_t a, int p, std::uint64_t q) {
  const std::uint64_t lhs = (pow_mod(M, p, q) + q - M % q) % q;
  const std::uint64_t low = (pow_mod(a, p, q) + q - a % q) % q;
  return (lhs + q - low) % q;
}

}  // namespace

bool top_digit_identity_as_printed(std::uint64_t M, int p, int k) {
  const auto [a, b] = split_top_digit(M, p, k);
  const std::uint64_t q = checked_pow(p, k + 1);
  return (b * checked_pow(p, k)) % q == top_digit_rhs(M, a, p, q);
}

bool top_digit_identity_signed(std::uint64_t M, int p, int k) {
  const auto [a, b] = split_top_digit(M, p, k);
  const std::uint64_t q = checked_pow(p, k + 1);
  return (b * checked_pow(p, k)) % q == (q - top_digit_rhs(M, a, p, q)) % q;
}

std::uint64_t recover_top_digit(std::uint64_t a, std::uint64_t beta, int p, int k) {
  if (k < 1) throw ValidationError("dist.depth", "top-digit recovery needs k >= 1");
  const std::uint64_t q = checked_pow(p, k + 1);
  const std::uint64_t low = (pow_mod(a, p, q) + q - a % q) % q;
  // (M^p - M) == (a^p - a) - b p^k  (mod p^(k+1))
  return ((low + q - beta % q) % q) / checked_pow(p, k);
}

TorusValue DepthReduction::reconstruct(const TorusValue& a_value, const TorusValue& bp_value,
                                       const TorusValue& r_value) const {
  const int p = a_value.p();
  const std::uint64_t a = a_value.canonical().lifted(k - 1).numerator();
  const std::uint64_t beta = bp_value.canonical().lifted(k).numerator();
  const std::uint64_t b = recover_top_digit(a, beta, p, k);
  return TorusValue(a + b * checked_pow(p, k), k, p) + r_value;
}

DepthReduction depth_reduce(const NCPolynomial& poly, int k) {
  const int p = poly.p();
  const int n = poly.n();
  if (k < 1) throw ValidationError("depth_reduce.shape", "depth reduction needs k >= 1");
  if (poly.depth() > k) throw ValidationError("depth_reduce.shape", "polynomial depth exceeds k");
  if (poly.degree() > 1 + k * (p - 1)) {
    throw ValidationError("depth_reduce.shape", "polynomial degree exceeds 1 + k(p-1)");
  }
  std::vector<int> coeffs(n, 0);
  std::vector<Monomial> rest;
  for (const auto& m : poly.monomials()) {
    if (m.depth < k) {
      rest.push_back(m);
      continue;
    }
    if (m.total_exponent() != 1) {
      throw ValidationError("depth_reduce.shape", "depth-k monomials must be linear |x_i|");
    }
    const auto i = static_cast<int>(std::find(m.exps.begin(), m.exps.end(), 1) - m.exps.begin());
    coeffs[i] = m.coeff;
  }
  std::vector<Monomial> a_terms;
  for (int i = 0; i < n; ++i) {
    if (coeffs[i] == 0) continue;
    Monomial m;
    m.exps.assign(n, 0);
    m.exps[i] = 1;
    m.depth = k - 1;
    m.coeff = coeffs[i];
    a_terms.push_back(std::move(m));
  }
  const std::uint64_t q = checked_pow(p, k + 1);
  const std::uint64_t size = checked_pow(p, n);
  std::vector<std::uint32_t> bp(size);
  for (std::uint64_t x = 0; x < size; ++x) {
    std::uint64_t M = 0, r = x;
    for (int i = 0; i < n; ++i) {
      M += static_cast<std::uint64_t>(coeffs[i]) * (r % p);
      r /= p;
    }
    bp[x] = static_cast<std::uint32_t>((pow_mod(M, p, q) + q - M % q) % q);
  }
  return {k, coeffs, NCPolynomial(p, n, std::move(a_terms)), TorusFunction(p, n, k, std::move(bp)),
          NCPolynomial(p, n, std::move(rest))};
}

NCPolynomial lowcorr_witness(int p, int m, int depth, int n) {
  if (m < 2) throw ValidationError("construct.block", "block size m must be at least 2");
  if (n < m) throw ValidationError("construct.dimension", "n must be at least m");
  std::vector<Monomial> terms;
  for (int s = 0; s < n / m; ++s) {
    Monomial mono;
    mono.exps.assign(n, 0);
    for (int t = 0; t < m; ++t) mono.exps[s * m + t] = 1;
    mono.depth = depth;
    mono.coeff = 1;
    terms.push_back(std::move(mono));
  }
  return {p, n, std::move(terms)};
}

CandidateFamily default_candidate_family(int p, int n, int max_degree, std::uint64_t cap,
                                         std::uint64_t random_extra, RandomSeed seed) {
  CandidateFamily fam;
  const int head = std::min(n, 4);
  const auto head_monos = allowed_monomials(p, head, max_degree, 0);
  const double count = std::pow(static_cast<double>(p), static_cast<double>(head_monos.size()));
  if (count <= static_cast<double>(cap)) {
    std::vector<int> digits(head_monos.size(), 0);
    for (std::uint64_t it = 0; it < static_cast<std::uint64_t>(count); ++it) {
      std::vector<Monomial> terms;
      for (std::size_t j = 0; j < digits.size(); ++j) {
        if (digits[j] == 0) continue;
        Monomial m = head_monos[j];
        m.exps.resize(n, 0);
        m.coeff = digits[j];
        terms.push_back(std::move(m));
      }
      fam.polys.emplace_back(p, n, std::move(terms));
      for (auto& d : digits) {
        if (++d < p) break;
        d = 0;
      }
    }
    fam.exhaustive = head == n;
  }
  if (random_extra > 0) {
    const auto all = allowed_monomials(p, n, max_degree, 0);
    Rng rng(seed);
    for (std::uint64_t s = 0; s < random_extra; ++s) {
      std::vector<Monomial> terms;
      for (const auto& m : all) {
        const int c = static_cast<int>(rng.below(p));
        if (c == 0) continue;
        terms.push_back({m.exps, 0, c});
      }
      fam.polys.emplace_back(p, n, std::move(terms));
    }
  }
  return fam;
}

CorrelationScan correlation_scan(const NCPolynomial& q, const std::vector<NCPolynomial>& candidates,
                                 const RunOptions& options) {
  const std::uint64_t size = checked_pow(q.p(), q.n());
  options.check(static_cast<double>(candidates.size()) * static_cast<double>(size), "correlation_scan");
  for (const auto& r : candidates) {
    if (r.p() != q.p() || r.n() != q.n()) throw ValidationError("scan.mismatch", "candidate differs in (p, n)");
  }
  const auto qt = q.table();
  CorrelationScan scan;
  scan.correlations.assign(candidates.size(), 0.0);
  chunked_map<int>(candidates.size(), options.workers, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t c = lo; c < hi; ++c) {
      const auto rt = candidates[c].table();
      const int top = std::max(qt.depth, rt.depth);
      const auto a = qt.lifted(top), b = rt.lifted(top);
      const std::uint64_t m = a.modulus();
      CompensatedSum<std::complex<double>> s;
      for (std::uint64_t x = 0; x < size; ++x) {
        const std::uint64_t diff = (a.num[x] + m - b.num[x]) % m;
        s.add(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(diff) / static_cast<double>(m)));
      }
      scan.correlations[c] = std::abs(s.value()) / static_cast<double>(size);
    }
    return 0;
  });
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (c == 0 || scan.correlations[c] > scan.max_correlation) {
      scan.max_correlation = scan.correlations[c];
      scan.argmax = c;
    }
  }
  return scan;
}

}  // namespace hofa

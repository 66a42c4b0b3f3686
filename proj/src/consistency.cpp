#include "hofa/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hofa/parallel.hpp"
#include "hofa/uniformity.hpp"

namespace hofa {

namespace {

void validate_degree_depth(int p, int d, int k) {
  if (d < 1) throw ValidationError("consistency.spec", "degree bound must be at least 1");
  if (k < 0 || k > (d - 1) / (p - 1)) {
    throw ValidationError("consistency.spec",
                          "depth " + std::to_string(k) + " invalid for degree " + std::to_string(d));
  }
  if (k > max_supported_depth(p)) throw ValidationError("consistency.spec", "depth exceeds supported range");
}

void require_affine(const LinearFormSystem& system) {
  if (!is_affine_system(system)) throw ValidationError("system.not_affine", "consistency needs an affine system");
}

std::uint64_t int_pow_mod(std::uint64_t b, int e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  while (e-- > 0) r = r * b % m;
  return r;
}

NCPolynomial padded(const NCPolynomial& poly, int d, int k) {
  const int p = poly.p();
  const int extra = d - k * (p - 1);
  const int n = poly.n() + extra;
  std::vector<Monomial> terms;
  for (auto m : poly.monomials()) {
    m.exps.resize(n, 0);
    terms.push_back(std::move(m));
  }
  Monomial pad;
  pad.exps.assign(n, 0);
  for (int i = poly.n(); i < n; ++i) pad.exps[i] = 1;
  pad.depth = k;
  pad.coeff = 1;
  terms.push_back(std::move(pad));
  return {p, n, std::move(terms)};
}

}  // namespace

ConsistencySpec::ConsistencySpec(int p_, std::vector<DegreeDepth> coords_) : p(validate_prime(p_)), coords(std::move(coords_)) {
  for (const auto& c : coords) validate_degree_depth(p, c.d, c.k);
}

ConsistencySpec ConsistencySpec::of(const PolynomialFactor& factor) {
  std::vector<DegreeDepth> coords;
  for (std::size_t i = 0; i < factor.size(); ++i) coords.push_back({factor.degrees()[i], factor.depths()[i]});
  return {factor.p(), std::move(coords)};
}

bool CoordinateSet::contains(const ValueTuple& t) const {
  return std::binary_search(tuples.begin(), tuples.end(), t);
}

CoordinateSet consistent_coordinate_set(const LinearFormSystem& system, int d, int k, const RunOptions& options) {
  const int p = system.p();
  validate_degree_depth(p, d, k);
  require_affine(system);
  const int ell = system.ell();
  const std::size_t m = system.size();
  const std::uint64_t q = checked_pow(p, k + 1);

  const auto monos = allowed_monomials(p, ell, d, k);
  const double bound = std::min(std::pow(static_cast<double>(q), static_cast<double>(m)), 1e18);
  options.check(bound * static_cast<double>(std::max<std::size_t>(1, monos.size())), "consistency");
  if (static_cast<double>(monos.size()) > kConsistentTupleCeiling) {
    throw WorkLimitError("work.consistency", static_cast<double>(monos.size()), kConsistentTupleCeiling,
                         "too many candidate monomials");
  }

  std::vector<ValueTuple> gens;
  std::vector<std::uint64_t> orders;
  for (const auto& mono : monos) {
    ValueTuple g(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t v = checked_pow(p, k - mono.depth);
      for (int j = 0; j < ell; ++j) v = v * int_pow_mod(system.form(i)[j], mono.exps[j], q) % q;
      g[i] = static_cast<std::uint32_t>(v);
    }
    gens.push_back(std::move(g));
    orders.push_back(checked_pow(p, mono.depth + 1));
  }

  // Breadth-first closure; each element remembers generator multiplicities.
  std::map<ValueTuple, std::size_t> seen;
  std::vector<ValueTuple> elems{ValueTuple(m, 0)};
  std::vector<std::vector<std::uint64_t>> mults{std::vector<std::uint64_t>(gens.size(), 0)};
  seen.emplace(elems[0], 0);
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      ValueTuple next(m);
      for (std::size_t i = 0; i < m; ++i) next[i] = static_cast<std::uint32_t>((elems[head][i] + gens[g][i]) % q);
      if (seen.contains(next)) continue;
      auto mult = mults[head];
      mult[g] = (mult[g] + 1) % orders[g];
      seen.emplace(next, elems.size());
      elems.push_back(std::move(next));
      mults.push_back(std::move(mult));
    }
  }

  CoordinateSet out;
  out.spec = {d, k};
  for (const auto& [tuple, idx] : seen) {
    NCPolynomial w(p, ell);
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (mults[idx][g] == 0) continue;
      Monomial mono = monos[g];
      mono.coeff = 1;
      w = w + scalar_multiple(NCPolynomial(p, ell, {mono}), static_cast<std::int64_t>(mults[idx][g]));
    }
    out.tuples.push_back(tuple);
    out.witnesses.push_back(std::move(w));
  }
  return out;
}

ConsistencyResult is_consistent(const LinearFormSystem& system, int d, int k, const ValueTuple& b, bool exact_type,
                                const RunOptions& options) {
  const int p = system.p();
  validate_degree_depth(p, d, k);
  if (b.size() != system.size()) throw ValidationError("consistency.tuple", "tuple length differs from the number of forms");
  const std::uint64_t q = checked_pow(p, k + 1);
  for (auto v : b) {
    if (v >= q) throw ValidationError("consistency.tuple", "value outside U_{k+1}");
  }
  const auto set = consistent_coordinate_set(system, d, k, options);
  const auto it = std::lower_bound(set.tuples.begin(), set.tuples.end(), b);
  if (it == set.tuples.end() || *it != b) return {};
  const auto& w = set.witnesses[static_cast<std::size_t>(it - set.tuples.begin())];
  return {true, exact_type ? padded(w, d, k) : w};
}

bool ConsistentTupleSet::contains(const ValueTuple& t) const {
  const std::size_t m = system.size();
  if (t.size() != m * coordinates.size()) return false;
  for (std::size_t c = 0; c < coordinates.size(); ++c) {
    ValueTuple part(t.begin() + static_cast<std::ptrdiff_t>(c * m), t.begin() + static_cast<std::ptrdiff_t>((c + 1) * m));
    if (!coordinates[c].contains(part)) return false;
  }
  return true;
}

std::vector<ValueTuple> ConsistentTupleSet::tuples() const {
  if (static_cast<double>(K) > kConsistentTupleCeiling) {
    throw WorkLimitError("work.consistency", static_cast<double>(K), kConsistentTupleCeiling,
                         "consistent set too large to list");
  }
  const std::size_t m = system.size();
  std::vector<ValueTuple> out;
  out.reserve(K);
  std::vector<std::size_t> idx(coordinates.size(), 0);
  for (std::uint64_t it = 0; it < K; ++it) {
    ValueTuple t;
    t.reserve(m * coordinates.size());
    for (std::size_t c = 0; c < coordinates.size(); ++c) {
      const auto& part = coordinates[c].tuples[idx[c]];
      t.insert(t.end(), part.begin(), part.end());
    }
    out.push_back(std::move(t));
    for (std::size_t c = coordinates.size(); c-- > 0;) {
      if (++idx[c] < coordinates[c].tuples.size()) break;
      idx[c] = 0;
    }
  }
  return out;
}

ConsistentTupleSet enumerate_consistent(const LinearFormSystem& system, const ConsistencySpec& spec,
                                        const RunOptions& options) {
  if (spec.p != system.p()) throw ValidationError("consistency.spec", "spec and system differ in p");
  ConsistentTupleSet out{system, spec, {}, 1};
  std::map<DegreeDepth, std::size_t> memo;
  double K = 1;
  for (const auto& c : spec.coords) {
    auto it = memo.find(c);
    if (it == memo.end()) {
      out.coordinates.push_back(consistent_coordinate_set(system, c.d, c.k, options));
      memo.emplace(c, out.coordinates.size() - 1);
    } else {
      out.coordinates.push_back(out.coordinates[it->second]);
    }
    K *= static_cast<double>(out.coordinates.back().tuples.size());
  }
  if (K > kConsistentTupleCeiling) {
    throw WorkLimitError("work.consistency", K, kConsistentTupleCeiling, "consistent set exceeds 2^24 tuples");
  }
  out.K = static_cast<std::uint64_t>(K);
  return out;
}

DirectEnumeration consistent_tuples_direct(const LinearFormSystem& system, int d, int k, int n,
                                           std::uint64_t samples, RandomSeed seed, double exhaustive_limit) {
  const int p = system.p();
  validate_degree_depth(p, d, k);
  require_affine(system);
  if (n < 1) throw ValidationError("consistency.dimension", "n must be positive");
  const std::size_t m = system.size();
  const int ell = system.ell();
  const VectorSpace space(p, n);
  const auto monos = allowed_monomials(p, n, d, k);
  const double candidates = std::pow(static_cast<double>(p), static_cast<double>(monos.size()));
  const double points = std::pow(static_cast<double>(space.size()), ell);

  auto build = [&](const std::vector<int>& coeffs) {
    std::vector<Monomial> terms;
    for (std::size_t j = 0; j < monos.size(); ++j) {
      if (coeffs[j] == 0) continue;
      Monomial mono = monos[j];
      mono.coeff = coeffs[j];
      terms.push_back(std::move(mono));
    }
    return NCPolynomial(p, n, std::move(terms));
  };
  auto lift = [&](const TorusValue& v) { return static_cast<std::uint32_t>(v.lifted(k).numerator()); };

  // Tuples are recorded by their base-q code in a dense table when it fits.
  const std::uint64_t q = checked_pow(p, k + 1);
  const double codes = std::pow(static_cast<double>(q), static_cast<double>(m));
  const bool dense = codes <= kConsistentTupleCeiling;
  std::vector<std::uint8_t> seen(dense ? static_cast<std::size_t>(codes) : 0, 0);
  std::set<ValueTuple> found;
  ValueTuple t(m);
  auto record = [&]() {
    if (dense) {
      std::uint64_t code = 0;
      for (std::size_t i = m; i-- > 0;) code = code * q + t[i];
      seen[code] = 1;
    } else {
      found.insert(t);
    }
  };

  DirectEnumeration out;
  if (candidates * points * static_cast<double>(m) <= exhaustive_limit) {
    out.exhaustive = true;
    std::vector<int> coeffs(monos.size(), 0);
    for (std::uint64_t it = 0; it < static_cast<std::uint64_t>(candidates); ++it) {
      const auto table = build(coeffs).table().lifted(k);
      for_each_form_image(space, system, 0, space.size(), [&](const std::uint64_t* images) {
        for (std::size_t i = 0; i < m; ++i) t[i] = table.num[images[i]];
        record();
        ++out.evaluations;
      });
      for (auto& c : coeffs) {
        if (++c < p) break;
        c = 0;
      }
    }
  } else {
    Rng rng(seed);
    std::vector<int> coeffs(monos.size());
    std::vector<std::uint64_t> xs(ell);
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (auto& c : coeffs) c = static_cast<int>(rng.below(p));
      for (auto& x : xs) x = rng.below(space.size());
      const auto poly = build(coeffs);
      for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t image = 0;
        for (int j = 0; j < ell; ++j) image = space.add(image, space.scale(system.form(i)[j], xs[j]));
        t[i] = lift(poly.eval_index(image));
      }
      record();
      ++out.evaluations;
    }
  }
  if (dense) {
    for (std::uint64_t code = 0; code < seen.size(); ++code) {
      if (!seen[code]) continue;
      std::uint64_t r = code;
      for (std::size_t i = 0; i < m; ++i) {
        t[i] = static_cast<std::uint32_t>(r % q);
        r /= q;
      }
      found.insert(t);
    }
  }
  out.tuples.assign(found.begin(), found.end());
  return out;
}

EquidistributionReport equidistribution_report(const PolynomialFactor& factor, const LinearFormSystem& system,
                                               EquidistMode mode, std::uint64_t samples, RandomSeed seed,
                                               const RunOptions& options) {
  if (factor.p() != system.p()) throw ValidationError("equidist.mismatch", "factor and system differ in p");
  require_affine(system);
  const auto set = enumerate_consistent(system, ConsistencySpec::of(factor), options);
  const int p = factor.p();
  const VectorSpace space(p, factor.n());
  const std::size_t m = system.size();
  const std::size_t C = factor.size();
  const auto tables = factor.tables();

  auto tuple_of = [&](const std::uint64_t* images) {
    ValueTuple t(C * m);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t i = 0; i < m; ++i) t[c * m + i] = tables[c].num[images[i]];
    }
    return t;
  };

  EquidistributionReport rep;
  rep.mode = mode;
  rep.K = set.K;
  using Counts = std::map<ValueTuple, std::uint64_t>;
  if (mode == EquidistMode::exact) {
    const double points = std::pow(static_cast<double>(space.size()), system.ell());
    options.check(points * static_cast<double>(m * std::max<std::size_t>(C, 1)), "equidist");
    const auto partial = chunked_map<Counts>(space.size(), options.workers, [&](std::uint64_t lo, std::uint64_t hi) {
      Counts local;
      for_each_form_image(space, system, lo, hi, [&](const std::uint64_t* images) { ++local[tuple_of(images)]; });
      return local;
    });
    for (const auto& part : partial) {
      for (const auto& [t, c] : part) rep.counts[t] += c;
    }
    rep.total = static_cast<std::uint64_t>(points);
  } else {
    Rng rng(seed);
    std::vector<std::uint64_t> xs(system.ell());
    std::vector<std::uint64_t> images(m);
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (auto& x : xs) x = rng.below(space.size());
      for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t image = 0;
        for (int j = 0; j < system.ell(); ++j) image = space.add(image, space.scale(system.form(i)[j], xs[j]));
        images[i] = image;
      }
      ++rep.counts[tuple_of(images.data())];
    }
    rep.total = samples;
  }

  const double total = static_cast<double>(std::max<std::uint64_t>(rep.total, 1));
  const double uniform = 1.0 / static_cast<double>(set.K);
  for (const auto& t : set.tuples()) {
    const auto it = rep.counts.find(t);
    const double freq = it == rep.counts.end() ? 0.0 : static_cast<double>(it->second) / total;
    rep.max_deviation = std::max(rep.max_deviation, std::abs(freq - uniform));
  }
  std::uint64_t leaked = 0;
  for (const auto& [t, c] : rep.counts) {
    if (!set.contains(t)) {
      leaked += c;
      ++rep.leaked_tuples;
    }
  }
  rep.leakage = static_cast<double>(leaked) / total;
  return rep;
}

}  // namespace hofa

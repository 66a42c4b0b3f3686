#include "hofa/limits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "hofa/parallel.hpp"

namespace hofa {

namespace {

bool same_system(const LinearFormSystem& a, const LinearFormSystem& b) {
  return a.p() == b.p() && a.ell() == b.ell() && a.forms() == b.forms();
}

void require_pattern_count(const LinearFormSystem& system) {
  if (system.size() > 20) throw ValidationError("limits.patterns", "at most 20 forms are supported");
}

double pattern_work(const BoolFunction& f, const LinearFormSystem& system) {
  return std::pow(static_cast<double>(f.size()), system.ell()) * static_cast<double>(std::max<std::size_t>(1, system.size()));
}

}  // namespace

BoolFunction restriction_sample(const BoolFunction& f, int k, RandomSeed seed) {
  if (k < 1) throw ValidationError("limits.dimension", "subspace dimension must be at least 1");
  const auto A = random_affine_map(k, f.n, f.p, seed);
  BoolFunction out = BoolFunction::filled(f.p, k, 0);
  for (std::uint64_t y = 0; y < out.size(); ++y) out[y] = f[A.apply_index(y)];
  return out;
}

RestrictionDistribution mu_f_exact(const BoolFunction& f, const LinearFormSystem& system, const RunOptions& options) {
  if (f.p != system.p()) throw ValidationError("limits.mismatch", "function and system differ in p");
  require_pattern_count(system);
  options.check(pattern_work(f, system), "mu_f_exact");
  const VectorSpace space = f.space();
  const std::size_t m = system.size();
  using Counts = std::vector<std::uint64_t>;
  const auto partial = chunked_map<Counts>(space.size(), options.workers, [&](std::uint64_t lo, std::uint64_t hi) {
    Counts local(std::uint64_t{1} << m, 0);
    for_each_form_image(space, system, lo, hi, [&](const std::uint64_t* images) {
      std::uint64_t g = 0;
      for (std::size_t i = 0; i < m; ++i) g |= static_cast<std::uint64_t>(f[images[i]] & 1) << i;
      ++local[g];
    });
    return local;
  });
  Counts counts(std::uint64_t{1} << m, 0);
  for (const auto& part : partial) {
    for (std::size_t g = 0; g < counts.size(); ++g) counts[g] += part[g];
  }
  const auto total = static_cast<std::int64_t>(checked_pow(space.size(), static_cast<unsigned>(system.ell())));
  RestrictionDistribution out{system, {}, std::vector<Rational>{}, true};
  for (auto c : counts) {
    out.exact->emplace_back(static_cast<std::int64_t>(c), total);
    out.probabilities.push_back(to_double(out.exact->back()));
  }
  return out;
}

RestrictionDistribution mu_f_mc(const BoolFunction& f, const LinearFormSystem& system, std::uint64_t samples,
                                RandomSeed seed) {
  if (f.p != system.p()) throw ValidationError("limits.mismatch", "function and system differ in p");
  if (samples == 0) throw ValidationError("limits.samples", "sample count must be positive");
  require_pattern_count(system);
  const VectorSpace space = f.space();
  const std::size_t m = system.size();
  std::vector<std::uint64_t> counts(std::uint64_t{1} << m, 0);
  std::vector<std::uint64_t> xs(system.ell());
  Rng rng(seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (auto& x : xs) x = rng.below(space.size());
    std::uint64_t g = 0;
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t image = 0;
      for (int j = 0; j < system.ell(); ++j) image = space.add(image, space.scale(system.form(i)[j], xs[j]));
      g |= static_cast<std::uint64_t>(f[image] & 1) << i;
    }
    ++counts[g];
  }
  RestrictionDistribution out{system, {}, std::nullopt, true};
  for (auto c : counts) out.probabilities.push_back(static_cast<double>(c) / static_cast<double>(samples));
  return out;
}

std::vector<Rational> subsystem_averages(const BoolFunction& f, const LinearFormSystem& system,
                                         const RunOptions& options) {
  require_pattern_count(system);
  std::vector<Rational> t(std::uint64_t{1} << system.size());
  t[0] = 1;
  for (std::uint64_t mask = 1; mask < t.size(); ++mask) t[mask] = t_L_exact(f, system.subsystem(mask), options);
  return t;
}

namespace {

template <class T>
std::vector<T> invert_moments(const std::vector<T>& t, std::size_t m) {
  if (t.size() != (std::size_t{1} << m)) {
    throw ValidationError("limits.moments", "expected 2^m subset averages");
  }
  std::vector<T> mu(t.size(), T(0));
  for (std::uint64_t g = 0; g < t.size(); ++g) {
    const std::uint64_t rest = (t.size() - 1) & ~g;
    // every S = g | sub with sub a subset of the remaining forms
    for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
      if (std::popcount(sub) % 2 == 0) {
        mu[g] += t[g | sub];
      } else {
        mu[g] -= t[g | sub];
      }
      if (sub == 0) break;
    }
  }
  return mu;
}

}  // namespace

RestrictionDistribution mu_from_t(const LinearFormSystem& system, const std::vector<Rational>& t_values) {
  require_pattern_count(system);
  auto mu = invert_moments(t_values, system.size());
  RestrictionDistribution out{system, {}, std::vector<Rational>{}, true};
  for (const auto& v : mu) {
    if (v < Rational(0) || v > Rational(1)) out.consistent = false;
    out.probabilities.push_back(to_double(v));
  }
  out.exact = std::move(mu);
  return out;
}

RestrictionDistribution mu_from_t(const LinearFormSystem& system, const std::vector<double>& t_values) {
  require_pattern_count(system);
  auto mu = invert_moments(t_values, system.size());
  RestrictionDistribution out{system, std::move(mu), std::nullopt, true};
  for (double v : out.probabilities) {
    if (v < -1e-9 || v > 1 + 1e-9) out.consistent = false;
  }
  return out;
}

Rational tv_distance_exact(const RestrictionDistribution& a, const RestrictionDistribution& b) {
  if (!same_system(a.system, b.system)) throw ValidationError("limits.system_mismatch", "distributions use different systems");
  if (!a.exact || !b.exact) throw ValidationError("limits.not_exact", "exact distance needs rational distributions");
  Rational sum = 0;
  for (std::size_t g = 0; g < a.exact->size(); ++g) sum += boost::abs((*a.exact)[g] - (*b.exact)[g]);
  return sum / 2;
}

double tv_distance(const RestrictionDistribution& a, const RestrictionDistribution& b) {
  if (!same_system(a.system, b.system)) throw ValidationError("limits.system_mismatch", "distributions use different systems");
  if (a.exact && b.exact) return to_double(tv_distance_exact(a, b));
  CompensatedSum<double> sum;
  for (std::size_t g = 0; g < a.probabilities.size(); ++g) sum.add(std::abs(a.probabilities[g] - b.probabilities[g]));
  return std::clamp(sum.value() / 2, 0.0, 1.0);
}

// ---------------------------------------------------------- limit objects

LimitObject::LimitObject(int p, std::optional<int> d, std::vector<GdCoordinate> coords, std::vector<double> table)
    : p_(validate_prime(p)), d_(d), coords_(std::move(coords)), table_(std::move(table)) {
  if (d_ && *d_ < 1) throw ValidationError("limit.degree", "degree bound must be at least 1");
  double size = 1;
  for (std::size_t c = 0; c < coords_.size(); ++c) {
    const auto& g = coords_[c];
    if (g.j < 1 || (d_ && g.j > *d_) || g.k < 0 || g.k > (g.j - 1) / (p_ - 1) || g.i < 1 ||
        g.k > max_supported_depth(p_)) {
      throw ValidationError("limit.coords", "invalid coordinate (" + std::to_string(g.j) + ", " +
                                                std::to_string(g.k) + ", " + std::to_string(g.i) + ")");
    }
    for (std::size_t c2 = 0; c2 < c; ++c2) {
      if (coords_[c2] == g) throw ValidationError("limit.coords", "duplicate coordinate");
    }
    size *= static_cast<double>(radix(c));
  }
  if (size > kConsistentTupleCeiling) throw ValidationError("limit.table", "truncation too large");
  if (table_.size() != static_cast<std::size_t>(size)) {
    throw ValidationError("limit.table", "table has " + std::to_string(table_.size()) + " entries, expected " +
                                             std::to_string(static_cast<std::uint64_t>(size)));
  }
  for (double v : table_) {
    if (!(v >= 0 && v <= 1)) throw ValidationError("limit.table", "table values must lie in [0, 1]");
  }
}

LimitObject LimitObject::constant(int p, std::optional<int> d, double value) { return {p, d, {}, {value}}; }

std::uint64_t LimitObject::radix(std::size_t c) const { return checked_pow(p_, coords_.at(c).k + 1); }

std::uint64_t LimitObject::index_of(const std::vector<std::uint32_t>& b) const {
  if (b.size() != coords_.size()) throw ValidationError("limit.value", "value tuple has the wrong length");
  std::uint64_t idx = 0, stride = 1;
  for (std::size_t c = 0; c < coords_.size(); ++c) {
    const auto r = radix(c);
    if (b[c] >= r) throw ValidationError("limit.value", "value outside the coordinate group");
    idx += b[c] * stride;
    stride *= r;
  }
  return idx;
}

std::vector<std::uint32_t> LimitObject::values_of(std::uint64_t index) const {
  std::vector<std::uint32_t> b(coords_.size());
  for (std::size_t c = 0; c < coords_.size(); ++c) {
    const auto r = radix(c);
    b[c] = static_cast<std::uint32_t>(index % r);
    index /= r;
  }
  return b;
}

double LimitObject::mean() const {
  CompensatedSum<double> s;
  for (double v : table_) s.add(v);
  return s.value() / static_cast<double>(table_.size());
}

namespace {

// offsets[c][t][i]: contribution of coordinate c's t-th consistent tuple to
// the table index of form i.
struct ConsistentOffsets {
  std::vector<std::vector<std::vector<std::uint64_t>>> offsets;
  double count = 1;
};

ConsistentOffsets consistent_offsets(const LimitObject& gamma, const LinearFormSystem& system,
                                     const RunOptions& options) {
  if (gamma.p() != system.p()) throw ValidationError("limits.mismatch", "limit object and system differ in p");
  ConsistentOffsets out;
  std::map<std::pair<int, int>, CoordinateSet> memo;
  std::uint64_t stride = 1;
  for (std::size_t c = 0; c < gamma.coords().size(); ++c) {
    const auto& g = gamma.coords()[c];
    auto it = memo.find({g.j, g.k});
    if (it == memo.end()) it = memo.emplace(std::pair{g.j, g.k}, consistent_coordinate_set(system, g.j, g.k, options)).first;
    std::vector<std::vector<std::uint64_t>> per;
    for (const auto& t : it->second.tuples) {
      std::vector<std::uint64_t> o(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) o[i] = t[i] * stride;
      per.push_back(std::move(o));
    }
    out.count *= static_cast<double>(per.size());
    out.offsets.push_back(std::move(per));
    stride *= gamma.radix(c);
  }
  return out;
}

}  // namespace

double t_L_gamma(const LimitObject& gamma, const LinearFormSystem& system, const RunOptions& options) {
  const auto co = consistent_offsets(gamma, system, options);
  const std::size_t m = system.size();
  options.check(co.count * static_cast<double>(std::max<std::size_t>(m, 1)), "t_L_gamma");
  const std::size_t C = co.offsets.size();
  std::vector<std::size_t> idx(C, 0);
  std::vector<std::uint64_t> where(m);
  CompensatedSum<double> sum;
  const auto total = static_cast<std::uint64_t>(co.count);
  for (std::uint64_t it = 0; it < total; ++it) {
    std::fill(where.begin(), where.end(), 0);
    for (std::size_t c = 0; c < C; ++c) {
      const auto& o = co.offsets[c][idx[c]];
      for (std::size_t i = 0; i < m; ++i) where[i] += o[i];
    }
    double prod = 1;
    for (std::size_t i = 0; i < m; ++i) prod *= gamma.table()[where[i]];
    sum.add(prod);
    for (std::size_t c = 0; c < C; ++c) {
      if (++idx[c] < co.offsets[c].size()) break;
      idx[c] = 0;
    }
  }
  return sum.value() / co.count;
}

namespace {

std::uint64_t draw_pattern(const LimitObject& gamma, const ConsistentOffsets& co, std::size_t m, Rng& rng) {
  std::vector<std::uint64_t> where(m, 0);
  for (const auto& per : co.offsets) {
    const auto& o = per[rng.below(per.size())];
    for (std::size_t i = 0; i < m; ++i) where[i] += o[i];
  }
  std::uint64_t g = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (rng.uniform01() < gamma.table()[where[i]]) g |= std::uint64_t{1} << i;
  }
  return g;
}

}  // namespace

std::uint64_t mu_gamma_sample(const LimitObject& gamma, const LinearFormSystem& system, RandomSeed seed,
                              const RunOptions& options) {
  require_pattern_count(system);
  const auto co = consistent_offsets(gamma, system, options);
  Rng rng(seed);
  return draw_pattern(gamma, co, system.size(), rng);
}

std::vector<std::uint64_t> mu_gamma_samples(const LimitObject& gamma, const LinearFormSystem& system,
                                            std::uint64_t count, RandomSeed seed, const RunOptions& options) {
  require_pattern_count(system);
  const auto co = consistent_offsets(gamma, system, options);
  std::vector<std::uint64_t> out(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    Rng rng(seed.split(s));
    out[s] = draw_pattern(gamma, co, system.size(), rng);
  }
  return out;
}

LimitObject coarsen(const LimitObject& gamma, int t) {
  if (t < 1) throw ValidationError("limit.coarsen", "truncation level must be at least 1");
  std::vector<GdCoordinate> kept;
  std::vector<std::size_t> kept_pos;
  for (std::size_t c = 0; c < gamma.coords().size(); ++c) {
    const auto& g = gamma.coords()[c];
    if (g.j <= t && g.i <= t) {
      kept.push_back(g);
      kept_pos.push_back(c);
    }
  }
  std::uint64_t size = 1;
  for (auto c : kept_pos) size *= gamma.radix(c);
  std::vector<CompensatedSum<double>> sums(size);
  std::vector<std::uint64_t> counts(size, 0);
  for (std::uint64_t idx = 0; idx < gamma.table().size(); ++idx) {
    const auto b = gamma.values_of(idx);
    std::uint64_t target = 0, stride = 1;
    for (auto c : kept_pos) {
      target += b[c] * stride;
      stride *= gamma.radix(c);
    }
    sums[target].add(gamma.table()[idx]);
    ++counts[target];
  }
  std::vector<double> table(size);
  for (std::uint64_t i = 0; i < size; ++i) table[i] = std::clamp(sums[i].value() / static_cast<double>(counts[i]), 0.0, 1.0);
  return {gamma.p(), gamma.d(), std::move(kept), std::move(table)};
}

Realization realize(const LimitObject& gamma, int r, RandomSeed seed, const RunOptions& options) {
  std::vector<int> degrees, depths;
  for (const auto& g : gamma.coords()) {
    degrees.push_back(g.j);
    depths.push_back(g.k);
  }
  int n = 0;
  for (std::size_t c = 0; c < degrees.size(); ++c) n += (degrees[c] - (gamma.p() - 1) * depths[c]) * std::max(r, 1);
  options.check(std::pow(static_cast<double>(gamma.p()), n) * static_cast<double>(std::max<std::size_t>(1, degrees.size())),
                "realize");
  auto family = high_rank_family(gamma.p(), degrees, depths, r);
  std::vector<TorusFunction> tables;
  for (std::size_t c = 0; c < family.factor.size(); ++c) {
    tables.push_back(family.factor.polynomials()[c].table().lifted(depths[c]));
  }
  const std::uint64_t size = checked_pow(gamma.p(), family.n_required);
  std::vector<double> real(size);
  std::vector<std::uint32_t> b(tables.size());
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::size_t c = 0; c < tables.size(); ++c) b[c] = tables[c].num[x];
    real[x] = gamma(b);
  }
  Rng rng(seed);
  std::vector<std::uint8_t> bits(size);
  for (std::uint64_t x = 0; x < size; ++x) bits[x] = rng.uniform01() < real[x] ? 1 : 0;
  return {std::move(family.factor), RealFunction(gamma.p(), family.n_required, std::move(real)),
          BoolFunction(gamma.p(), family.n_required, std::move(bits))};
}

std::vector<ConvergenceReport> convergence_test(const std::vector<BoolFunction>& sequence,
                                                const std::vector<LinearFormSystem>& systems, double eps,
                                                std::size_t burn_in, std::uint64_t samples, RandomSeed seed,
                                                const RunOptions& options) {
  if (sequence.empty()) throw ValidationError("converge.sequence", "sequence must be non-empty");
  if (!(eps > 0)) throw ValidationError("converge.eps", "eps must be positive");
  std::vector<ConvergenceReport> out;
  for (std::size_t s = 0; s < systems.size(); ++s) {
    const auto& system = systems[s];
    if (!is_affine_system(system)) throw ValidationError("system.not_affine", "convergence needs affine systems");
    ConvergenceReport rep{system, {}, {}, true, true};
    std::vector<RestrictionDistribution> mus;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
      if (pattern_work(sequence[i], system) <= options.work_ceiling) {
        mus.push_back(mu_f_exact(sequence[i], system, options));
      } else {
        mus.push_back(mu_f_mc(sequence[i], system, samples, seed.split(s).split(i)));
        rep.exact = false;
      }
    }
    const std::size_t N = mus.size();
    rep.distances.assign(N, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = i + 1; j < N; ++j) rep.distances[i][j] = rep.distances[j][i] = tv_distance(mus[i], mus[j]);
    }
    for (std::size_t i = 0; i + 1 < N; ++i) {
      rep.consecutive.push_back(rep.distances[i][i + 1]);
      if (i >= burn_in && !(rep.consecutive.back() < eps)) rep.convergent = false;
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace hofa

#include "hofa/linear_systems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "hofa/parallel.hpp"

namespace hofa {

LinearFormSystem::LinearFormSystem(int p, int ell, std::vector<std::vector<int>> forms,
                                   std::optional<int> declared_complexity)
    : p_(validate_prime(p)), ell_(ell), forms_(std::move(forms)), declared_complexity_(declared_complexity) {
  if (ell < 1) throw ValidationError("system.ell", "a system needs at least one variable");
  std::set<std::vector<int>> seen;
  for (const auto& f : forms_) {
    if (static_cast<int>(f.size()) != ell) {
      throw ValidationError("system.form", "form has " + std::to_string(f.size()) + " coefficients, expected " +
                                               std::to_string(ell));
    }
    for (int c : f) {
      if (c < 0 || c >= p) throw ValidationError("system.form", "coefficient out of range [0, p-1]");
    }
    if (!seen.insert(f).second) throw ValidationError("system.form", "forms must be distinct");
  }
  if (forms_.size() > 30) throw ValidationError("system.size", "at most 30 forms are supported");
  if (declared_complexity_ && *declared_complexity_ < 0) {
    throw ValidationError("system.complexity", "declared complexity must be non-negative");
  }
}

LinearFormSystem LinearFormSystem::subsystem(std::uint64_t mask) const {
  std::vector<std::vector<int>> sub;
  for (std::size_t i = 0; i < forms_.size(); ++i) {
    if ((mask >> i) & 1) sub.push_back(forms_[i]);
  }
  return {p_, ell_, std::move(sub), declared_complexity_};
}

bool is_affine_system(const LinearFormSystem& system) {
  return std::all_of(system.forms().begin(), system.forms().end(), [](const auto& f) { return f[0] == 1; });
}

int complexity_bound(const LinearFormSystem& system) {
  if (!is_affine_system(system)) {
    throw ValidationError("system.not_affine", "complexity bound m*p requires an affine system");
  }
  if (system.declared_complexity()) return *system.declared_complexity();
  return static_cast<int>(system.size()) * system.p();
}

double t_L_work(int p, int n, const LinearFormSystem& system) {
  return std::pow(static_cast<double>(p), static_cast<double>(n) * system.ell()) *
         static_cast<double>(std::max<std::size_t>(1, system.size()));
}

namespace {

void check_space(int p, const LinearFormSystem& system) {
  if (p != system.p()) throw ValidationError("system.mismatch", "function and system are over different primes");
}

template <class T, class Get>
T exact_average(const VectorSpace& space, const LinearFormSystem& system, const RunOptions& options, Get&& get) {
  const std::size_t m = system.size();
  const T total = chunked_sum<T>(space.size(), options.workers, [&](std::uint64_t lo, std::uint64_t hi) {
    CompensatedSum<T> acc;
    for_each_form_image(space, system, lo, hi, [&](const std::uint64_t* img) {
      T prod = 1.0;
      for (std::size_t j = 0; j < m; ++j) prod *= get(img[j]);
      acc.add(prod);
    });
    return acc.value();
  });
  return total / std::pow(static_cast<double>(space.size()), system.ell());
}

class PackedBits {
 public:
  explicit PackedBits(const BoolFunction& f) : words_((f.size() + 63) / 64, 0) {
    for (std::uint64_t i = 0; i < f.size(); ++i) {
      if (f[i]) words_[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }
  bool test(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  std::vector<std::uint64_t> words_;
};

/// Bit y of the result is bit (y XOR s) of w, for s < 64.
std::uint64_t xor_permute(std::uint64_t w, std::uint64_t s) {
  static constexpr std::uint64_t kLow[6] = {0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
                                            0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull};
  for (int b = 0; b < 6; ++b) {
    if ((s >> b) & 1) {
      const int shift = 1 << b;
      w = ((w & kLow[b]) << shift) | ((w >> shift) & kLow[b]);
    }
  }
  return w;
}

/// Tuples over F_2 with x_1 in [lo, hi), sweeping the last variable a word at
/// a time: for fixed x_1..x_{ell-1} the forms containing x_ell select XOR
/// translates of f, which are ANDed and counted.
std::int64_t count_f2_packed(const PackedBits& bits, std::uint64_t size, const LinearFormSystem& system,
                             std::uint64_t lo, std::uint64_t hi) {
  const int ell = system.ell();
  const std::size_t m = system.size();
  const auto& words = bits.words();
  const std::uint64_t nwords = size / 64;
  std::vector<std::uint64_t> x(ell, 0), base(m);
  std::vector<std::size_t> moving, fixed;
  for (std::size_t j = 0; j < m; ++j) (system.form(j)[ell - 1] ? moving : fixed).push_back(j);
  std::uint64_t outer_total = 1;
  for (int i = 1; i < ell - 1; ++i) outer_total *= size;
  std::int64_t c = 0;
  for (std::uint64_t x1 = lo; x1 < hi; ++x1) {
    x[0] = x1;
    std::fill(x.begin() + 1, x.end(), 0);
    for (std::uint64_t r = 0; r < outer_total; ++r) {
      for (std::size_t j = 0; j < m; ++j) {
        std::uint64_t b = 0;
        for (int i = 0; i < ell - 1; ++i)
          if (system.form(j)[i]) b ^= x[i];
        base[j] = b;
      }
      bool ok = true;
      for (auto j : fixed) ok = ok && bits.test(base[j]);
      if (ok) {
        if (moving.empty()) {
          c += static_cast<std::int64_t>(size);
        } else {
          for (std::uint64_t w = 0; w < nwords; ++w) {
            std::uint64_t acc = ~std::uint64_t{0};
            for (auto j : moving) acc &= xor_permute(words[w ^ (base[j] >> 6)], base[j] & 63);
            c += std::popcount(acc);
          }
        }
      }
      for (int i = 1; i < ell - 1; ++i) {
        if (++x[i] < size) break;
        x[i] = 0;
      }
    }
  }
  return c;
}

}  // namespace

Rational t_L_exact(const BoolFunction& f, const LinearFormSystem& system, const RunOptions& options) {
  check_space(f.p, system);
  validate_bool(f);
  options.check(t_L_work(f.p, f.n, system), "t_L_exact");
  const std::uint64_t denominator = checked_pow(checked_pow(f.p, f.n), system.ell());
  const VectorSpace space = f.space();
  const PackedBits bits(f);
  const std::size_t m = system.size();
  std::int64_t count;
  if (f.p == 2 && system.ell() >= 2 && space.size() >= 64) {
    count = chunked_sum<std::int64_t>(space.size(), options.workers, [&](std::uint64_t lo, std::uint64_t hi) {
      return count_f2_packed(bits, space.size(), system, lo, hi);
    });
  } else if (f.p == 2) {
    // Each image is the XOR of the variables with coefficient 1.
    std::vector<std::uint32_t> support(m, 0);
    for (std::size_t j = 0; j < m; ++j)
      for (int i = 0; i < system.ell(); ++i)
        if (system.form(j)[i]) support[j] |= 1u << i;
    count = chunked_sum<std::int64_t>(space.size(), options.workers, [&](std::uint64_t lo, std::uint64_t hi) {
      std::int64_t c = 0;
      const int ell = system.ell();
      const std::uint64_t size = space.size();
      std::vector<std::uint64_t> x(ell, 0);
      std::uint64_t rest_total = 1;
      for (int i = 1; i < ell; ++i) rest_total *= size;
      for (std::uint64_t x1 = lo; x1 < hi; ++x1) {
        x[0] = x1;
        std::fill(x.begin() + 1, x.end(), 0);
        for (std::uint64_t r = 0; r < rest_total; ++r) {
          bool all = true;
          for (std::size_t j = 0; j < m && all; ++j) {
            std::uint64_t img = 0;
            for (std::uint32_t s = support[j]; s != 0; s &= s - 1) img ^= x[std::countr_zero(s)];
            all = bits.test(img);
          }
          c += all ? 1 : 0;
          for (int i = 1; i < ell; ++i) {
            if (++x[i] < size) break;
            x[i] = 0;
          }
        }
      }
      return c;
    });
  } else {
    count = chunked_sum<std::int64_t>(space.size(), options.workers, [&](std::uint64_t lo, std::uint64_t hi) {
      std::int64_t c = 0;
      for_each_form_image(space, system, lo, hi, [&](const std::uint64_t* img) {
        for (std::size_t j = 0; j < m; ++j)
          if (!bits.test(img[j])) return;
        ++c;
      });
      return c;
    });
  }
  return {count, static_cast<std::int64_t>(denominator)};
}

double t_L_exact(const RealFunction& f, const LinearFormSystem& system, const RunOptions& options) {
  check_space(f.p, system);
  options.check(t_L_work(f.p, f.n, system), "t_L_exact");
  return exact_average<double>(f.space(), system, options, [&](std::uint64_t x) { return f.values[x]; });
}

std::complex<double> t_L_exact(const ComplexFunction& f, const LinearFormSystem& system, const RunOptions& options) {
  check_space(f.p, system);
  options.check(t_L_work(f.p, f.n, system), "t_L_exact");
  return exact_average<std::complex<double>>(f.space(), system, options,
                                             [&](std::uint64_t x) { return f.values[x]; });
}

AverageEstimate t_L_mc(const RealFunction& f, const LinearFormSystem& system, std::uint64_t samples,
                       RandomSeed seed) {
  check_space(f.p, system);
  if (samples < 1) throw ValidationError("tl.samples", "at least one sample is required");
  const VectorSpace space = f.space();
  Rng rng(seed);
  std::vector<std::uint64_t> x(system.ell());
  double mean = 0, m2 = 0;
  CompensatedSum<double> sum;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (auto& v : x) v = rng.below(space.size());
    double prod = 1.0;
    for (std::size_t j = 0; j < system.size(); ++j) {
      std::uint64_t img = 0;
      for (int i = 0; i < system.ell(); ++i) {
        const int lambda = system.form(j)[i];
        if (lambda != 0) img = space.add(img, space.scale(lambda, x[i]));
      }
      prod *= f.values[img];
    }
    sum.add(prod);
    const double delta = prod - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (prod - mean);
  }
  AverageEstimate est;
  est.samples = samples;
  est.value = sum.value() / static_cast<double>(samples);
  est.standard_error =
      samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
  return est;
}

AverageEstimate t_L_mc(const BoolFunction& f, const LinearFormSystem& system, std::uint64_t samples,
                       RandomSeed seed) {
  validate_bool(f);
  return t_L_mc(to_real(f), system, samples, seed);
}

}  // namespace hofa

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

namespace hofa {

/// Neumaier-compensated accumulator.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    T t = sum_ + v;
    if constexpr (std::is_same_v<T, double>) {
      comp_ += (std::abs(sum_) >= std::abs(v)) ? (sum_ - t) + v : (v - t) + sum_;
    } else {
      comp_ += T{fix(sum_.real(), v.real(), t.real()), fix(sum_.imag(), v.imag(), t.imag())};
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double fix(double s, double v, double t) {
    return (std::abs(s) >= std::abs(v)) ? (s - t) + v : (v - t) + s;
  }
  T sum_{};
  T comp_{};
};

inline constexpr std::uint64_t kReductionChunks = 64;

/// Splits [0, count) into a fixed number of chunks, evaluates `chunk(begin, end)`
/// on up to `workers` threads and folds the partials in chunk order. The chunk
/// layout does not depend on `workers`, so results are bit-identical for any
/// worker count.
template <class T, class ChunkFn>
std::vector<T> chunked_map(std::uint64_t count, unsigned workers, ChunkFn&& chunk) {
  const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min(count, kReductionChunks));
  std::vector<T> partial(chunks);
  auto run = [&](unsigned w, unsigned stride) {
    for (std::uint64_t c = w; c < chunks; c += stride) {
      partial[c] = chunk(c * count / chunks, (c + 1) * count / chunks);
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), chunks));
  if (threads <= 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run, w, threads);
    for (auto& t : pool) t.join();
  }
  return partial;
}

template <class T, class ChunkFn>
T chunked_sum(std::uint64_t count, unsigned workers, ChunkFn&& chunk) {
  auto partial = chunked_map<T>(count, workers, std::forward<ChunkFn>(chunk));
  if constexpr (std::is_integral_v<T>) {
    T total{};
    for (const auto& v : partial) total += v;
    return total;
  } else {
    CompensatedSum<T> total;
    for (const auto& v : partial) total.add(v);
    return total.value();
  }
}

}  // namespace hofa

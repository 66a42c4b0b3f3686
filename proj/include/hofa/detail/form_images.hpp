#pragma once

namespace hofa {

template <class Visit>
void for_each_form_image(const VectorSpace& space, const LinearFormSystem& system, std::uint64_t lo,
                         std::uint64_t hi, Visit&& visit) {
  const std::size_t m = system.size();
  const int ell = system.ell();
  // partial[i * m + j] = sum_{t < i} lambda_{j,t} x_t
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(ell + 1) * m, 0);
  auto step = [&](auto&& self, int var) -> void {
    const std::uint64_t* prev = &partial[static_cast<std::size_t>(var) * m];
    std::uint64_t* next = &partial[static_cast<std::size_t>(var + 1) * m];
    const std::uint64_t begin = var == 0 ? lo : 0;
    const std::uint64_t end = var == 0 ? hi : space.size();
    for (std::uint64_t x = begin; x < end; ++x) {
      for (std::size_t j = 0; j < m; ++j) {
        const int lambda = system.form(j)[var];
        next[j] = lambda == 0 ? prev[j] : space.add(prev[j], space.scale(lambda, x));
      }
      if (var + 1 == ell) {
        visit(static_cast<const std::uint64_t*>(next));
      } else {
        self(self, var + 1);
      }
    }
  };
  if (ell == 0) {
    if (lo == 0 && hi > 0) visit(static_cast<const std::uint64_t*>(partial.data()));
    return;
  }
  step(step, 0);
}

}  // namespace hofa

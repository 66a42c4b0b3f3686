#pragma once

#include <algorithm>
#include <vector>

#include "hofa/field.hpp"
#include "hofa/torus.hpp"
#include "hofa/uniformity.hpp"

namespace testing_helpers {

/// Random polynomial of structural degree exactly `degree` whose depth is
/// the largest allowed, built from allowed monomials with one top-degree
/// monomial placed at that depth.
inline hofa::NCPolynomial random_poly(int p, int n, int degree, hofa::Rng& rng, int max_depth = -1) {
  const int k_cap = (degree - 1) / (p - 1);
  const int k = max_depth < 0 ? k_cap : std::min(max_depth, k_cap);
  auto monos = hofa::allowed_monomials(p, n, degree, k);
  std::vector<hofa::Monomial> top;
  for (const auto& m : monos) {
    if (m.depth == k && m.degree(p) == degree) top.push_back(m);
  }
  std::vector<hofa::Monomial> terms;
  hofa::Monomial lead = top[rng.below(top.size())];
  lead.coeff = 1 + static_cast<int>(rng.below(p - 1));
  for (const auto& m : monos) {
    if (m.exps == lead.exps && m.depth == lead.depth) continue;
    if (rng.below(3) != 0) continue;
    auto t = m;
    t.coeff = static_cast<int>(rng.below(p));
    terms.push_back(t);
  }
  terms.push_back(lead);
  return {p, n, std::move(terms)};
}

inline hofa::BoolFunction random_bool(int p, int n, hofa::Rng& rng) {
  auto f = hofa::BoolFunction::filled(p, n, 0);
  for (auto& v : f.values) v = static_cast<std::uint8_t>(rng.below(2));
  return f;
}

}  // namespace testing_helpers

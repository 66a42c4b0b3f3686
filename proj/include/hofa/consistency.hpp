#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hofa/factors.hpp"
#include "hofa/linear_systems.hpp"
#include "hofa/torus.hpp"

namespace hofa {

/// One coordinate of a consistency spec: degree bound d and depth bound k.
struct DegreeDepth {
  int d = 1;
  int k = 0;
  auto operator<=>(const DegreeDepth&) const = default;
};

/// Sequence of (d, k) pairs, one per factor coordinate.
struct ConsistencySpec {
  int p = 2;
  std::vector<DegreeDepth> coords;

  ConsistencySpec(int p, std::vector<DegreeDepth> coords);
  static ConsistencySpec single(int p, int d, int k) { return {p, {{d, k}}}; }
  static ConsistencySpec of(const PolynomialFactor& factor);
};

/// Numerators of an m-tuple of values in U_{k+1}, each over p^(k+1).
using ValueTuple = std::vector<std::uint32_t>;

struct ConsistencyResult {
  bool consistent = false;
  std::optional<NCPolynomial> witness;  // on F_p^ell, or padded when exact type is requested
};

/// Whether some polynomial of degree <= d and depth <= k on F_p^ell takes the
/// values b_i at the coefficient vectors of the forms. With `exact_type` the
/// witness is padded by a monomial of type exactly (d, k) in fresh variables,
/// which vanish at the evaluation points.
ConsistencyResult is_consistent(const LinearFormSystem& system, int d, int k, const ValueTuple& b,
                                bool exact_type = false, const RunOptions& options = {});

/// Every m-tuple attained by (d, k)-bounded polynomials at the forms' coefficient
/// vectors, with one witness per tuple. The attainable set is the subgroup of
/// (Z/p^(k+1))^m generated by the monomials' evaluation vectors.
struct CoordinateSet {
  DegreeDepth spec;
  std::vector<ValueTuple> tuples;  // sorted
  std::vector<NCPolynomial> witnesses;

  bool contains(const ValueTuple& t) const;
};

CoordinateSet consistent_coordinate_set(const LinearFormSystem& system, int d, int k,
                                        const RunOptions& options = {});

/// Cartesian product over the spec's coordinates. A full tuple is laid out
/// coordinate-major: entry c*m + i is coordinate c at form i.
struct ConsistentTupleSet {
  LinearFormSystem system;
  ConsistencySpec spec;
  std::vector<CoordinateSet> coordinates;
  std::uint64_t K = 1;

  bool contains(const ValueTuple& t) const;
  /// All K tuples in lexicographic order.
  std::vector<ValueTuple> tuples() const;
};

inline constexpr double kConsistentTupleCeiling = 16777216.0;  // 2^24

ConsistentTupleSet enumerate_consistent(const LinearFormSystem& system, const ConsistencySpec& spec,
                                        const RunOptions& options = {});

/// Second strategy: evaluates explicit polynomials on F_p^n at explicit point
/// tuples. Exhaustive over polynomials and points when `candidates * points`
/// stays under `exhaustive_limit`, otherwise `samples` random
/// (polynomial, point tuple) pairs.
struct DirectEnumeration {
  std::vector<ValueTuple> tuples;  // sorted
  bool exhaustive = false;
  std::uint64_t evaluations = 0;
};

DirectEnumeration consistent_tuples_direct(const LinearFormSystem& system, int d, int k, int n,
                                           std::uint64_t samples, RandomSeed seed,
                                           double exhaustive_limit = 1e8);

enum class EquidistMode { exact, mc };

struct EquidistributionReport {
  EquidistMode mode = EquidistMode::exact;
  std::uint64_t total = 0;                                // point tuples counted or sampled
  std::map<ValueTuple, std::uint64_t> counts;             // observed tuples
  std::uint64_t K = 0;
  double max_deviation = 0;                               // over the consistent set
  double leakage = 0;                                     // mass outside the consistent set
  std::uint64_t leaked_tuples = 0;
};

/// Frequencies of (B(L_1(x)), ..., B(L_m(x))) over uniform point tuples,
/// laid out coordinate-major as in ConsistentTupleSet.
EquidistributionReport equidistribution_report(const PolynomialFactor& factor, const LinearFormSystem& system,
                                               EquidistMode mode, std::uint64_t samples, RandomSeed seed,
                                               const RunOptions& options = {});

}  // namespace hofa

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankmin/affine_operator.hpp"
#include "rankmin/types.hpp"

// Rank-minimization problem instances: Euclidean distance matrix completion
// generators, the two fixed 3x3 regression instances, and versioned plain-text
// serialization.

namespace rankmin {

enum class InstanceKind { Edm, CounterexampleSdp, CounterexamplePenalty, Generic };

std::string to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(const std::string& s);

struct InstanceMeta {
  InstanceKind kind = InstanceKind::Generic;
  std::uint64_t seed = 0;
  int n_points = 0;
  int n_samples = 0;
  int dim = 0;
  std::optional<int> ground_truth_rank;
  std::optional<double> opt_objective;  // documented analytic optimum, if any

  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

struct Instance {
  AffineOperator op;  // carries the rhs b
  InstanceMeta meta;

  Index n() const { return op.n(); }
  const Vector& b() const { return op.rhs(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct PointCloud {
  Matrix points;  // n_points x dim coordinates
};

// Random EDM completion instance: n_points uniform in [0,1]^dim, n_samples
// distinct unordered pairs, one constraint B_ii + B_jj - 2 B_ij = d_ij^2 per
// sampled pair. The ground-truth Gram matrix of the returned cloud satisfies
// every constraint exactly.
std::pair<Instance, PointCloud> gen_edm_instance(int n_points, int n_samples, int dim,
                                                 std::uint64_t seed);

// The two fixed 3x3 regression instances: the linear SDP whose optimum admits
// no calm multiplier, and the penalty instance with known optimum
// X = diag(3,1,0), U = diag(0,1,1), objective 1.5 at rho = 0.5.
std::vector<Instance> counterexample_instances();

// Documented optimum of the penalty counterexample.
struct PenaltyOptimum {
  Matrix x;
  Matrix u;
  double rho;
  double objective;
};
PenaltyOptimum counterexample_penalty_optimum();

void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

// string-level codecs used by save/load and the tests
std::string encode_instance(const Instance& inst);
Instance decode_instance(const std::string& text);

}  // namespace rankmin

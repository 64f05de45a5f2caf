#pragma once

#include <cstdint>

namespace ucm {

/// Size caps for the exact enumerations. Each value counts states
/// (assignments or focal combinations) visited, not variables.
struct Limits {
  /// Full BN joint for joint_enumerate / conditional_entropy, and the
  /// largest intermediate factor variable elimination may build.
  std::uint64_t joint_states = std::uint64_t{1} << 24;
  /// 2^n assignments of the basic events under a fault-tree top (n <= 20).
  std::uint64_t fault_tree_states = std::uint64_t{1} << 20;
  /// 3^n focal combinations for evidential propagation (n <= 10).
  std::uint64_t evidential_combinations = 59049;

  /// Every cap set to the same value.
  static Limits uniform(std::uint64_t states) { return {states, states, states}; }
};

}  // namespace ucm

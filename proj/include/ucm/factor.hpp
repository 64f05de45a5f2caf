#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace ucm {

/// Dense non-negative table over a set of discrete variables. Variables are
/// identified by their index in a BayesNet; the table is row-major over
/// `scope` (the last variable varies fastest).
struct Factor {
  std::vector<std::size_t> scope;
  std::vector<std::size_t> cards;
  Eigen::VectorXd table;

  std::size_t size() const { return static_cast<std::size_t>(table.size()); }
  bool contains(std::size_t var) const;
};

/// Number of table entries a factor over `cards` would need.
std::size_t table_size(const std::vector<std::size_t>& cards);

/// Pointwise product. The result scope is `a.scope` followed by the
/// variables of `b` not already in `a`.
Factor factor_product(const Factor& a, const Factor& b);

/// Sums `var` out of `f`. A factor that does not mention `var` is returned
/// unchanged.
Factor sum_out(const Factor& f, std::size_t var);

/// Slice of `f` at `var = state`, with `var` dropped from the scope.
Factor reduce(const Factor& f, std::size_t var, std::size_t state);

/// Scope union size a product of `factors` would have, in table entries.
std::size_t product_size(const std::vector<const Factor*>& factors);

}  // namespace ucm

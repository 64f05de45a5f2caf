#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ucm/factor.hpp"
#include "ucm/limits.hpp"
#include "ucm/model.hpp"

namespace ucm {

/// Index-based view of the Bayesian-network part of a validated document.
/// Construction validates the document and throws ModelError on the first
/// error finding. Immutable, so one instance can serve concurrent queries.
class BayesNet {
 public:
  explicit BayesNet(const ModelDocument& doc);

  std::size_t size() const { return nodes_.size(); }
  const VariableNode& node(std::size_t var) const { return nodes_[var]; }
  const std::string& name(std::size_t var) const { return nodes_[var].name; }
  std::size_t cardinality(std::size_t var) const { return nodes_[var].states.size(); }
  const std::vector<std::size_t>& parents(std::size_t var) const { return parents_[var]; }

  /// Rows are parent-state combinations (row-major over parents in
  /// declaration order), columns are the variable's states.
  const Eigen::MatrixXd& cpt(std::size_t var) const { return cpts_[var]; }

  /// Throws UnresolvedName.
  std::size_t index(std::string_view name) const;
  std::size_t state_index(std::size_t var, std::string_view state) const;

  /// P(var | parents) as a factor over (parents..., var).
  Factor cpt_factor(std::size_t var) const;

  /// Product of the state counts of all variables (saturating).
  std::size_t joint_size() const;

 private:
  std::vector<VariableNode> nodes_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<Eigen::MatrixXd> cpts_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
};

struct Query {
  std::string target;
  std::map<std::string, std::string> evidence;
};

struct Marginal {
  std::string variable;
  Eigen::VectorXd distribution;
};

/// Greedy min-degree elimination order for `q` (ties broken by name).
std::vector<std::string> elimination_order(const BayesNet& net, const Query& q);

/// Exact P(target | evidence) by variable elimination.
///
/// Throws UnresolvedName / InvalidQuery for a bad query,
/// ContradictoryEvidence when P(evidence) < 1e-12, and GuardExceeded when an
/// intermediate factor would exceed `limits.joint_states` entries.
Marginal posterior_marginal(const BayesNet& net, const Query& q, const Limits& limits = {});
Marginal posterior_marginal(const ModelDocument& doc, const Query& q, const Limits& limits = {});

/// Variable elimination with an explicit order. `order` must list every
/// variable that is neither the target nor observed, exactly once.
Marginal posterior_marginal(const BayesNet& net, const Query& q, const std::vector<std::string>& order,
                            const Limits& limits = {});

/// Same contract as posterior_marginal, computed by summing the fully
/// expanded joint. Throws GuardExceeded when the joint has more than
/// `limits.joint_states` entries.
Marginal joint_enumerate(const BayesNet& net, const Query& q, const Limits& limits = {});
Marginal joint_enumerate(const ModelDocument& doc, const Query& q, const Limits& limits = {});

/// Unconditioned joint P(x, y) by enumeration; rows index x's states,
/// columns y's. x == y yields a diagonal table.
Eigen::MatrixXd pair_joint(const BayesNet& net, std::string_view x, std::string_view y, const Limits& limits = {});

}  // namespace ucm

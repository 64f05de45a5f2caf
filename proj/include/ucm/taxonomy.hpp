#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ucm/inference.hpp"
#include "ucm/limits.hpp"
#include "ucm/model.hpp"

namespace ucm {

struct UncertaintyDecomposition {
  double ontological_mass = 0.0;
  double epistemic_mass = 0.0;
  /// Shannon entropy (bits) of the aleatory-tagged states, renormalized.
  double aleatory_entropy_bits = 0.0;
};

/// Ordering of this enum is the report ordering.
enum class Mean { prevention, removal_development, removal_use, tolerance, forecasting };

enum class Trigger { ontological_mass, epistemic_mass, residual };

struct MeansRecommendation {
  Mean mean;
  Trigger trigger;
  std::string_view message;  // points into the fixed catalog
};

struct Thresholds {
  double epistemic = 0.05;
  double ontological = 0.01;
};

std::string_view to_string(Mean mean);
std::string_view to_string(Trigger trigger);
/// Fixed catalog text for each mean.
std::string_view catalog_message(Mean mean);

/// Entropy in bits of a probability vector; zero entries contribute 0.
double entropy_bits(const Eigen::Ref<const Eigen::VectorXd>& p);

/// Splits a marginal by the node's state tags: ontological and epistemic
/// masses are partial sums; the aleatory-tagged remainder is renormalized
/// and its entropy reported (0 if it carries no mass).
UncertaintyDecomposition decompose_marginal(const Marginal& marg, const VariableNode& node);

/// H(X|Y) in bits from the exact joint of x and y. Throws GuardExceeded if
/// the network joint exceeds limits.joint_states.
double conditional_entropy(const ModelDocument& doc, std::string_view x, std::string_view y,
                           const Limits& limits = {});
double conditional_entropy(const BayesNet& net, std::string_view x, std::string_view y, const Limits& limits = {});

/// ontological_mass > tau_o fires removal_use and prevention;
/// epistemic_mass > tau_e fires removal_development and tolerance;
/// forecasting always fires. Output follows the Mean ordering.
std::vector<MeansRecommendation> recommend_means(const UncertaintyDecomposition& d, const Thresholds& thresholds = {});

}  // namespace ucm

#include "ucm/taxonomy.hpp"

#include <cmath>

#include "ucm/error.hpp"

namespace ucm {

std::string_view to_string(Mean mean) {
  switch (mean) {
    case Mean::prevention:
      return "prevention";
    case Mean::removal_development:
      return "removal_development";
    case Mean::removal_use:
      return "removal_use";
    case Mean::tolerance:
      return "tolerance";
    case Mean::forecasting:
      return "forecasting";
  }
  return "forecasting";
}

std::string_view to_string(Trigger trigger) {
  switch (trigger) {
    case Trigger::ontological_mass:
      return "ontological_mass";
    case Trigger::epistemic_mass:
      return "epistemic_mass";
    case Trigger::residual:
      return "residual";
  }
  return "residual";
}

std::string_view catalog_message(Mean mean) {
  switch (mean) {
    case Mean::prevention:
      return "Restrict the operational design domain (ODD) to exclude situations the model does not cover.";
    case Mean::removal_development:
      return "Extend the safety analysis to include the epistemic/ontological uncertainty of this node.";
    case Mean::removal_use:
      return "Plan field observation to monitor ontological events after release.";
    case Mean::tolerance:
      return "Use redundant architectures with diverse uncertainties (e.g. overlapping sensor fields of view) "
             "or components that detect their own uncertainty.";
    case Mean::forecasting:
      return "Estimate the present level and future occurrence of the residual uncertainty before release.";
  }
  return "";
}

double entropy_bits(const Eigen::Ref<const Eigen::VectorXd>& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  return h;
}

UncertaintyDecomposition decompose_marginal(const Marginal& marg, const VariableNode& node) {
  if (static_cast<std::size_t>(marg.distribution.size()) != node.states.size())
    throw ModelError("marginal of '" + marg.variable + "' does not match the states of '" + node.name + "'");
  UncertaintyDecomposition d;
  std::vector<double> aleatory;
  for (std::size_t i = 0; i < node.states.size(); ++i) {
    const double p = marg.distribution[static_cast<Eigen::Index>(i)];
    switch (node.tag(node.states[i])) {
      case UncertaintyTag::ontological:
        d.ontological_mass += p;
        break;
      case UncertaintyTag::epistemic:
        d.epistemic_mass += p;
        break;
      case UncertaintyTag::aleatory:
        aleatory.push_back(p);
        break;
    }
  }
  Eigen::Map<const Eigen::VectorXd> rest(aleatory.data(), static_cast<Eigen::Index>(aleatory.size()));
  const double total = rest.sum();
  if (total > 0.0) d.aleatory_entropy_bits = entropy_bits(rest / total);
  return d;
}

double conditional_entropy(const BayesNet& net, std::string_view x, std::string_view y, const Limits& limits) {
  const Eigen::MatrixXd joint = pair_joint(net, x, y, limits);
  const Eigen::RowVectorXd py = joint.colwise().sum();
  double h = 0.0;
  for (Eigen::Index j = 0; j < joint.cols(); ++j)
    if (py[j] > 0.0) h += py[j] * entropy_bits(joint.col(j) / py[j]);
  return h;
}

double conditional_entropy(const ModelDocument& doc, std::string_view x, std::string_view y, const Limits& limits) {
  return conditional_entropy(BayesNet(doc), x, y, limits);
}

std::vector<MeansRecommendation> recommend_means(const UncertaintyDecomposition& d, const Thresholds& thresholds) {
  const bool ontological = d.ontological_mass > thresholds.ontological;
  const bool epistemic = d.epistemic_mass > thresholds.epistemic;
  std::vector<MeansRecommendation> out;
  auto add = [&](Mean m, Trigger t) { out.push_back({m, t, catalog_message(m)}); };
  if (ontological) add(Mean::prevention, Trigger::ontological_mass);
  if (epistemic) add(Mean::removal_development, Trigger::epistemic_mass);
  if (ontological) add(Mean::removal_use, Trigger::ontological_mass);
  if (epistemic) add(Mean::tolerance, Trigger::epistemic_mass);
  add(Mean::forecasting, Trigger::residual);
  return out;
}

}  // namespace ucm

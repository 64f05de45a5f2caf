#include "ucm/evidence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "ucm/error.hpp"

namespace ucm {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kConflictTolerance = 1e-12;

void check_frame(const MassFunction& m, FocalSet s) {
  if (!m.frame().covers(s)) throw FrameMismatch("set has elements outside the frame");
}

}  // namespace

std::size_t FocalSet::size() const { return static_cast<std::size_t>(std::popcount(bits)); }

Frame::Frame(std::vector<std::string> hypotheses) : hypotheses_(std::move(hypotheses)) {
  if (hypotheses_.empty() || hypotheses_.size() > kMaxHypotheses)
    throw ModelError("frame needs 1..16 hypotheses, got " + std::to_string(hypotheses_.size()));
  std::set<std::string> seen;
  for (const auto& h : hypotheses_)
    if (!seen.insert(h).second) throw ModelError("duplicate hypothesis '" + h + "'");
}

std::size_t Frame::index(const std::string& name) const {
  auto it = std::find(hypotheses_.begin(), hypotheses_.end(), name);
  if (it == hypotheses_.end()) throw UnresolvedName("'" + name + "' is not a hypothesis of the frame");
  return static_cast<std::size_t>(it - hypotheses_.begin());
}

FocalSet Frame::set_of(const std::vector<std::string>& names) const {
  FocalSet s;
  for (const auto& n : names) s = s | FocalSet::singleton(index(n));
  return s;
}

std::string Frame::describe(FocalSet s) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!s.contains(i)) continue;
    if (!first) out += ",";
    out += hypotheses_[i];
    first = false;
  }
  return out + "}";
}

MassFunction::MassFunction(Frame frame, const std::vector<std::pair<FocalSet, double>>& masses)
    : frame_(std::move(frame)) {
  double total = 0.0;
  for (const auto& [set, value] : masses) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0)
      throw ModelError("mass " + std::to_string(value) + " outside [0,1]");
    if (!frame_.covers(set)) throw FrameMismatch("focal set has elements outside the frame");
    if (value == 0.0) continue;
    if (set.empty()) throw ModelError("positive mass on the empty set");
    masses_[set] += value;
    total += value;
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw ModelError("masses sum to " + std::to_string(total) + ", expected 1");
}

MassFunction MassFunction::vacuous(Frame frame) {
  std::map<FocalSet, double> m{{frame.full(), 1.0}};
  return MassFunction(Trusted{}, std::move(frame), std::move(m));
}

MassFunction MassFunction::bayesian(Frame frame, const Eigen::VectorXd& probabilities) {
  if (static_cast<std::size_t>(probabilities.size()) != frame.size())
    throw FrameMismatch("probability vector length differs from frame size");
  std::vector<std::pair<FocalSet, double>> masses;
  for (std::size_t i = 0; i < frame.size(); ++i)
    masses.emplace_back(FocalSet::singleton(i), probabilities[static_cast<Eigen::Index>(i)]);
  return MassFunction(std::move(frame), masses);
}

double MassFunction::mass(FocalSet s) const {
  auto it = masses_.find(s);
  return it == masses_.end() ? 0.0 : it->second;
}

double bel(const MassFunction& m, FocalSet s) {
  check_frame(m, s);
  double total = 0.0;
  for (const auto& [a, v] : m.masses())
    if (a.subset_of(s)) total += v;
  return total;
}

double pl(const MassFunction& m, FocalSet s) {
  check_frame(m, s);
  double total = 0.0;
  for (const auto& [a, v] : m.masses())
    if (!(a & s).empty()) total += v;
  return total;
}

MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2) {
  if (!(m1.frame() == m2.frame())) throw FrameMismatch("cannot combine mass functions over different frames");

  std::map<FocalSet, std::vector<double>> terms;
  std::vector<double> conflict_terms;
  for (const auto& [a, va] : m1.masses()) {
    for (const auto& [b, vb] : m2.masses()) {
      const FocalSet c = a & b;
      (c.empty() ? conflict_terms : terms[c]).push_back(va * vb);
    }
  }
  auto sorted_sum = [](std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  };
  const double conflict = sorted_sum(conflict_terms);
  if (conflict >= 1.0 - kConflictTolerance)
    throw TotalConflict("total conflict between mass functions (K = " + std::to_string(conflict) + ")");

  std::map<FocalSet, double> out;
  for (auto& [c, xs] : terms) {
    const double v = sorted_sum(xs) / (1.0 - conflict);
    if (v > 0.0) out[c] = v;
  }
  return MassFunction(MassFunction::Trusted{}, m1.frame(), std::move(out));
}

Eigen::VectorXd pignistic(const MassFunction& m) {
  const std::size_t n = m.frame().size();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& [a, v] : m.masses()) {
    const double share = v / static_cast<double>(a.size());
    for (std::size_t i = 0; i < n; ++i)
      if (a.contains(i)) p[static_cast<Eigen::Index>(i)] += share;
  }
  return p;
}

MassFunction marginal_to_mass(const Marginal& marg, const VariableNode& node) {
  if (static_cast<std::size_t>(marg.distribution.size()) != node.states.size())
    throw ModelError("marginal of '" + marg.variable + "' does not match the states of '" + node.name + "'");
  const auto atomic = node.atomic_states();
  if (atomic.empty()) throw ModelError("variable '" + node.name + "' has no atomic states to form a frame");
  Frame frame(atomic);

  std::vector<std::pair<FocalSet, double>> masses;
  for (std::size_t i = 0; i < node.states.size(); ++i) {
    const std::string& state = node.states[i];
    FocalSet set;
    if (auto d = node.disjunctions.find(state); d != node.disjunctions.end()) {
      for (const auto& member : d->second) {
        auto it = std::find(atomic.begin(), atomic.end(), member);
        if (it == atomic.end())
          throw UnresolvedName("disjunction '" + state + "' member '" + member + "' is not an atomic state of '" +
                               node.name + "'");
        set = set | FocalSet::singleton(static_cast<std::size_t>(it - atomic.begin()));
      }
    } else if (node.tag(state) == UncertaintyTag::ontological) {
      set = frame.full();
    } else {
      set = FocalSet::singleton(frame.index(state));
    }
    masses.emplace_back(set, marg.distribution[static_cast<Eigen::Index>(i)]);
  }
  return MassFunction(std::move(frame), masses);
}

std::vector<BeliefInterval> bel_pl_intervals(const MassFunction& m) {
  std::vector<BeliefInterval> out;
  for (std::size_t i = 0; i < m.frame().size(); ++i) {
    const FocalSet s = FocalSet::singleton(i);
    out.push_back({m.frame()[i], bel(m, s), pl(m, s)});
  }
  return out;
}

}  // namespace ucm

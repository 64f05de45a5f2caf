#include "ucm/inference.hpp"

#include <algorithm>
#include <set>

#include "ucm/error.hpp"
#include "ucm/validate.hpp"

namespace ucm {

namespace {

constexpr double kMinEvidenceProbability = 1e-12;

struct ResolvedQuery {
  std::size_t target = 0;
  std::vector<std::pair<std::size_t, std::size_t>> evidence;  // (var, state)
};

ResolvedQuery resolve(const BayesNet& net, const Query& q) {
  ResolvedQuery r;
  r.target = net.index(q.target);
  for (const auto& [var, state] : q.evidence) {
    const std::size_t v = net.index(var);
    if (v == r.target) throw InvalidQuery("query target '" + q.target + "' is also observed");
    r.evidence.emplace_back(v, net.state_index(v, state));
  }
  return r;
}

Marginal normalized(const BayesNet& net, std::size_t target, Eigen::VectorXd unnormalized) {
  const double z = unnormalized.sum();
  if (!(z >= kMinEvidenceProbability))
    throw ContradictoryEvidence("evidence has probability " + std::to_string(z) + " under the model");
  return {net.name(target), unnormalized / z};
}

std::vector<Factor> evidence_reduced_factors(const BayesNet& net, const ResolvedQuery& rq) {
  std::vector<Factor> factors;
  factors.reserve(net.size());
  for (std::size_t v = 0; v < net.size(); ++v) {
    Factor f = net.cpt_factor(v);
    for (const auto& [var, state] : rq.evidence) f = reduce(f, var, state);
    factors.push_back(std::move(f));
  }
  return factors;
}

std::vector<std::size_t> hidden_variables(const BayesNet& net, const ResolvedQuery& rq) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < net.size(); ++v) {
    if (v == rq.target) continue;
    if (std::any_of(rq.evidence.begin(), rq.evidence.end(), [&](const auto& e) { return e.first == v; })) continue;
    out.push_back(v);
  }
  return out;
}

void eliminate(std::vector<Factor>& factors, std::size_t var, const Limits& limits) {
  std::vector<Factor> keep;
  std::vector<const Factor*> touching;
  for (const auto& f : factors)
    if (f.contains(var)) touching.push_back(&f);
  if (touching.empty()) return;
  if (product_size(touching) > limits.joint_states)
    throw GuardExceeded("intermediate factor exceeds " + std::to_string(limits.joint_states) + " entries");

  Factor product = *touching.front();
  for (std::size_t i = 1; i < touching.size(); ++i) product = factor_product(product, *touching[i]);
  for (auto& f : factors)
    if (!f.contains(var)) keep.push_back(std::move(f));
  keep.push_back(sum_out(product, var));
  factors = std::move(keep);
}

std::size_t degree(const std::vector<Factor>& factors, std::size_t var) {
  std::set<std::size_t> neighbours;
  for (const auto& f : factors)
    if (f.contains(var)) neighbours.insert(f.scope.begin(), f.scope.end());
  neighbours.erase(var);
  return neighbours.size();
}

Marginal finish(const BayesNet& net, const ResolvedQuery& rq, std::vector<Factor> factors) {
  Factor result{{}, {}, Eigen::VectorXd::Ones(1)};
  for (const auto& f : factors) result = factor_product(result, f);
  // Only the target (or nothing) can remain in scope here.
  if (!result.contains(rq.target)) {
    result = factor_product(result, Factor{{rq.target}, {net.cardinality(rq.target)},
                                           Eigen::VectorXd::Ones(static_cast<Eigen::Index>(net.cardinality(rq.target)))});
  }
  return normalized(net, rq.target, result.table);
}

}  // namespace

BayesNet::BayesNet(const ModelDocument& doc) {
  require_valid(doc);
  nodes_ = doc.variables;
  for (std::size_t i = 0; i < nodes_.size(); ++i) by_name_.emplace(nodes_[i].name, i);

  parents_.resize(nodes_.size());
  cpts_.resize(nodes_.size());
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    std::size_t rows = 1;
    for (const auto& p : nodes_[v].parents) {
      parents_[v].push_back(index(p));
      rows *= cardinality(parents_[v].back());
    }
    Eigen::MatrixXd table(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cardinality(v)));
    for (const CptRow& row : doc.find_cpt(nodes_[v].name)->rows) {
      std::size_t r = 0;
      for (std::size_t j = 0; j < parents_[v].size(); ++j)
        r = r * cardinality(parents_[v][j]) + state_index(parents_[v][j], row.parent_states[j]);
      table.row(static_cast<Eigen::Index>(r)) =
          Eigen::Map<const Eigen::RowVectorXd>(row.probabilities.data(), static_cast<Eigen::Index>(row.probabilities.size()));
    }
    cpts_[v] = std::move(table);
  }
}

std::size_t BayesNet::index(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw UnresolvedName("unknown variable '" + std::string(name) + "'");
  return it->second;
}

std::size_t BayesNet::state_index(std::size_t var, std::string_view state) const {
  auto idx = nodes_[var].state_index(state);
  if (!idx) throw UnresolvedName("unknown state '" + std::string(state) + "' of variable '" + name(var) + "'");
  return *idx;
}

Factor BayesNet::cpt_factor(std::size_t var) const {
  Factor f;
  f.scope = parents_[var];
  for (std::size_t p : parents_[var]) f.cards.push_back(cardinality(p));
  f.scope.push_back(var);
  f.cards.push_back(cardinality(var));
  // Row-major flattening of the (parent row, state) matrix.
  const Eigen::MatrixXd& m = cpts_[var];
  f.table.resize(m.size());
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(f.table.data(), m.rows(), m.cols()) = m;
  return f;
}

std::size_t BayesNet::joint_size() const {
  std::vector<std::size_t> cards;
  for (const auto& n : nodes_) cards.push_back(n.states.size());
  return table_size(cards);
}

std::vector<std::string> elimination_order(const BayesNet& net, const Query& q) {
  const ResolvedQuery rq = resolve(net, q);
  std::vector<Factor> factors = evidence_reduced_factors(net, rq);
  std::vector<std::size_t> remaining = hidden_variables(net, rq);
  std::vector<std::string> order;
  while (!remaining.empty()) {
    auto best = std::min_element(remaining.begin(), remaining.end(), [&](std::size_t a, std::size_t b) {
      const std::size_t da = degree(factors, a), db = degree(factors, b);
      return da != db ? da < db : net.name(a) < net.name(b);
    });
    order.push_back(net.name(*best));
    // Track scope growth only; tables are irrelevant for the heuristic.
    std::vector<Factor> next;
    Factor merged;
    for (auto& f : factors) {
      if (!f.contains(*best)) {
        next.push_back(std::move(f));
        continue;
      }
      for (std::size_t i = 0; i < f.scope.size(); ++i) {
        if (f.scope[i] != *best && !merged.contains(f.scope[i])) {
          merged.scope.push_back(f.scope[i]);
          merged.cards.push_back(f.cards[i]);
        }
      }
    }
    next.push_back(std::move(merged));
    factors = std::move(next);
    remaining.erase(best);
  }
  return order;
}

Marginal posterior_marginal(const BayesNet& net, const Query& q, const std::vector<std::string>& order,
                            const Limits& limits) {
  const ResolvedQuery rq = resolve(net, q);
  std::vector<std::size_t> expected = hidden_variables(net, rq);
  std::vector<std::size_t> given;
  for (const auto& name : order) given.push_back(net.index(name));
  std::vector<std::size_t> sorted = given;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != expected) throw InvalidQuery("elimination order must list each hidden variable exactly once");

  std::vector<Factor> factors = evidence_reduced_factors(net, rq);
  for (std::size_t var : given) eliminate(factors, var, limits);
  return finish(net, rq, std::move(factors));
}

Marginal posterior_marginal(const BayesNet& net, const Query& q, const Limits& limits) {
  return posterior_marginal(net, q, elimination_order(net, q), limits);
}

Marginal posterior_marginal(const ModelDocument& doc, const Query& q, const Limits& limits) {
  return posterior_marginal(BayesNet(doc), q, limits);
}

Marginal joint_enumerate(const BayesNet& net, const Query& q, const Limits& limits) {
  const ResolvedQuery rq = resolve(net, q);
  if (net.joint_size() > limits.joint_states)
    throw GuardExceeded("joint has more than " + std::to_string(limits.joint_states) + " states");

  const std::size_t n = net.size();
  std::vector<std::size_t> state(n, 0);
  std::vector<bool> fixed(n, false);
  for (const auto& [var, s] : rq.evidence) {
    state[var] = s;
    fixed[var] = true;
  }

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.cardinality(rq.target)));
  for (;;) {
    double weight = 1.0;
    for (std::size_t v = 0; v < n && weight != 0.0; ++v) {
      std::size_t row = 0;
      for (std::size_t p : net.parents(v)) row = row * net.cardinality(p) + state[p];
      weight *= net.cpt(v)(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(state[v]));
    }
    acc[static_cast<Eigen::Index>(state[rq.target])] += weight;

    std::size_t v = n;
    while (v-- > 0) {
      if (fixed[v]) continue;
      if (++state[v] < net.cardinality(v)) break;
      state[v] = 0;
    }
    if (v == static_cast<std::size_t>(-1)) break;
  }
  return normalized(net, rq.target, acc);
}

Marginal joint_enumerate(const ModelDocument& doc, const Query& q, const Limits& limits) {
  return joint_enumerate(BayesNet(doc), q, limits);
}

Eigen::MatrixXd pair_joint(const BayesNet& net, std::string_view x, std::string_view y, const Limits& limits) {
  const std::size_t xi = net.index(x), yi = net.index(y);
  if (net.joint_size() > limits.joint_states)
    throw GuardExceeded("joint has more than " + std::to_string(limits.joint_states) + " states");

  const std::size_t n = net.size();
  std::vector<std::size_t> state(n, 0);
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(net.cardinality(xi)),
                                                static_cast<Eigen::Index>(net.cardinality(yi)));
  for (;;) {
    double weight = 1.0;
    for (std::size_t v = 0; v < n && weight != 0.0; ++v) {
      std::size_t row = 0;
      for (std::size_t p : net.parents(v)) row = row * net.cardinality(p) + state[p];
      weight *= net.cpt(v)(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(state[v]));
    }
    joint(static_cast<Eigen::Index>(state[xi]), static_cast<Eigen::Index>(state[yi])) += weight;

    std::size_t v = n;
    while (v-- > 0) {
      if (++state[v] < net.cardinality(v)) break;
      state[v] = 0;
    }
    if (v == static_cast<std::size_t>(-1)) break;
  }
  return joint;
}

}  // namespace ucm

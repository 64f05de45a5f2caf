#include "ucm/fta.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "ucm/error.hpp"
#include "ucm/validate.hpp"

namespace ucm {

namespace {

/// The reachable part of a fault tree under one top gate. Events get ids
/// 0..E-1 in name order, gates E.. in children-first order, so the top is
/// the last node.
struct Tree {
  std::vector<const FaultTreeEvent*> events;
  std::vector<const FaultTreeGate*> gates;
  std::vector<std::vector<std::size_t>> inputs;  // per gate, by node id, with repeats

  std::size_t event_count() const { return events.size(); }
  std::size_t top() const { return events.size() + gates.size() - 1; }
  const FaultTreeGate& gate(std::size_t node) const { return *gates[node - events.size()]; }
  const std::vector<std::size_t>& gate_inputs(std::size_t node) const { return inputs[node - events.size()]; }
  bool is_gate(std::size_t node) const { return node >= events.size(); }

  /// Top failure for a bitmask of failed events.
  bool fails(std::uint64_t failed) const {
    std::vector<char> state(events.size() + gates.size(), 0);
    for (std::size_t e = 0; e < events.size(); ++e) state[e] = (failed >> e) & 1u;
    for (std::size_t g = 0; g < gates.size(); ++g) {
      std::size_t count = 0;
      for (std::size_t in : inputs[g]) count += state[in] ? 1 : 0;
      const FaultTreeGate& gt = *gates[g];
      bool out = false;
      switch (gt.op) {
        case GateOp::and_:
          out = count == inputs[g].size();
          break;
        case GateOp::or_:
          out = count > 0;
          break;
        case GateOp::k_of_n:
          out = count >= gt.k;
          break;
      }
      state[events.size() + g] = out;
    }
    return state.back();
  }
};

Tree build_tree(const ModelDocument& doc, std::string_view top) {
  require_valid(doc);
  const FaultTreeGate* top_gate = doc.find_gate(top);
  if (!top_gate) throw UnresolvedName("unknown gate '" + std::string(top) + "'");

  std::set<std::string> event_names;
  std::vector<const FaultTreeGate*> order;
  std::set<std::string> visited;
  std::function<void(const FaultTreeGate&)> visit = [&](const FaultTreeGate& g) {
    if (!visited.insert(g.name).second) return;
    for (const auto& in : g.inputs) {
      if (const FaultTreeGate* child = doc.find_gate(in))
        visit(*child);
      else
        event_names.insert(in);
    }
    order.push_back(&g);
  };
  visit(*top_gate);

  Tree t;
  std::map<std::string, std::size_t> id;
  for (const auto& name : event_names) {
    id[name] = t.events.size();
    t.events.push_back(doc.find_event(name));
  }
  for (const FaultTreeGate* g : order) {
    id[g->name] = t.events.size() + t.gates.size();
    t.gates.push_back(g);
  }
  for (const FaultTreeGate* g : order) {
    std::vector<std::size_t> ins;
    for (const auto& in : g->inputs) ins.push_back(id.at(in));
    t.inputs.push_back(std::move(ins));
  }
  return t;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > UINT64_MAX / base) return UINT64_MAX;
    out *= base;
  }
  return out;
}

double point_probability(const FaultTreeEvent& e) {
  if (!e.probability) throw ModelError("event '" + e.name + "' lacks a point probability");
  return *e.probability;
}

double enumerate_probability(const Tree& t, const std::vector<double>& p, const Limits& limits) {
  const std::size_t n = t.event_count();
  if (n >= 64 || saturating_pow(2, n) > limits.fault_tree_states)
    throw GuardExceeded(std::to_string(n) + " basic events exceed the enumeration guard of " +
                        std::to_string(limits.fault_tree_states) + " states");
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (!t.fails(mask)) continue;
    double w = 1.0;
    for (std::size_t e = 0; e < n; ++e) w *= ((mask >> e) & 1u) ? p[e] : 1.0 - p[e];
    total += w;
  }
  return total;
}

/// Rows of node ids, each sorted and duplicate free.
using Row = std::vector<std::size_t>;

Row with(Row row, const std::vector<std::size_t>& extra) {
  row.insert(row.end(), extra.begin(), extra.end());
  std::sort(row.begin(), row.end());
  row.erase(std::unique(row.begin(), row.end()), row.end());
  return row;
}

void k_subsets(const std::vector<std::size_t>& items, std::size_t k, std::size_t start, Row& current,
               std::vector<Row>& out) {
  if (current.size() == k) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = start; i + (k - current.size()) <= items.size(); ++i) {
    current.push_back(items[i]);
    k_subsets(items, k, i + 1, current, out);
    current.pop_back();
  }
}

std::vector<Row> mocus(const Tree& t) {
  std::vector<Row> found;
  std::vector<Row> work{{t.top()}};
  auto absorbed = [&](const Row& row) {
    // Events already in the row are a lower bound on every cut set it yields.
    Row events;
    for (std::size_t x : row)
      if (!t.is_gate(x)) events.push_back(x);
    return std::any_of(found.begin(), found.end(),
                       [&](const Row& c) { return std::includes(events.begin(), events.end(), c.begin(), c.end()); });
  };

  while (!work.empty()) {
    Row row = std::move(work.back());
    work.pop_back();
    if (absorbed(row)) continue;
    auto g = std::find_if(row.begin(), row.end(), [&](std::size_t x) { return t.is_gate(x); });
    if (g == row.end()) {
      // Drop earlier finds that this one absorbs.
      std::erase_if(found, [&](const Row& c) { return std::includes(c.begin(), c.end(), row.begin(), row.end()); });
      found.push_back(std::move(row));
      continue;
    }
    const std::size_t gate = *g;
    row.erase(g);
    const auto& ins = t.gate_inputs(gate);
    switch (t.gate(gate).op) {
      case GateOp::and_:
        work.push_back(with(row, ins));
        break;
      case GateOp::or_:
        for (auto it = ins.rbegin(); it != ins.rend(); ++it) work.push_back(with(row, {*it}));
        break;
      case GateOp::k_of_n: {
        std::vector<Row> subsets;
        Row current;
        k_subsets(ins, t.gate(gate).k, 0, current, subsets);
        for (auto it = subsets.rbegin(); it != subsets.rend(); ++it) work.push_back(with(row, *it));
        break;
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Row& a, const Row& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return found;
}

double rare_event(const std::vector<Row>& cutsets, const std::vector<double>& p) {
  double total = 0.0;
  for (const auto& c : cutsets) {
    double prod = 1.0;
    for (std::size_t e : c) prod *= p[e];
    total += prod;
  }
  return total;
}

const Frame& fail_ok_frame() {
  static const Frame frame({"fail", "ok"});
  return frame;
}

}  // namespace

MassFunction event_mass(const FaultTreeEvent& event) {
  const Frame& frame = fail_ok_frame();
  if (event.probability)
    return MassFunction(frame, {
                                   {frame.set_of({"fail"}), *event.probability},
                                   {frame.set_of({"ok"}), 1.0 - *event.probability}});
  if (!event.mass) throw ModelError("event '" + event.name + "' has neither p nor mass");
  std::vector<std::pair<FocalSet, double>> masses;
  for (const auto& entry : *event.mass) masses.emplace_back(frame.set_of(entry.focal), entry.mass);
  return MassFunction(frame, masses);
}

CutSetCollection minimal_cut_sets(const ModelDocument& doc, std::string_view top) {
  const Tree t = build_tree(doc, top);
  CutSetCollection out;
  out.top = std::string(top);
  for (const Row& row : mocus(t)) {
    CutSet c;
    for (std::size_t e : row) c.events.push_back(t.events[e]->name);
    out.cutsets.push_back(std::move(c));
  }
  return out;
}

TopEventResult top_event_probability(const ModelDocument& doc, std::string_view top, const Limits& limits) {
  const Tree t = build_tree(doc, top);
  std::vector<double> p;
  for (const auto* e : t.events) p.push_back(point_probability(*e));
  TopEventResult r;
  r.probability = enumerate_probability(t, p, limits);
  r.rare_event_bound = rare_event(mocus(t), p);
  return r;
}

TopEventResult evidential_top_event(const ModelDocument& doc, std::string_view top, const Limits& limits) {
  const Tree t = build_tree(doc, top);
  const std::size_t n = t.event_count();
  if (saturating_pow(3, n) > limits.evidential_combinations)
    throw GuardExceeded(std::to_string(n) + " basic events exceed the evidential guard of " +
                        std::to_string(limits.evidential_combinations) + " combinations");

  const Frame& frame = fail_ok_frame();
  const FocalSet fail = frame.set_of({"fail"});
  const FocalSet ok = frame.set_of({"ok"});

  // Per event: (known-failed, unknown, mass) for each focal set.
  struct Option {
    bool failed;
    bool unknown;
    double mass;
  };
  std::vector<std::vector<Option>> options(n);
  std::vector<double> betp(n);
  for (std::size_t e = 0; e < n; ++e) {
    const MassFunction m = event_mass(*t.events[e]);
    for (const auto& [set, v] : m.masses())
      options[e].push_back({set == fail, set != fail && set != ok, v});
    betp[e] = pignistic(m)[0];
  }

  // Coherent trees are monotone, so "every completion fails" reduces to
  // the unknowns-as-ok completion and "some completion fails" to the
  // unknowns-as-failed one.
  double belief = 0.0, plausibility = 0.0;
  std::vector<std::size_t> choice(n, 0);
  for (;;) {
    double mass = 1.0;
    std::uint64_t lower = 0, upper = 0;
    for (std::size_t e = 0; e < n; ++e) {
      const Option& o = options[e][choice[e]];
      mass *= o.mass;
      if (o.failed) lower |= std::uint64_t{1} << e;
      if (o.failed || o.unknown) upper |= std::uint64_t{1} << e;
    }
    if (t.fails(lower)) belief += mass;
    if (t.fails(upper)) plausibility += mass;

    std::size_t e = n;
    while (e-- > 0) {
      if (++choice[e] < options[e].size()) break;
      choice[e] = 0;
    }
    if (e == static_cast<std::size_t>(-1)) break;
  }

  TopEventResult r;
  r.probability = enumerate_probability(t, betp, Limits::uniform(UINT64_MAX));
  r.rare_event_bound = rare_event(mocus(t), betp);
  r.bel_pl = std::make_pair(belief, plausibility);
  return r;
}

ModelDocument ft_to_bn(const ModelDocument& doc, std::string_view top, const Limits& limits) {
  const Tree t = build_tree(doc, top);
  ModelDocument bn;
  bn.name = doc.name.empty() ? "fault-tree-bn" : doc.name + "-bn";

  for (const auto* e : t.events) {
    const double p = point_probability(*e);
    bn.variables.push_back({e->name, {"ok", "fail"}, {}, {}, {}});
    bn.cpts.push_back({e->name, {{{}, {1.0 - p, p}}}});
  }

  for (std::size_t g = 0; g < t.gates.size(); ++g) {
    const FaultTreeGate& gate = *t.gates[g];
    // Repeated inputs collapse to one parent; k-of-n keeps their multiplicity.
    std::vector<std::string> parents;
    std::vector<std::size_t> multiplicity;
    for (const auto& in : gate.inputs) {
      auto it = std::find(parents.begin(), parents.end(), in);
      if (it == parents.end()) {
        parents.push_back(in);
        multiplicity.push_back(1);
      } else {
        ++multiplicity[static_cast<std::size_t>(it - parents.begin())];
      }
    }
    if (parents.size() >= 64 || saturating_pow(2, parents.size()) > limits.joint_states)
      throw GuardExceeded("gate '" + gate.name + "' CPT exceeds " + std::to_string(limits.joint_states) + " rows");

    Cpt cpt{gate.name, {}};
    const std::uint64_t rows = std::uint64_t{1} << parents.size();
    for (std::uint64_t r = 0; r < rows; ++r) {
      CptRow row;
      std::size_t failed = 0, failed_distinct = 0;
      for (std::size_t j = 0; j < parents.size(); ++j) {
        // row-major: first parent is the most significant digit, ok = 0
        const bool f = (r >> (parents.size() - 1 - j)) & 1u;
        row.parent_states.push_back(f ? "fail" : "ok");
        if (f) {
          failed += multiplicity[j];
          ++failed_distinct;
        }
      }
      bool out = false;
      switch (gate.op) {
        case GateOp::and_:
          out = failed_distinct == parents.size();
          break;
        case GateOp::or_:
          out = failed_distinct > 0;
          break;
        case GateOp::k_of_n:
          out = failed >= gate.k;
          break;
      }
      row.probabilities = out ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0};
      cpt.rows.push_back(std::move(row));
    }
    bn.variables.push_back({gate.name, {"ok", "fail"}, parents, {}, {}});
    bn.cpts.push_back(std::move(cpt));
  }
  return bn;
}

}  // namespace ucm

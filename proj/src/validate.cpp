#include "ucm/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "ucm/error.hpp"

namespace ucm {

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::error;
  }));
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string tuple_text(const std::vector<std::string>& states) {
  std::string out = "(";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += ", ";
    out += states[i];
  }
  return out + ")";
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

/// Collects findings with their sort key; emits them ordered by
/// (name, row) with insertion order as the final tie-break.
class Collector {
 public:
  void add(Severity sev, const std::string& name, std::size_t row, std::string location, std::string message) {
    entries_.push_back({name, row, entries_.size(), {sev, std::move(location), std::move(message)}});
  }
  void error(const std::string& name, std::string location, std::string message, std::size_t row = 0) {
    add(Severity::error, name, row, std::move(location), std::move(message));
  }
  void warning(const std::string& name, std::string location, std::string message, std::size_t row = 0) {
    add(Severity::warning, name, row, std::move(location), std::move(message));
  }

  ValidationReport finish() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.name, a.row, a.seq) < std::tie(b.name, b.row, b.seq);
    });
    ValidationReport report;
    for (auto& e : entries_) report.findings.push_back(std::move(e.finding));
    return report;
  }

 private:
  struct Entry {
    std::string name;
    std::size_t row;
    std::size_t seq;
    Finding finding;
  };
  std::vector<Entry> entries_;
};

/// Strongly connected components with more than one member, each sorted;
/// the list itself is sorted by first member.
std::vector<std::vector<std::string>> cycles(const std::map<std::string, std::vector<std::string>>& graph) {
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> out;
  int counter = 0;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    auto it = graph.find(v);
    if (it != graph.end()) {
      for (const auto& w : it->second) {
        if (!graph.count(w)) continue;
        if (!index.count(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> component;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        component.push_back(w);
      } while (w != v);
      if (component.size() > 1) {
        std::sort(component.begin(), component.end());
        out.push_back(std::move(component));
      }
    }
  };
  for (const auto& [v, _] : graph)
    if (!index.count(v)) visit(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

void check_variables(const ModelDocument& doc, Collector& c) {
  std::set<std::string> names;
  for (const auto& v : doc.variables) {
    const std::string loc = "variable " + v.name;
    if (!names.insert(v.name).second) c.error(v.name, loc, "duplicate variable name '" + v.name + "'");

    if (v.states.size() < 2 || v.states.size() > kMaxStates)
      c.error(v.name, loc, "variable has " + std::to_string(v.states.size()) + " states (allowed 2..16)");
    std::set<std::string> states;
    for (const auto& s : v.states)
      if (!states.insert(s).second) c.error(v.name, loc, "duplicate state '" + s + "'");

    std::set<std::string> parents;
    for (const auto& p : v.parents) {
      if (p == v.name)
        c.error(v.name, loc, "variable lists itself as parent");
      else if (!doc.find_variable(p))
        c.error(v.name, loc, "unresolved reference: parent '" + p + "'");
      if (!parents.insert(p).second) c.error(v.name, loc, "duplicate parent '" + p + "'");
    }

    for (const auto& [state, tag] : v.tags)
      if (!states.count(state)) c.error(v.name, loc, "unresolved reference: tagged state '" + state + "'");

    for (const auto& [state, members] : v.disjunctions) {
      if (!states.count(state)) {
        c.error(v.name, loc, "unresolved reference: disjunction state '" + state + "'");
        continue;
      }
      if (v.tag(state) != UncertaintyTag::epistemic)
        c.error(v.name, loc, "disjunction state '" + state + "' must be tagged epistemic");
      if (members.size() < 2)
        c.warning(v.name, loc, "disjunction '" + state + "' names fewer than two states");
      std::set<std::string> seen;
      for (const auto& m : members) {
        if (m == state)
          c.error(v.name, loc, "disjunction '" + state + "' contains itself");
        else if (!states.count(m))
          c.error(v.name, loc, "unresolved reference: disjunction '" + state + "' member '" + m + "'");
        else if (v.is_disjunction(m))
          c.error(v.name, loc, "disjunction '" + state + "' member '" + m + "' is itself a disjunction");
        if (!seen.insert(m).second)
          c.error(v.name, loc, "disjunction '" + state + "' repeats member '" + m + "'");
      }
    }

    if (v.states.size() >= 2 && v.atomic_states().empty())
      c.warning(v.name, loc, "no atomic states: evidence frame is empty");
    if (!doc.find_cpt(v.name)) c.error(v.name, loc, "missing CPT");
  }

  std::map<std::string, std::vector<std::string>> graph;
  for (const auto& v : doc.variables) graph[v.name] = v.parents;
  for (const auto& cycle : cycles(graph))
    c.error(cycle.front(), "variable " + cycle.front(), "cycle detected: " + join(cycle));
}

void check_cpts(const ModelDocument& doc, Collector& c) {
  std::set<std::string> seen;
  for (const auto& cpt : doc.cpts) {
    const std::string& name = cpt.variable;
    const std::string loc = "cpt " + name;
    if (!seen.insert(name).second) {
      c.error(name, loc, "duplicate CPT for '" + name + "'");
      continue;
    }
    const VariableNode* v = doc.find_variable(name);
    if (!v) {
      c.error(name, loc, "unresolved reference: no variable '" + name + "'");
      continue;
    }
    std::vector<const VariableNode*> parents;
    for (const auto& p : v->parents) {
      const VariableNode* pv = p == name ? nullptr : doc.find_variable(p);
      if (!pv) {
        parents.clear();
        break;
      }
      parents.push_back(pv);
    }
    const bool parents_ok = parents.size() == v->parents.size();

    std::set<std::vector<std::string>> tuples;
    for (std::size_t i = 0; i < cpt.rows.size(); ++i) {
      const CptRow& row = cpt.rows[i];
      const std::size_t r = i + 1;
      const std::string rloc = loc + " row " + std::to_string(r) + " " + tuple_text(row.parent_states);
      if (row.parent_states.size() != v->parents.size()) {
        c.error(name, rloc,
                "row names " + std::to_string(row.parent_states.size()) + " parent states, expected " +
                    std::to_string(v->parents.size()),
                r);
      } else if (parents_ok) {
        for (std::size_t j = 0; j < parents.size(); ++j)
          if (!parents[j]->state_index(row.parent_states[j]))
            c.error(name, rloc,
                    "unresolved reference: '" + row.parent_states[j] + "' is not a state of '" + parents[j]->name + "'",
                    r);
      }
      if (!tuples.insert(row.parent_states).second) c.error(name, rloc, "duplicate row", r);

      if (row.probabilities.size() != v->states.size())
        c.error(name, rloc,
                "row has " + std::to_string(row.probabilities.size()) + " probabilities, expected " +
                    std::to_string(v->states.size()),
                r);
      double sum = 0.0;
      bool finite = true;
      for (double p : row.probabilities) {
        if (!is_probability(p)) c.error(name, rloc, "probability " + fmt(p) + " outside [0,1]", r);
        finite = finite && std::isfinite(p);
        sum += p;
      }
      if (finite && std::abs(sum - 1.0) > kRowSumTolerance)
        c.error(name, rloc, "CPT row sum " + fmt(sum) + " ≠ 1", r);
    }

    if (parents_ok) {
      std::size_t expected = 1;
      for (const auto* pv : parents) expected *= pv->states.size();
      std::size_t matched = 0;
      std::vector<std::string> first_missing;
      bool have_missing = false;
      std::vector<std::size_t> idx(parents.size(), 0);
      for (std::size_t n = 0; n < expected; ++n) {
        std::vector<std::string> tuple;
        for (std::size_t j = 0; j < parents.size(); ++j) tuple.push_back(parents[j]->states[idx[j]]);
        if (tuples.count(tuple))
          ++matched;
        else if (!have_missing)
          first_missing = tuple, have_missing = true;
        for (std::size_t j = parents.size(); j-- > 0;) {
          if (++idx[j] < parents[j]->states.size()) break;
          idx[j] = 0;
        }
      }
      if (matched != expected) {
        std::string msg = "expected " + std::to_string(expected) + " rows, found " + std::to_string(matched) +
                          " matching";
        if (expected > matched) msg += "; missing " + tuple_text(first_missing);
        c.error(name, loc, msg);
      }
    }
  }
}

void check_events(const ModelDocument& doc, Collector& c) {
  std::set<std::string> names;
  for (const auto& e : doc.events) {
    const std::string loc = "event " + e.name;
    if (!names.insert(e.name).second) c.error(e.name, loc, "duplicate event name '" + e.name + "'");
    if (doc.find_gate(e.name)) c.error(e.name, loc, "name '" + e.name + "' used by both an event and a gate");
    if (e.probability.has_value() == e.mass.has_value())
      c.error(e.name, loc, "event must declare exactly one of p or mass");
    if (e.probability && !is_probability(*e.probability))
      c.error(e.name, loc, "probability " + fmt(*e.probability) + " outside [0,1]");
    if (e.mass) {
      double sum = 0.0;
      std::set<std::set<std::string>> focal_sets;
      for (const auto& m : *e.mass) {
        std::set<std::string> focal;
        for (const auto& x : m.focal) {
          if (x != "fail" && x != "ok") c.error(e.name, loc, "focal element '" + x + "' not in {fail, ok}");
          if (!focal.insert(x).second) c.error(e.name, loc, "focal element '" + x + "' repeated");
        }
        if (focal.empty()) c.error(e.name, loc, "empty focal set");
        if (!focal_sets.insert(focal).second) c.error(e.name, loc, "focal set repeated");
        if (!is_probability(m.mass)) c.error(e.name, loc, "mass " + fmt(m.mass) + " outside [0,1]");
        sum += m.mass;
      }
      if (std::isfinite(sum) && std::abs(sum - 1.0) > kRowSumTolerance)
        c.error(e.name, loc, "mass sum " + fmt(sum) + " ≠ 1");
    }
  }
}

void check_gates(const ModelDocument& doc, Collector& c) {
  std::set<std::string> names;
  std::map<std::string, std::vector<std::string>> graph;
  for (const auto& g : doc.gates) {
    const std::string loc = "gate " + g.name;
    if (!names.insert(g.name).second) c.error(g.name, loc, "duplicate gate name '" + g.name + "'");
    if (g.op == GateOp::k_of_n && (g.k < 1 || g.k > g.inputs.size()))
      c.error(g.name, loc,
              "k = " + std::to_string(g.k) + " outside 1.." + std::to_string(g.inputs.size()));
    if (g.inputs.size() < 2) c.warning(g.name, loc, "gate has a single input (pass-through)");
    for (const auto& in : g.inputs)
      if (!doc.find_event(in) && !doc.find_gate(in))
        c.error(g.name, loc, "unresolved reference: input '" + in + "'");
    auto& edges = graph[g.name];
    for (const auto& in : g.inputs) {
      if (in == g.name)
        c.error(g.name, loc, "cycle detected: " + g.name);
      else if (doc.find_gate(in))
        edges.push_back(in);
    }
  }
  for (const auto& cycle : cycles(graph))
    c.error(cycle.front(), "gate " + cycle.front(), "cycle detected: " + join(cycle));
}

}  // namespace

ValidationReport validate(const ModelDocument& doc) {
  Collector c;
  if (doc.variables.empty() && doc.cpts.empty() && doc.events.empty() && doc.gates.empty())
    c.error("", "model", "model declares neither a Bayesian network nor a fault tree");
  check_variables(doc, c);
  check_cpts(doc, c);
  check_events(doc, c);
  check_gates(doc, c);
  return c.finish();
}

void require_valid(const ModelDocument& doc) {
  for (const auto& f : validate(doc).findings)
    if (f.severity == Severity::error) throw ModelError(f.location + ": " + f.message);
}

}  // namespace ucm

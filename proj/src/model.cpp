#include "ucm/model.hpp"

#include <algorithm>

#include "ucm/error.hpp"

namespace ucm {

std::string_view to_string(UncertaintyTag tag) {
  switch (tag) {
    case UncertaintyTag::aleatory:
      return "aleatory";
    case UncertaintyTag::epistemic:
      return "epistemic";
    case UncertaintyTag::ontological:
      return "ontological";
  }
  return "aleatory";
}

std::optional<UncertaintyTag> tag_from_string(std::string_view text) {
  if (text == "aleatory") return UncertaintyTag::aleatory;
  if (text == "epistemic") return UncertaintyTag::epistemic;
  if (text == "ontological") return UncertaintyTag::ontological;
  return std::nullopt;
}

UncertaintyTag VariableNode::tag(std::string_view state) const {
  auto it = tags.find(std::string(state));
  return it == tags.end() ? UncertaintyTag::aleatory : it->second;
}

bool VariableNode::is_disjunction(std::string_view state) const {
  return disjunctions.count(std::string(state)) != 0;
}

std::optional<std::size_t> VariableNode::state_index(std::string_view state) const {
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

std::vector<std::string> VariableNode::atomic_states() const {
  std::vector<std::string> out;
  for (const auto& s : states) {
    if (!is_disjunction(s) && tag(s) != UncertaintyTag::ontological) out.push_back(s);
  }
  return out;
}

namespace {

template <class T>
const T* find_named(const std::vector<T>& items, std::string_view name) {
  auto it = std::find_if(items.begin(), items.end(),
                         [&](const T& x) { return x.name == name; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

const VariableNode* ModelDocument::find_variable(std::string_view name) const {
  return find_named(variables, name);
}

const Cpt* ModelDocument::find_cpt(std::string_view variable) const {
  auto it = std::find_if(cpts.begin(), cpts.end(),
                         [&](const Cpt& c) { return c.variable == variable; });
  return it == cpts.end() ? nullptr : &*it;
}

const FaultTreeEvent* ModelDocument::find_event(std::string_view name) const {
  return find_named(events, name);
}

const FaultTreeGate* ModelDocument::find_gate(std::string_view name) const {
  return find_named(gates, name);
}

const VariableNode& ModelDocument::variable(std::string_view name) const {
  const VariableNode* v = find_variable(name);
  if (!v) throw UnresolvedName("unknown variable '" + std::string(name) + "'");
  return *v;
}

}  // namespace ucm

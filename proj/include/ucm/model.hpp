#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ucm {

inline constexpr std::size_t kMaxStates = 16;
inline constexpr double kRowSumTolerance = 1e-9;

enum class UncertaintyTag { aleatory, epistemic, ontological };

std::string_view to_string(UncertaintyTag tag);
std::optional<UncertaintyTag> tag_from_string(std::string_view text);

/// A discrete BN variable as written in the model file.
struct VariableNode {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> parents;
  /// Only non-default tags are stored; absent states are aleatory.
  std::map<std::string, UncertaintyTag> tags;
  /// Disjunction state -> the atomic sibling states it stands for.
  std::map<std::string, std::vector<std::string>> disjunctions;

  UncertaintyTag tag(std::string_view state) const;
  bool is_disjunction(std::string_view state) const;
  /// Position of `state` in `states`, if declared.
  std::optional<std::size_t> state_index(std::string_view state) const;
  /// States that form the frame of discernment: neither disjunctions nor
  /// ontological (ontological mass is ignorance over this frame).
  std::vector<std::string> atomic_states() const;

  bool operator==(const VariableNode&) const = default;
};

struct CptRow {
  std::vector<std::string> parent_states;  // one per parent, declaration order
  std::vector<double> probabilities;       // one per child state

  bool operator==(const CptRow&) const = default;
};

/// P(variable | parents). Rows name their parent tuple explicitly; a
/// validated CPT holds exactly one row per tuple.
struct Cpt {
  std::string variable;
  std::vector<CptRow> rows;

  bool operator==(const Cpt&) const = default;
};

/// One `{fail,ok}=0.05` entry of an event mass declaration.
struct MassEntry {
  std::vector<std::string> focal;
  double mass = 0.0;

  bool operator==(const MassEntry&) const = default;
};

struct FaultTreeEvent {
  std::string name;
  std::optional<double> probability;
  std::optional<std::vector<MassEntry>> mass;

  bool operator==(const FaultTreeEvent&) const = default;
};

enum class GateOp { and_, or_, k_of_n };

struct FaultTreeGate {
  std::string name;
  GateOp op = GateOp::or_;
  std::size_t k = 0;  // only meaningful for k_of_n
  std::vector<std::string> inputs;

  bool operator==(const FaultTreeGate&) const = default;
};

struct ModelDocument {
  std::string name;
  std::vector<VariableNode> variables;
  std::vector<Cpt> cpts;
  std::vector<FaultTreeEvent> events;
  std::vector<FaultTreeGate> gates;

  const VariableNode* find_variable(std::string_view name) const;
  const Cpt* find_cpt(std::string_view variable) const;
  const FaultTreeEvent* find_event(std::string_view name) const;
  const FaultTreeGate* find_gate(std::string_view name) const;

  /// Lookup that throws UnresolvedName.
  const VariableNode& variable(std::string_view name) const;

  bool operator==(const ModelDocument&) const = default;
};

}  // namespace ucm

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucm/evidence.hpp"
#include "ucm/limits.hpp"
#include "ucm/model.hpp"

namespace ucm {

/// Basic events whose joint failure fails the top. Names are sorted.
struct CutSet {
  std::vector<std::string> events;

  bool operator==(const CutSet&) const = default;
};

struct CutSetCollection {
  std::string top;
  /// Minimal, sorted by (size, lexicographic event names).
  std::vector<CutSet> cutsets;
};

struct TopEventResult {
  double probability = 0.0;
  /// Sum over minimal cut sets of the product of their event probabilities.
  double rare_event_bound = 0.0;
  /// [Bel, Pl] of top failure, present for evidential results.
  std::optional<std::pair<double, double>> bel_pl;
};

/// Mass of an event over the frame {fail, ok}; a point probability p
/// lifts to m({fail}) = p, m({ok}) = 1 - p.
MassFunction event_mass(const FaultTreeEvent& event);

/// MOCUS top-down expansion with absorption. k-of-n gates expand to the
/// OR of all k-subsets of their inputs.
///
/// Throws ModelError for an invalid document, UnresolvedName for an unknown
/// top gate.
CutSetCollection minimal_cut_sets(const ModelDocument& doc, std::string_view top);

/// Exact top-event probability by enumerating the 2^n assignments of the
/// basic events under `top`, assuming independence.
///
/// Throws ModelError if an event under `top` is mass-valued, GuardExceeded
/// when 2^n > limits.fault_tree_states.
TopEventResult top_event_probability(const ModelDocument& doc, std::string_view top, const Limits& limits = {});

/// Bel/Pl of top failure from independent mass-valued events: each joint
/// combination of focal sets counts toward Bel when every completion fails
/// the top and toward Pl when some completion does. `probability` and
/// `rare_event_bound` are evaluated at the events' pignistic failure
/// probabilities. Throws GuardExceeded when 3^n > limits.evidential_combinations.
TopEventResult evidential_top_event(const ModelDocument& doc, std::string_view top, const Limits& limits = {});

/// Equivalent Bayesian network: events become {ok, fail} roots with prior
/// (1 - p, p) and gates become deterministic {ok, fail} nodes. Only the
/// part of the tree under `top` is translated.
ModelDocument ft_to_bn(const ModelDocument& doc, std::string_view top, const Limits& limits = {});

}  // namespace ucm

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ucm/inference.hpp"
#include "ucm/model.hpp"

namespace ucm {

inline constexpr std::size_t kMaxHypotheses = 16;

/// Subset of a frame of discernment; bit i set means hypothesis i is in.
struct FocalSet {
  std::uint16_t bits = 0;

  static FocalSet singleton(std::size_t i) { return {static_cast<std::uint16_t>(1u << i)}; }
  bool empty() const { return bits == 0; }
  std::size_t size() const;
  bool contains(std::size_t i) const { return (bits >> i) & 1u; }
  bool subset_of(FocalSet other) const { return (bits & ~other.bits) == 0; }

  friend FocalSet operator&(FocalSet a, FocalSet b) { return {static_cast<std::uint16_t>(a.bits & b.bits)}; }
  friend FocalSet operator|(FocalSet a, FocalSet b) { return {static_cast<std::uint16_t>(a.bits | b.bits)}; }
  friend auto operator<=>(FocalSet, FocalSet) = default;
};

/// Ordered, uniquely named hypotheses (1..=16).
class Frame {
 public:
  /// Throws ModelError on an empty, oversized or duplicated list.
  explicit Frame(std::vector<std::string> hypotheses);

  std::size_t size() const { return hypotheses_.size(); }
  const std::string& operator[](std::size_t i) const { return hypotheses_[i]; }
  const std::vector<std::string>& hypotheses() const { return hypotheses_; }

  FocalSet full() const { return {static_cast<std::uint16_t>((1u << size()) - 1u)}; }
  /// Throws UnresolvedName.
  std::size_t index(const std::string& name) const;
  FocalSet set_of(const std::vector<std::string>& names) const;
  FocalSet complement(FocalSet s) const { return {static_cast<std::uint16_t>(full().bits & ~s.bits)}; }
  bool covers(FocalSet s) const { return s.subset_of(full()); }
  /// "{a,b}" in frame order.
  std::string describe(FocalSet s) const;

  bool operator==(const Frame&) const = default;

 private:
  std::vector<std::string> hypotheses_;
};

/// Basic mass assignment. Only focal sets with positive mass are stored.
class MassFunction {
 public:
  /// Throws ModelError unless masses are in [0,1], sum to 1 within 1e-9,
  /// and no positive mass sits on the empty set. Repeated sets accumulate.
  MassFunction(Frame frame, const std::vector<std::pair<FocalSet, double>>& masses);

  static MassFunction vacuous(Frame frame);
  /// Singleton masses from a probability vector over the frame.
  static MassFunction bayesian(Frame frame, const Eigen::VectorXd& probabilities);

  const Frame& frame() const { return frame_; }
  const std::map<FocalSet, double>& masses() const { return masses_; }
  double mass(FocalSet s) const;

 private:
  struct Trusted {};
  MassFunction(Trusted, Frame frame, std::map<FocalSet, double> masses) : frame_(std::move(frame)), masses_(std::move(masses)) {}

  Frame frame_;
  std::map<FocalSet, double> masses_;

  friend MassFunction dempster_combine(const MassFunction&, const MassFunction&);
};

/// Sum of m(A) over focal A contained in s. Throws FrameMismatch if s has
/// bits outside the frame.
double bel(const MassFunction& m, FocalSet s);

/// Sum of m(A) over focal A intersecting s; equals 1 - bel(complement).
double pl(const MassFunction& m, FocalSet s);

/// Normalized Dempster rule. Exactly commutative: the partial products for
/// each result set are summed in sorted order.
///
/// Throws FrameMismatch for different frames and TotalConflict when the
/// conflict mass K >= 1 - 1e-12.
MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2);

/// BetP(x) = sum over focal A containing x of m(A)/|A|.
Eigen::VectorXd pignistic(const MassFunction& m);

/// Lifts a BN marginal to a mass function over the node's atomic states:
/// atomic -> singleton, disjunction -> its declared set, ontological ->
/// the whole frame. Throws UnresolvedName for a disjunction member outside
/// the frame and ModelError for a node without atomic states.
MassFunction marginal_to_mass(const Marginal& marg, const VariableNode& node);

struct BeliefInterval {
  std::string hypothesis;
  double bel = 0.0;
  double pl = 0.0;
};

/// [Bel, Pl] of each singleton, in frame order.
std::vector<BeliefInterval> bel_pl_intervals(const MassFunction& m);

}  // namespace ucm

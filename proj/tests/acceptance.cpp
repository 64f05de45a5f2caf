// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "ucm/cli.hpp"
#include "ucm/error.hpp"
#include "ucm/evidence.hpp"
#include "ucm/fta.hpp"
#include "ucm/inference.hpp"
#include "ucm/parser.hpp"
#include "ucm/taxonomy.hpp"
#include "ucm/validate.hpp"

using namespace ucm;

namespace {

const std::string kSource = UCM_SOURCE_DIR;
const std::string kModels = kSource + "/models";

/// Collects failed checks; only the first few are echoed.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += ok ? 0 : 1;
  }
  bool passed() const { return failed_ == 0 && count_ > 0; }
  std::size_t count() const { return count_; }
  std::size_t failed() const { return failed_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::size_t count_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Checks&)> body;
};

double max_abs_diff(const Eigen::VectorXd& a, const std::vector<double>& b) {
  if (static_cast<std::size_t>(a.size()) != b.size()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) d = std::max(d, std::abs(a[static_cast<Eigen::Index>(i)] - b[i]));
  return d;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  return max_abs_diff(Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())), b);
}

void table_integrity(Checks& c) {
  const ValidationReport verbatim = validate(load_model(kModels + "/perception-chain-table1.ucm"));
  c.expect(verbatim.error_count() == 1, "verbatim table: exactly one error");
  bool found = false;
  for (const auto& f : verbatim.findings)
    if (f.severity == Severity::error && f.location.find("(unknown)") != std::string::npos &&
        f.message.find("row sum 0.9") != std::string::npos)
      found = true;
  c.expect(found, "verbatim table: row-sum-0.9 error on the unknown row");
  c.expect(validate(load_model(kModels + "/perception-chain.ucm")).ok(), "corrected fixture validates");
}

void perception_chain(Checks& c) {
  const ModelDocument doc = load_model(kModels + "/perception-chain.ucm");

  const auto prior_oracle = testing::brute_force_marginal(doc, "perception", {});
  c.expect(max_abs_diff(prior_oracle, {0.5415, 0.273, 0.065, 0.1205}) <= 1e-9, "oracle prior of perception");
  c.expect(max_abs_diff(posterior_marginal(doc, {"perception", {}}).distribution, prior_oracle) <= 1e-9,
           "elimination prior matches oracle");
  c.expect(max_abs_diff(joint_enumerate(doc, {"perception", {}}).distribution, prior_oracle) <= 1e-9,
           "enumeration prior matches oracle");

  const std::map<std::string, std::string> none{{"perception", "none"}};
  const auto post_oracle = testing::brute_force_marginal(doc, "ground_truth", none);
  c.expect(max_abs_diff(post_oracle, {0.224066, 0.112033, 0.663900}) <= 5e-7, "oracle posterior given none");
  c.expect(max_abs_diff(posterior_marginal(doc, {"ground_truth", none}).distribution, post_oracle) <= 1e-9,
           "elimination posterior matches oracle");
  c.expect(max_abs_diff(joint_enumerate(doc, {"ground_truth", none}).distribution, post_oracle) <= 1e-9,
           "enumeration posterior matches oracle");
}

void inference_soundness(Checks& c) {
  testing::Rng rng(20240501);
  std::size_t compared = 0;
  while (compared < 200) {
    const ModelDocument doc = testing::random_network(rng, 10, 4, compared % 3 == 0 ? 4 : 0);
    const BayesNet net(doc);
    const Query q = testing::random_query(rng, doc);
    Eigen::VectorXd ve, je;
    try {
      ve = posterior_marginal(net, q).distribution;
      je = joint_enumerate(net, q).distribution;
    } catch (const ContradictoryEvidence&) {
      bool both = false;
      try {
        joint_enumerate(net, q);
      } catch (const ContradictoryEvidence&) {
        both = true;
      }
      c.expect(both, "contradiction reported by both engines");
      continue;
    }
    c.expect((ve - je).cwiseAbs().maxCoeff() <= 1e-9, "elimination equals enumeration");
    c.expect(std::abs(ve.sum() - 1.0) <= 1e-9 && std::abs(je.sum() - 1.0) <= 1e-9, "marginals sum to 1");
    if (net.joint_size() <= 20000) {
      const auto brute = testing::brute_force_marginal(doc, q.target, q.evidence);
      c.expect(max_abs_diff(ve, brute) <= 1e-9, "elimination equals brute-force oracle");
    }
    ++compared;
  }
}

void evidence_layer(Checks& c) {
  testing::Rng rng(20240502);
  for (int i = 0; i < 400; ++i) {
    const std::size_t n = testing::pick(rng, 1, 5);
    const MassFunction a = testing::random_mass(rng, n);
    const MassFunction b = testing::random_mass(rng, n);
    const MassFunction d = testing::random_mass(rng, n);
    const Frame& f = a.frame();

    for (std::uint32_t s = 0; s <= f.full().bits; ++s) {
      const FocalSet fs{static_cast<std::uint16_t>(s)};
      c.expect(bel(a, fs) <= pl(a, fs) + 1e-15, "Bel <= Pl");
      c.expect(std::abs(pl(a, fs) - (1.0 - bel(a, f.complement(fs)))) <= 1e-12, "Pl = 1 - Bel(complement)");
    }

    const MassFunction ident = dempster_combine(a, MassFunction::vacuous(f));
    bool same = true;
    for (std::uint32_t s = 1; s <= f.full().bits; ++s)
      same = same && std::abs(ident.mass({static_cast<std::uint16_t>(s)}) - a.mass({static_cast<std::uint16_t>(s)})) <= 1e-12;
    c.expect(same, "vacuous mass is the identity");

    const Eigen::VectorXd betp = pignistic(a);
    const auto iv = bel_pl_intervals(a);
    for (std::size_t h = 0; h < iv.size(); ++h) {
      const double p = betp[static_cast<Eigen::Index>(h)];
      c.expect(iv[h].bel - 1e-12 <= p && p <= iv[h].pl + 1e-12, "pignistic inside [Bel, Pl]");
    }

    try {
      const MassFunction ab = dempster_combine(a, b);
      c.expect(ab.masses() == dempster_combine(b, a).masses(), "combination is exactly commutative");
      const auto oracle = testing::dempster_by_commonality(a, b);
      double total = 0.0, gap = 0.0;
      for (std::uint32_t s = 1; s <= f.full().bits; ++s) {
        total += ab.mass({static_cast<std::uint16_t>(s)});
        gap = std::max(gap, std::abs(ab.mass({static_cast<std::uint16_t>(s)}) - oracle[s]));
      }
      c.expect(std::abs(total - 1.0) <= 1e-9, "combined masses sum to 1");
      c.expect(gap <= 1e-9, "combination matches the commonality oracle");
      const MassFunction left = dempster_combine(ab, d);
      const MassFunction right = dempster_combine(a, dempster_combine(b, d));
      bool assoc = true;
      for (std::uint32_t s = 1; s <= f.full().bits; ++s)
        assoc = assoc && std::abs(left.mass({static_cast<std::uint16_t>(s)}) - right.mass({static_cast<std::uint16_t>(s)})) <= 1e-9;
      c.expect(assoc, "combination is associative within 1e-9");
    } catch (const TotalConflict&) {
    }
  }
}

void fta_agreement(Checks& c) {
  testing::Rng rng(20240503);
  for (int i = 0; i < 250; ++i) {
    const ModelDocument doc = testing::random_fault_tree(rng, 8, 6);

    std::vector<std::vector<std::string>> got;
    for (const auto& cs : minimal_cut_sets(doc, "TOP").cutsets) got.push_back(cs.events);
    c.expect(got == testing::truth_table_cut_sets(doc, "TOP"), "cut sets match truth-table minimization");

    const TopEventResult exact = top_event_probability(doc, "TOP");
    c.expect(std::abs(exact.probability - testing::weighted_truth_table(doc, "TOP")) <= 1e-12,
             "exact probability matches weighted enumeration");

    const Marginal bn = posterior_marginal(ft_to_bn(doc, "TOP"), {"TOP", {}});
    c.expect(std::abs(bn.distribution[1] - exact.probability) <= 1e-9, "translated network matches");

    const TopEventResult ev = evidential_top_event(doc, "TOP");
    c.expect(ev.bel_pl && std::abs(ev.bel_pl->first - exact.probability) <= 1e-9 &&
                 std::abs(ev.bel_pl->second - exact.probability) <= 1e-9,
             "Bayesian masses collapse to the point probability");
  }
}

void taxonomy_metrics(Checks& c) {
  const ModelDocument chain = load_model(kModels + "/perception-chain.ucm");
  const Eigen::VectorXd prior = posterior_marginal(chain, {"perception", {}}).distribution;
  const auto d = decompose_marginal({"perception", prior}, chain.variable("perception"));
  c.expect(std::abs(d.epistemic_mass - prior[2]) <= 1e-12 && d.ontological_mass == 0.0, "perception partial sums");
  const Eigen::VectorXd gt = posterior_marginal(chain, {"ground_truth", {}}).distribution;
  const auto g = decompose_marginal({"ground_truth", gt}, chain.variable("ground_truth"));
  c.expect(std::abs(g.ontological_mass - gt[2]) <= 1e-12 && g.epistemic_mass == 0.0, "ground truth partial sums");

  testing::Rng rng(20240504);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = testing::pick(rng, 2, 8);
    VariableNode node{"x", {}, {}, {}, {}};
    double onto = 0.0, epi = 0.0;
    const auto p = testing::random_distribution(rng, n, 3);
    for (std::size_t s = 0; s < n; ++s) {
      node.states.push_back("s" + std::to_string(s));
      switch (testing::pick(rng, 0, 2)) {
        case 1:
          node.tags[node.states.back()] = UncertaintyTag::epistemic;
          epi += p[s];
          break;
        case 2:
          node.tags[node.states.back()] = UncertaintyTag::ontological;
          onto += p[s];
          break;
        default:
          break;
      }
    }
    const auto r = decompose_marginal({"x", Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(n))}, node);
    c.expect(std::abs(r.ontological_mass - onto) <= 1e-12 && std::abs(r.epistemic_mass - epi) <= 1e-12,
             "random partial sums");
  }

  const ModelDocument channel = parse_model(R"(
model "channel"
variable X { states: zero, one }
variable Y { states: zero, one
             parents: X }
cpt X { () -> 0.5, 0.5 }
cpt Y { (zero) -> 0.9, 0.1
        (one)  -> 0.1, 0.9 }
)");
  // four joint cells: 0.45, 0.05, 0.05, 0.45; P(y) = 0.5 each
  double oracle = 0.0;
  for (double cell : {0.45, 0.05, 0.05, 0.45}) oracle -= cell * std::log2(cell / 0.5);
  const double h = conditional_entropy(channel, "X", "Y");
  c.expect(std::abs(h - oracle) <= 1e-6 && std::abs(h - 0.468996) <= 1e-6, "flip channel H(X|Y)");
  c.expect(conditional_entropy(channel, "X", "X") == 0.0, "H(X|X) = 0");

  const ModelDocument independent = parse_model(R"(
model "independent"
variable A { states: a, b, c }
variable B { states: a, b }
cpt A { () -> 0.2, 0.3, 0.5 }
cpt B { () -> 0.6, 0.4 }
)");
  const double ha = -(0.2 * std::log2(0.2) + 0.3 * std::log2(0.3) + 0.5 * std::log2(0.5));
  c.expect(std::abs(conditional_entropy(independent, "A", "B") - ha) <= 1e-12, "H(X|Y) = H(X) when independent");
}

struct GoldenCase {
  std::string name;
  int exit_code;
  std::vector<std::string> args;
};

std::vector<GoldenCase> golden_cases() {
  std::ifstream in(kSource + "/tests/golden/cases.txt");
  std::vector<GoldenCase> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    GoldenCase gc;
    std::string code, args;
    std::getline(fields, gc.name, '|');
    std::getline(fields, code, '|');
    std::getline(fields, args);
    gc.exit_code = std::stoi(code);
    std::istringstream words(args);
    for (std::string w; words >> w;) gc.args.push_back(w);
    out.push_back(std::move(gc));
  }
  return out;
}

void cli_determinism(Checks& c) {
  const auto cases = golden_cases();
  c.expect(cases.size() >= 5, "golden manifest is readable");
  bool seen[5] = {};
  const char* subcommands[5] = {"validate", "infer", "fta", "report", "to-bn"};

  const auto cwd = std::filesystem::current_path();
  std::filesystem::current_path(kSource);
  for (const auto& gc : cases) {
    for (int k = 0; k < 5; ++k) seen[k] = seen[k] || gc.args.front() == subcommands[k];
    std::ifstream golden(kSource + "/tests/golden/" + gc.name + ".out", std::ios::binary);
    const std::string want{std::istreambuf_iterator<char>(golden), std::istreambuf_iterator<char>()};
    for (int run = 0; run < 2; ++run) {
      std::ostringstream out, err;
      const int code = run_cli(gc.args, out, err, {});
      c.expect(code == gc.exit_code, gc.name + ": exit code");
      c.expect(out.str() == want, gc.name + ": output matches golden file");
    }
  }
  std::filesystem::current_path(cwd);
  for (int k = 0; k < 5; ++k) c.expect(seen[k], std::string("golden coverage of ") + subcommands[k]);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "perception table integrity", 1.0, table_integrity},
      {2, "perception-chain reproduction", 1.0, perception_chain},
      {3, "inference soundness on random models", 30.0, inference_soundness},
      {4, "evidence layer properties", 10.0, evidence_layer},
      {5, "fault-tree triple agreement", 60.0, fta_agreement},
      {6, "taxonomy metrics", 1.0, taxonomy_metrics},
      {7, "CLI determinism against golden files", 60.0, cli_determinism},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    std::string crash;
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      crash = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < cr.budget_seconds;
    const bool pass = checks.passed() && crash.empty() && in_time;
    std::printf("criterion %d %-40s %s  checks=%zu failed=%zu  %.3fs (budget %.0fs)\n", cr.id, cr.title.c_str(),
                pass ? "PASS" : "FAIL", checks.count(), checks.failed(), seconds, cr.budget_seconds);
    for (const auto& f : checks.failures()) std::printf("    failed: %s\n", f.c_str());
    if (!crash.empty()) std::printf("    exception: %s\n", crash.c_str());
    if (!in_time) std::printf("    over time budget\n");
    failed += pass ? 0 : 1;
  }
  std::printf("%s: %d of %zu criteria passed\n", failed ? "FAIL" : "PASS", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed ? 1 : 0;
}

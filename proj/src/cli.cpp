#include "ucm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "ucm/error.hpp"
#include "ucm/evidence.hpp"
#include "ucm/fta.hpp"
#include "ucm/inference.hpp"
#include "ucm/parser.hpp"
#include "ucm/taxonomy.hpp"
#include "ucm/validate.hpp"

namespace ucm {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string_view severity_name(Severity s) { return s == Severity::error ? "error" : "warning"; }

ModelDocument load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

/// Loads and validates; writes findings to `err` and returns false on errors.
bool load_valid(const std::string& path, ModelDocument& doc, std::ostream& err) {
  doc = load(path);
  const ValidationReport report = validate(doc);
  for (const auto& f : report.findings)
    if (f.severity == Severity::error) err << path << ": " << f.location << ": " << f.message << "\n";
  return report.ok();
}

Limits limits_from(const CliEnvironment& env) {
  if (!env.guard_states) return {};
  const std::string& text = *env.guard_states;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
    throw UsageError("UCM_GUARD_STATES must be a positive integer, got '" + text + "'");
  return Limits::uniform(value);
}

Query make_query(const std::string& target, const std::vector<std::string>& evidence) {
  Query q{target, {}};
  for (const auto& item : evidence) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw UsageError("evidence must be NODE=STATE, got '" + item + "'");
    auto [it, inserted] = q.evidence.emplace(item.substr(0, eq), item.substr(eq + 1));
    if (!inserted && it->second != item.substr(eq + 1))
      throw UsageError("conflicting evidence for '" + it->first + "'");
  }
  return q;
}

struct InferOptions {
  std::string path;
  std::string query;
  std::vector<std::string> evidence;
  bool intervals = false;
  int decimals = 6;
};

int cmd_validate(const std::string& path, std::ostream& out) {
  ModelDocument doc;
  try {
    doc = load(path);
  } catch (const ParseError& e) {
    out << "error\t" << path << ":" << e.line() << ":" << e.column() << "\t" << e.what() << "\n";
    return kExitFindings;
  }
  const ValidationReport report = validate(doc);
  for (const auto& f : report.findings) out << severity_name(f.severity) << "\t" << f.location << "\t" << f.message << "\n";
  if (!report.ok()) return kExitFindings;
  out << "OK\n";
  return kExitOk;
}

int cmd_infer(const InferOptions& o, const Limits& limits, std::ostream& out, std::ostream& err) {
  ModelDocument doc;
  if (!load_valid(o.path, doc, err)) return kExitFindings;
  const BayesNet net(doc);
  const Marginal m = posterior_marginal(net, make_query(o.query, o.evidence), limits);
  const VariableNode& node = doc.variable(o.query);
  std::ostringstream text;
  for (std::size_t i = 0; i < node.states.size(); ++i)
    text << node.states[i] << "\t" << fixed(m.distribution[static_cast<Eigen::Index>(i)], o.decimals) << "\n";
  if (o.intervals) {
    text << "hypothesis\tbel\tpl\n";
    for (const auto& iv : bel_pl_intervals(marginal_to_mass(m, node)))
      text << iv.hypothesis << "\t" << fixed(iv.bel, o.decimals) << "\t" << fixed(iv.pl, o.decimals) << "\n";
  }
  out << text.str();
  return kExitOk;
}

struct FtaOptions {
  std::string path;
  std::string top;
  bool cutsets = false;
  bool prob = false;
  bool evidential = false;
  int decimals = 6;
};

int cmd_fta(FtaOptions o, const Limits& limits, std::ostream& out, std::ostream& err) {
  ModelDocument doc;
  if (!load_valid(o.path, doc, err)) return kExitFindings;
  if (!o.cutsets && !o.prob && !o.evidential) o.cutsets = o.prob = true;
  std::ostringstream text;
  if (o.cutsets) {
    for (const auto& c : minimal_cut_sets(doc, o.top).cutsets) {
      text << "{";
      for (std::size_t i = 0; i < c.events.size(); ++i) text << (i ? "," : "") << c.events[i];
      text << "}\n";
    }
  }
  if (o.prob) {
    const TopEventResult r = top_event_probability(doc, o.top, limits);
    text << "P(top)=" << fixed(r.probability, o.decimals) << "\n";
    text << "rare-event<=" << fixed(r.rare_event_bound, o.decimals) << "\n";
  }
  if (o.evidential) {
    const TopEventResult r = evidential_top_event(doc, o.top, limits);
    text << "[Bel,Pl]=[" << fixed(r.bel_pl->first, o.decimals) << "," << fixed(r.bel_pl->second, o.decimals)
         << "]\n";
  }
  out << text.str();
  return kExitOk;
}

struct ReportOptions {
  std::string path;
  std::vector<std::string> queries;
  Thresholds thresholds;
  int decimals = 6;
};

int cmd_report(ReportOptions o, const Limits& limits, std::ostream& out, std::ostream& err) {
  ModelDocument doc;
  if (!load_valid(o.path, doc, err)) return kExitFindings;
  const BayesNet net(doc);
  if (o.queries.empty())
    for (const auto& v : doc.variables) o.queries.push_back(v.name);

  std::ostringstream text;
  for (std::size_t k = 0; k < o.queries.size(); ++k) {
    const VariableNode& node = doc.variable(o.queries[k]);
    const Marginal m = posterior_marginal(net, Query{node.name, {}}, limits);
    const UncertaintyDecomposition d = decompose_marginal(m, node);
    if (k) text << "\n";
    text << "[" << node.name << "]\n";
    for (std::size_t i = 0; i < node.states.size(); ++i)
      text << node.states[i] << "\t" << fixed(m.distribution[static_cast<Eigen::Index>(i)], o.decimals) << "\n";
    text << "ontological_mass\t" << fixed(d.ontological_mass, o.decimals) << "\n";
    text << "epistemic_mass\t" << fixed(d.epistemic_mass, o.decimals) << "\n";
    text << "aleatory_entropy_bits\t" << fixed(d.aleatory_entropy_bits, o.decimals) << "\n";
    for (const auto& r : recommend_means(d, o.thresholds))
      text << "recommend\t" << to_string(r.mean) << "\t" << to_string(r.trigger) << "\t" << r.message << "\n";
  }
  out << text.str();
  return kExitOk;
}

int cmd_to_bn(const std::string& path, const std::string& top, const Limits& limits, std::ostream& out,
              std::ostream& err) {
  ModelDocument doc;
  if (!load_valid(path, doc, err)) return kExitFindings;
  out << serialize(ft_to_bn(doc, top, limits));
  return kExitOk;
}

}  // namespace

CliEnvironment CliEnvironment::from_process() {
  CliEnvironment env;
  if (const char* v = std::getenv("UCM_GUARD_STATES")) env.guard_states = v;
  return env;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnvironment& env) {
  CLI::App app{"Uncertainty-aware Bayesian network and fault-tree analysis", "ucm"};
  app.require_subcommand(1);

  std::string path;

  auto* validate_cmd = app.add_subcommand("validate", "Check a model and list findings");
  validate_cmd->add_option("path", path, "Model file (.ucm)")->required();

  InferOptions infer;
  auto* infer_cmd = app.add_subcommand("infer", "Posterior marginal of one variable");
  infer_cmd->add_option("path", infer.path, "Model file (.ucm)")->required();
  infer_cmd->add_option("--query", infer.query, "Target variable")->required();
  infer_cmd->add_option("--evidence", infer.evidence, "Observation NODE=STATE (repeatable)");
  infer_cmd->add_flag("--intervals", infer.intervals, "Append [Bel, Pl] per atomic hypothesis");
  infer_cmd->add_option("--decimals", infer.decimals, "Fixed decimals in output")->check(CLI::Range(0, 17));

  FtaOptions fta;
  auto* fta_cmd = app.add_subcommand("fta", "Fault-tree analysis of one top gate");
  fta_cmd->add_option("path", fta.path, "Model file (.ucm)")->required();
  fta_cmd->add_option("--top", fta.top, "Top gate")->required();
  fta_cmd->add_flag("--cutsets", fta.cutsets, "Print minimal cut sets");
  fta_cmd->add_flag("--prob", fta.prob, "Print exact and rare-event top probability");
  fta_cmd->add_flag("--evidential", fta.evidential, "Print [Bel,Pl] of top failure");
  fta_cmd->add_option("--decimals", fta.decimals, "Fixed decimals in output")->check(CLI::Range(0, 17));

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Uncertainty decomposition and recommended means");
  report_cmd->add_option("path", report.path, "Model file (.ucm)")->required();
  report_cmd->add_option("--query", report.queries, "Variables to report (default: all)");
  report_cmd->add_option("--tau-e", report.thresholds.epistemic, "Epistemic mass threshold");
  report_cmd->add_option("--tau-o", report.thresholds.ontological, "Ontological mass threshold");
  report_cmd->add_option("--decimals", report.decimals, "Fixed decimals in output")->check(CLI::Range(0, 17));

  std::string to_bn_path, to_bn_top;
  auto* to_bn_cmd = app.add_subcommand("to-bn", "Translate a fault tree into an equivalent Bayesian network");
  to_bn_cmd->add_option("path", to_bn_path, "Model file (.ucm)")->required();
  to_bn_cmd->add_option("--top", to_bn_top, "Top gate")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Limits limits = limits_from(env);
    if (*validate_cmd) return cmd_validate(path, out);
    if (*infer_cmd) return cmd_infer(infer, limits, out, err);
    if (*fta_cmd) return cmd_fta(fta, limits, out, err);
    if (*report_cmd) return cmd_report(report, limits, out, err);
    if (*to_bn_cmd) return cmd_to_bn(to_bn_path, to_bn_top, limits, out, err);
  } catch (const UsageError& e) {
    err << "ucm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnresolvedName& e) {
    err << "ucm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidQuery& e) {
    err << "ucm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GuardExceeded& e) {
    err << "ucm: " << e.what() << "\n";
    return kExitGuard;
  } catch (const ParseError& e) {
    err << "ucm: parse error: " << e.what() << "\n";
    return kExitFindings;
  } catch (const Error& e) {
    err << "ucm: " << e.what() << "\n";
    return kExitFindings;
  }
  return kExitUsage;
}

}  // namespace ucm

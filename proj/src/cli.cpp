#include "npconf/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <sstream>
#include <thread>

#include "json_support.hpp"
#include "npconf/conformance.hpp"
#include "npconf/errors.hpp"
#include "npconf/log_io.hpp"
#include "npconf/loggen.hpp"
#include "npconf/model_io.hpp"
#include "npconf/projection.hpp"
#include "npconf/report_io.hpp"

namespace npconf {
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string model;
  std::string log;
  std::string out;
  std::string mode = "both";
  std::string report = "text";
  std::uint64_t seed = 0;
  std::size_t traces = 100;
  std::size_t max_steps = 64;
  std::size_t max_states = 1'000'000;
  unsigned workers = 0;
};

// Emits to --out when given, otherwise to stdout.
void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty())
    out << text;
  else
    write_file(o.out, text);
}

// Parse errors are reported as path:line:column.
template <class Parse>
auto parse_file(const std::string& path, Parse&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  }
}

NestedNet load_valid_model(const std::string& path) {
  return parse_file(path, [](const std::string& text) { return load_model(text); });
}

EventLog load_log(const std::string& path) {
  return parse_file(path, [](const std::string& text) { return parse_log(text); });
}

int cmd_validate(const Options& o, std::ostream& out) {
  const ModelDocument doc = parse_file(o.model, [](const std::string& text) { return parse_model(text); });
  const ValidationReport report = validate_model(doc);
  const ValidationReport warnings = check_label_determinism(doc.model);

  if (o.report == "structured") {
    detail::Json root;
    root["schema"] = "npnet-validation/1";
    root["ok"] = report.ok();
    auto list = [](const ValidationReport& r) {
      detail::Json a = detail::Json::array();
      for (const auto& v : r.violations())
        a.push_back(detail::Json{{"code", v.code}, {"subject", v.subject}, {"message", v.message}});
      return a;
    };
    root["violations"] = list(report);
    root["warnings"] = list(warnings);
    emit(o, detail::pretty(root, 3), out);
  } else {
    std::ostringstream text;
    if (report.ok()) text << "model is valid\n";
    text << report;
    for (const auto& w : warnings.violations()) text << "warning: [" << w.code << "] " << w.subject << ": " << w.message << "\n";
    emit(o, text.str(), out);
  }
  return report.ok() ? kExitOk : kExitFailure;
}

int cmd_project(const Options& o, std::ostream& out, std::ostream& err) {
  const NestedNet np = load_valid_model(o.model);
  const EventLog log = load_log(o.log);
  std::set<AgentName> roster;
  for (const auto& [agent, cls] : np.agents) roster.insert(agent);
  ComponentLogs logs;
  try {
    logs = project_log(log, roster);
  } catch (const RosterError& e) {
    err << "error: " << e.what() << " (not in the model's roster)\n";
    return kExitFailure;
  }
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  write_file(dir / "system.json", serialize_system_log(logs.system_log));
  out << "wrote " << (dir / "system.json").string() << "\n";
  for (const auto& [agent, l] : logs.agent_logs) {
    const fs::path file = dir / ("agent-" + agent.str() + ".json");
    write_file(file, serialize_agent_log(agent, l));
    out << "wrote " << file.string() << "\n";
  }
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const NestedNet np = load_valid_model(o.model);
  const EventLog log = load_log(o.log);
  const CheckMode mode = o.mode == "monolithic"      ? CheckMode::monolithic
                         : o.mode == "compositional" ? CheckMode::compositional
                                                     : CheckMode::both;
  FitnessOracleConfig cfg;
  cfg.max_states = o.max_states;
  cfg.workers = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
  const ConformanceReport report = check(log, np, mode, cfg);
  emit(o, o.report == "structured" ? render_structured(report) : render_text(report), out);

  if (report.discrepancies) return kExitError;
  switch (overall_verdict(report)) {
    case Verdict::fits: return kExitOk;
    case Verdict::does_not_fit: return kExitFailure;
    case Verdict::inconclusive: return kExitError;
  }
  return kExitError;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const NestedNet np = load_valid_model(o.model);
  SimulationConfig cfg;
  cfg.seed = o.seed;
  cfg.trace_count = o.traces;
  cfg.max_steps = o.max_steps;
  cfg.workers = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
  EventLog log;
  try {
    log = generate_log(np, cfg);
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  log.header.model = fs::path(o.model).stem().stem().string();
  emit(o, serialize_log(log), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformance checking of multi-agent event logs against nested Petri nets", "npconf"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "check a model for well-formedness");
  validate->add_option("--model", o.model, "model file")->required();
  validate->add_option("--report", o.report, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  validate->add_option("--out", o.out, "write the report here");

  auto* project = app.add_subcommand("project", "project a log onto the system net and every agent");
  project->add_option("--model", o.model, "model file")->required();
  project->add_option("--log", o.log, "log file")->required();
  project->add_option("--out", o.out, "output directory");

  auto* chk = app.add_subcommand("check", "check whether a log perfectly fits a model");
  chk->add_option("--model", o.model, "model file")->required();
  chk->add_option("--log", o.log, "log file")->required();
  chk->add_option("--mode", o.mode, "monolithic, compositional or both")
      ->check(CLI::IsMember({"monolithic", "compositional", "both"}));
  chk->add_option("--report", o.report, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  chk->add_option("--out", o.out, "write the report here");
  chk->add_option("--max-states", o.max_states, "search limit per trace and component")->check(CLI::PositiveNumber);
  chk->add_option("--workers", o.workers, "threads (0 = all cores)");

  auto* simulate = app.add_subcommand("simulate", "generate a fitting log by simulation");
  simulate->add_option("--model", o.model, "model file")->required();
  simulate->add_option("--traces", o.traces, "number of traces")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", o.seed, "random seed");
  simulate->add_option("--max-steps", o.max_steps, "longest run tried")->check(CLI::PositiveNumber);
  simulate->add_option("--out", o.out, "log file");
  simulate->add_option("--workers", o.workers, "threads (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (project->parsed()) return cmd_project(o, out, err);
    if (chk->parsed()) return cmd_check(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out, err);
  } catch (const ModelError& e) {
    err << "error: " << o.model << ": " << e.what() << "\n" << e.report;
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace npconf

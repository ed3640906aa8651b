#include "npconf/report_io.hpp"

#include <cstdio>
#include <sstream>

#include "json_support.hpp"

namespace npconf {

using detail::Json;

Verdict overall_verdict(const ConformanceReport& report) {
  if (report.overall) return Verdict::fits;
  bool inconclusive = false;
  for (const auto& tr : report.traces) {
    const Verdict v = tr.verdict();
    if (v == Verdict::does_not_fit) return Verdict::does_not_fit;
    inconclusive |= v == Verdict::inconclusive;
  }
  if (!report.syntactic.ok()) return Verdict::does_not_fit;
  return inconclusive ? Verdict::inconclusive : Verdict::does_not_fit;
}

namespace {

std::string trace_text(const Trace& t) {
  std::ostringstream ss;
  ss << t;
  return ss.str();
}

Json verdict_json(const TraceVerdict& v) {
  Json out{{"verdict", std::string(to_string(v.verdict))}};
  out["failure_position"] = v.failure_position ? Json(*v.failure_position) : Json(nullptr);
  out["visited"] = v.visited;
  return out;
}

}  // namespace

std::string render_structured(const ConformanceReport& report) {
  Json root;
  root["schema"] = kReportSchema;
  root["mode"] = std::string(to_string(report.mode));
  root["overall"] = report.overall;
  root["verdict"] = std::string(to_string(overall_verdict(report)));
  root["total_weight"] = report.total_weight;
  root["fitting_weight"] = report.fitting_weight;
  char aggregate[32];
  std::snprintf(aggregate, sizeof aggregate, "%.6f", report.aggregate());
  root["aggregate"] = std::stod(aggregate);
  root["inconclusive"] = report.inconclusive;
  root["discrepancies"] = report.discrepancies;
  if (report.mode != CheckMode::monolithic) {
    Json failures = Json::array();
    for (const auto& f : report.syntactic.failures)
      failures.push_back(Json{{"trace", f.trace}, {"event", f.event}, {"diagnosis", f.diagnosis}});
    root["syntactic"] = Json{{"ok", report.syntactic.ok()}, {"failures", failures}};
  }
  root["notes"] = Json::array();
  for (const auto& n : report.notes) root["notes"].push_back(n);

  root["traces"] = Json::array();
  for (std::size_t i = 0; i < report.traces.size(); ++i) {
    const auto& tr = report.traces[i];
    Json t{{"index", i}, {"frequency", tr.frequency}, {"trace", trace_text(tr.trace)},
           {"verdict", std::string(to_string(tr.verdict()))}};
    if (tr.monolithic) t["monolithic"] = verdict_json(*tr.monolithic);
    if (tr.compositional) {
      Json components = Json::object();
      for (const auto& [name, v] : tr.components) components[name] = verdict_json(v);
      Json syntax = Json::array();
      for (const auto& f : tr.syntax) syntax.push_back(Json{{"event", f.event}, {"diagnosis", f.diagnosis}});
      t["compositional"] = Json{{"verdict", std::string(to_string(*tr.compositional))},
                                {"syntax_failures", syntax},
                                {"components", components}};
    }
    t["discrepancy"] = tr.discrepancy;
    root["traces"].push_back(t);
  }
  return detail::pretty(root, 4);
}

std::string render_text(const ConformanceReport& report) {
  std::ostringstream out;
  out << "mode: " << to_string(report.mode) << "\n";
  out << "verdict: " << to_string(overall_verdict(report)) << (report.overall ? " (perfect fitness)" : "") << "\n";
  out << "fitting weight: " << report.fitting_weight << "/" << report.total_weight << "\n";
  if (report.mode != CheckMode::monolithic)
    out << "syntactic correctness: " << (report.syntactic.ok() ? "ok" : "violated") << "\n";
  if (report.inconclusive) out << "inconclusive traces: " << report.inconclusive << "\n";
  if (report.mode == CheckMode::both) out << "discrepancies: " << report.discrepancies << "\n";
  for (const auto& n : report.notes) out << "note: " << n << "\n";

  for (std::size_t i = 0; i < report.traces.size(); ++i) {
    const auto& tr = report.traces[i];
    if (tr.verdict() == Verdict::fits && !tr.discrepancy) continue;
    out << "\ntrace " << i << " (x" << tr.frequency << "): " << to_string(tr.verdict())
        << (tr.discrepancy ? " [DISCREPANCY]" : "") << "\n  " << tr.trace << "\n";
    if (tr.monolithic && !tr.monolithic->fits()) {
      out << "  monolithic: " << to_string(tr.monolithic->verdict);
      if (tr.monolithic->failure_position) out << " at event " << *tr.monolithic->failure_position;
      out << "\n";
    }
    for (const auto& f : tr.syntax) out << "  syntax: event " << f.event << ": " << f.diagnosis << "\n";
    for (const auto& [name, v] : tr.components) {
      if (v.fits()) continue;
      out << "  " << name << ": " << to_string(v.verdict);
      if (v.failure_position) out << " at position " << *v.failure_position << " of its projection";
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace npconf

#pragma once

// RunReport: what one CLI invocation checked, and its JSON form.

#include "hh/core.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace hhcli {

struct TrialReport {
  int trial = 0;
  hh::BoundReport report;
};

struct GuardedOut {
  int trial = 0;
  std::string target;
  std::string reason;
};

struct RunReport {
  nlohmann::ordered_json command;
  std::vector<TrialReport> reports;
  std::vector<GuardedOut> guarded;

  int satisfied() const {
    int n = 0;
    for (const auto& r : reports)
      n += r.report.satisfied ? 1 : 0;
    return n;
  }
  int violated() const { return static_cast<int>(reports.size()) - satisfied(); }
  int guarded_out() const { return static_cast<int>(guarded.size()); }
  int checked() const { return static_cast<int>(reports.size()) + guarded_out(); }
};

inline nlohmann::ordered_json number(double v) {
  if (std::isnan(v))
    return nullptr;
  return v;
}

inline nlohmann::ordered_json to_json(const hh::InputEcho& in) {
  nlohmann::ordered_json j;
  if (!in.fn.empty())
    j["fn"] = in.fn;
  j["a"] = number(in.a);
  j["b"] = number(in.b);
  for (const auto& [name, value] : in.params)
    j[name] = number(value);
  return j;
}

inline nlohmann::ordered_json to_json(const TrialReport& t) {
  const hh::BoundReport& r = t.report;
  nlohmann::ordered_json j;
  j["trial"] = t.trial;
  j["label"] = r.label;
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["margin"] = number(r.margin);
  j["satisfied"] = r.satisfied;
  if (r.fragile)
    j["fragile"] = true;
  j["inputs"] = to_json(r.inputs);
  if (!r.details.empty()) {
    nlohmann::ordered_json d;
    for (const auto& [name, value] : r.details)
      d[name] = number(value);
    j["details"] = d;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const RunReport& run) {
  nlohmann::ordered_json j;
  j["command"] = run.command;
  j["counts"] = {{"checked", run.checked()},
                 {"satisfied", run.satisfied()},
                 {"violated", run.violated()},
                 {"guarded_out", run.guarded_out()}};
  j["reports"] = nlohmann::ordered_json::array();
  j["findings"] = nlohmann::ordered_json::array();
  for (const auto& t : run.reports) {
    j["reports"].push_back(to_json(t));
    if (!t.report.satisfied)
      j["findings"].push_back(to_json(t));
  }
  j["guarded"] = nlohmann::ordered_json::array();
  for (const auto& g : run.guarded)
    j["guarded"].push_back({{"trial", g.trial}, {"target", g.target}, {"reason", g.reason}});
  return j;
}

inline void print_pretty(const RunReport& run) {
  std::printf("%-6s %-28s %14s %14s %12s  %s\n", "trial", "label", "lhs", "rhs", "margin", "status");
  for (const auto& t : run.reports) {
    const auto& r = t.report;
    std::printf("%-6d %-28s %14.8g %14.8g %12.4g  %s%s\n", t.trial, r.label.c_str(), r.lhs, r.rhs, r.margin,
                r.satisfied ? "ok" : "VIOLATED", r.fragile ? " (fragile)" : "");
  }
  for (const auto& g : run.guarded)
    std::printf("%-6d %-28s guarded out: %s\n", g.trial, g.target.c_str(), g.reason.c_str());
  std::printf("checked %d  satisfied %d  violated %d  guarded_out %d\n", run.checked(), run.satisfied(),
              run.violated(), run.guarded_out());
}

}  // namespace hhcli

#include "calabi_lab/report.hpp"

#include <algorithm>
#include <sstream>

#include "calabi_lab/errors.hpp"

namespace calab {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
  }
  return "fail";
}

bool ReportEnvelope::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == Status::fail; });
}

Json to_json(const ReportEnvelope& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = kToolName;
  j["version"] = CALABI_LAB_VERSION;
  j["command"] = r.command;
  j["config"] = r.config;
  Json checks = Json::array();
  std::size_t failed = 0, skipped = 0;
  for (const auto& c : r.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["anchor"] = c.anchor;
    cj["status"] = to_string(c.status);
    cj["values"] = c.values;
    checks.push_back(std::move(cj));
    if (c.status == Status::fail) ++failed;
    if (c.status == Status::skip) ++skipped;
  }
  j["checks"] = std::move(checks);
  j["results"] = r.results;
  j["aggregate"] = Json{{"status", r.passed() ? "pass" : "fail"},
                        {"checks", r.checks.size()},
                        {"failed", failed},
                        {"skipped", skipped}};
  return j;
}

std::string render_json(const ReportEnvelope& r) { return to_json(r).dump(2) + "\n"; }

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const Json& e) { return e.is_structured(); })) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, scalar_text(v));
  }
}

}  // namespace

std::string render_csv(const ReportEnvelope& r) {
  std::ostringstream os;
  os << "record,name,anchor,status,key,value\n";
  auto row = [&](const std::string& rec, const std::string& name, const std::string& anchor,
                 const std::string& status, const std::string& key, const std::string& value) {
    os << csv_field(rec) << ',' << csv_field(name) << ',' << csv_field(anchor) << ',' << csv_field(status) << ','
       << csv_field(key) << ',' << csv_field(value) << '\n';
  };
  std::vector<std::pair<std::string, std::string>> kv;
  flatten(r.config, "", kv);
  for (const auto& [k, v] : kv) row("config", r.command, "", "", k, v);
  for (const auto& c : r.checks) {
    kv.clear();
    flatten(c.values, "", kv);
    if (kv.empty()) row("check", c.name, c.anchor, to_string(c.status), "", "");
    for (const auto& [k, v] : kv) row("check", c.name, c.anchor, to_string(c.status), k, v);
  }
  kv.clear();
  flatten(r.results, "", kv);
  for (const auto& [k, v] : kv) row("result", r.command, "", "", k, v);
  row("aggregate", r.command, "", r.passed() ? "pass" : "fail", "checks", std::to_string(r.checks.size()));
  return os.str();
}

namespace {

std::string brief(const Json& v) {
  std::string s = v.dump();
  if (s.size() > 60) s = s.substr(0, 57) + "...";
  return s;
}

}  // namespace

std::string render_table(const ReportEnvelope& r) {
  std::ostringstream os;
  os << kToolName << ' ' << CALABI_LAB_VERSION << "  " << r.command << "  " << r.config.dump() << "\n\n";
  std::size_t width = 4;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  for (const auto& c : r.checks) {
    std::string status = to_string(c.status);
    std::transform(status.begin(), status.end(), status.begin(), ::toupper);
    os << status << "  " << c.name << std::string(width - c.name.size() + 2, ' ') << c.anchor << '\n';
    for (auto it = c.values.begin(); it != c.values.end(); ++it)
      os << "        " << it.key() << " = " << brief(it.value()) << '\n';
  }
  if (!r.results.empty()) {
    os << "\nresults\n";
    for (auto it = r.results.begin(); it != r.results.end(); ++it) {
      if (it.value().is_array() && it.value().size() > 0 && it.value()[0].is_object()) {
        os << "  " << it.key() << ":\n";
        for (const auto& row : it.value()) os << "    " << row.dump() << '\n';
      } else {
        os << "  " << it.key() << " = " << it.value().dump() << '\n';
      }
    }
  }
  const std::size_t failed = static_cast<std::size_t>(
      std::count_if(r.checks.begin(), r.checks.end(), [](const CheckRecord& c) { return c.status == Status::fail; }));
  os << "\n" << (r.passed() ? "PASS" : "FAIL") << "  " << r.checks.size() << " checks, " << failed << " failed\n";
  return os.str();
}

std::string render(const ReportEnvelope& r, const std::string& format) {
  if (format == "json") return render_json(r);
  if (format == "csv") return render_csv(r);
  if (format == "table") return render_table(r);
  throw InvalidArgument("unknown output format '" + format + "'");
}

}  // namespace calab

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace calab {

using Json = nlohmann::ordered_json;

enum class Status { pass, fail, skip };
std::string to_string(Status s);

struct CheckRecord {
  std::string name;
  std::string anchor;  // the statement this check verifies
  Status status = Status::pass;
  Json values = Json::object();
};

struct ReportEnvelope {
  std::string command;
  Json config = Json::object();
  std::vector<CheckRecord> checks;
  Json results = Json::object();

  bool passed() const;
};

inline constexpr const char* kToolName = "calabi-lab";
inline constexpr int kSchemaVersion = 1;

Json to_json(const ReportEnvelope& r);
std::string render_json(const ReportEnvelope& r);
// Columns: record,name,anchor,status,key,value. Nested values flatten to dotted keys.
std::string render_csv(const ReportEnvelope& r);
std::string render_table(const ReportEnvelope& r);
// format is one of table, json, csv.
std::string render(const ReportEnvelope& r, const std::string& format);

}  // namespace calab

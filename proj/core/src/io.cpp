#include "fraclab/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

ordered_json object_of(const std::vector<std::pair<std::string, double>>& kv) {
  ordered_json o = ordered_json::object();
  for (const auto& [k, v] : kv) o[k] = number(v);
  return o;
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

std::string to_json_line(const TrialRecord& rec) {
  ordered_json j;
  j["experiment"] = rec.experiment;
  j["trial"] = rec.trial;
  j["inputs_digest"] = rec.inputs_digest;
  j["inputs"] = object_of(rec.inputs);
  j["measured"] = object_of(rec.measured);
  ordered_json labels = ordered_json::object();
  for (const auto& [k, v] : rec.labels) labels[k] = v;
  j["labels"] = labels;
  j["margins"] = object_of(rec.margins);
  j["verdict"] = to_string(rec.verdict);
  if (!rec.note.empty()) j["note"] = rec.note;
  return j.dump();
}

std::string to_jsonl(const std::vector<TrialRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

std::string summary_json(const std::vector<SummaryRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json o;
    o["experiment"] = r.experiment;
    o["trials"] = r.trials;
    o["passes"] = r.passes;
    o["fails"] = r.fails;
    o["skips"] = r.skips;
    o["min_margin"] = number(r.min_margin);
    arr.push_back(o);
  }
  return arr.dump(2);
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "experiment,trials,passes,fails,skips,min_margin\n";
  for (const auto& r : rows) {
    out += r.experiment + ',' + std::to_string(r.trials) + ',' + std::to_string(r.passes) + ',' +
           std::to_string(r.fails) + ',' + std::to_string(r.skips) + ',' + csv_number(r.min_margin) + '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open " + path + " for writing");
  f << text;
}

void write_run_outputs(const std::string& dir, const RunAllResult& result) {
  std::filesystem::create_directories(dir);
  for (const auto& row : result.rows) {
    auto it = result.records.find(row.experiment);
    if (it == result.records.end()) continue;
    write_text_file(dir + "/" + row.experiment + ".jsonl", to_jsonl(it->second));
  }
  write_text_file(dir + "/summary.csv", summary_csv(result.rows));
}

std::string function_json(const PiecewiseLinear& u) {
  ordered_json j;
  j["type"] = "pwl";
  j["x"] = u.x();
  j["y"] = u.y();
  return j.dump();
}

std::string function_json(const GridFunction& u) {
  ordered_json j;
  j["type"] = "grid";
  j["L"] = u.grid.L();
  j["N"] = u.grid.N();
  j["values"] = u.values;
  return j.dump();
}

FunctionData parse_function_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("function json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type")) throw DomainError("function json: missing \"type\"");
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "pwl") {
      return PiecewiseLinear(j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>());
    }
    if (type == "grid") {
      auto values = j.at("values").get<std::vector<double>>();
      return GridFunction(UniformGrid(j.at("L").get<double>(), j.at("N").get<int>()), std::move(values));
    }
    throw DomainError("function json: unknown type " + type);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("function json: ") + e.what());
  }
}

}  // namespace fraclab

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fraclab/experiments.hpp"
#include "fraclab/function_rep.hpp"

namespace fraclab {

// One JSON object per record, no trailing newline.
std::string to_json_line(const TrialRecord& rec);
std::string to_jsonl(const std::vector<TrialRecord>& records);
std::string summary_json(const std::vector<SummaryRow>& rows);

std::string summary_csv(const std::vector<SummaryRow>& rows);

// Writes <dir>/<experiment>.jsonl and <dir>/summary.csv.
void write_run_outputs(const std::string& dir, const RunAllResult& result);
void write_text_file(const std::string& path, const std::string& text);

// {"type":"pwl","x":[...],"y":[...]} or {"type":"grid","L":..,"N":..,"values":[...]}
using FunctionData = std::variant<PiecewiseLinear, GridFunction>;
std::string function_json(const PiecewiseLinear& u);
std::string function_json(const GridFunction& u);
FunctionData parse_function_json(const std::string& text);

}  // namespace fraclab

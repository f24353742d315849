#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mnlmix/choice_model.hpp"
#include "mnlmix/experiments.hpp"
#include "mnlmix/identify.hpp"
#include "mnlmix/learn.hpp"

namespace mnlmix {

using json = nlohmann::json;

inline constexpr const char* kModelSchema = "mnlmix.model/1";
inline constexpr const char* kOracleSchema = "mnlmix.oracle/1";
inline constexpr const char* kReportSchema = "mnlmix.identify/1";
inline constexpr const char* kLearnSchema = "mnlmix.learn/1";
inline constexpr const char* kEmpiricalSchema = "mnlmix.empirical/1";
inline constexpr const char* kExperimentSchema = "mnlmix.experiment/1";

json model_to_json(const MixtureModel& model);
json model_to_json(const RationalMixtureModel& model);  // "p/q" strings
MixtureModel model_from_json(const json& j);
RationalMixtureModel rational_model_from_json(const json& j);  // numbers are read exactly
bool model_json_is_exact(const json& j);

json oracle_to_json(const OracleTable& table);
OracleTable oracle_from_json(const json& j);

json empirical_to_json(const std::vector<EmpiricalRow>& rows, int n, double lambda);
json report_to_json(const IdentifiabilityReport& report);
json learn_report_to_json(const LearnReport& report);

json to_json(const DiscriminantMaxReport& r);
json to_json(const LambdaThresholdReport& r);
json to_json(const SweepReport& r);
json to_json(const SampleComplexityReport& r);
json to_json(const ThreeRootsReport& r);
json to_json(const CounterexampleReport& r);

json read_json_file(const std::string& path);
// Writes with two-space indentation and a trailing newline; "-" means stdout.
void write_text(const std::string& path, const std::string& text);

}  // namespace mnlmix

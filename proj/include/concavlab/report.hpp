#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "concavlab/envelope.hpp"
#include "concavlab/properties.hpp"
#include "concavlab/scenarios.hpp"
#include "concavlab/stationary.hpp"

namespace cvlab {

using Json = nlohmann::ordered_json;

/// Finite values as numbers, others as the strings "inf", "-inf" or "nan".
Json number(double v);

Json to_json(const Tuple& t);
Json to_json(const DefectReport& d);
Json to_json(const BoundReport& b);
Json to_json(const HypothesisReport& h);
Json to_json(const HyersUlamCertificate& c);
Json to_json(const PropertySuiteReport& r);
/// Runtimes are left out so identical inputs give identical bytes.
Json to_json(const ScenarioReport& r);
Json suite_summary(const std::vector<ScenarioReport>& reports);

std::string summary_text(const ScenarioReport& r);
std::string summary_text(const PropertySuiteReport& r);

/// Flattens to "key,value" rows with dotted keys.
std::string to_csv(const Json& j);

enum class ReportFormat { json, csv };
/// Writes `stem`.json or `stem`.csv under `dir`; returns the path written.
std::filesystem::path write_report(const Json& j, const std::filesystem::path& dir, const std::string& stem,
                                   ReportFormat format);
void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace cvlab

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prenorm/hfun.hpp"
#include "prenorm/renorm.hpp"

namespace prenorm {

enum class ReportFormat { Csv, Json };
const char* to_string(ReportFormat f);

/// Family selector with per-family parameters, as it appears in the config file.
struct FamilyConfig {
    std::string name; // power | hurwitz | eta | character | ehrhart | jacobi | gauss-ideal | grandi
    int modulus = 0;
    std::vector<Complex> values; // character table chi(1..k)
    std::string shape;           // box | simplex
    int dim = 0;
    double a = 0, b = 0, x = 0;  // jacobi parameters
};

struct ExperimentConfig {
    FamilyConfig family;
    Complex s{2.0, 0.0};
    double t0 = 1.0;
    int rho = 1;
    std::vector<int> m_list{2, 3, 4, 5, 6};
    RenormConfig engine{};
    std::optional<std::string> output_path;
    ReportFormat format = ReportFormat::Csv;
};

/// Strict parse: unknown keys anywhere are rejected with ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Instantiates the configured family; "grandi" is a term feed, not a family.
bool is_grandi(const FamilyConfig& f);
HFamily family_from_config(const FamilyConfig& f);

struct FullReport {
    ExperimentConfig config;
    RenormReport report;
    std::optional<StrongFit> fit;
};

/// Runs the pipeline described by the config and fits when enough
/// expectations are available.
FullReport run_experiment(const ExperimentConfig& cfg);

nlohmann::json report_to_json(const FullReport& r);
FullReport report_from_json(const nlohmann::json& j);

/// Fixed-column CSV with a deterministic comment header; floats carry
/// 17 significant digits so values round-trip bit-exactly.
std::string report_to_csv(const FullReport& r);

std::string render_report(const FullReport& r, ReportFormat fmt);

} // namespace prenorm

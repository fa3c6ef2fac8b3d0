#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "citenet/lfr.hpp"
#include "citenet/perturbation.hpp"

namespace citenet {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ExperimentKind { characterize, sweep, greedy, toy };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::sweep;
    std::filesystem::path corpus;
    std::filesystem::path keywords;
    std::filesystem::path out;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 0;  // 0 = all cores
    GreedyMode greedy_mode = GreedyMode::worst;
    ToyOptions toy;
    LfrConfig lfr = LfrConfig::table_row(1);

    // Relative paths in the document are resolved against `base_dir`.
    static ExperimentConfig from_json(const nlohmann::json& doc, ExperimentKind kind,
                                      const std::filesystem::path& base_dir = {});
    nlohmann::json to_json() const;

    // Throws ConfigError for missing kind-specific fields.
    void validate() const;
};

// Fixed exit statuses, also listed in --help.
namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int config = 2;
inline constexpr int io = 3;
inline constexpr int schema = 4;
inline constexpr int empty_network = 5;
inline constexpr int generation = 6;
inline constexpr int pipeline = 7;
}  // namespace exit_status

int exit_code_for(const std::exception& e);

struct RunReport {
    std::map<std::string, std::size_t> rows;  // file name -> data rows
    double seconds = 0;
};

// Runs the experiment and writes its CSVs plus manifest.json into cfg.out.
// All inputs are loaded and all results computed before the directory is
// touched, so a failing run leaves no partial output.
RunReport run(const ExperimentConfig& cfg, std::ostream& log);

// Reshapes a sweep, greedy or toy result CSV into long-format
// (series_name, x, y, y_err) rows. Throws IoError / SchemaError.
std::string emit_plot_data(const std::filesystem::path& results);

}  // namespace citenet

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frmod/cli/config.hpp"
#include "frmod/estimate.hpp"

namespace frmod::cli {

/// Column-oriented numeric table rendered as CSV (17 significant digits) or JSON records.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

std::string format_number(double v);

nlohmann::json params_document(const ModelSpec& model);

/// h, gamma_true[, gamma_sample]; the sample column needs a simulation block.
Table acvf_table(const ModelConfig& cfg, bool with_sample);

/// lambda, f_true[, periodogram_mean]. With a periodogram the rows sit on
/// Fourier frequencies of the simulated length, otherwise on the configured grid.
Table spectrum_table(const ModelConfig& cfg, bool with_periodogram);

struct SimulationRun {
  Table series;  // n, x
  nlohmann::json metadata;
};

SimulationRun simulate_series(const ModelConfig& cfg);

/// Built-in configuration of figure `which` (1..6); `seed` fills the simulation block.
ModelConfig figure_config(int which, std::uint64_t seed);

/// Writes the figure bundle into `outdir` and returns the manifest (also written there).
nlohmann::json write_figure(int which, const std::filesystem::path& outdir, std::uint64_t seed);

/// Parses CSV text and returns the column named `name`.
std::vector<double> read_column(const std::string& csv, const std::string& name);

struct DemodulationRun {
  Table table;  // n, y1, y2, residual
  nlohmann::json metadata;
};

DemodulationRun demodulate_series(const std::vector<double>& x, double lambda0, const Companion& companion);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frmod::cli

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include <sparsestep/benchmark.hpp>
#include <sparsestep/datagen.hpp>
#include <sparsestep/solver.hpp>

namespace sparsestep::io {

namespace fs = std::filesystem;

/// Shortest decimal form that round-trips the double ("%.17g").
std::string format_double(double v);

/// Headerless, comma separated, row-major, full precision.
void write_csv(const fs::path& path, const Matrix& values);
void write_csv(const fs::path& path, const Vector& values);
/// Throws DataError on missing files, ragged rows or unparsable fields.
Matrix read_csv_matrix(const fs::path& path);
Vector read_csv_vector(const fs::path& path);

nlohmann::ordered_json to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SolverSchedule& schedule);

/// Dataset directory: X_train.csv, y_train.csv, X_test.csv, y_test.csv,
/// beta_true.csv and meta.json.
void write_dataset(const fs::path& dir, const GeneratedDataset& data);
GeneratedDataset read_dataset(const fs::path& dir);

nlohmann::ordered_json fit_result_json(const FitResult& fit, Method method, double lambda,
                                       const SolverSchedule& schedule);

/// records.csv, ranks_<metric>.csv, stats.json (accuracy metrics only, so it
/// is reproducible byte for byte) and timing_stats.json.
void write_report(const fs::path& dir, const BenchmarkReport& report, const BenchmarkConfig& config);

/// Serialized statistics for the deterministic metrics (the stats.json body).
nlohmann::ordered_json stats_json(const BenchmarkReport& report, const BenchmarkConfig& config);

void write_json(const fs::path& path, const nlohmann::ordered_json& j);

} // namespace sparsestep::io

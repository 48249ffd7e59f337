#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "thirdq/errors.hpp"
#include "thirdq/model.hpp"

namespace thirdq::experiment {

inline constexpr const char* kVersion = "1.0.0";

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

enum class BathType { Redfield, Lindblad };
enum class LindbladForm { Operators, Rates };
enum class Task { Ness, Sweep, GapScaling, Dynamics, OracleCheck };
enum class Format { Csv, Json };

struct ModelConfig {
  int n = 20;
  double gamma = 0.5;
  double h = 0.9;
};

struct BathConfig {
  BathType type = BathType::Redfield;
  double beta_left = 0.3;
  double beta_right = 5.2;
  double lambda = 0.1;
  std::array<double, 4> kappa{1.0, 0.0, 1.0, 0.0};
  std::array<double, 4> theta{std::numbers::pi / 6, 0.0, std::numbers::pi / 6, 0.0};
  XYLindbladParams rates;
  LindbladForm form = LindbladForm::Operators;
};

struct Axis {
  std::string parameter;
  std::vector<double> values;  // ascending
};

// kind ∈ {power_law, exponential, karevski}; x is the first sweep axis.
struct FitConfig {
  std::string kind;
  std::string y;
  bool window = false;
  double noise_floor = 1e-20;
};

struct SweepConfig {
  std::vector<Axis> axes;  // one or two
  double beta_center = 2.0;  // used by delta_beta
  std::vector<FitConfig> fits;
};

struct GapScalingConfig {
  std::vector<int> n_values;
  std::vector<double> h_values;  // empty means the model field
};

struct DriveConfig {
  double amplitude = 0.0;  // h(t) = h + amplitude·sin(frequency·t)
  double frequency = 1.0;
  double dt = 0.01;
};

struct DynamicsConfig {
  std::array<int, 4> indices{0, 1, 2, 3};  // 0-based Majorana indices j, k, l, m
  std::vector<double> times;
  bool times_in_inverse_gap = false;
  std::optional<DriveConfig> drive;
};

struct OutputConfig {
  std::string directory = "results";
  Format format = Format::Csv;
};

struct ExperimentConfig {
  std::string description;  // free text, carried into metadata
  ModelConfig model;
  BathConfig bath;
  Task task = Task::Ness;
  SweepConfig sweep;
  GapScalingConfig gap_scaling;
  DynamicsConfig dynamics;
  OutputConfig output;
};

// Throws ConfigError with a field path for every validation failure.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

// Parameters accepted by sweep axes for the given bath type.
std::vector<std::string> sweep_parameters(BathType type);

// Returns a copy with one named parameter replaced.
ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& parameter, double value);

QuadraticModel build_model(const ExperimentConfig& config);
ChainParams chain_params(const ExperimentConfig& config);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::vector<double> column(const std::string& name) const;
};

// Scalar observables of one NESS; NaN where the quantity is undefined for the chain length.
std::vector<std::string> point_columns();
std::vector<double> evaluate_point(const ExperimentConfig& config);

// Tables for each task; sweeps record failing points as error rows.
Table ness_table(const ExperimentConfig& config);
Table sweep_table(const ExperimentConfig& config, int workers);
Table gap_scaling_table(const ExperimentConfig& config, int workers);
Table dynamics_table(const ExperimentConfig& config);
Table oracle_check_table(const ExperimentConfig& config);

// Fits and headline numbers for a finished task table.
nlohmann::json summarize(const ExperimentConfig& config, const Table& table);

std::string to_csv(const Table& table);
nlohmann::json table_to_json(const Table& table);

struct RunOptions {
  std::optional<std::string> output_dir;
  std::optional<Format> format;
  int workers = 1;
};

struct RunResult {
  std::string data_file;
  std::string summary_file;
  std::string metadata_file;
  nlohmann::json summary;
};

RunResult run(const ExperimentConfig& config, const RunOptions& options);

}  // namespace thirdq::experiment

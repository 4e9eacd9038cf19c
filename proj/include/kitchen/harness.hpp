#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kitchen/agents.hpp"
#include "kitchen/events.hpp"
#include "kitchen/metrics.hpp"

namespace kitchen {

struct ExperimentConfig {
  std::string layout = "default";  // "default" or a layout file path
  int team_size = 4;
  int comm_cost = 25;
  double soup_ratio = 0.5;
  int n_orders = 10;
  int meals_per_order = 10;
  double frac_initiative = 0.5;
  double frac_skill_assertion = 0.5;
  double frac_join_existing = 0.5;
  AgreeablenessSpec agreeableness = AgreeablenessSpec::fixed(0.8);
  int stall_timeout = 200;
  int max_ticks = 20000;
  std::uint64_t seed = 1;
  std::string specialties = "round_robin";  // or "random"

  bool operator==(const ExperimentConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field names in declaration order (also the CSV column order).
std::span<const std::string_view> config_fields();
bool is_config_field(std::string_view key);

/// Sets one field from its text form; throws std::invalid_argument.
void set_field(ExperimentConfig& cfg, std::string_view key, std::string_view value);
std::string field_value(const ExperimentConfig& cfg, std::string_view key);
void validate(const ExperimentConfig& cfg);

/// Flat `key = value` lines; '#' starts a comment. Unset keys keep defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string to_config_text(const ExperimentConfig& cfg);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

std::string layout_text(const ExperimentConfig& cfg);

struct RunResult {
  EventLog log;
  SummaryStats stats;
  Tick final_tick = 0;
  double wall_ms = 0.0;
};

RunResult run_single(const ExperimentConfig& cfg);

struct SweepAxis {
  std::string field;
  std::vector<std::string> values;
};

struct SweepSpec {
  ExperimentConfig base;
  std::vector<SweepAxis> axes;
  int n_seeds = 1;
};

/// `field = v1, v2, ...` per line; unknown fields are rejected with a line number.
std::vector<SweepAxis> parse_axes(std::string_view text);

struct RunRecord {
  ExperimentConfig config;
  SummaryStats stats;
  double wall_ms = 0.0;
};

/// Expands axes x seeds (base.seed + r). Rows come back sorted by axis values
/// (numeric when both sides parse as numbers) and then seed, whatever `jobs` is.
std::vector<ExperimentConfig> expand(const SweepSpec& spec);
std::vector<RunRecord> run_sweep(const SweepSpec& spec, int jobs = 1);

std::vector<std::string> summary_header();
std::vector<std::string> summary_cells(const RunRecord& rec);
std::string summary_csv(std::span<const RunRecord> records);
std::string timings_csv(std::span<const RunRecord> records);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int column(std::string_view name) const;  // -1 when absent
};

std::string csv_escape(std::string_view cell);
CsvTable parse_csv(std::string_view text);

enum class NetFormat { GraphML, Dot };

NetFormat parse_net_format(std::string_view tag);
std::string to_graphml(const CollaborationNetwork& net);
std::string to_dot(const CollaborationNetwork& net);
std::string export_network(const EventLog& log, NetFormat format);

struct Bar {
  std::string series;
  double mean = 0.0;
  std::optional<double> stderr_of_mean;
};

struct BarGroup {
  std::string label;
  std::vector<Bar> bars;
};

/// Grouped bar chart. Bar pixel height is value * (plot height / axis max),
/// so heights are exactly proportional to values.
std::string render_bar_svg(std::span<const BarGroup> groups, std::string_view title, std::string_view x_label,
                           std::string_view y_label);

/// Means and standard errors of `y` grouped by `x` (one group per x value) and
/// `group` (one bar per value). Empty cells are skipped.
std::vector<BarGroup> aggregate_bars(const CsvTable& table, std::string_view x, std::string_view group,
                                     std::string_view y);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace kitchen

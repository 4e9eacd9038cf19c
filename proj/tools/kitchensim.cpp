#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "kitchen/grid.hpp"
#include "kitchen/harness.hpp"

#ifndef KITCHENSIM_VERSION
#define KITCHENSIM_VERSION "0.0.0"
#endif

namespace {

using namespace kitchen;

int run_cmd(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& log_path,
            const std::string& summary_path) {
  auto cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
  if (seed) cfg.seed = *seed;
  auto result = run_single(cfg);
  if (!log_path.empty()) write_text_file(log_path, to_jsonl(result.log));
  RunRecord rec{cfg, result.stats, result.wall_ms};
  const auto csv = summary_csv(std::span<const RunRecord>(&rec, 1));
  if (!summary_path.empty()) write_text_file(summary_path, csv);
  else std::cout << csv;
  std::cerr << "served " << result.stats.meals_served << " meals by tick " << result.final_tick << "\n";
  return 0;
}

int sweep_cmd(const std::string& config_path, const std::string& axes_path, int seeds, const std::string& out_dir,
              int jobs) {
  SweepSpec spec;
  spec.base = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
  if (!axes_path.empty()) spec.axes = parse_axes(read_text_file(axes_path));
  spec.n_seeds = seeds;
  if (seeds < 1) throw ConfigError(0, "--seeds must be at least 1");
  auto records = run_sweep(spec, jobs);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  write_text_file(out_dir + "/summary.csv", summary_csv(records));
  write_text_file(out_dir + "/timings.csv", timings_csv(records));
  std::cerr << records.size() << " runs written to " << out_dir << "/summary.csv\n";
  return 0;
}

int export_cmd(const std::string& log_path, const std::string& format, const std::string& out_path) {
  const auto fmt = parse_net_format(format);
  EventLog log;
  try {
    log = parse_jsonl(read_text_file(log_path));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(log_path + ": " + e.what());
  }
  write_text_file(out_path, export_network(log, fmt));
  return 0;
}

int plot_cmd(const std::string& summary_path, const std::string& x, const std::string& group, const std::string& y,
             const std::string& out_path, const std::string& title) {
  CsvTable table;
  try {
    table = parse_csv(read_text_file(summary_path));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(summary_path + ": " + e.what());
  }
  const auto groups = aggregate_bars(table, x, group, y);
  write_text_file(out_path, render_bar_svg(groups, title.empty() ? y : title, x, y));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kitchensim: grid-kitchen teamwork simulator"};
  app.set_version_flag("--version", std::string("kitchensim ") + KITCHENSIM_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string log_path;
  std::string summary_path;
  auto* run = app.add_subcommand("run", "Run one simulation");
  run->add_option("--config", config_path, "Config file (key = value)");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--log", log_path, "Write the JSONL event log here");
  run->add_option("--summary", summary_path, "Write the summary CSV here (default stdout)");

  std::string axes_path;
  std::string out_dir;
  int seeds = 1;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep = app.add_subcommand("sweep", "Run a factorial sweep with replications");
  sweep->add_option("--config", config_path, "Base config file");
  sweep->add_option("--axes", axes_path, "Axes file (field = v1, v2, ...)");
  sweep->add_option("--seeds", seeds, "Replications per config point");
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--jobs", jobs, "Parallel replications");

  std::string in_log;
  std::string format;
  std::string out_path;
  auto* exp = app.add_subcommand("export-net", "Export the collaboration network of a log");
  exp->add_option("--log", in_log, "JSONL event log")->required();
  exp->add_option("--format", format, "graphml or dot")->required();
  exp->add_option("--out", out_path, "Output file")->required();

  std::string x;
  std::string group;
  std::string y;
  std::string title;
  auto* plot = app.add_subcommand("plot", "Grouped bar chart of a summary CSV");
  plot->add_option("--summary", summary_path, "Summary CSV")->required();
  plot->add_option("--x", x, "Column for the bar groups")->required();
  plot->add_option("--group", group, "Column for the series within a group");
  plot->add_option("--y", y, "Metric column")->required();
  plot->add_option("--out", out_path, "Output SVG")->required();
  plot->add_option("--title", title, "Chart title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_cmd(config_path, seed, log_path, summary_path);
    if (*sweep) return sweep_cmd(config_path, axes_path, seeds, out_dir, jobs);
    if (*exp) return export_cmd(in_log, format, out_path);
    if (*plot) return plot_cmd(summary_path, x, group, y, out_path, title);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

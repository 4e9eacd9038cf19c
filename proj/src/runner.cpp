#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <thread>
#include <tuple>

#include "kitchen/grid.hpp"
#include "kitchen/harness.hpp"
#include "kitchen/simulation.hpp"
#include "kitchen/tasks.hpp"

namespace kitchen {

RunResult run_single(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();

  SplitMix64 rng(cfg.seed);
  PersonaMix mix;
  mix.frac_initiative = cfg.frac_initiative;
  mix.frac_skill_assertion = cfg.frac_skill_assertion;
  mix.frac_join_existing = cfg.frac_join_existing;
  mix.agreeableness = cfg.agreeableness;
  mix.random_specialties = cfg.specialties == "random";
  auto agents = assign_personas(cfg.team_size, mix, rng);

  auto meals = flatten(build_order_book(cfg.soup_ratio, cfg.n_orders, cfg.meals_per_order));
  RecipeNeeds needs{false, false};
  for (const auto& m : meals) (m.kind == MealKind::Steak ? needs.steak : needs.soup) = true;
  auto world = parse_layout(layout_text(cfg), needs);
  world.rng = rng;

  SimConfig sc;
  sc.comm.cost = cfg.comm_cost;
  sc.stall_timeout = cfg.stall_timeout;
  Simulation sim(std::move(world), std::move(agents), std::move(meals), sc);
  while (sim.tick() < cfg.max_ticks && !sim.all_served()) sim.advance_tick();

  RunResult out;
  out.final_tick = sim.tick();
  out.log = sim.log();
  out.stats = summarize(out.log);
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<SweepAxis> parse_axes(std::string_view text) {
  std::vector<SweepAxis> axes;
  int line_no = 0;
  std::size_t pos = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'field = v1, v2, ...'");
    SweepAxis axis{std::string(trim(line.substr(0, eq))), {}};
    if (!is_config_field(axis.field)) throw ConfigError(line_no, "unknown axis field '" + axis.field + "'");
    for (const auto& a : axes)
      if (a.field == axis.field) throw ConfigError(line_no, "duplicate axis '" + axis.field + "'");
    // Commas inside parentheses belong to the value, e.g. uniform(0.2,0.9).
    auto rest = line.substr(eq + 1);
    int depth = 0;
    std::size_t from = 0;
    for (std::size_t i = 0; i <= rest.size(); ++i) {
      if (i < rest.size() && rest[i] == '(') ++depth;
      if (i < rest.size() && rest[i] == ')') --depth;
      if (i == rest.size() || (rest[i] == ',' && depth == 0)) {
        auto v = trim(rest.substr(from, i - from));
        if (v.empty()) throw ConfigError(line_no, "empty value for axis '" + axis.field + "'");
        ExperimentConfig probe;
        try {
          set_field(probe, axis.field, v);
          validate(probe);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(line_no, e.what());
        }
        axis.values.emplace_back(v);
        from = i + 1;
      }
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

namespace {

bool as_number(const std::string& s, double& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

// <0, 0, >0 three-way comparison, numeric when both values are numbers.
int compare_values(const std::string& a, const std::string& b) {
  double x = 0;
  double y = 0;
  if (as_number(a, x) && as_number(b, y)) return x < y ? -1 : (y < x ? 1 : 0);
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

bool row_less(const std::vector<SweepAxis>& axes, const ExperimentConfig& a, const ExperimentConfig& b) {
  for (const auto& axis : axes) {
    const int c = compare_values(field_value(a, axis.field), field_value(b, axis.field));
    if (c != 0) return c < 0;
  }
  return a.seed < b.seed;
}

}  // namespace

std::vector<ExperimentConfig> expand(const SweepSpec& spec) {
  if (spec.n_seeds < 1) throw std::invalid_argument("n_seeds must be at least 1");
  for (const auto& axis : spec.axes) {
    if (!is_config_field(axis.field)) throw std::invalid_argument("unknown axis field '" + axis.field + "'");
    if (axis.values.empty()) throw std::invalid_argument("axis '" + axis.field + "' has no values");
  }
  std::vector<ExperimentConfig> points{spec.base};
  for (const auto& axis : spec.axes) {
    std::vector<ExperimentConfig> next;
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        auto q = p;
        set_field(q, axis.field, v);
        validate(q);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  std::vector<ExperimentConfig> out;
  out.reserve(points.size() * static_cast<std::size_t>(spec.n_seeds));
  for (const auto& p : points) {
    for (int r = 0; r < spec.n_seeds; ++r) {
      auto q = p;
      q.seed = spec.base.seed + static_cast<std::uint64_t>(r);
      out.push_back(std::move(q));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [&](const ExperimentConfig& a, const ExperimentConfig& b) { return row_less(spec.axes, a, b); });
  return out;
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec, int jobs) {
  const auto configs = expand(spec);
  std::vector<RunRecord> records(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      auto r = run_single(configs[i]);
      records[i] = RunRecord{configs[i], std::move(r.stats), r.wall_ms};
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

std::vector<std::string> summary_header() {
  std::vector<std::string> h(config_fields().begin(), config_fields().end());
  for (const char* m : {"meals_served", "mean_completion_steak", "mean_completion_soup", "workload_gini",
                        "assortativity", "modularity", "partition", "n_components", "largest_component_fraction",
                        "aspl", "mean_team_size"})
    h.emplace_back(m);
  return h;
}

std::vector<std::string> summary_cells(const RunRecord& rec) {
  std::vector<std::string> cells;
  for (auto f : config_fields()) cells.push_back(field_value(rec.config, f));
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  const auto& s = rec.stats;
  cells.push_back(std::to_string(s.meals_served));
  cells.push_back(opt(s.mean_completion_steak));
  cells.push_back(opt(s.mean_completion_soup));
  cells.push_back(format_number(s.workload_gini));
  cells.push_back(opt(s.assortativity));
  cells.push_back(opt(s.modularity));
  std::string part;
  for (std::size_t i = 0; i < s.partition.size(); ++i) {
    if (i) part += ' ';
    part += std::to_string(s.partition[i]);
  }
  cells.push_back(part);
  cells.push_back(std::to_string(s.n_components));
  cells.push_back(format_number(s.largest_component_fraction));
  cells.push_back(format_number(s.aspl));
  cells.push_back(format_number(s.mean_team_size));
  return cells;
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\n") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(cells[i]);
  }
  return line + "\n";
}

}  // namespace

std::string summary_csv(std::span<const RunRecord> records) {
  std::string out = join_row(summary_header());
  for (const auto& r : records) out += join_row(summary_cells(r));
  return out;
}

std::string timings_csv(std::span<const RunRecord> records) {
  std::string out = "row,seed,wall_ms\n";
  for (std::size_t i = 0; i < records.size(); ++i)
    out += std::to_string(i) + "," + std::to_string(records[i].config.seed) + "," +
           format_number(records[i].wall_ms) + "\n";
  return out;
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    any = true;
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      lines.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quote");
  if (any) {
    row.push_back(std::move(cell));
    lines.push_back(std::move(row));
  }
  CsvTable t;
  if (lines.empty()) throw std::invalid_argument("csv: missing header row");
  t.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != t.header.size())
      throw std::invalid_argument("csv: row " + std::to_string(i + 1) + " has " + std::to_string(lines[i].size()) +
                                  " cells, expected " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(lines[i]));
  }
  return t;
}

}  // namespace kitchen

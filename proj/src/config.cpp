#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "kitchen/grid.hpp"
#include "kitchen/harness.hpp"

namespace kitchen {

namespace {

constexpr std::array<std::string_view, 14> kFields = {
    "layout",          "team_size",       "comm_cost",         "soup_ratio",
    "n_orders",        "meals_per_order", "frac_initiative",   "frac_skill_assertion",
    "frac_join_existing", "agreeableness", "stall_timeout",     "max_ticks",
    "seed",            "specialties",
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view s) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string(key) + ": expected an integer, got '" + std::string(s) + "'");
  return v;
}

double parse_real(std::string_view key, std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument(std::string(key) + ": expected a number, got '" + std::string(s) + "'");
  return v;
}

void check_fraction(std::string_view key, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(key) + " must be in [0, 1]");
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::span<const std::string_view> config_fields() { return kFields; }

bool is_config_field(std::string_view key) {
  return std::find(kFields.begin(), kFields.end(), key) != kFields.end();
}

void set_field(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (value.empty()) throw std::invalid_argument(std::string(key) + ": missing value");
  if (key == "layout") cfg.layout = std::string(value);
  else if (key == "team_size") cfg.team_size = parse_integer<int>(key, value);
  else if (key == "comm_cost") cfg.comm_cost = parse_integer<int>(key, value);
  else if (key == "soup_ratio") cfg.soup_ratio = parse_real(key, value);
  else if (key == "n_orders") cfg.n_orders = parse_integer<int>(key, value);
  else if (key == "meals_per_order") cfg.meals_per_order = parse_integer<int>(key, value);
  else if (key == "frac_initiative") cfg.frac_initiative = parse_real(key, value);
  else if (key == "frac_skill_assertion") cfg.frac_skill_assertion = parse_real(key, value);
  else if (key == "frac_join_existing") cfg.frac_join_existing = parse_real(key, value);
  else if (key == "agreeableness") cfg.agreeableness = AgreeablenessSpec::parse(value);
  else if (key == "stall_timeout") cfg.stall_timeout = parse_integer<int>(key, value);
  else if (key == "max_ticks") cfg.max_ticks = parse_integer<int>(key, value);
  else if (key == "seed") cfg.seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "specialties") cfg.specialties = std::string(value);
  else throw std::invalid_argument("unknown key '" + std::string(key) + "'");
}

std::string field_value(const ExperimentConfig& cfg, std::string_view key) {
  if (key == "layout") return cfg.layout;
  if (key == "team_size") return std::to_string(cfg.team_size);
  if (key == "comm_cost") return std::to_string(cfg.comm_cost);
  if (key == "soup_ratio") return format_number(cfg.soup_ratio);
  if (key == "n_orders") return std::to_string(cfg.n_orders);
  if (key == "meals_per_order") return std::to_string(cfg.meals_per_order);
  if (key == "frac_initiative") return format_number(cfg.frac_initiative);
  if (key == "frac_skill_assertion") return format_number(cfg.frac_skill_assertion);
  if (key == "frac_join_existing") return format_number(cfg.frac_join_existing);
  if (key == "agreeableness") return cfg.agreeableness.to_string();
  if (key == "stall_timeout") return std::to_string(cfg.stall_timeout);
  if (key == "max_ticks") return std::to_string(cfg.max_ticks);
  if (key == "seed") return std::to_string(cfg.seed);
  if (key == "specialties") return cfg.specialties;
  throw std::invalid_argument("unknown key '" + std::string(key) + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.team_size < 1) throw std::invalid_argument("team_size must be at least 1");
  if (cfg.comm_cost < 0) throw std::invalid_argument("comm_cost must be non-negative");
  if (cfg.n_orders < 0) throw std::invalid_argument("n_orders must be non-negative");
  if (cfg.meals_per_order < 0) throw std::invalid_argument("meals_per_order must be non-negative");
  if (cfg.stall_timeout < 1) throw std::invalid_argument("stall_timeout must be at least 1");
  if (cfg.max_ticks < 1) throw std::invalid_argument("max_ticks must be at least 1");
  check_fraction("soup_ratio", cfg.soup_ratio);
  check_fraction("frac_initiative", cfg.frac_initiative);
  check_fraction("frac_skill_assertion", cfg.frac_skill_assertion);
  check_fraction("frac_join_existing", cfg.frac_join_existing);
  if (cfg.specialties != "round_robin" && cfg.specialties != "random")
    throw std::invalid_argument("specialties must be round_robin or random");
  if (cfg.layout.empty()) throw std::invalid_argument("layout must be 'default' or a file path");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  int line_no = 0;
  int last_line = 0;
  std::size_t pos = 0;
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
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    try {
      set_field(cfg, key, line.substr(eq + 1));
      validate(cfg);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, e.what());
    }
    last_line = line_no;
  }
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(last_line, e.what());
  }
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string out;
  for (auto f : kFields) out += std::string(f) + " = " + field_value(cfg, f) + "\n";
  return out;
}

std::string layout_text(const ExperimentConfig& cfg) {
  if (cfg.layout == "default") return std::string(default_layout());
  return read_text_file(cfg.layout);
}

}  // namespace kitchen

#include "vvpinn/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vvpinn {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view text, std::size_t line) {
  std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + s + "'");
  }
  if (used != s.size()) fail(line, "trailing characters in '" + s + "'");
  return value;
}

std::uint64_t parse_unsigned(std::string_view text, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(line, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (value.empty()) fail(line_no, "missing value for '" + key + "'");

    TrainConfig& t = cfg.train;
    if (key == "epsilon") {
      t.epsilon = parse_real(value, line_no);
    } else if (key == "learning_rate") {
      t.learning_rate = parse_real(value, line_no);
    } else if (key == "epochs") {
      t.epochs = parse_unsigned(value, line_no);
    } else if (key == "w_res") {
      t.w_res = parse_real(value, line_no);
    } else if (key == "w_ic") {
      t.w_ic = parse_real(value, line_no);
    } else if (key == "w_bc") {
      t.w_bc = parse_real(value, line_no);
    } else if (key == "n_interior") {
      t.n_interior = parse_unsigned(value, line_no);
    } else if (key == "n_initial") {
      t.n_initial = parse_unsigned(value, line_no);
    } else if (key == "n_boundary") {
      t.n_boundary = parse_unsigned(value, line_no);
    } else if (key == "seed") {
      t.seed = parse_unsigned(value, line_no);
    } else if (key == "T") {
      t.T = parse_real(value, line_no);
    } else if (key == "ref_cells") {
      cfg.ref_cells = parse_unsigned(value, line_no);
    } else {
      fail(line_no, "unknown key '" + key + "'");
    }
  }
  cfg.train.validate();
  if (cfg.ref_cells == 0) throw std::invalid_argument("config: ref_cells must be positive");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file: " + path.string());
  return parse_config(is);
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  const TrainConfig& t = cfg.train;
  char buf[64];
  auto real = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << key << " = " << buf << "\n";
  };
  real("epsilon", t.epsilon);
  real("learning_rate", t.learning_rate);
  os << "epochs = " << t.epochs << "\n";
  real("w_res", t.w_res);
  real("w_ic", t.w_ic);
  real("w_bc", t.w_bc);
  os << "n_interior = " << t.n_interior << "\n";
  os << "n_initial = " << t.n_initial << "\n";
  os << "n_boundary = " << t.n_boundary << "\n";
  os << "seed = " << t.seed << "\n";
  real("T", t.T);
  os << "ref_cells = " << cfg.ref_cells << "\n";
}

}  // namespace vvpinn

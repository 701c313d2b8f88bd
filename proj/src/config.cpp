#include "mot3d/config.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include "mot3d/errors.hpp"

namespace mot3d {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& text, const std::string& source,
               std::size_t line, const std::string& key) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(source, line, "invalid value '" + text + "' for " + key);
  }
  return value;
}

}  // namespace

TrackerConfig parse_tracker_config(std::istream& in, const std::string& source) {
  TrackerConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ParseError(source, line_no, "duplicate key '" + key + "'");
    }
    if (key == "iou_gate") {
      cfg.iou_gate = parse_number<double>(value, source, line_no, key);
    } else if (key == "max_age") {
      cfg.max_age = parse_number<int>(value, source, line_no, key);
    } else if (key == "min_hits") {
      cfg.min_hits = parse_number<int>(value, source, line_no, key);
    } else if (key == "p0_scale") {
      cfg.noise.initial_scale = parse_number<double>(value, source, line_no, key);
    } else if (key == "q_scale") {
      cfg.noise.process_scale = parse_number<double>(value, source, line_no, key);
    } else if (key == "r_scale") {
      cfg.noise.measurement_scale =
          parse_number<double>(value, source, line_no, key);
    } else {
      throw ParseError(source, line_no, "unknown key '" + key + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, line_no, e.what());
  }
  return cfg;
}

TrackerConfig load_tracker_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  return parse_tracker_config(in, path.string());
}

}  // namespace mot3d

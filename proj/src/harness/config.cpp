#include "ptone/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "ptone/errors.hpp"

namespace ptone::harness {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw InvalidInput("not a number: '" + std::string(s) + "'");
  }
  return v;
}

template <class T>
std::vector<T> list_from_json(const nlohmann::json& v, auto parse) {
  if (v.is_string()) return parse(v.get<std::string>());
  if (v.is_number()) return {v.get<T>()};
  if (v.is_array()) return v.get<std::vector<T>>();
  throw InvalidInput("expected a list, number or string");
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) throw InvalidInput("empty list item in '" + std::string(text) + "'");
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(to_double(parts[0]));
    } else if (parts.size() == 3) {
      const double a = to_double(parts[0]);
      const double b = to_double(parts[1]);
      const double step = to_double(parts[2]);
      if (!(step > 0.0) || b < a) throw InvalidInput("bad range '" + std::string(item) + "'");
      const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
      if (count > 1000000) throw InvalidInput("range too long");
      for (std::size_t k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * step);
    } else {
      throw InvalidInput("ranges are start:stop:step, got '" + std::string(item) + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (double v : parse_number_list(text)) {
    if (v != std::round(v) || std::abs(v) > 1e6) throw InvalidInput("expected integers in '" + std::string(text) + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto w : split(text, ',')) {
    if (w.empty()) throw InvalidInput("empty list item in '" + std::string(text) + "'");
    out.emplace_back(w);
  }
  return out;
}

std::uint64_t parse_seed(std::string_view text) {
  text = trim(text);
  int base = 10;
  if (text.starts_with("0x") || text.starts_with("0X")) {
    text.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v, base);
  if (text.empty() || ec != std::errc{} || ptr != end) throw InvalidInput("bad seed '" + std::string(text) + "'");
  return v;
}

void ExperimentConfig::validate() const {
  if (p.empty() || m.empty() || c.empty() || r.empty()) throw InvalidInput("parameter lists must be non-empty");
  if (surfaces.empty() || profiles.empty()) throw InvalidInput("surface and profile lists must be non-empty");
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  if (n < 11) throw InvalidInput("grid size must be at least 11");
  if (scan < 16) throw InvalidInput("scan size must be at least 16");
  if (threads < 0) throw InvalidInput("thread count must be nonnegative");
  if (inner < 0.0) throw InvalidInput("inner radius must be nonnegative");
  for (double v : r) {
    if (!(v > inner)) throw InvalidInput("radii must exceed the inner radius");
  }
}

void apply_json(ExperimentConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "p") cfg.p = list_from_json<double>(v, parse_number_list);
      else if (key == "m") cfg.m = list_from_json<int>(v, parse_int_list);
      else if (key == "c") cfg.c = list_from_json<double>(v, parse_number_list);
      else if (key == "r") cfg.r = list_from_json<double>(v, parse_number_list);
      else if (key == "inner") cfg.inner = v.get<double>();
      else if (key == "n") cfg.n = v.get<std::size_t>();
      else if (key == "tol") cfg.tol = v.get<double>();
      else if (key == "scan") cfg.scan = v.get<std::size_t>();
      else if (key == "seed") cfg.seed = v.is_string() ? parse_seed(v.get<std::string>()) : v.get<std::uint64_t>();
      else if (key == "threads") cfg.threads = v.get<int>();
      else if (key == "surfaces") cfg.surfaces = v.is_string() ? parse_word_list(v.get<std::string>()) : v.get<std::vector<std::string>>();
      else if (key == "profiles") cfg.profiles = v.is_string() ? parse_word_list(v.get<std::string>()) : v.get<std::vector<std::string>>();
      else if (key == "filter") cfg.filter = v.get<std::string>();
      else if (key == "out") cfg.out = v.get<std::string>();
      else if (key == "json") cfg.json = v.get<std::string>();
      else throw InvalidInput("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("config " + path.string() + ": " + e.what());
  }
  ExperimentConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return {{"p", cfg.p},
          {"m", cfg.m},
          {"c", cfg.c},
          {"r", cfg.r},
          {"inner", cfg.inner},
          {"n", cfg.n},
          {"tol", cfg.tol},
          {"scan", cfg.scan},
          {"seed", cfg.seed},
          {"threads", cfg.threads},
          {"surfaces", cfg.surfaces},
          {"profiles", cfg.profiles},
          {"filter", cfg.filter}};
}

}  // namespace ptone::harness

#include "mixwalk/json_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mixwalk {

using nlohmann::json;

DegreeDistribution load_degree_law(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open degree law file: " + path);
  json j;
  in >> j;
  if (!j.is_object() || !j.contains("support") || !j.contains("probs"))
    throw std::runtime_error("degree law file must be an object with 'support' and 'probs': " +
                             path);
  return make_degree_law(j.at("support").get<std::vector<int>>(),
                         j.at("probs").get<std::vector<double>>());
}

std::string degree_law_json(const DegreeDistribution& dd) {
  json j;
  j["support"] = dd.support;
  j["probs"] = dd.probs;
  return j.dump();
}

void save_degree_law(const DegreeDistribution& dd, const std::string& path, bool force) {
  write_text_file(path, degree_law_json(dd) + "\n", force);
}

void write_text_file(const std::string& path, const std::string& contents, bool force) {
  if (!force && std::filesystem::exists(path))
    throw std::runtime_error("refusing to overwrite existing file (use force): " + path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string fmt_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace mixwalk

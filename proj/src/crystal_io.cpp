#include "spdc/crystal_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace spdc {

namespace {

SellmeierSet parse_set(const nlohmann::json& j) {
  SellmeierSet s;
  s.a = j.at("a").get<double>();
  s.b = j.at("b").get<double>();
  s.c = j.at("c").get<double>();
  s.d = j.at("d").get<double>();
  s.lambda_min_um = j.at("lambda_min_um").get<double>();
  s.lambda_max_um = j.at("lambda_max_um").get<double>();
  return s;
}

}  // namespace

CrystalSpec parse_crystal_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  CrystalSpec spec;
  spec.name = j.value("name", std::string("unnamed"));
  spec.length_mm = j.at("length_mm").get<double>();
  spec.cut_angle_rad = deg2rad(j.at("cut_angle_deg").get<double>());
  spec.ordinary = parse_set(j.at("ordinary"));
  spec.extraordinary = parse_set(j.at("extraordinary"));
  spec.validate();
  return spec;
}

CrystalSpec load_crystal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open crystal file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_crystal_json(text);
}

}  // namespace spdc

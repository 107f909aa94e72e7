#include "gridfuzz/controller_io.hpp"

#include <fstream>
#include <sstream>

#include "gridfuzz/errors.hpp"
#include <nlohmann/json.hpp>

namespace gridfuzz {

using json = nlohmann::json;

namespace {

json range_to_json(const Range& r) { return json::array({r.lo, r.hi}); }

Range range_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("range must be a [lo, hi] pair");
  return Range{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void save_controller(const ControllerBundle& bundle, const std::string& path) {
  json j;
  j["format"] = "gridfuzz-controller-v1";
  j["scheme"] = scheme_name(bundle.scheme);
  j["chromosome"] = chromosome_to_line(bundle.chromosome);
  j["ranges"] = {{"balance", range_to_json(bundle.ranges.balance)},
                 {"c_buy", range_to_json(bundle.ranges.c_buy)},
                 {"c_sell", range_to_json(bundle.ranges.c_sell)}};
  j["alpha"] = json::parse(fis_to_json(bundle.controller.alpha));
  j["beta"] = json::parse(fis_to_json(bundle.controller.beta));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write controller file: " + path);
  out << j.dump(2) << '\n';
}

ControllerBundle load_controller(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open controller file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw CodecError(std::string("controller file is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != "gridfuzz-controller-v1")
    throw CodecError("unrecognized controller file format");

  ControllerBundle b;
  b.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  b.chromosome = chromosome_from_line(j.at("chromosome").get<std::string>());
  validate_chromosome(b.scheme, b.chromosome);
  b.ranges.balance = range_from_json(j.at("ranges").at("balance"));
  b.ranges.c_buy = range_from_json(j.at("ranges").at("c_buy"));
  b.ranges.c_sell = range_from_json(j.at("ranges").at("c_sell"));
  b.controller.alpha = fis_from_json(j.at("alpha").dump());
  b.controller.beta = fis_from_json(j.at("beta").dump());
  return b;
}

}  // namespace gridfuzz

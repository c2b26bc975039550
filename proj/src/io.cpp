#include "netsmith/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "netsmith/errors.hpp"

namespace netsmith::io {

using lti::Polynomial;
using lti::RationalTF;

json tf_to_json(const RationalTF& tf) {
  return json{{"num", tf.num().coeffs()}, {"den", tf.den().coeffs()}, {"h", tf.h()}};
}

RationalTF tf_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ValidationError("transfer function must be a JSON object");
    const auto num = j.at("num").get<std::vector<double>>();
    const auto den = j.at("den").get<std::vector<double>>();
    const double h = j.contains("h") ? j.at("h").get<double>() : 1.0;
    if (num.empty() || den.empty()) throw ValidationError("num and den must be non-empty coefficient arrays");
    return RationalTF(Polynomial(num), Polynomial(den), h);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed transfer function: ") + e.what());
  }
}

json design_to_json(const PredictorDesign& d) {
  json j;
  j["format"] = "netsmith-design";
  j["version"] = 1;
  j["plant"] = tf_to_json(d.plant_nominal);
  j["controller"] = tf_to_json(d.controller);
  j["prefilter"] = tf_to_json(d.prefilter);
  j["filter"] = tf_to_json(d.filter);
  j["predictor"] = tf_to_json(d.predictor_block);
  j["d_hat"] = d.d_hat;
  j["tau_net_min"] = d.tau_n_min;
  j["tau_net_max"] = d.tau_n_max;
  j["tau_hat"] = d.tau_hat();
  j["tau_bar"] = d.tau_bar();
  j["lambda"] = d.lambda;
  j["slow_pole_threshold"] = d.slow_pole_threshold ? json(*d.slow_pole_threshold) : json(nullptr);
  return j;
}

PredictorDesign design_from_json(const json& j) {
  try {
    if (j.value("format", std::string()) != "netsmith-design") throw ValidationError("not a design document");
    PredictorDesign d;
    d.plant_nominal = tf_from_json(j.at("plant"));
    d.controller = tf_from_json(j.at("controller"));
    d.prefilter = tf_from_json(j.at("prefilter"));
    d.filter = tf_from_json(j.at("filter"));
    d.predictor_block = tf_from_json(j.at("predictor"));
    d.d_hat = j.at("d_hat").get<int>();
    d.tau_n_min = j.at("tau_net_min").get<int>();
    d.tau_n_max = j.at("tau_net_max").get<int>();
    d.lambda = j.at("lambda").get<double>();
    if (j.contains("slow_pole_threshold") && !j.at("slow_pole_threshold").is_null())
      d.slow_pole_threshold = j.at("slow_pole_threshold").get<double>();
    validate_delay_bounds(d.d_hat, d.tau_n_min, d.tau_n_max);
    if (j.contains("tau_hat") && j.at("tau_hat").get<int>() != d.tau_hat())
      throw ValidationError("tau_hat is inconsistent with d_hat + tau_net_min");
    if (j.contains("tau_bar") && j.at("tau_bar").get<int>() != d.tau_bar())
      throw ValidationError("tau_bar is inconsistent with tau_net_max - tau_net_min");
    return d;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed design document: ") + e.what());
  }
}

json verdict_to_json(const StabilityVerdict& v) {
  json g = json::object();
  for (const auto& [k, val] : v.gains) g[k] = val;
  return json{{"criterion", to_string(v.criterion)},
              {"protocol", to_string(v.protocol)},
              {"tau_bar", v.tau_bar},
              {"margin", v.margin},
              {"verdict", v.certified ? "certified" : "not-certified"},
              {"violated", v.violated.empty() ? json(nullptr) : json(v.violated)},
              {"gains", g}};
}

json residuals_to_json(const DesignResiduals& r) {
  json nodes = json::array();
  for (const auto& e : r.interpolation)
    nodes.push_back({{"node", {e.node.real(), e.node.imag()}}, {"derivative", e.derivative}, {"residual", e.residual}});
  return json{{"interpolation", nodes}, {"dc_gain_error", r.dc_gain_error}, {"h_pole_radii", r.h_pole_radii}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ValidationError("write failed for " + path);
}

std::string canonical(const json& j) { return j.dump(); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace netsmith::io

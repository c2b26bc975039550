#include <ostream>

#include "json.hpp"

#include "netsmith/errors.hpp"
#include "netsmith/format.hpp"
#include "netsmith/lmi.hpp"

namespace netsmith {

using Eigen::MatrixXd;
using nlohmann::json;

namespace {

json matrix_to_json(const MatrixXd& m) {
  if (m.rows() == m.cols() && m.rows() > 0 && m.isIdentity(0.0)) return json{{"identity", m.rows()}};
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

MatrixXd matrix_from_json(const json& j) {
  if (j.contains("identity")) {
    const int n = j.at("identity").get<int>();
    if (n < 0) throw ValidationError("identity dimension must be non-negative");
    return MatrixXd::Identity(n, n);
  }
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
    throw ValidationError("matrix data length does not match rows x cols");
  MatrixXd m(rows, cols);
  size_t k = 0;
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = data[k++].get<double>();
  return m;
}

MatrixXd candidate_from_json(const json& j) {
  if (j.is_object()) return matrix_from_json(j);
  if (!j.is_array()) throw ValidationError("candidate must be a matrix object or an array of rows");
  const size_t n = j.size();
  MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw ValidationError("candidate rows must form a square matrix");
    for (size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
  }
  return m;
}

}  // namespace

std::string export_lmi_json(const LmiProblem& p) {
  json doc;
  doc["format"] = "netsmith-lmi";
  doc["version"] = 1;
  doc["variant"] = to_string(p.variant);
  doc["gamma"] = p.gamma;
  doc["n_xi"] = p.n_xi;
  doc["d_hat"] = p.d_hat;
  doc["tau_net_min"] = p.tau_n_min;
  doc["tau_net_max"] = p.tau_n_max;
  doc["size"] = p.size;
  doc["relation"] = "negative_definite";
  doc["term_rule"] = "scale * left * X * right at (row, col); off-diagonal terms add their transpose at (col, row)";
  json unknowns = json::array();
  for (const auto& u : p.unknowns) unknowns.push_back({{"name", u.name}, {"dim", u.dim}, {"symmetric", true}, {"positive_definite", true}});
  doc["unknowns"] = unknowns;
  json terms = json::array();
  for (const auto& t : p.terms) {
    terms.push_back({{"row", t.row},
                     {"col", t.col},
                     {"unknown", p.unknowns.at(static_cast<size_t>(t.unknown)).name},
                     {"scale", t.scale},
                     {"left", matrix_to_json(t.left)},
                     {"right", matrix_to_json(t.right)}});
  }
  doc["terms"] = terms;
  json consts = json::object();
  for (const auto& [name, m] : p.constants) consts[name] = matrix_to_json(m);
  doc["constants"] = consts;
  doc["unknown_count"] = {{"generic", p.generic_unknown_count()}, {"closed_form", p.closed_form_unknown_count()}};
  return doc.dump(1) + "\n";
}

LmiProblem import_lmi_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("LMI document is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "netsmith-lmi") throw ValidationError("not an LMI document");
    LmiProblem p;
    p.variant = parse_lmi_variant(doc.at("variant").get<std::string>());
    p.gamma = doc.at("gamma").get<double>();
    p.n_xi = doc.at("n_xi").get<int>();
    p.d_hat = doc.at("d_hat").get<int>();
    p.tau_n_min = doc.at("tau_net_min").get<int>();
    p.tau_n_max = doc.at("tau_net_max").get<int>();
    p.size = doc.at("size").get<int>();
    for (const auto& u : doc.at("unknowns")) p.unknowns.push_back({u.at("name").get<std::string>(), u.at("dim").get<int>()});
    for (const auto& t : doc.at("terms")) {
      const std::string name = t.at("unknown").get<std::string>();
      int idx = -1;
      for (size_t i = 0; i < p.unknowns.size(); ++i)
        if (p.unknowns[i].name == name) idx = static_cast<int>(i);
      if (idx < 0) throw ValidationError("term refers to unknown " + name + " that is not declared");
      p.terms.push_back({t.at("row").get<int>(), t.at("col").get<int>(), idx, t.at("scale").get<double>(),
                         matrix_from_json(t.at("left")), matrix_from_json(t.at("right"))});
    }
    for (const auto& [name, m] : doc.at("constants").items()) p.constants[name] = matrix_from_json(m);
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed LMI document: ") + e.what());
  }
}

std::map<std::string, MatrixXd> import_candidates_json(const std::string& text) {
  std::map<std::string, MatrixXd> out;
  try {
    const json doc = json::parse(text);
    const json& c = doc.contains("candidates") ? doc.at("candidates") : doc;
    if (!c.is_object()) throw ValidationError("candidates document must be an object of named matrices");
    for (const auto& [name, m] : c.items()) out[name] = candidate_from_json(m);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed candidates document: ") + e.what());
  }
  return out;
}

std::string export_report_json(const FeasibilityReport& r) {
  json doc;
  doc["feasible"] = r.feasible;
  doc["lambda_max"] = r.lambda_max;
  doc["lambda_min"] = r.lambda_min;
  doc["reasons"] = r.reasons;
  return doc.dump(1) + "\n";
}

void write_matrix_csv(std::ostream& os, const MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << fmt17(m(i, j));
    }
    os << '\n';
  }
}

}  // namespace netsmith

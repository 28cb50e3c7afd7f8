#include "tcub/model_io.hpp"

#include <fstream>

#include "tcub/errors.hpp"

namespace tcub {

namespace {

using nlohmann::json;

Eigen::VectorXd read_vector(const json& doc, const char* key, int d) {
  const json& v = doc.at(key);
  if (v.is_number()) return Eigen::VectorXd::Constant(d, v.get<double>());
  if (!v.is_array()) throw ConfigError(std::string("model: '") + key + "' must be a number or array");
  if (static_cast<int>(v.size()) != d)
    throw ConfigError(std::string("model: '") + key + "' has " + std::to_string(v.size()) +
                      " entries, expected " + std::to_string(d));
  Eigen::VectorXd out(d);
  for (int i = 0; i < d; ++i) out[i] = v[i].get<double>();
  return out;
}

Eigen::MatrixXd read_correlation(const json& doc, int d) {
  if (!doc.contains("correlation")) return Eigen::MatrixXd::Identity(d, d);
  const json& c = doc.at("correlation");
  if (c.is_number()) return equicorrelation(d, c.get<double>());
  if (c.contains("rho")) return equicorrelation(d, c.at("rho").get<double>());
  if (!c.contains("matrix")) throw ConfigError("model: correlation needs 'rho' or 'matrix'");
  const json& m = c.at("matrix");
  if (!m.is_array() || static_cast<int>(m.size()) != d)
    throw ConfigError("model: correlation matrix must have d rows");
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i) {
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != d)
      throw ConfigError("model: correlation matrix row " + std::to_string(i) + " must have d entries");
    for (int j = 0; j < d; ++j) g(i, j) = m[i][j].get<double>();
  }
  correlation_cholesky(g);
  return g;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::pair<ModelSpec, PayoffSpec> model_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw ConfigError("model: document must be a JSON object");
    ModelSpec m;
    m.d = doc.at("d").get<int>();
    if (m.d < 1) throw ConfigError("model: d must be >= 1");
    m.spots = read_vector(doc, "spots", m.d);
    m.vols = read_vector(doc, "vols", m.d);
    m.rate = doc.value("rate", 0.0);
    m.maturity = doc.at("maturity").get<double>();
    m.correlation = read_correlation(doc, m.d);
    m.weights = doc.contains("weights") ? read_vector(doc, "weights", m.d)
                                        : Eigen::VectorXd::Constant(m.d, 1.0 / m.d);
    m.strike = doc.at("strike").get<double>();
    if (doc.contains("barriers") && !doc.at("barriers").is_null())
      m.barriers = read_vector(doc, "barriers", m.d);
    PayoffSpec p;
    p.kind = payoff_kind_from_string(doc.value("payoff", std::string("basket_call")));
    if (p.kind == PayoffKind::DigitalBasket && !m.barriers)
      throw MissingBarriers("model: digital payoff requires 'barriers'");
    m.validate();
    return {std::move(m), p};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

json model_to_json(const ModelSpec& m, const PayoffSpec& p) {
  json rows = json::array();
  for (int i = 0; i < m.d; ++i) rows.push_back(to_std(m.correlation.row(i).transpose()));
  json doc = {{"d", m.d},
              {"spots", to_std(m.spots)},
              {"vols", to_std(m.vols)},
              {"rate", m.rate},
              {"maturity", m.maturity},
              {"correlation", {{"matrix", rows}}},
              {"weights", to_std(m.weights)},
              {"strike", m.strike},
              {"payoff", to_string(p.kind)}};
  if (m.barriers) doc["barriers"] = to_std(*m.barriers);
  return doc;
}

std::pair<ModelSpec, PayoffSpec> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
  try {
    return model_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

}  // namespace tcub

#include "specshift/json_io.hpp"

#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "specshift/error.hpp"

namespace specshift {

namespace {

std::vector<std::vector<double>> read_rows(const Json& j, int dim, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw Error(ErrorKind::BadParams, std::string("\"") + key + "\" must have dim rows");
  }
  std::vector<std::vector<double>> rows;
  for (const Json& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw Error(ErrorKind::BadParams, std::string("\"") + key + "\" rows must have dim entries");
    }
    std::vector<double> r;
    for (const Json& v : row) {
      if (!v.is_number()) {
        // JSON has no NaN literal; the strings "nan", "inf" and "-inf" stand for non-finite entries.
        if (v.is_string()) {
          std::string text = v.get<std::string>();
          for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
          if (text == "nan" || text == "inf" || text == "-inf" || text == "+inf" || text == "infinity" ||
              text == "-infinity") {
            throw Error(ErrorKind::NonFinite, "matrix entry is not finite");
          }
        }
        throw Error(ErrorKind::BadParams, "matrix entries must be numbers");
      }
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw Error(ErrorKind::NonFinite, "matrix entry is not finite");
      r.push_back(d);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

Json rows_json(const ComplexMatrix& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(imag ? m(j, k).imag() : m(j, k).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

Json witness_matrices(Json obj, const std::optional<RatioWitness>& w) {
  obj["A"] = w ? to_json(w->a) : Json(nullptr);
  obj["B"] = w ? to_json(w->b) : Json(nullptr);
  return obj;
}

}  // namespace

Json to_json(const HermitianOperator& a) {
  return Json{{"dim", a.dim()}, {"re", rows_json(a.matrix(), false)}, {"im", rows_json(a.matrix(), true)}};
}

HermitianOperator hermitian_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
    throw Error(ErrorKind::BadParams, "matrix needs \"dim\" and \"re\"");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1) {
    throw Error(ErrorKind::BadParams, "\"dim\" must be a positive integer");
  }
  const int dim = j["dim"].get<int>();
  const auto re = read_rows(j["re"], dim, "re");
  std::vector<std::vector<double>> im(dim, std::vector<double>(dim, 0.0));
  if (j.contains("im") && !j["im"].is_null()) im = read_rows(j["im"], dim, "im");

  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = {re[r][c], im[r][c]};
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (asym > 1e-12 * scale) {
    throw Error(ErrorKind::DomainError,
                "matrix is not Hermitian (max |M - M*| = " + std::to_string(asym) + ")");
  }
  return HermitianOperator(m);
}

Json to_json(const SeminormLowerBound& bound, const std::string& function_id) {
  Json obj{{"function", function_id},
           {"norm_kind", to_string(bound.norm_kind)},
           {"value", bound.value},
           {"dim", bound.dim},
           {"seed", bound.seed},
           {"budget", bound.budget},
           {"budget_used", bound.budget_used},
           {"degenerate", bound.degenerate}};
  return witness_matrices(std::move(obj), bound.witness);
}

Json to_json(const DivergentFamily& family) {
  Json blocks = Json::array();
  for (const FamilyBlock& blk : family.blocks) {
    Json obj{{"n", blk.n},
             {"delta", blk.delta},
             {"target_ratio", blk.target_ratio},
             {"achieved_ratio", blk.achieved_ratio},
             {"multiplicity", to_decimal(blk.multiplicity)},
             {"increment_s1", blk.increment_s1},
             {"grid_points", blk.grid_points},
             {"status", "ok"}};
    blocks.push_back(witness_matrices(std::move(obj), blk.witness));
  }
  if (family.failure) {
    const FailedBlock& f = *family.failure;
    Json obj{{"n", f.n},
             {"delta", f.delta},
             {"target_ratio", f.target_ratio},
             {"achieved_ratio", f.best_ratio},
             {"multiplicity", "0"},
             {"increment_s1", 0.0},
             {"grid_points", f.grid_points},
             {"status", "failed"}};
    blocks.push_back(witness_matrices(std::move(obj), f.best_witness));
  }
  return blocks;
}

Json to_json(const SequenceWitness& w) {
  Json n = Json::array();
  for (const Multiplicity& v : w.n) n.push_back(to_decimal(v));
  return Json{{"function", w.function_id}, {"K", w.size()}, {"decay_constant", w.decay_constant},
              {"t", w.t}, {"s", w.s}, {"n", n}};
}

SequenceWitness sequence_witness_from_json(const Json& j) {
  try {
    SequenceWitness w;
    w.function_id = j.at("function").get<std::string>();
    w.decay_constant = j.value("decay_constant", 1.0);
    w.t = j.at("t").get<std::vector<double>>();
    w.s = j.at("s").get<std::vector<double>>();
    for (const Json& v : j.at("n")) w.n.push_back(multiplicity_from_decimal(v.get<std::string>()));
    if (w.t.size() != w.s.size() || (!w.n.empty() && w.n.size() != w.t.size()) ||
        j.at("K").get<std::size_t>() != w.t.size()) {
      throw Error(ErrorKind::BadParams, "sequence witness arrays disagree in length");
    }
    return w;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::BadParams, std::string("malformed sequence witness: ") + e.what());
  }
}

ScalarFunction function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
    throw Error(ErrorKind::BadParams, "function reference needs a string \"id\"");
  }
  std::vector<double> params;
  if (j.contains("params")) {
    if (!j["params"].is_array()) throw Error(ErrorKind::BadParams, "\"params\" must be an array");
    for (const Json& v : j["params"]) {
      if (!v.is_number()) throw Error(ErrorKind::BadParams, "\"params\" must be numbers");
      params.push_back(v.get<double>());
    }
  }
  return get_function(j["id"].get<std::string>(), params);
}

Json function_reference(const ScalarFunction& f) {
  return Json{{"id", f.id()}, {"params", std::vector<double>(f.params().begin(), f.params().end())}};
}

}  // namespace specshift

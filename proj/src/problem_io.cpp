#include "pevpcond/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pevpcond/errors.hpp"

namespace pevpcond {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& message) { throw Error(ErrorCode::parse_error, message); }

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_fail("complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

ComplexMatrix parse_matrix(const json& j, Eigen::Index n) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) parse_fail("matrix must have " + std::to_string(n) + " rows");
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      parse_fail("matrix rows must have " + std::to_string(n) + " entries");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = parse_complex(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Mask parse_mask(const json& j, Eigen::Index n) {
  if (j.is_string()) return mask_from_name(j.get<std::string>(), n);
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) parse_fail("mask must be a name or an n x n 0/1 array");
  Mask m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) parse_fail("mask rows must have n entries");
    for (Eigen::Index k = 0; k < n; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (v.is_boolean()) m(i, k) = v.get<bool>();
      else if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1)) m(i, k) = v.get<int>() == 1;
      else parse_fail("mask entries must be 0/1 or booleans");
    }
  }
  return m;
}

int require_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) parse_fail(std::string("missing integer field '") + key + "'");
  return doc[key].get<int>();
}

ProblemDescriptor parse_descriptor(const json& doc) {
  if (!doc.contains("family") || !doc["family"].is_string()) parse_fail("missing string field 'family'");
  const std::string name = doc["family"].get<std::string>();
  switch (family_from_string(name)) {
    case Family::dense_poly: return ProblemDescriptor::dense_poly(require_int(doc, "N"));
    case Family::lacunary_poly: {
      if (!doc.contains("indices") || !doc["indices"].is_array()) parse_fail("lacunary problems need 'indices'");
      return ProblemDescriptor::lacunary_poly(require_int(doc, "N"), doc["indices"].get<std::vector<int>>());
    }
    case Family::gevp: return ProblemDescriptor::gevp(require_int(doc, "n"));
    case Family::pevp: return ProblemDescriptor::pevp(require_int(doc, "n"), require_int(doc, "d"));
    case Family::quadric: return ProblemDescriptor::quadric(require_int(doc, "n"));
    case Family::masked_pevp: {
      const int n = require_int(doc, "n");
      if (name == "sparse_qep" && !doc.contains("masks")) return ProblemDescriptor::sparse_qep(n);
      const int d = require_int(doc, "d");
      if (!doc.contains("masks") || !doc["masks"].is_array()) parse_fail("masked problems need 'masks'");
      std::vector<Mask> masks;
      for (const auto& m : doc["masks"]) masks.push_back(parse_mask(m, n));
      return ProblemDescriptor::masked_pevp(n, d, std::move(masks));
    }
  }
  parse_fail("unknown family");
}

ProblemInstance parse_document(const json& doc) {
  if (!doc.is_object()) parse_fail("problem file must be a JSON object");
  ProblemDescriptor desc = parse_descriptor(doc);
  if (!doc.contains("coefficients")) {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) parse_fail("'seed' must be a non-negative integer");
      seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("index")) {
      if (!doc["index"].is_number_unsigned()) parse_fail("'index' must be a non-negative integer");
      index = doc["index"].get<std::uint64_t>();
    }
    return sample_instance(desc, seed, index);
  }

  const json& coeffs = doc["coefficients"];
  if (!coeffs.is_array()) parse_fail("'coefficients' must be an array");
  std::vector<ComplexMatrix> blocks;
  const bool scalar = desc.family() == Family::dense_poly || desc.family() == Family::lacunary_poly;
  for (const auto& c : coeffs) {
    if (scalar) blocks.push_back(ComplexMatrix::Constant(1, 1, parse_complex(c)));
    else blocks.push_back(parse_matrix(c, desc.n()));
  }
  return ProblemInstance::create(std::move(desc), std::move(blocks));
}

}  // namespace

ProblemInstance parse_problem_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_document(doc);
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid problem file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument) parse_fail(e.what());
    throw;
  }
}

ProblemInstance load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_json(buf.str());
}

std::string problem_to_json(const ProblemInstance& inst) {
  const ProblemDescriptor& desc = inst.descriptor;
  json doc;
  doc["family"] = to_string(desc.family());
  switch (desc.family()) {
    case Family::dense_poly: doc["N"] = desc.degree(); break;
    case Family::lacunary_poly:
      doc["N"] = desc.degree();
      doc["indices"] = desc.indices();
      break;
    case Family::gevp:
    case Family::quadric: doc["n"] = desc.n(); break;
    case Family::pevp:
      doc["n"] = desc.n();
      doc["d"] = desc.degree();
      break;
    case Family::masked_pevp: {
      doc["n"] = desc.n();
      doc["d"] = desc.degree();
      json masks = json::array();
      for (const auto& m : desc.masks()) {
        const std::string name = mask_name(m);
        if (!name.empty()) {
          masks.push_back(name);
          continue;
        }
        json rows = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          json row = json::array();
          for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k) ? 1 : 0);
          rows.push_back(row);
        }
        masks.push_back(rows);
      }
      doc["masks"] = masks;
      break;
    }
  }
  json coeffs = json::array();
  const bool scalar = desc.family() == Family::dense_poly || desc.family() == Family::lacunary_poly;
  for (const auto& b : inst.blocks) {
    if (scalar) {
      coeffs.push_back(complex_json(b(0, 0)));
      continue;
    }
    json rows = json::array();
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < b.cols(); ++k) row.push_back(complex_json(b(i, k)));
      rows.push_back(row);
    }
    coeffs.push_back(rows);
  }
  doc["coefficients"] = coeffs;
  return doc.dump(2);
}

}  // namespace pevpcond

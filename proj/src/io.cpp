#include "qre/io.hpp"

#include <fstream>
#include <json.hpp>

namespace qre::io {

using nlohmann::json;

namespace {

json complex_list(const std::vector<cxd>& v) {
  json arr = json::array();
  for (const cxd& c : v) arr.push_back({c.real(), c.imag()});
  return arr;
}

std::vector<cxd> parse_complex_list(const json& arr, const std::string& field) {
  if (!arr.is_array()) throw IoError("field '" + field + "': expected an array of [re, im] pairs");
  std::vector<cxd> out;
  out.reserve(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw IoError("field '" + field + "', entry " + std::to_string(i) + ": expected [re, im]");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

json layout_fields(const SubsystemLayout& layout) {
  json j;
  j["dims"] = layout.dims;
  j["labels"] = layout.labels;
  return j;
}

SubsystemLayout parse_layout(const json& j) {
  if (!j.contains("dims")) throw IoError("field 'dims' is missing");
  if (!j.contains("labels")) throw IoError("field 'labels' is missing");
  try {
    return SubsystemLayout(j["labels"].get<std::vector<std::string>>(), j["dims"].get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw IoError(std::string("fields 'dims'/'labels': ") + e.what());
  } catch (const PreconditionError& e) {
    throw IoError(std::string("invalid layout: ") + e.what());
  }
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string require_type(const json& j, const std::string& path) {
  if (!j.contains("type") || !j["type"].is_string())
    throw IoError(path + ": field 'type' is missing or not a string");
  return j["type"].get<std::string>();
}

ComplexMatrix matrix_from_flat(std::vector<cxd> flat, int dim, const std::string& field) {
  if (static_cast<int>(flat.size()) != dim * dim)
    throw IoError("field '" + field + "': expected " + std::to_string(dim * dim) + " entries, got " +
                  std::to_string(flat.size()));
  ComplexMatrix m(dim, dim);
  m.data = std::move(flat);
  return m;
}

}  // namespace

std::string to_json_string(const DensityOperator& rho) {
  json j = layout_fields(rho.layout);
  j["type"] = "state";
  j["matrix"] = complex_list(rho.op.matrix.data);
  return j.dump();
}

std::string to_json_string(const PureState& psi) {
  json j = layout_fields(psi.layout);
  j["type"] = "pure_state";
  j["vector"] = complex_list(psi.vector);
  return j.dump();
}

std::string to_json_string(const KrausChannel& ch) {
  json j;
  j["type"] = "channel";
  j["dim_in"] = ch.dim_in;
  j["dim_out"] = ch.dim_out;
  json ops = json::array();
  for (const auto& k : ch.kraus) ops.push_back(complex_list(k.data));
  j["kraus"] = ops;
  return j.dump();
}

std::string to_json_string(const Povm& povm) {
  json j;
  j["type"] = "povm";
  j["dim"] = povm.dim();
  json els = json::array();
  for (const auto& e : povm.elements) els.push_back(complex_list(e.matrix.data));
  j["elements"] = els;
  return j.dump();
}

void save(const std::string& path, const std::string& json_text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << json_text << "\n";
}

std::string peek_type(const std::string& path) {
  return require_type(load_file(path), path);
}

PureState load_pure_state(const std::string& path) {
  const json j = load_file(path);
  if (require_type(j, path) != "pure_state") throw IoError(path + ": expected type 'pure_state'");
  const SubsystemLayout layout = parse_layout(j);
  if (!j.contains("vector")) throw IoError(path + ": field 'vector' is missing");
  std::vector<cxd> v = parse_complex_list(j["vector"], "vector");
  try {
    return PureState(std::move(v), layout);
  } catch (const PreconditionError& e) {
    throw IoError(path + ": " + e.what());
  }
}

DensityOperator load_state(const std::string& path) {
  const json j = load_file(path);
  const std::string type = require_type(j, path);
  if (type == "pure_state") return load_pure_state(path).density();
  if (type != "state") throw IoError(path + ": expected type 'state' or 'pure_state', got '" + type + "'");
  const SubsystemLayout layout = parse_layout(j);
  if (!j.contains("matrix")) throw IoError(path + ": field 'matrix' is missing");
  std::vector<cxd> flat = parse_complex_list(j["matrix"], "matrix");
  try {
    return DensityOperator(HermitianOperator(matrix_from_flat(std::move(flat), layout.total_dim(), "matrix")),
                           layout);
  } catch (const PreconditionError& e) {
    throw IoError(path + ": " + e.what());
  }
}

KrausChannel load_channel(const std::string& path) {
  const json j = load_file(path);
  if (require_type(j, path) != "channel") throw IoError(path + ": expected type 'channel'");
  if (!j.contains("dim_in") || !j.contains("dim_out") || !j.contains("kraus"))
    throw IoError(path + ": fields 'dim_in', 'dim_out', 'kraus' are required");
  const int din = j["dim_in"].get<int>();
  const int dout = j["dim_out"].get<int>();
  if (din <= 0 || dout <= 0) throw IoError(path + ": channel dimensions must be positive");
  std::vector<ComplexMatrix> ops;
  for (size_t i = 0; i < j["kraus"].size(); ++i) {
    std::vector<cxd> flat = parse_complex_list(j["kraus"][i], "kraus[" + std::to_string(i) + "]");
    if (static_cast<int>(flat.size()) != din * dout)
      throw IoError(path + ": kraus[" + std::to_string(i) + "] has wrong entry count");
    ComplexMatrix m(dout, din);
    m.data = std::move(flat);
    ops.push_back(std::move(m));
  }
  try {
    return KrausChannel(std::move(ops));
  } catch (const PreconditionError& e) {
    throw IoError(path + ": " + e.what());
  }
}

Povm load_povm(const std::string& path) {
  const json j = load_file(path);
  if (require_type(j, path) != "povm") throw IoError(path + ": expected type 'povm'");
  if (!j.contains("dim") || !j.contains("elements"))
    throw IoError(path + ": fields 'dim' and 'elements' are required");
  const int dim = j["dim"].get<int>();
  std::vector<HermitianOperator> els;
  for (size_t i = 0; i < j["elements"].size(); ++i) {
    std::vector<cxd> flat = parse_complex_list(j["elements"][i], "elements[" + std::to_string(i) + "]");
    try {
      els.emplace_back(matrix_from_flat(std::move(flat), dim, "elements[" + std::to_string(i) + "]"));
    } catch (const PreconditionError& e) {
      throw IoError(path + ": elements[" + std::to_string(i) + "]: " + e.what());
    }
  }
  try {
    return Povm(std::move(els));
  } catch (const PreconditionError& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace qre::io

#pragma once

// JSON forms of groups, sequences, systems, diagnostics and models. Complex
// data is stored as parallel "re"/"im" arrays in mixed-radix row-major order.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>

#include "gsamp/sampling.hpp"

namespace gsamp {

using json = nlohmann::json;

/// A document does not match the expected schema.
class SchemaError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

namespace io {

inline void expect_object(const json& j, const std::string& where, std::initializer_list<const char*> required,
                          std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) throw SchemaError(where + ": missing key '" + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw SchemaError(where + ": unknown key '" + k + "'");
}

template <class T>
T get(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

inline std::vector<int> get_moduli(const json& j, const std::string& where) {
  auto m = get<std::vector<int>>(j, where);
  if (m.empty()) throw SchemaError(where + ": moduli must be non-empty");
  for (int s : m)
    if (s < 1) throw SchemaError(where + ": modulus " + std::to_string(s) + " is not >= 1");
  return m;
}

}  // namespace io

// --- sequences --------------------------------------------------------------

inline json to_json(const GroupSequence& x) {
  json re = json::array(), im = json::array();
  for (const auto& v : x.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {{"moduli", x.group().moduli()}, {"re", re}, {"im", im}};
}

inline GroupSequence sequence_from_json(const json& j, const std::string& where = "sequence") {
  io::expect_object(j, where, {"moduli", "re"}, {"im"});
  const GroupSpec g(io::get_moduli(j["moduli"], where + ".moduli"));
  const auto re = io::get<std::vector<double>>(j["re"], where + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = io::get<std::vector<double>>(j["im"], where + ".im");
  if (re.size() != g.order() || im.size() != g.order())
    throw SchemaError(where + ": expected " + std::to_string(g.order()) + " values for " + g.describe());
  std::vector<cplx> v(g.order());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {re[i], im[i]};
  return {g, std::move(v)};
}

inline json to_json(const VectorSequence& x) {
  json comps = json::array();
  for (const auto& c : x.components()) comps.push_back(to_json(c));
  return {{"moduli", x.group().moduli()}, {"components", comps}};
}

inline VectorSequence vector_from_json(const json& j, const std::string& where = "vector") {
  io::expect_object(j, where, {"moduli", "components"});
  const GroupSpec g(io::get_moduli(j["moduli"], where + ".moduli"));
  if (!j["components"].is_array()) throw SchemaError(where + ".components: expected an array");
  std::vector<GroupSequence> comps;
  for (std::size_t i = 0; i < j["components"].size(); ++i)
    comps.push_back(sequence_from_json(j["components"][i], where + ".components[" + std::to_string(i) + "]"));
  if (comps.empty()) throw SchemaError(where + ": needs at least one component");
  VectorSequence v(std::move(comps));
  if (!(v.group() == g)) throw SchemaError(where + ": components do not live on " + g.describe());
  return v;
}

inline json to_json(const SequenceMatrix& A) {
  json entries = json::array();
  for (const auto& e : A.entries()) entries.push_back(to_json(e));
  return {{"moduli", A.group().moduli()}, {"rows", A.rows()}, {"cols", A.cols()}, {"entries", entries}};
}

inline SequenceMatrix matrix_from_json(const json& j, const std::string& where = "matrix") {
  io::expect_object(j, where, {"moduli", "rows", "cols", "entries"});
  const GroupSpec g(io::get_moduli(j["moduli"], where + ".moduli"));
  const auto rows = io::get<std::size_t>(j["rows"], where + ".rows");
  const auto cols = io::get<std::size_t>(j["cols"], where + ".cols");
  if (rows < 1 || cols < 1) throw SchemaError(where + ": rows and cols must be >= 1");
  if (!j["entries"].is_array() || j["entries"].size() != rows * cols)
    throw SchemaError(where + ": expected " + std::to_string(rows * cols) + " entries");
  std::vector<GroupSequence> entries;
  for (std::size_t i = 0; i < rows * cols; ++i) {
    entries.push_back(sequence_from_json(j["entries"][i], where + ".entries[" + std::to_string(i) + "]"));
    if (!(entries.back().group() == g)) throw SchemaError(where + ": entry " + std::to_string(i) + " is not on " + g.describe());
  }
  return {rows, cols, std::move(entries)};
}

inline json to_json(const TransferMatrix& T) {
  json re = json::array(), im = json::array();
  for (std::size_t xi = 0; xi < T.characters(); ++xi) {
    json r = json::array(), i = json::array();
    for (Eigen::Index a = 0; a < T.at(xi).rows(); ++a)
      for (Eigen::Index b = 0; b < T.at(xi).cols(); ++b) {
        r.push_back(T.at(xi)(a, b).real());
        i.push_back(T.at(xi)(a, b).imag());
      }
    re.push_back(r);
    im.push_back(i);
  }
  return {{"moduli", T.group().moduli()}, {"rows", T.rows()}, {"cols", T.cols()}, {"re", re}, {"im", im}};
}

inline TransferMatrix transfer_from_json(const json& j, const std::string& where = "transfer") {
  io::expect_object(j, where, {"moduli", "rows", "cols", "re"}, {"im"});
  const GroupSpec g(io::get_moduli(j["moduli"], where + ".moduli"));
  const auto rows = io::get<std::size_t>(j["rows"], where + ".rows");
  const auto cols = io::get<std::size_t>(j["cols"], where + ".cols");
  const auto re = io::get<std::vector<std::vector<double>>>(j["re"], where + ".re");
  auto im = j.contains("im") ? io::get<std::vector<std::vector<double>>>(j["im"], where + ".im")
                             : std::vector<std::vector<double>>(re.size(), std::vector<double>(rows * cols, 0.0));
  if (re.size() != g.order() || im.size() != g.order())
    throw SchemaError(where + ": expected one block per character (" + std::to_string(g.order()) + ")");
  TransferMatrix T(g, rows, cols);
  for (std::size_t xi = 0; xi < g.order(); ++xi) {
    if (re[xi].size() != rows * cols || im[xi].size() != rows * cols)
      throw SchemaError(where + ": block " + std::to_string(xi) + " has the wrong size");
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < cols; ++b)
        T.at(xi)(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = {re[xi][a * cols + b], im[xi][a * cols + b]};
  }
  return T;
}

inline json to_json(const LeftInverse& B) {
  json j = to_json(B.coefficients);
  j["transfer"] = to_json(B.transfer);
  return j;
}

inline json to_json(const FrameDiagnostics& d, const GroupSpec& dual) {
  json per = json::array();
  for (const auto& s : d.per_xi) per.push_back({{"xi", dual.coords_of(s.xi)}, {"eigs", s.eigenvalues}});
  return {{"alpha", d.alpha},         {"beta", d.beta},         {"delta", d.delta},
          {"is_frame", d.is_frame},   {"is_riesz", d.is_riesz}, {"tolerance", d.tolerance},
          {"per_xi", per}};
}

// --- models -----------------------------------------------------------------

/// Either model kind, as loaded from a document.
struct ModelSpec {
  std::optional<TranslationModel> translation;
  std::optional<SemidirectModel> semidirect;

  /// The translation model used for sampling (the reduced one for semidirect).
  const TranslationModel& sampling_model() const { return *translation; }
};

inline ModelSpec model_from_json(const json& j, const std::string& where = "model") {
  if (!j.is_object() || !j.contains("type")) throw SchemaError(where + ": missing key 'type'");
  const auto type = io::get<std::string>(j["type"], where + ".type");
  if (type == "translation") {
    io::expect_object(j, where, {"type", "moduli", "phi", "H_strides", "generators"});
    const GroupSpec g(io::get_moduli(j["moduli"], where + ".moduli"));
    GroupSequence phi = sequence_from_json(j["phi"], where + ".phi");
    if (!(phi.group() == g)) throw SchemaError(where + ".phi: not on " + g.describe());
    std::vector<GroupSequence> gens;
    if (!j["generators"].is_array() || j["generators"].empty()) throw SchemaError(where + ".generators: non-empty array required");
    for (std::size_t i = 0; i < j["generators"].size(); ++i)
      gens.push_back(sequence_from_json(j["generators"][i], where + ".generators[" + std::to_string(i) + "]"));
    ProductSubgroup H(g, io::get<std::vector<int>>(j["H_strides"], where + ".H_strides"));
    return {TranslationModel(std::move(phi), std::move(H), std::move(gens)), std::nullopt};
  }
  if (type == "semidirect") {
    io::expect_object(j, where, {"type", "moduli", "phi", "H_strides", "Gamma", "varphi"});
    const GroupSpec g(io::get_moduli(j["moduli"], where + ".moduli"));
    SemidirectModel sd(g, parse_rotation_group(io::get<std::string>(j["Gamma"], where + ".Gamma")),
                       io::get<std::vector<int>>(j["H_strides"], where + ".H_strides"),
                       sequence_from_json(j["phi"], where + ".phi"), sequence_from_json(j["varphi"], where + ".varphi"));
    TranslationModel reduced = semidirect_reduce(sd).model;
    return {std::move(reduced), std::move(sd)};
  }
  throw SchemaError(where + ".type: expected 'translation' or 'semidirect', got '" + type + "'");
}

inline json to_json(const ModelSpec& m) {
  if (m.semidirect) {
    const auto& sd = *m.semidirect;
    return {{"type", "semidirect"},
            {"moduli", sd.torus().moduli()},
            {"phi", to_json(sd.window())},
            {"H_strides", sd.lattice().strides()},
            {"Gamma", to_string(sd.rotation_group())},
            {"varphi", to_json(sd.varphi())}};
  }
  const auto& t = *m.translation;
  json gens = json::array();
  for (const auto& g : t.generators()) gens.push_back(to_json(g));
  return {{"type", "translation"},
          {"moduli", t.ambient().moduli()},
          {"phi", to_json(t.window())},
          {"H_strides", t.sampling_subgroup().strides()},
          {"generators", gens}};
}

// --- deterministic output ---------------------------------------------------

/// Serializes with every floating value printed as %.17g so identical inputs
/// give byte-identical output.
inline void dump_fixed(const json& j, std::ostream& os, int indent = 2, int level = 0) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(k).dump() << ": ";
        dump_fixed(v, os, indent, level + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Numeric arrays stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_primitive(); });
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << (flat ? ", " : ",");
        if (!flat) os << "\n" << pad;
        dump_fixed(j[i], os, indent, level + 1);
      }
      if (!flat) os << "\n" << close;
      os << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

inline std::string dump_fixed(const json& j) {
  std::ostringstream os;
  dump_fixed(j, os);
  os << "\n";
  return os.str();
}

}  // namespace gsamp

#include "affrank/json_io.hpp"

#include <sstream>

#include "json.hpp"

namespace affrank {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_to_ojson(const Matrix& m) {
  ordered_json j;
  j["field"] = m.field().modulus();
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  ordered_json entries = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(int(m.value_at(i, c)));
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  return j;
}

ordered_json entries_only(const Matrix& m) {
  ordered_json entries = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(int(m.value_at(i, c)));
    entries.push_back(std::move(row));
  }
  return entries;
}

ordered_json subspace_to_ojson(const AffineSubspace& s) {
  ordered_json j;
  j["field"] = s.field().modulus();
  j["rows"] = s.ambient_rows();
  j["cols"] = s.ambient_cols();
  j["offset"] = entries_only(s.offset_matrix());
  ordered_json basis = ordered_json::array();
  for (const Matrix& b : s.basis_matrices()) basis.push_back(entries_only(b));
  j["basis"] = std::move(basis);
  return j;
}

ordered_json signature_to_ojson(const QuadSignature& sig) {
  ordered_json j;
  ordered_json parts = ordered_json::array();
  for (const auto& part : sig.parts) parts.push_back(part.size);
  j["parts"] = std::move(parts);
  return j;
}

std::string emit(const ordered_json& j, int indent) { return j.dump(indent); }

Matrix matrix_from_ojson(const ordered_json& j) {
  if (!j.contains("field") || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("entries")) {
    throw DimensionError("matrix document needs field/rows/cols/entries");
  }
  const Field f(j.at("field").get<int>());
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || int(entries.size()) != rows) {
    throw DimensionError("entries row count does not match rows");
  }
  std::vector<std::vector<long long>> data;
  for (const auto& row : entries) {
    if (!row.is_array() || int(row.size()) != cols) {
      throw DimensionError("entries column count does not match cols");
    }
    std::vector<long long> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw DimensionError("matrix entries must be integers");
      const long long value = v.get<long long>();
      if (value < 0 || value >= f.modulus()) {
        throw DimensionError("matrix entry out of range [0, p)");
      }
      r.push_back(value);
    }
    data.push_back(std::move(r));
  }
  return Matrix::from_rows(f, data);
}

}  // namespace

std::string to_json(const Matrix& m, int indent) { return emit(matrix_to_ojson(m), indent); }

std::string to_json(const AffineSubspace& s, int indent) {
  return emit(subspace_to_ojson(s), indent);
}

std::string to_json(const QuadSignature& sig, int indent) {
  return emit(signature_to_ojson(sig), indent);
}

std::string to_json(const ClassificationWitness& w, int indent) {
  ordered_json j;
  j["P"] = matrix_to_ojson(w.p_left);
  j["Q"] = matrix_to_ojson(w.q_right);
  j["W"] = subspace_to_ojson(w.core);
  j["signature"] = signature_to_ojson(w.sig);
  return emit(j, indent);
}

std::string to_json(const TraceHyperplane& h, int indent) {
  ordered_json j;
  j["A"] = matrix_to_ojson(h.defining);
  j["rank"] = h.rank;
  return emit(j, indent);
}

std::string to_json(const CensusReport& r, int indent) {
  ordered_json j;
  j["field"] = r.field_p;
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["dim"] = r.subspace_dim;
  j["codim"] = r.codim;
  j["r"] = r.r;
  j["total"] = r.total;
  ordered_json hist;
  for (const auto& [k, v] : r.lrk_histogram) hist[std::to_string(k)] = v;
  j["lrk_histogram"] = std::move(hist);
  j["extremal"] = r.extremal;
  ordered_json orbits = ordered_json::array();
  for (const auto& orbit : r.orbits) {
    ordered_json o;
    o["label"] = orbit.label;
    o["size"] = orbit.size;
    orbits.push_back(std::move(o));
  }
  j["orbits"] = std::move(orbits);
  return emit(j, indent);
}

std::string to_json(const MaximalityReport& r, int indent) {
  ordered_json j;
  j["field"] = r.field_p;
  j["r"] = r.r;
  j["max_dim"] = r.max_dim;
  j["scanned_at_max_dim"] = r.scanned_at_max_dim;
  j["all_invertible"] = r.all_invertible;
  ordered_json orbits = ordered_json::array();
  for (const auto& orbit : r.orbits) {
    ordered_json o;
    o["label"] = orbit.label;
    o["size"] = orbit.size;
    orbits.push_back(std::move(o));
  }
  j["orbits"] = std::move(orbits);
  j["scanned_above"] = r.scanned_above;
  j["all_invertible_above"] = r.all_invertible_above;
  return emit(j, indent);
}

std::string to_json(const FactsReport& r, int indent) {
  ordered_json j;
  j["field"] = r.field_p;
  j["max_n"] = r.max_n;
  j["even_rank_checked"] = r.even_rank_checked;
  j["conjugation_pairs"] = r.conjugation_pairs;
  j["column_span_vectors"] = r.column_span_vectors;
  j["all_hold"] = r.all_hold;
  return emit(j, indent);
}

Matrix matrix_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DimensionError(std::string("JSON parse error: ") + e.what());
  }
  return matrix_from_ojson(j);
}

AffineSubspace subspace_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DimensionError(std::string("JSON parse error: ") + e.what());
  }
  if (!j.contains("field") || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("offset") || !j.contains("basis")) {
    throw DimensionError("subspace document needs field/rows/cols/offset/basis");
  }
  const int field_p = j.at("field").get<int>();
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();

  auto as_matrix = [&](const ordered_json& entries) {
    ordered_json m;
    m["field"] = field_p;
    m["rows"] = rows;
    m["cols"] = cols;
    m["entries"] = entries;
    return matrix_from_ojson(m);
  };

  const Matrix offset = as_matrix(j.at("offset"));
  std::vector<Matrix> gens;
  if (!j.at("basis").is_array()) throw DimensionError("basis must be an array");
  for (const auto& b : j.at("basis")) gens.push_back(as_matrix(b));
  // Re-canonicalize defensively: inputs need not be in canonical encoding.
  return AffineSubspace::from_generators(offset, gens);
}

std::string lrk_histogram_csv(const CensusReport& r) {
  std::ostringstream os;
  os << "lrk,count\n";
  for (const auto& [k, v] : r.lrk_histogram) os << k << "," << v << "\n";
  return os.str();
}

}  // namespace affrank

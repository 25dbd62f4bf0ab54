#pragma once

#include <string>

#include "affrank/classify.hpp"
#include "affrank/oracle.hpp"

namespace affrank {

// JSON wire formats. Emitted documents are canonical and byte-deterministic:
// fixed key order, no whitespace variation beyond the indent parameter
// (indent < 0 means compact). Readers re-canonicalize defensively.
//
//   Matrix          {"field": p, "rows": n, "cols": m, "entries": [[...], ...]}
//   AffineSubspace  {"field": p, "rows": n, "cols": m,
//                    "offset": [[...], ...], "basis": [[[...], ...], ...]}
//   Witness         {"P": Matrix, "Q": Matrix, "W": AffineSubspace,
//                    "signature": {"parts": [...]}}

std::string to_json(const Matrix& m, int indent = -1);
std::string to_json(const AffineSubspace& s, int indent = -1);
std::string to_json(const QuadSignature& sig, int indent = -1);
std::string to_json(const ClassificationWitness& w, int indent = -1);
std::string to_json(const TraceHyperplane& h, int indent = -1);
std::string to_json(const CensusReport& r, int indent = -1);
std::string to_json(const MaximalityReport& r, int indent = -1);
std::string to_json(const FactsReport& r, int indent = -1);

/// Throws DimensionError on malformed documents or out-of-range entries.
Matrix matrix_from_json(const std::string& text);
AffineSubspace subspace_from_json(const std::string& text);

/// Histogram rows as "lrk,count" CSV lines.
std::string lrk_histogram_csv(const CensusReport& r);

}  // namespace affrank

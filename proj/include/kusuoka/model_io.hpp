#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "kusuoka/pifs.hpp"

namespace kusuoka {

using Json = nlohmann::json;

/// A parsed and validated model file.
struct Model {
    Unitary u;
    Povm povm;
    Tolerances tolerances;  // defaults overridden by the file's "tolerances"
    Json source;            // the parsed document
    std::string digest;     // SHA-256 of the canonical serialization

    Pifs pifs() const { return Pifs(u, povm, tolerances); }
};

/// Reads and validates a model. ParseError for unreadable files or malformed
/// JSON, SchemaError for missing or mistyped fields, ValidationError for
/// mathematically invalid content. Messages start with the JSON pointer of
/// the offending value.
///
/// `overrides` is an object of tolerance values applied after the file's
/// own "tolerances"; it does not enter the digest.
Model load_model(const std::filesystem::path &path, const Json &overrides = Json::object());
Model parse_model(const std::string &text, const Json &overrides = Json::object());
Model model_from_json(const Json &doc, const Json &overrides = Json::object());

/// Lowercase hex SHA-256 of doc.dump(); object keys are sorted, so the
/// digest ignores whitespace and key order.
std::string model_digest(const Json &doc);

/// [re, im] pairs, row by row.
Json complex_to_json(Complex z);
Json matrix_to_json(const ComplexMatrix &m);
Json vector_to_json(const ComplexVector &v);

/// Writes a model with an "elements" POVM; numbers are emitted in shortest
/// round-trip form, so loading the result reproduces every double exactly.
Json model_to_json(const Unitary &u, const Povm &povm);
Json model_to_json(const Unitary &u, const Povm &povm, const Tolerances &tol);

Json tolerances_to_json(const Tolerances &tol);

}  // namespace kusuoka

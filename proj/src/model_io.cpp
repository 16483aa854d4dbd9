#include "kusuoka/model_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace kusuoka {

namespace {

[[noreturn]] void schema_error(const Json::json_pointer &at, const std::string &what) {
    throw Error(ErrorKind::SchemaError, at.to_string() + ": " + what);
}

[[noreturn]] void validation_error(const Json::json_pointer &at, const std::string &what) {
    throw Error(ErrorKind::ValidationError, at.to_string() + ": " + what);
}

const Json &member(const Json &obj, const Json::json_pointer &at, const char *key) {
    if (!obj.contains(key)) schema_error(at / key, "missing required field");
    return obj.at(key);
}

Complex parse_complex(const Json &j, const Json::json_pointer &at) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        schema_error(at, "expected a complex number [re, im]");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

ComplexVector parse_vector(const Json &j, const Json::json_pointer &at, Eigen::Index d) {
    if (!j.is_array()) schema_error(at, "expected an array of complex numbers");
    if (static_cast<Eigen::Index>(j.size()) != d) {
        validation_error(at, "expected " + std::to_string(d) + " entries, found " + std::to_string(j.size()));
    }
    ComplexVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = parse_complex(j[static_cast<std::size_t>(i)], at / static_cast<std::size_t>(i));
    return v;
}

ComplexMatrix parse_matrix(const Json &j, const Json::json_pointer &at, Eigen::Index d) {
    if (!j.is_array()) schema_error(at, "expected a matrix (array of rows)");
    if (static_cast<Eigen::Index>(j.size()) != d) {
        validation_error(at, "expected " + std::to_string(d) + " rows, found " + std::to_string(j.size()));
    }
    ComplexMatrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        m.row(r) = parse_vector(j[static_cast<std::size_t>(r)], at / static_cast<std::size_t>(r), d).transpose();
    }
    return m;
}

// Module errors name the offending element as "element i" (1-based); map
// that back onto the JSON array when possible.
Json::json_pointer locate_element(const std::string &message, const Json::json_pointer &array) {
    const std::string key = "element ";
    const auto pos = message.find(key);
    if (pos == std::string::npos) return array;
    std::size_t idx = 0;
    std::size_t used = 0;
    try {
        idx = std::stoul(message.substr(pos + key.size()), &used);
    } catch (...) {
        return array;
    }
    if (used == 0 || idx == 0) return array;
    return array / (idx - 1);
}

Povm parse_povm(const Json &povm, const Json::json_pointer &at, Eigen::Index d, const Tolerances &tol) {
    if (!povm.is_object()) schema_error(at, "expected an object");
    const Json &kind = member(povm, at, "kind");
    if (!kind.is_string()) schema_error(at / "kind", "expected a string");
    const std::string k = kind.get<std::string>();
    try {
        if (k == "elements") {
            const auto arr = at / "elements";
            const Json &list = member(povm, at, "elements");
            if (!list.is_array() || list.empty()) schema_error(arr, "expected a non-empty array of matrices");
            std::vector<ComplexMatrix> elements;
            for (std::size_t i = 0; i < list.size(); ++i) elements.push_back(parse_matrix(list[i], arr / i, d));
            try {
                return validate_povm(std::move(elements), tol);
            } catch (const Error &e) {
                if (e.kind() == ErrorKind::ValidationError || e.kind() == ErrorKind::SchemaError) throw;
                validation_error(locate_element(e.what(), arr), e.what());
            }
        }
        if (k == "rank1_vectors") {
            const auto arr = at / "vectors";
            const Json &list = member(povm, at, "vectors");
            if (!list.is_array() || list.empty()) schema_error(arr, "expected a non-empty array of vectors");
            std::vector<ComplexVector> vectors;
            for (std::size_t i = 0; i < list.size(); ++i) vectors.push_back(parse_vector(list[i], arr / i, d));
            return rank_one_povm(vectors, tol);
        }
        if (k == "pvm_basis_split") {
            const ComplexMatrix basis = parse_matrix(member(povm, at, "basis"), at / "basis", d);
            const Json &sizes = member(povm, at, "block_sizes");
            if (!sizes.is_array() || sizes.empty()) schema_error(at / "block_sizes", "expected a non-empty array");
            std::vector<Eigen::Index> blocks;
            for (std::size_t i = 0; i < sizes.size(); ++i) {
                if (!sizes[i].is_number_integer()) schema_error(at / "block_sizes" / i, "expected an integer");
                blocks.push_back(sizes[i].get<Eigen::Index>());
            }
            return pvm_from_basis(basis, blocks, tol);
        }
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::ValidationError || e.kind() == ErrorKind::SchemaError) throw;
        validation_error(at, e.what());
    }
    schema_error(at / "kind", "unknown POVM kind '" + k + "'");
}

void apply_tolerances(const Json &t, const Json::json_pointer &at, Tolerances &tol) {
    if (!t.is_object()) schema_error(at, "expected an object");
    for (const auto &[name, value] : t.items()) {
        const auto field = Tolerances::find(name);
        if (!field) schema_error(at / name, "unknown tolerance");
        if (!value.is_number()) schema_error(at / name, "expected a number");
        const double v = value.get<double>();
        if (!(v > 0.0) || !std::isfinite(v)) validation_error(at / name, "tolerance must be positive and finite");
        tol.*(*field) = v;
    }
}

}  // namespace

std::string model_digest(const Json &doc) {
    const std::string text = doc.dump();
    unsigned char hash[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), hash, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Inconsistent, "SHA-256 computation failed");
    }
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(hash[i]);
    return out.str();
}

Model model_from_json(const Json &doc, const Json &overrides) {
    const Json::json_pointer root;
    if (!doc.is_object()) schema_error(root, "model must be a JSON object");

    const Json &dim = member(doc, root, "dimension");
    if (!dim.is_number_integer()) schema_error(root / "dimension", "expected an integer");
    const auto d = dim.get<std::int64_t>();
    if (d < 2) validation_error(root / "dimension", "dimension must be at least 2, got " + std::to_string(d));
    if (d > 64) validation_error(root / "dimension", "dimension above 64 is not supported");

    Tolerances tol;
    if (doc.contains("tolerances")) apply_tolerances(doc.at("tolerances"), root / "tolerances", tol);
    apply_tolerances(overrides, Json::json_pointer("/cli-overrides"), tol);

    const ComplexMatrix um = parse_matrix(member(doc, root, "unitary"), root / "unitary", d);
    std::optional<Unitary> u;
    try {
        if (!all_finite(um)) throw Error(ErrorKind::InvalidArgument, "non-finite entry");
        u = Unitary::from_matrix(um, tol);
    } catch (const Error &e) {
        validation_error(root / "unitary", e.what());
    }
    Povm povm = parse_povm(member(doc, root, "povm"), root / "povm", d, tol);

    Model model{std::move(*u), std::move(povm), tol, doc, model_digest(doc)};
    try {
        model.pifs();
    } catch (const Error &e) {
        validation_error(root, e.what());
    }
    return model;
}

Model parse_model(const std::string &text, const Json &overrides) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    return model_from_json(doc, overrides);
}

Model load_model(const std::filesystem::path &path, const Json &overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str(), overrides);
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vector_to_json(const ComplexVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

Json matrix_to_json(const ComplexMatrix &m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
    return out;
}

Json tolerances_to_json(const Tolerances &tol) {
    Json out = Json::object();
    for (const auto &e : Tolerances::entries()) out[std::string(e.name)] = tol.*(e.field);
    return out;
}

Json model_to_json(const Unitary &u, const Povm &povm) {
    Json elements = Json::array();
    for (const auto &e : povm.elements()) elements.push_back(matrix_to_json(e));
    return Json{{"dimension", u.dim()},
                {"unitary", matrix_to_json(u.matrix())},
                {"povm", {{"kind", "elements"}, {"elements", std::move(elements)}}}};
}

Json model_to_json(const Unitary &u, const Povm &povm, const Tolerances &tol) {
    Json out = model_to_json(u, povm);
    out["tolerances"] = tolerances_to_json(tol);
    return out;
}

}  // namespace kusuoka

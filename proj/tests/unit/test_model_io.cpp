#include <filesystem>
#include <functional>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "kusuoka/instances.hpp"
#include "kusuoka/model_io.hpp"

namespace kusuoka {
namespace {

const std::filesystem::path kModels = KUSUOKA_MODEL_DIR;

ErrorKind kind_of(const std::function<void()> &f, std::string *message = nullptr) {
    try {
        f();
    } catch (const Error &e) {
        if (message) *message = e.what();
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Inconsistent;
}

TEST(ModelIo, LoadsBundledModels) {
    const Model hadamard = load_model(kModels / "hadamard_qubit.json");
    EXPECT_EQ(hadamard.u.dim(), 2);
    EXPECT_EQ(hadamard.povm.kind().tag, PovmTag::TwoProjRankOne);
    EXPECT_EQ(hadamard.digest.size(), 64u);

    const Model trine = load_model(kModels / "trine.json");
    EXPECT_EQ(trine.povm.size(), 3u);
    EXPECT_EQ(trine.povm.kind().tag, PovmTag::RankOnePovm);
    EXPECT_NEAR(trine.povm.element(0)(0, 0).real(), 2.0 / 3.0, 1e-14);

    const Model qutrit = load_model(kModels / "diagonal_qutrit.json");
    EXPECT_EQ(qutrit.povm.kind().ranks, (std::vector<Eigen::Index>{2, 1}));
}

TEST(ModelIo, DigestIgnoresWhitespaceAndKeyOrder) {
    const std::string a = R"({"dimension":2,"unitary":[[1,0],[0,1]],"povm":{"kind":"pvm_basis_split","basis":[[1,0],[0,1]],"block_sizes":[1,1]}})";
    const std::string b = R"({
      "povm": {"block_sizes": [1, 1], "basis": [[1, 0], [0, 1]], "kind": "pvm_basis_split"},
      "unitary": [[1, 0], [0, 1]],
      "dimension": 2
    })";
    EXPECT_EQ(parse_model(a).digest, parse_model(b).digest);
    const std::string c = R"({"dimension":2,"unitary":[[0,1],[1,0]],"povm":{"kind":"pvm_basis_split","basis":[[1,0],[0,1]],"block_sizes":[1,1]}})";
    EXPECT_NE(parse_model(a).digest, parse_model(c).digest);
}

TEST(ModelIo, SerializationRoundTripsBitExactly) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Instance inst = random_general_instance(3, 4, seed);
        const Tolerances tol;
        const Json doc = model_to_json(inst.u, inst.povm, tol);
        const Model back = parse_model(doc.dump(2));
        EXPECT_EQ(back.u.matrix(), inst.u.matrix());
        for (std::size_t i = 0; i < inst.povm.size(); ++i) EXPECT_EQ(back.povm.element(i), inst.povm.element(i));
        EXPECT_EQ(model_to_json(back.u, back.povm, back.tolerances), doc);
    }
}

TEST(ModelIo, DimensionErrorsCarryPointer) {
    std::string msg;
    EXPECT_EQ(kind_of([] { load_model(kModels / "invalid_dimension.json"); }, &msg), ErrorKind::ValidationError);
    EXPECT_NE(msg.find("/dimension"), std::string::npos) << msg;
}

TEST(ModelIo, SumErrorsCarryPointer) {
    std::string msg;
    EXPECT_EQ(kind_of([] { load_model(kModels / "invalid_sum.json"); }, &msg), ErrorKind::ValidationError);
    EXPECT_NE(msg.find("/povm"), std::string::npos) << msg;
}

TEST(ModelIo, ElementErrorPointsAtTheElement) {
    const std::string text = R"({"dimension":2,"unitary":[[1,0],[0,1]],
        "povm":{"kind":"elements","elements":[[[1,0],[0,0]],[[0,1],[0,1]]]}})";
    std::string msg;
    EXPECT_EQ(kind_of([&] { parse_model(text); }, &msg), ErrorKind::ValidationError);
    EXPECT_NE(msg.find("/povm/elements/1"), std::string::npos) << msg;
}

TEST(ModelIo, SchemaErrors) {
    std::string msg;
    EXPECT_EQ(kind_of([] { parse_model(R"({"dimension":2})"); }, &msg), ErrorKind::SchemaError);
    EXPECT_NE(msg.find("/unitary"), std::string::npos) << msg;
    EXPECT_EQ(kind_of([] { parse_model(R"({"dimension":"two"})"); }), ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] {
                  parse_model(R"({"dimension":2,"unitary":[[1,0],[0,1]],"povm":{"kind":"mystery"}})");
              }, &msg),
              ErrorKind::SchemaError);
    EXPECT_NE(msg.find("/povm/kind"), std::string::npos);
    EXPECT_EQ(kind_of([] { parse_model(R"({"dimension":2,"unitary":[[1,0],[0,1]],)"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { load_model(kModels / "no_such_file.json"); }), ErrorKind::ParseError);
}

TEST(ModelIo, NonUnitaryIsRejected) {
    std::string msg;
    EXPECT_EQ(kind_of([] {
                  parse_model(R"({"dimension":2,"unitary":[[1,1],[0,1]],
                      "povm":{"kind":"pvm_basis_split","basis":[[1,0],[0,1]],"block_sizes":[1,1]}})");
              }, &msg),
              ErrorKind::ValidationError);
    EXPECT_NE(msg.find("/unitary"), std::string::npos);
}

TEST(ModelIo, TolerancesFromFileAndOverrides) {
    const std::string text = R"({"dimension":2,"unitary":[[1,0],[0,1]],
        "povm":{"kind":"pvm_basis_split","basis":[[1,0],[0,1]],"block_sizes":[1,1]},
        "tolerances":{"tol_rank":1e-7,"zero_prob_threshold":1e-14}})";
    const Model m = parse_model(text);
    EXPECT_DOUBLE_EQ(m.tolerances.tol_rank, 1e-7);
    EXPECT_DOUBLE_EQ(m.tolerances.zero_prob_threshold, 1e-14);
    EXPECT_DOUBLE_EQ(m.tolerances.tol_unit, Tolerances{}.tol_unit);

    const Model o = parse_model(text, Json{{"tol_rank", 1e-6}});
    EXPECT_DOUBLE_EQ(o.tolerances.tol_rank, 1e-6);

    std::string msg;
    EXPECT_EQ(kind_of([&] { parse_model(text, Json{{"tol_bogus", 1.0}}); }, &msg), ErrorKind::SchemaError);
    EXPECT_NE(msg.find("/cli-overrides/tol_bogus"), std::string::npos);
    EXPECT_EQ(kind_of([&] { parse_model(text, Json{{"tol_rank", -1.0}}); }), ErrorKind::ValidationError);
}

TEST(ModelIo, TolerancesSerializeEveryField) {
    const Json t = tolerances_to_json(Tolerances{});
    EXPECT_EQ(t.size(), Tolerances::entries().size());
    for (const auto &entry : Tolerances::entries()) EXPECT_TRUE(t.contains(std::string(entry.name)));
}

}  // namespace
}  // namespace kusuoka

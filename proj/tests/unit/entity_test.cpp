#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "msadl/entity.hpp"
#include "msadl/parser.hpp"

namespace msadl {
namespace {

TypeDecl person() {
    ParseResult r = parse_unit("/// @entity { identity = [ SSN, country ] } \n"
                               "type Person { SSN: string, country: string( length(3) ), name: string }\n",
                               View::Jolie);
    return r.unit->types.at(0);
}

ValueTree leaf(Scalar s) { return ValueTree{std::move(s), {}}; }

ValueTree person_value(const std::string& ssn, const std::string& country, const std::string& name) {
    ValueTree v;
    v.children["SSN"] = {leaf(ssn)};
    v.children["country"] = {leaf(country)};
    v.children["name"] = {leaf(name)};
    return v;
}

std::vector<std::uint8_t> salt(const std::string& s) { return {s.begin(), s.end()}; }

std::string lp(const std::string& s) {
    std::string out;
    auto n = static_cast<std::uint32_t>(s.size());
    for (int shift = 24; shift >= 0; shift -= 8) out += static_cast<char>((n >> shift) & 0xff);
    return out + s;
}

TEST(Entity, Sha256KnownVectors) {
    EXPECT_EQ(to_hex(sha256(std::string_view(""))),
              "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(to_hex(sha256(std::string_view("abc"))),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Entity, IdentityTupleFollowsAnnotationOrder) {
    IdentityTuple t = entity_identity(person_value("1", "USA", "Ada"), person());
    EXPECT_EQ(t.typeName, "Person");
    ASSERT_EQ(t.components.size(), 2u);
    EXPECT_EQ(t.components[0].first, "SSN");
    EXPECT_EQ(t.components[1].first, "country");
    EXPECT_EQ(canonical_identity(t), lp("Person") + lp("SSN") + lp("1") + lp("country") + lp("USA"));
}

TEST(Entity, SignatureIsSaltedSha256OfCanonicalIdentity) {
    ValueTree v = person_value("1", "USA", "Ada");
    auto s = salt("pepper");
    EntitySignature sig = entity_signature(v, person(), s);
    std::string bytes = "pepper" + canonical_identity(entity_identity(v, person()));
    EXPECT_EQ(sig.digest, sha256(std::string_view(bytes)));
    EXPECT_NE(sig.digest, entity_signature(v, person(), salt("other")).digest);
}

TEST(Entity, NoAnnotationOrNonScalarIdentity) {
    TypeDecl plain = person();
    plain.annotations.clear();
    try {
        entity_identity(person_value("1", "USA", "Ada"), plain);
        FAIL();
    } catch (const DiagnosticError& e) {
        EXPECT_EQ(e.code(), codes::DddNoAnnotation);
    }
    ParseResult many = parse_unit("/// @entity { identity = [ a ] }\ntype T { a[0,*]: string }", View::Jolie);
    ValueTree v;
    v.children["a"] = {leaf(std::string("x"))};
    try {
        entity_identity(v, many.unit->types[0]);
        FAIL();
    } catch (const DiagnosticError& e) {
        EXPECT_EQ(e.code(), codes::DddIdentityNotScalar);
    }
    ValueTree twice = person_value("1", "USA", "Ada");
    twice.children["SSN"].push_back(leaf(std::string("2")));
    try {
        entity_identity(twice, person());
        FAIL();
    } catch (const DiagnosticError& e) {
        EXPECT_EQ(e.code(), codes::ValueInvalid);
    }
}

TEST(Entity, AssertEqualsIgnoresNonIdentity) {
    EXPECT_TRUE(assert_equals(person_value("1", "USA", "Ada"), person_value("1", "USA", "Grace"), person()));
    EXPECT_FALSE(assert_equals(person_value("1", "USA", "Ada"), person_value("1", "GBR", "Ada"), person()));
    EXPECT_FALSE(assert_equals(person_value("1", "USA", "Ada"), person_value("2", "USA", "Ada"), person()));
}

TEST(Entity, AssertEqualsIsAnEquivalence) {
    testing::Gen g(9);
    for (int i = 0; i < 300; ++i) {
        auto pickv = [&] {
            return person_value(g.coin() ? "1" : "2", g.coin() ? "USA" : "GBR", g.text(0, 4));
        };
        ValueTree a = pickv(), b = pickv(), c = pickv();
        EXPECT_TRUE(assert_equals(a, a, person()));
        EXPECT_EQ(assert_equals(a, b, person()), assert_equals(b, a, person()));
        if (assert_equals(a, b, person()) && assert_equals(b, c, person())) EXPECT_TRUE(assert_equals(a, c, person()));
    }
}

TEST(Entity, RegisterAddedUnchangedConflict) {
    auto s = salt("k");
    EntityRegistry reg;
    ValueTree ada = person_value("1", "USA", "Ada");
    EXPECT_TRUE(std::holds_alternative<RegisterAdded>(reg.register_entity(ada, person(), s)));
    EXPECT_TRUE(std::holds_alternative<RegisterUnchanged>(reg.register_entity(ada, person(), s)));
    auto out = reg.register_entity(person_value("1", "USA", "Grace"), person(), s);
    ASSERT_TRUE(std::holds_alternative<RegisterConflict>(out));
    const auto& c = std::get<RegisterConflict>(out);
    EXPECT_NE(c.existingPayload, c.incomingPayload);
    EXPECT_EQ(reg.size(), 1u);
    EXPECT_EQ(reg.payload_of(c.signature.digest), c.existingPayload);
}

TEST(Entity, ConflictDetectedInBothOrders) {
    auto s = salt("k");
    ValueTree a = person_value("1", "USA", "Ada"), b = person_value("1", "USA", "Grace");
    for (int order = 0; order < 2; ++order) {
        EntityRegistry reg;
        reg.register_entity(order ? b : a, person(), s);
        EXPECT_TRUE(std::holds_alternative<RegisterConflict>(reg.register_entity(order ? a : b, person(), s)));
    }
}

TEST(Entity, DistinctIdentitiesNeverCollideAcrossSalts) {
    std::set<Digest> seen;
    ValueTree v = person_value("1", "USA", "Ada");
    for (int i = 0; i < 10000; ++i) {
        auto s = salt("salt-" + std::to_string(i));
        EXPECT_TRUE(seen.insert(entity_signature(v, person(), s).digest).second);
    }
    EXPECT_EQ(seen.size(), 10000u);
}

TEST(Entity, LengthPrefixPreventsConcatenationAmbiguity) {
    auto s = salt("k");
    EXPECT_NE(entity_signature(person_value("1", "2USA", "x"), person(), s).digest,
              entity_signature(person_value("12", "USA", "x"), person(), s).digest);
}

TEST(Entity, RegistryJsonRoundTripStoresNoRawValues) {
    auto s = salt("k");
    EntityRegistry reg;
    for (int i = 0; i < 20; ++i) reg.register_entity(person_value(std::to_string(i), "USA", "N"), person(), s);
    nlohmann::json j = reg.to_json();
    EXPECT_EQ(EntityRegistry::from_json(j), reg);
    EXPECT_EQ(j["entries"].size(), 20u);
    EXPECT_EQ(j.dump().find("USA"), std::string::npos);
    EXPECT_EQ(j["salt_id"], EntityRegistry::salt_id(s));
    EXPECT_EQ(j.dump().find("\"k\""), std::string::npos);
}

TEST(Entity, SaltMismatchRejected) {
    EntityRegistry reg;
    reg.register_entity(person_value("1", "USA", "N"), person(), salt("a"));
    try {
        reg.register_entity(person_value("2", "USA", "N"), person(), salt("b"));
        FAIL();
    } catch (const DiagnosticError& e) {
        EXPECT_EQ(e.code(), codes::RegistryInvalid);
    }
}

TEST(Entity, MalformedRegistryRejected) {
    const char* inputs[] = {R"([])", R"({"entries": []})", R"({"salt_id": "x", "entries": [{"sig": "zz", "payload": "00"}]})",
                            R"({"salt_id": "x", "entries": [{"sig": 1}]})"};
    for (const char* text : inputs) {
        try {
            EntityRegistry::from_json(nlohmann::json::parse(text));
            ADD_FAILURE() << text;
        } catch (const DiagnosticError& e) {
            EXPECT_EQ(e.code(), codes::RegistryInvalid) << text;
        }
    }
}

TEST(Entity, HexHelpers) {
    Digest d{};
    d[0] = 0xab;
    d[31] = 0x01;
    EXPECT_EQ(digest_from_hex(to_hex(d)), d);
    EXPECT_FALSE(digest_from_hex("abc"));
    EXPECT_EQ(bytes_from_hex("00ff"), (std::vector<std::uint8_t>{0x00, 0xff}));
}

}  // namespace
}  // namespace msadl

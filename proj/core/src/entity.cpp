#include "msadl/entity.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>

namespace msadl {

namespace {

constexpr char kHex[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

void put_u32(std::string& out, std::uint32_t n) {
    for (int shift = 24; shift >= 0; shift -= 8) out += static_cast<char>((n >> shift) & 0xff);
}

void put_lp(std::string& out, std::string_view bytes) {
    put_u32(out, static_cast<std::uint32_t>(bytes.size()));
    out.append(bytes);
}

void encode_tree(std::string& out, const ValueTree& v) {
    out += static_cast<char>(kind_of(v.root));
    put_lp(out, scalar_text(v.root));
    put_u32(out, static_cast<std::uint32_t>(v.children.size()));
    for (const auto& [name, list] : v.children) {
        put_lp(out, name);
        put_u32(out, static_cast<std::uint32_t>(list.size()));
        for (const auto& child : list) encode_tree(out, child);
    }
}

Digest salted(std::span<const std::uint8_t> salt, std::string_view bytes) {
    std::string buf(reinterpret_cast<const char*>(salt.data()), salt.size());
    buf.append(bytes);
    return sha256(buf);
}

[[noreturn]] void fail(std::string_view code, std::string message) {
    throw DiagnosticError(make_error(code, std::move(message)));
}

const EntityPattern& require_pattern(const TypeDecl& type) {
    const EntityPattern* p = entity_pattern(type);
    if (!p) fail(codes::DddNoAnnotation, "type '" + type.name + "' has no @entity annotation");
    return *p;
}

bool void_rooted(const Node& n, const TypeLookup& lookup) {
    if (const auto* body = std::get_if<TypeBody>(&n.type)) return body->root.native == NativeType::Void;
    const std::string& name = std::get<TypeRef>(n.type).name;
    const TypeDecl* t = lookup ? lookup(name) : nullptr;
    if (!t) {
        if (auto native = native_from_keyword(name)) return *native == NativeType::Void;
        fail(codes::RefUnresolved, "type '" + name + "' is not declared");
    }
    return t->body.root.native == NativeType::Void;
}

}  // namespace

std::string to_hex(const Digest& d) {
    std::string s;
    s.reserve(64);
    for (auto b : d) {
        s += kHex[b >> 4];
        s += kHex[b & 0xf];
    }
    return s;
}

std::vector<std::uint8_t> bytes_from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) fail(codes::ValueInvalid, "hex string has odd length");
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) fail(codes::ValueInvalid, "invalid hex digit");
        out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
    }
    return out;
}

std::optional<Digest> digest_from_hex(std::string_view hex) {
    if (hex.size() != 64) return std::nullopt;
    Digest d{};
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        d[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return d;
}

Digest sha256(std::span<const std::uint8_t> data) {
    Digest d{};
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), d.data(), &len) != 1 || len != d.size()) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    return d;
}

Digest sha256(std::string_view data) {
    return sha256(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string canonical_identity(const IdentityTuple& t) {
    std::string out;
    put_lp(out, t.typeName);
    for (const auto& [field, value] : t.components) {
        put_lp(out, field);
        put_lp(out, scalar_text(value));
    }
    return out;
}

std::string canonical_payload(const ValueTree& value, const TypeDecl& type) {
    ValueTree rest = value;
    if (const EntityPattern* p = entity_pattern(type)) {
        for (const auto& f : p->identityFields) rest.children.erase(f);
    }
    std::string out;
    put_lp(out, type.name);
    encode_tree(out, rest);
    return out;
}

IdentityTuple entity_identity(const ValueTree& value, const TypeDecl& type, const TypeLookup& lookup) {
    const EntityPattern& pattern = require_pattern(type);
    IdentityTuple tuple;
    tuple.typeName = type.name;
    for (const auto& f : pattern.identityFields) {
        const Node* n = find_node(type.body, f);
        if (!n) fail(codes::DddIdentityFieldMissing, "identity field '" + f + "' is not a node of '" + type.name + "'");
        if (!n->cardinality.is_single() || void_rooted(*n, lookup)) {
            fail(codes::DddIdentityNotScalar, "identity field '" + f + "' must be a single scalar-rooted node");
        }
        auto it = value.children.find(f);
        if (it == value.children.end() || it->second.size() != 1) {
            fail(codes::ValueInvalid, "value lacks exactly one '" + f + "' identity node");
        }
        tuple.components.emplace_back(f, it->second.front().root);
    }
    return tuple;
}

bool assert_equals(const ValueTree& a, const ValueTree& b, const TypeDecl& type, const TypeLookup& lookup) {
    return entity_identity(a, type, lookup) == entity_identity(b, type, lookup);
}

EntitySignature entity_signature(const ValueTree& value, const TypeDecl& type, std::span<const std::uint8_t> salt,
                                 const TypeLookup& lookup) {
    IdentityTuple t = entity_identity(value, type, lookup);
    return EntitySignature{salted(salt, canonical_identity(t)), type.name};
}

std::string EntityRegistry::salt_id(std::span<const std::uint8_t> salt) {
    std::string buf;
    put_lp(buf, "msadl.registry.salt");
    buf.append(reinterpret_cast<const char*>(salt.data()), salt.size());
    return to_hex(sha256(buf)).substr(0, 16);
}

RegisterOutcome EntityRegistry::register_entity(const ValueTree& value, const TypeDecl& type,
                                                std::span<const std::uint8_t> salt, const TypeLookup& lookup) {
    std::string id = salt_id(salt);
    if (saltId_.empty()) {
        saltId_ = id;
    } else if (saltId_ != id) {
        fail(codes::RegistryInvalid, "registry was built with a different salt");
    }
    EntitySignature sig = entity_signature(value, type, salt, lookup);
    Digest payload = salted(salt, canonical_payload(value, type));
    auto it = entries_.find(sig.digest);
    if (it == entries_.end()) {
        entries_.emplace(sig.digest, payload);
        return RegisterAdded{sig, payload};
    }
    if (it->second == payload) return RegisterUnchanged{sig};
    return RegisterConflict{sig, it->second, payload};
}

std::optional<Digest> EntityRegistry::payload_of(const Digest& signature) const {
    auto it = entries_.find(signature);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

nlohmann::json EntityRegistry::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [sig, payload] : entries_) entries.push_back({{"sig", to_hex(sig)}, {"payload", to_hex(payload)}});
    return {{"salt_id", saltId_}, {"entries", entries}};
}

EntityRegistry EntityRegistry::from_json(const nlohmann::json& j) {
    auto bad = [](const std::string& why) { fail(codes::RegistryInvalid, "registry: " + why); };
    if (!j.is_object()) bad("expected an object");
    for (const auto& [k, v] : j.items()) {
        if (k != "salt_id" && k != "entries") bad("unknown field '" + k + "'");
    }
    if (!j.contains("salt_id") || !j["salt_id"].is_string()) bad("'salt_id' must be a string");
    if (!j.contains("entries") || !j["entries"].is_array()) bad("'entries' must be an array");
    EntityRegistry r(j["salt_id"].get<std::string>());
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || e.size() != 2 || !e.contains("sig") || !e.contains("payload") || !e["sig"].is_string() ||
            !e["payload"].is_string()) {
            bad("entries must be {\"sig\", \"payload\"} objects");
        }
        auto sig = digest_from_hex(e["sig"].get<std::string>());
        auto payload = digest_from_hex(e["payload"].get<std::string>());
        if (!sig || !payload) bad("digests must be 64 hex digits");
        if (!r.entries_.emplace(*sig, *payload).second) bad("duplicate signature " + to_hex(*sig));
    }
    return r;
}

}  // namespace msadl

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "msadl/model.hpp"
#include "msadl/model_set.hpp"
#include "msadl/value.hpp"

namespace msadl {

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(const Digest& d);
std::optional<Digest> digest_from_hex(std::string_view hex);
std::vector<std::uint8_t> bytes_from_hex(std::string_view hex);

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

/// Identity fields of an entity value, in annotation order.
struct IdentityTuple {
    std::string typeName;
    std::vector<std::pair<std::string, Scalar>> components;
    friend bool operator==(const IdentityTuple&, const IdentityTuple&) = default;
};

struct EntitySignature {
    Digest digest{};
    std::string typeName;
    friend bool operator==(const EntitySignature&, const EntitySignature&) = default;
};

/// Length-prefixed encoding: u32 big-endian byte length, then the bytes.
/// canonical(tuple) = lp(typeName) ++ for each component lp(field) ++ lp(scalar_text).
std::string canonical_identity(const IdentityTuple& t);

/// Canonical bytes of every non-identity node of an entity value (plus its
/// root scalar), used for the payload digest.
std::string canonical_payload(const ValueTree& value, const TypeDecl& type);

/// Errors: DDD_NO_ANNOTATION, DDD_IDENTITY_NOT_SCALAR (thrown as DiagnosticError).
IdentityTuple entity_identity(const ValueTree& value, const TypeDecl& type,
                              const TypeLookup& lookup = {});

/// Identity-only equality; non-identity fields are ignored.
bool assert_equals(const ValueTree& a, const ValueTree& b, const TypeDecl& type,
                   const TypeLookup& lookup = {});

/// SHA-256(salt ++ canonical_identity).
EntitySignature entity_signature(const ValueTree& value, const TypeDecl& type,
                                 std::span<const std::uint8_t> salt, const TypeLookup& lookup = {});

struct RegisterAdded {
    EntitySignature signature;
    Digest payload{};
};
struct RegisterUnchanged {
    EntitySignature signature;
};
/// Same identity already registered with a different payload.
struct RegisterConflict {
    EntitySignature signature;
    Digest existingPayload{};
    Digest incomingPayload{};
};

using RegisterOutcome = std::variant<RegisterAdded, RegisterUnchanged, RegisterConflict>;

/// Salted identity signatures mapped to salted payload digests. Raw identity
/// or payload values are never stored. Mutating calls need exclusive access.
class EntityRegistry {
public:
    EntityRegistry() = default;
    explicit EntityRegistry(std::string saltId) : saltId_(std::move(saltId)) {}

    /// Identifier derived from a salt without revealing it.
    static std::string salt_id(std::span<const std::uint8_t> salt);

    RegisterOutcome register_entity(const ValueTree& value, const TypeDecl& type,
                                    std::span<const std::uint8_t> salt,
                                    const TypeLookup& lookup = {});

    std::size_t size() const noexcept { return entries_.size(); }
    std::optional<Digest> payload_of(const Digest& signature) const;
    const std::string& saltId() const noexcept { return saltId_; }

    /// `{"salt_id": ..., "entries": [{"sig": hex64, "payload": hex64}]}`,
    /// entries ordered by signature.
    nlohmann::json to_json() const;
    /// Throws DiagnosticError(REGISTRY_INVALID).
    static EntityRegistry from_json(const nlohmann::json& j);

    friend bool operator==(const EntityRegistry&, const EntityRegistry&) = default;

private:
    std::string saltId_;
    std::map<Digest, Digest> entries_;
};

}  // namespace msadl

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "msadl/behaviour.hpp"
#include "msadl/diagnostic.hpp"

namespace msadl {

// ---------------------------------------------------------------------------
// Shared type system
// ---------------------------------------------------------------------------

/// Double and Void extend the four primitive natives; Void types one-way
/// operations with empty payloads and structure-only roots.
enum class NativeType { Bool, Int, Double, String, Char, Void };

std::string_view to_string(NativeType t);
std::optional<NativeType> native_from_keyword(std::string_view kw);

struct LengthRefinement {
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    friend bool operator==(const LengthRefinement&, const LengthRefinement&) = default;
};
struct RangeRefinement {
    double lo = 0;
    double hi = 0;
    friend bool operator==(const RangeRefinement&, const RangeRefinement&) = default;
};
/// Anchored full-match ECMAScript regular expression.
struct RegexRefinement {
    std::string pattern;
    friend bool operator==(const RegexRefinement&, const RegexRefinement&) = default;
};
struct EnumRefinement {
    std::vector<std::string> values;
    friend bool operator==(const EnumRefinement&, const EnumRefinement&) = default;
};

using Refinement = std::variant<LengthRefinement, RangeRefinement, RegexRefinement, EnumRefinement>;

std::string_view refinement_name(const Refinement& r);

/// Compatibility matrix: Length/Regex/EnumOf on String, Range on Int and
/// Double, nothing on Bool, Char or Void.
bool refinement_compatible(NativeType native, const Refinement& r);

struct BasicType {
    NativeType native = NativeType::Void;
    std::optional<Refinement> refinement;
    friend bool operator==(const BasicType&, const BasicType&) = default;
};

/// Occurrence range of a node. `max == nullopt` is unbounded (`*`).
struct Cardinality {
    std::uint64_t min = 1;
    std::optional<std::uint64_t> max = 1;

    bool is_single() const { return min == 1 && max == 1; }
    bool admits(std::uint64_t count) const { return count >= min && (!max || count <= *max); }
    friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

/// Reference to a named type: a declared TypeDecl (optionally alias-qualified,
/// `Alias::Name`) or a native keyword such as `void` or `string`.
struct TypeRef {
    std::string name;
    SourceLocation loc;
    friend bool operator==(const TypeRef&, const TypeRef&) = default;
};

struct Node;

/// Tree-shaped type: a root basic type plus child nodes.
struct TypeBody {
    BasicType root;
    std::vector<Node> nodes;
    friend bool operator==(const TypeBody&, const TypeBody&) = default;
};

struct Node {
    std::string name;
    Cardinality cardinality;
    std::variant<TypeRef, TypeBody> type;
    SourceLocation loc;
    friend bool operator==(const Node&, const Node&) = default;
};

struct EntityPattern {
    std::vector<std::string> identityFields;
    friend bool operator==(const EntityPattern&, const EntityPattern&) = default;
};

/// DDD pattern annotation carried in a type's doc comment. `raw` holds the
/// normalized annotation text (`@entity { identity = [ SSN, country ] }`).
struct DddAnnotation {
    std::variant<EntityPattern> pattern;
    std::string raw;
    SourceLocation loc;
    friend bool operator==(const DddAnnotation&, const DddAnnotation&) = default;
};

struct TypeDecl {
    std::string name;
    TypeBody body;
    std::vector<DddAnnotation> annotations;
    /// Annotations with unknown names, kept verbatim.
    std::vector<std::string> extraAnnotations;
    std::optional<std::string> doc;
    SourceLocation loc;
    friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

const EntityPattern* entity_pattern(const TypeDecl& t);
const Node* find_node(const TypeBody& body, std::string_view name);

// ---------------------------------------------------------------------------
// APIs
// ---------------------------------------------------------------------------

enum class Paradigm { OneWay, RequestResponse };

struct JolieOperation {
    Paradigm paradigm = Paradigm::OneWay;
    TypeRef request;
    std::optional<TypeRef> response;
    friend bool operator==(const JolieOperation&, const JolieOperation&) = default;
};

enum class Exchange { Incoming, Outgoing };
enum class Communication { Synchronous, Asynchronous };

struct Parameter {
    std::string name;
    Exchange exchange = Exchange::Incoming;
    Communication communication = Communication::Synchronous;
    TypeRef type;
    SourceLocation loc;
    friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct LemmaOperation {
    std::vector<Parameter> parameters;
    friend bool operator==(const LemmaOperation&, const LemmaOperation&) = default;
};

struct OperationSig {
    std::string name;
    std::variant<JolieOperation, LemmaOperation> shape;
    SourceLocation loc;

    bool is_jolie_style() const { return std::holds_alternative<JolieOperation>(shape); }
    friend bool operator==(const OperationSig&, const OperationSig&) = default;
};

struct Interface {
    std::string name;
    std::vector<OperationSig> operations;
    std::optional<std::string> doc;
    SourceLocation loc;

    const OperationSig* find(std::string_view op) const;
    friend bool operator==(const Interface&, const Interface&) = default;
};

// ---------------------------------------------------------------------------
// Jolie view
// ---------------------------------------------------------------------------

enum class PortDirection { Input, Output };

struct Port {
    std::string name;
    PortDirection direction = PortDirection::Input;
    std::string location;
    std::string protocol;
    std::optional<std::string> dataFormat;
    std::vector<std::string> interfaces;
    SourceLocation loc;
    friend bool operator==(const Port&, const Port&) = default;
};

struct JolieServiceModel {
    std::string name;
    std::vector<Port> ports;
    std::optional<Term> behaviour;
    std::optional<std::string> doc;
    SourceLocation loc;

    const Port* find_port(std::string_view name) const;
    friend bool operator==(const JolieServiceModel&, const JolieServiceModel&) = default;
};

// ---------------------------------------------------------------------------
// LEMMA view
// ---------------------------------------------------------------------------

enum class ServiceKind { Functional, Utility, Infrastructure };

std::string_view to_string(ServiceKind k);
std::optional<ServiceKind> service_kind_from_keyword(std::string_view kw);

/// `(technologyModel, name)` pair naming a protocol or data format.
struct TechRef {
    std::string technology;
    std::string name;
    friend bool operator==(const TechRef&, const TechRef&) = default;
};

struct Endpoint {
    std::string name;
    std::string location;
    std::optional<TechRef> protocol;
    std::optional<TechRef> dataFormat;
    std::vector<std::string> interfaces;
    SourceLocation loc;
    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// Dependency on another microservice, `Alias::org.example.Service` or a
/// plain qualified name.
struct RefMicroservice {
    std::string alias;
    std::string qualifiedName;
    SourceLocation loc;
    friend bool operator==(const RefMicroservice&, const RefMicroservice&) = default;
};

/// Behaviour attached to an operation, written in a guest behaviour language
/// and run by a technology (both import aliases). The operation name `main`
/// denotes a service-level behaviour not rooted at a single operation.
struct BehaviourBinding {
    std::string operation;
    std::string language;
    std::string technology;
    Term body;
    std::vector<std::string> extraAnnotations;
    SourceLocation loc;
    friend bool operator==(const BehaviourBinding&, const BehaviourBinding&) = default;
};

inline constexpr std::string_view kServiceBehaviour = "main";

struct LemmaServiceModel {
    std::string qualifiedName;
    /// Set only on extension blocks (`Alias::qualified.Name { ... }`).
    std::string alias;
    /// Extension blocks attach behaviours to a microservice declared elsewhere.
    bool isExtension = false;
    ServiceKind kind = ServiceKind::Functional;
    std::vector<Interface> interfaces;
    std::vector<Endpoint> endpoints;
    std::vector<RefMicroservice> requires_;
    std::vector<BehaviourBinding> behaviourBindings;
    std::optional<std::string> doc;
    SourceLocation loc;

    const Interface* find_interface(std::string_view name) const;
    friend bool operator==(const LemmaServiceModel&, const LemmaServiceModel&) = default;
};

struct ProtocolDecl {
    std::string name;
    std::optional<std::string> defaultFormat;
    friend bool operator==(const ProtocolDecl&, const ProtocolDecl&) = default;
};

struct TechnologyModel {
    std::string name;
    std::vector<ProtocolDecl> protocols;
    std::vector<std::string> dataFormats;
    SourceLocation loc;

    const ProtocolDecl* find_protocol(std::string_view name) const;
    bool has_format(std::string_view name) const;
    friend bool operator==(const TechnologyModel&, const TechnologyModel&) = default;
};

struct MappingEntry {
    std::string serviceRef;
    std::string endpointRef;
    std::string technology;
    std::string protocol;
    std::string format;
    SourceLocation loc;
    friend bool operator==(const MappingEntry&, const MappingEntry&) = default;
};

// ---------------------------------------------------------------------------
// Source units
// ---------------------------------------------------------------------------

enum class View { Jolie, Lemma };

std::string_view to_string(View v);

struct Import {
    std::string kind;
    std::string path;
    std::string alias;
    SourceLocation loc;
    friend bool operator==(const Import&, const Import&) = default;
};

struct SourceUnit {
    std::string path;
    View view = View::Jolie;
    std::vector<Import> imports;
    std::vector<TypeDecl> types;
    std::vector<Interface> interfaces;
    std::vector<JolieServiceModel> services;
    std::vector<TechnologyModel> technologies;
    std::vector<LemmaServiceModel> microservices;
    std::vector<MappingEntry> mappings;
    /// Non-fatal parser findings (unknown annotations). Not part of equality.
    std::vector<Diagnostic> notes;

    bool empty() const;
    friend bool operator==(const SourceUnit& a, const SourceUnit& b) {
        return a.path == b.path && a.view == b.view && a.imports == b.imports && a.types == b.types &&
               a.interfaces == b.interfaces && a.services == b.services &&
               a.technologies == b.technologies && a.microservices == b.microservices &&
               a.mappings == b.mappings;
    }
};

}  // namespace msadl

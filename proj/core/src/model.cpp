#include "msadl/model.hpp"

#include <algorithm>

namespace msadl {

std::string_view to_string(NativeType t) {
    switch (t) {
        case NativeType::Bool: return "bool";
        case NativeType::Int: return "int";
        case NativeType::Double: return "double";
        case NativeType::String: return "string";
        case NativeType::Char: return "char";
        case NativeType::Void: return "void";
    }
    return "void";
}

std::optional<NativeType> native_from_keyword(std::string_view kw) {
    if (kw == "bool") return NativeType::Bool;
    if (kw == "int") return NativeType::Int;
    if (kw == "double") return NativeType::Double;
    if (kw == "string") return NativeType::String;
    if (kw == "char") return NativeType::Char;
    if (kw == "void") return NativeType::Void;
    return std::nullopt;
}

std::string_view refinement_name(const Refinement& r) {
    switch (r.index()) {
        case 0: return "length";
        case 1: return "range";
        case 2: return "regex";
        default: return "enum";
    }
}

bool refinement_compatible(NativeType native, const Refinement& r) {
    if (std::holds_alternative<RangeRefinement>(r)) {
        return native == NativeType::Int || native == NativeType::Double;
    }
    return native == NativeType::String;
}

const EntityPattern* entity_pattern(const TypeDecl& t) {
    for (const auto& a : t.annotations) {
        if (const auto* e = std::get_if<EntityPattern>(&a.pattern)) return e;
    }
    return nullptr;
}

const Node* find_node(const TypeBody& body, std::string_view name) {
    auto it = std::find_if(body.nodes.begin(), body.nodes.end(),
                           [&](const Node& n) { return n.name == name; });
    return it == body.nodes.end() ? nullptr : &*it;
}

const OperationSig* Interface::find(std::string_view op) const {
    auto it = std::find_if(operations.begin(), operations.end(),
                           [&](const OperationSig& o) { return o.name == op; });
    return it == operations.end() ? nullptr : &*it;
}

const Port* JolieServiceModel::find_port(std::string_view portName) const {
    auto it = std::find_if(ports.begin(), ports.end(), [&](const Port& p) { return p.name == portName; });
    return it == ports.end() ? nullptr : &*it;
}

std::string_view to_string(ServiceKind k) {
    switch (k) {
        case ServiceKind::Functional: return "functional";
        case ServiceKind::Utility: return "utility";
        case ServiceKind::Infrastructure: return "infrastructure";
    }
    return "functional";
}

std::optional<ServiceKind> service_kind_from_keyword(std::string_view kw) {
    if (kw == "functional") return ServiceKind::Functional;
    if (kw == "utility") return ServiceKind::Utility;
    if (kw == "infrastructure") return ServiceKind::Infrastructure;
    return std::nullopt;
}

const Interface* LemmaServiceModel::find_interface(std::string_view ifaceName) const {
    auto it = std::find_if(interfaces.begin(), interfaces.end(),
                           [&](const Interface& i) { return i.name == ifaceName; });
    return it == interfaces.end() ? nullptr : &*it;
}

const ProtocolDecl* TechnologyModel::find_protocol(std::string_view protocolName) const {
    auto it = std::find_if(protocols.begin(), protocols.end(),
                           [&](const ProtocolDecl& p) { return p.name == protocolName; });
    return it == protocols.end() ? nullptr : &*it;
}

bool TechnologyModel::has_format(std::string_view formatName) const {
    return std::find(dataFormats.begin(), dataFormats.end(), formatName) != dataFormats.end();
}

std::string_view to_string(View v) { return v == View::Jolie ? "jolie" : "lemma"; }

bool SourceUnit::empty() const {
    return imports.empty() && types.empty() && interfaces.empty() && services.empty() &&
           technologies.empty() && microservices.empty() && mappings.empty();
}

}  // namespace msadl

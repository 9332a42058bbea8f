#include "msadl/checker.hpp"

#include <algorithm>
#include <map>
#include <regex>

namespace msadl {

std::string_view to_string(ViolationRule r) {
    switch (r) {
        case ViolationRule::NativeMismatch: return "native_mismatch";
        case ViolationRule::RefinementViolated: return "refinement_violated";
        case ViolationRule::CardinalityViolated: return "cardinality_violated";
        case ViolationRule::UnknownNode: return "unknown_node";
    }
    return "native_mismatch";
}

namespace {

const std::regex& compiled(const std::string& pattern) {
    thread_local std::map<std::string, std::regex> cache;
    auto it = cache.find(pattern);
    if (it == cache.end()) {
        try {
            it = cache.emplace(pattern, std::regex(pattern, std::regex::ECMAScript)).first;
        } catch (const std::regex_error&) {
            throw DiagnosticError(make_error(codes::RefinementInvalid, "regex '" + pattern + "' does not compile"));
        }
    }
    return it->second;
}

[[noreturn]] void incompatible(const Scalar& value, const Refinement& r) {
    throw DiagnosticError(make_error(codes::RefinementIncompatible,
                                     std::string(refinement_name(r)) + " refinement cannot apply to a " +
                                         std::string(to_string(kind_of(value))) + " value"));
}

bool kind_matches(NativeType native, ScalarKind kind) {
    switch (native) {
        case NativeType::Bool: return kind == ScalarKind::Bool;
        case NativeType::Int: return kind == ScalarKind::Int;
        case NativeType::Double: return kind == ScalarKind::Double;
        case NativeType::String: return kind == ScalarKind::String;
        case NativeType::Char: return kind == ScalarKind::Char;
        case NativeType::Void: return kind == ScalarKind::Unit;
    }
    return false;
}

std::string join_path(const std::string& prefix, const std::string& seg) {
    return prefix.empty() ? seg : prefix + "." + seg;
}

struct Checker {
    const TypeLookup& lookup;
    std::vector<Violation>& out;

    void body(const ValueTree& v, const TypeBody& t, const std::string& path) {
        ScalarKind kind = kind_of(v.root);
        if (!kind_matches(t.root.native, kind)) {
            out.push_back({path, ViolationRule::NativeMismatch,
                           "expected " + std::string(to_string(t.root.native)) + ", found " +
                               std::string(to_string(kind))});
        } else if (t.root.refinement && !check_refinement(v.root, *t.root.refinement)) {
            out.push_back({path, ViolationRule::RefinementViolated,
                           scalar_literal(v.root) + " violates " + std::string(refinement_name(*t.root.refinement))});
        }
        for (const auto& n : t.nodes) {
            auto it = v.children.find(n.name);
            std::size_t count = it == v.children.end() ? 0 : it->second.size();
            std::string nodePath = join_path(path, n.name);
            if (!n.cardinality.admits(count)) {
                std::string range = "[" + std::to_string(n.cardinality.min) + "," +
                                    (n.cardinality.max ? std::to_string(*n.cardinality.max) : "*") + "]";
                out.push_back({nodePath, ViolationRule::CardinalityViolated,
                               std::to_string(count) + " occurrence(s), expected " + range});
            }
            if (it == v.children.end()) continue;
            const TypeBody* nodeType = nullptr;
            if (const auto* inner = std::get_if<TypeBody>(&n.type)) {
                nodeType = inner;
            } else {
                const auto& ref = std::get<TypeRef>(n.type);
                const TypeDecl* decl = lookup ? lookup(ref.name) : nullptr;
                if (!decl) {
                    if (auto native = native_from_keyword(ref.name)) decl = builtin_type(*native);
                }
                if (!decl) {
                    throw DiagnosticError(
                        make_error(codes::RefUnresolved, "type '" + ref.name + "' is not declared", ref.loc));
                }
                nodeType = &decl->body;
            }
            bool single = n.cardinality.max == std::optional<std::uint64_t>(1);
            for (std::size_t i = 0; i < it->second.size(); ++i) {
                std::string elemPath = single ? nodePath : nodePath + "[" + std::to_string(i) + "]";
                body(it->second[i], *nodeType, elemPath);
            }
        }
        for (const auto& [name, list] : v.children) {
            if (!find_node(t, name)) {
                out.push_back({join_path(path, name), ViolationRule::UnknownNode, "node is not declared by the type"});
            }
        }
    }
};

}  // namespace

bool check_refinement(const Scalar& value, const Refinement& refinement) {
    if (const auto* l = std::get_if<LengthRefinement>(&refinement)) {
        const auto* s = std::get_if<std::string>(&value);
        if (!s) incompatible(value, refinement);
        std::size_t n = utf8_length(*s);
        return n >= l->min && n <= l->max;
    }
    if (const auto* g = std::get_if<RangeRefinement>(&refinement)) {
        double x = 0;
        if (const auto* i = std::get_if<std::int64_t>(&value)) {
            x = static_cast<double>(*i);
        } else if (const auto* d = std::get_if<double>(&value)) {
            x = *d;
        } else {
            incompatible(value, refinement);
        }
        return x >= g->lo && x <= g->hi;
    }
    const auto* s = std::get_if<std::string>(&value);
    if (!s) incompatible(value, refinement);
    if (const auto* x = std::get_if<RegexRefinement>(&refinement)) {
        return std::regex_match(*s, compiled(x->pattern));
    }
    const auto& e = std::get<EnumRefinement>(refinement);
    return std::find(e.values.begin(), e.values.end(), *s) != e.values.end();
}

CheckReport check_value(const ValueTree& value, const TypeBody& type, const TypeLookup& lookup) {
    CheckReport report;
    Checker{lookup, report.violations}.body(value, type, "");
    report.ok = report.violations.empty();
    return report;
}

CheckReport check_value(const ValueTree& value, const TypeDecl& type, const TypeLookup& lookup) {
    return check_value(value, type.body, lookup);
}

CheckReport check_value(const ValueTree& value, const TypeDecl& type) {
    return check_value(value, type.body, TypeLookup{});
}

}  // namespace msadl

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "msadl/diagnostic.hpp"
#include "msadl/model.hpp"

namespace msadl {

/// Exactly one of `unit` (success) or a non-empty error list is set.
struct ParseResult {
    std::optional<SourceUnit> unit;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return unit.has_value(); }
};

/// `.jsm` is the Jolie view, `.lsm` the LEMMA view.
std::optional<View> view_from_path(std::string_view path);

/// Parses one unit. The view comes from `view` when given; a leading
/// `view jolie|lemma` header must agree with it, and decides when `view` is
/// empty (default Jolie). Input must be UTF-8; LF and CRLF are accepted.
ParseResult parse_unit(std::string_view text, std::optional<View> view, std::string path = {});

struct TypeExprResult {
    std::optional<std::variant<TypeRef, TypeBody>> type;
    std::vector<Diagnostic> diagnostics;
};

/// Parses a type expression such as `string( length(3) )`, `int`,
/// `void { a: int }` or a type name. A basic type comes back as a TypeBody
/// with no nodes.
TypeExprResult parse_type_expr(std::string_view text);

struct BehaviourParseResult {
    std::optional<Term> term;
    std::vector<Diagnostic> diagnostics;
};

BehaviourParseResult parse_behaviour(std::string_view text);

/// `@name`, `@name(a, b)` or `@name { key = value, ... }`. Positional
/// arguments are keyed "0", "1", ...; values are identifiers (strings),
/// string/number/bool literals, lists and nested `{ k = v }` objects.
struct AnnotationToken {
    std::string name;
    nlohmann::json arguments = nlohmann::json::object();
};

struct AnnotationParseResult {
    std::optional<AnnotationToken> annotation;
    std::vector<Diagnostic> diagnostics;
};

AnnotationParseResult parse_annotation(std::string_view text);

}  // namespace msadl

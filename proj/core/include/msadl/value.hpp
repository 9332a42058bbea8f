#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace msadl {

/// Single character scalar; distinct from a one-character string.
struct Char {
    char32_t value = 0;
    friend auto operator<=>(const Char&, const Char&) = default;
};

struct Unit {
    friend auto operator<=>(const Unit&, const Unit&) = default;
};

/// Root value of a tree: unit, bool, int, double, string or char. Kinds are
/// explicit; an int is never silently a double.
using Scalar = std::variant<Unit, bool, std::int64_t, double, std::string, Char>;

enum class ScalarKind { Unit, Bool, Int, Double, String, Char };

ScalarKind kind_of(const Scalar& s);
std::string_view to_string(ScalarKind k);

/// Canonical text of a scalar: `true`, `42`, shortest round-trip double,
/// raw string bytes, the UTF-8 encoding of a char, empty for unit.
std::string scalar_text(const Scalar& s);

/// Human/DSL rendering: strings and chars quoted and escaped.
std::string scalar_literal(const Scalar& s);

struct ValueTree {
    Scalar root = Unit{};
    std::map<std::string, std::vector<ValueTree>> children;

    friend bool operator==(const ValueTree&, const ValueTree&) = default;
};

/// JSON encoding `{"$": <scalar>, "children": {name: [subtrees]}}`. Both keys
/// are optional (missing `$` is unit). Chars are `{"char": "c"}`.
nlohmann::json to_json(const ValueTree& v);
nlohmann::json scalar_to_json(const Scalar& s);

/// Throws DiagnosticError(VALUE_INVALID) on malformed input.
ValueTree value_from_json(const nlohmann::json& j);
Scalar scalar_from_json(const nlohmann::json& j);
ValueTree parse_value_json(std::string_view text);

/// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);
std::string utf8_encode(char32_t cp);
bool utf8_valid(std::string_view s);
/// Decodes the code point at `i` and advances past it; false if malformed.
bool utf8_decode_one(std::string_view s, std::size_t& i, char32_t& cp);

}  // namespace msadl

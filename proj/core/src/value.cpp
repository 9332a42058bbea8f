#include "msadl/value.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "msadl/diagnostic.hpp"

namespace msadl {

namespace {

[[noreturn]] void invalid(std::string message) {
    throw DiagnosticError(make_error(codes::ValueInvalid, std::move(message)));
}

std::string double_text(double d) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, res.ptr);
}

std::string escape(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c < 0x20) {
                    static const char* hex = "0123456789abcdef";
                    out += "\\u00";
                    out += hex[c >> 4];
                    out += hex[c & 0xf];
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

}  // namespace

bool utf8_decode_one(std::string_view s, std::size_t& i, char32_t& cp) {
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char c = byte(i);
    int extra = 0;
    if (c < 0x80) {
        cp = c;
    } else if ((c & 0xE0) == 0xC0) {
        cp = c & 0x1F;
        extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
        cp = c & 0x0F;
        extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
        cp = c & 0x07;
        extra = 3;
    } else {
        return false;
    }
    if (i + extra >= s.size() && extra > 0) return false;
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = byte(i + k);
        if ((cc & 0xC0) != 0x80) return false;
        cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr char32_t minimum[] = {0, 0x80, 0x800, 0x10000};
    if (cp < minimum[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
    return true;
}

ScalarKind kind_of(const Scalar& s) { return static_cast<ScalarKind>(s.index()); }

std::string_view to_string(ScalarKind k) {
    switch (k) {
        case ScalarKind::Unit: return "void";
        case ScalarKind::Bool: return "bool";
        case ScalarKind::Int: return "int";
        case ScalarKind::Double: return "double";
        case ScalarKind::String: return "string";
        case ScalarKind::Char: return "char";
    }
    return "void";
}

std::string scalar_text(const Scalar& s) {
    struct V {
        std::string operator()(Unit) const { return {}; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return double_text(d); }
        std::string operator()(const std::string& str) const { return str; }
        std::string operator()(Char c) const { return utf8_encode(c.value); }
    };
    return std::visit(V{}, s);
}

std::string scalar_literal(const Scalar& s) {
    struct V {
        std::string operator()(Unit) const { return "void"; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const {
            std::string t = double_text(d);
            if (t.find_first_of(".eEni") == std::string::npos) t += ".0";
            return t;
        }
        std::string operator()(const std::string& str) const { return '"' + escape(str) + '"'; }
        std::string operator()(Char c) const {
            std::string enc = utf8_encode(c.value);
            if (enc == "'") return "'\\''";
            return "'" + escape(enc) + "'";
        }
    };
    return std::visit(V{}, s);
}

nlohmann::json scalar_to_json(const Scalar& s) {
    struct V {
        nlohmann::json operator()(Unit) const { return nullptr; }
        nlohmann::json operator()(bool b) const { return b; }
        nlohmann::json operator()(std::int64_t i) const { return i; }
        nlohmann::json operator()(double d) const { return d; }
        nlohmann::json operator()(const std::string& str) const { return str; }
        nlohmann::json operator()(Char c) const { return {{"char", utf8_encode(c.value)}}; }
    };
    return std::visit(V{}, s);
}

nlohmann::json to_json(const ValueTree& v) {
    nlohmann::json j = nlohmann::json::object();
    j["$"] = scalar_to_json(v.root);
    if (!v.children.empty()) {
        nlohmann::json children = nlohmann::json::object();
        for (const auto& [name, list] : v.children) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& child : list) arr.push_back(to_json(child));
            children[name] = std::move(arr);
        }
        j["children"] = std::move(children);
    }
    return j;
}

Scalar scalar_from_json(const nlohmann::json& j) {
    if (j.is_null()) return Unit{};
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_unsigned()) {
        auto u = j.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            invalid("integer out of range");
        }
        return static_cast<std::int64_t>(u);
    }
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.size() == 1 && j.contains("char") && j["char"].is_string()) {
        const auto& text = j["char"].get_ref<const std::string&>();
        std::size_t i = 0;
        char32_t cp = 0;
        if (text.empty() || !utf8_decode_one(text, i, cp) || i != text.size()) {
            invalid("char scalar must hold exactly one character");
        }
        return Char{cp};
    }
    invalid("unsupported scalar encoding: " + j.dump());
}

ValueTree value_from_json(const nlohmann::json& j) {
    if (!j.is_object()) invalid("value tree must be a JSON object");
    ValueTree v;
    for (const auto& [key, item] : j.items()) {
        if (key == "$") {
            v.root = scalar_from_json(item);
        } else if (key == "children") {
            if (!item.is_object()) invalid("\"children\" must be an object");
            for (const auto& [name, list] : item.items()) {
                if (!list.is_array()) invalid("children of \"" + name + "\" must be an array");
                auto& out = v.children[name];
                for (const auto& child : list) out.push_back(value_from_json(child));
            }
        } else {
            invalid("unknown key \"" + key + "\" in value tree");
        }
    }
    return v;
}

ValueTree parse_value_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        invalid(std::string("malformed JSON: ") + e.what());
    }
    return value_from_json(j);
}

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string utf8_encode(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

bool utf8_valid(std::string_view s) {
    std::size_t i = 0;
    char32_t cp = 0;
    while (i < s.size()) {
        if (!utf8_decode_one(s, i, cp)) return false;
    }
    return true;
}

}  // namespace msadl

#include "msadl/parser.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "lexer.hpp"
#include "msadl/printer.hpp"
#include "msadl/value.hpp"

namespace msadl {

namespace {

using detail::Token;
using detail::TokenKind;

struct ParseFailure {
    Diagnostic diag;
};

[[noreturn]] void fail(std::string_view code, std::string message, const SourceLocation& loc) {
    throw ParseFailure{make_error(code, std::move(message), loc)};
}

bool is_reserved_word(std::string_view w) {
    return w == "true" || w == "false" || w == "void" || w == "nil";
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string file, std::string_view source)
        : toks_(std::move(tokens)), file_(std::move(file)), source_(source) {}

    // ----- token cursor ----------------------------------------------------

    const Token& cur() const { return peek_at(0); }
    const Token& peek_at(std::size_t ahead) const {
        std::size_t i = pos_;
        std::size_t seen = 0;
        while (i < toks_.size() - 1) {
            if (toks_[i].kind != TokenKind::DocComment) {
                if (seen == ahead) return toks_[i];
                ++seen;
            }
            ++i;
        }
        return toks_.back();
    }
    Token take() {
        skip_docs();
        Token t = toks_[pos_];
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    void skip_docs() {
        while (toks_[pos_].kind == TokenKind::DocComment) ++pos_;
    }
    std::vector<Token> take_docs() {
        std::vector<Token> docs;
        while (toks_[pos_].kind == TokenKind::DocComment) docs.push_back(toks_[pos_++]);
        return docs;
    }
    bool at_end() { return cur().kind == TokenKind::End; }

    [[noreturn]] void expected(std::vector<std::string> what) {
        std::sort(what.begin(), what.end());
        what.erase(std::unique(what.begin(), what.end()), what.end());
        const Token& t = cur();
        std::string msg = what.size() == 1 ? "expected " + what[0]
                                           : "expected one of " + join(what, ", ");
        msg += "; found " + detail::describe(t);
        fail(codes::ParseError, msg, t.loc);
    }

    bool accept_punct(std::string_view p) {
        if (cur().punct(p)) {
            take();
            return true;
        }
        return false;
    }
    bool accept_ident(std::string_view kw) {
        if (cur().ident(kw)) {
            take();
            return true;
        }
        return false;
    }
    Token expect_punct(std::string_view p) {
        if (!cur().punct(p)) expected({"'" + std::string(p) + "'"});
        return take();
    }
    Token expect_keyword(std::string_view kw) {
        if (!cur().ident(kw)) expected({"'" + std::string(kw) + "'"});
        return take();
    }
    Token expect_identifier(std::string_view what = "identifier") {
        if (cur().kind != TokenKind::Identifier) expected({std::string(what)});
        return take();
    }
    Token expect_string() {
        if (cur().kind != TokenKind::String) expected({"string literal"});
        return take();
    }

    std::string qualified_name(SourceLocation* loc = nullptr) {
        Token first = expect_identifier("qualified name");
        if (loc) *loc = first.loc;
        std::string name = first.text;
        while (cur().punct(".") && peek_at(1).kind == TokenKind::Identifier) {
            take();
            name += '.' + take().text;
        }
        if (loc) loc->endColumn = toks_[pos_ == 0 ? 0 : pos_ - 1].loc.endColumn;
        return name;
    }

    std::uint64_t expect_natural() {
        if (cur().kind != TokenKind::Integer) expected({"non-negative integer"});
        Token t = take();
        std::uint64_t v = 0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc{}) fail(codes::ParseError, "integer out of range", t.loc);
        return v;
    }

    double expect_number() {
        bool negative = accept_punct("-");
        if (!negative) accept_punct("+");
        if (cur().kind != TokenKind::Integer && cur().kind != TokenKind::Double) expected({"number"});
        Token t = take();
        double v = 0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc{}) fail(codes::ParseError, "number out of range", t.loc);
        return negative ? -v : v;
    }

    // ----- units -----------------------------------------------------------

    SourceUnit parse_unit(std::optional<View> requested) {
        SourceUnit unit;
        unit.path = file_;
        unit.view = requested.value_or(View::Jolie);
        if (cur().ident("view") && peek_at(1).kind == TokenKind::Identifier) {
            Token kw = take();
            Token which = take();
            View declared;
            if (which.text == "jolie") {
                declared = View::Jolie;
            } else if (which.text == "lemma") {
                declared = View::Lemma;
            } else {
                fail(codes::ParseError, "expected 'jolie' or 'lemma' after 'view'", which.loc);
            }
            if (requested && *requested != declared) {
                fail(codes::ParseError,
                     "view header '" + which.text + "' contradicts the file's " +
                         std::string(to_string(*requested)) + " view",
                     which.loc);
            }
            unit.view = declared;
            (void)kw;
        }
        view_ = unit.view;
        while (true) {
            std::vector<Token> docs = take_docs();
            const Token& t = cur();
            if (t.kind == TokenKind::End) break;
            if (t.ident("import")) {
                unit.imports.push_back(parse_import());
            } else if (t.ident("type")) {
                unit.types.push_back(parse_type_decl(docs, unit.notes));
            } else if (view_ == View::Jolie && t.ident("interface")) {
                unit.interfaces.push_back(parse_jolie_interface(docs));
            } else if (view_ == View::Jolie && t.ident("service")) {
                unit.services.push_back(parse_service(docs));
            } else if (view_ == View::Lemma && t.ident("technology")) {
                unit.technologies.push_back(parse_technology());
            } else if (view_ == View::Lemma && t.ident("map")) {
                unit.mappings.push_back(parse_mapping());
            } else if (view_ == View::Lemma && t.ident("microservice")) {
                unit.microservices.push_back(parse_microservice(docs, unit.notes));
            } else if (view_ == View::Lemma && (t.punct("@") || t.kind == TokenKind::Identifier)) {
                unit.microservices.push_back(parse_extension_block(docs, unit.notes));
            } else if (view_ == View::Jolie) {
                expected({"'import'", "'type'", "'interface'", "'service'"});
            } else {
                expected({"'import'", "'type'", "'technology'", "'map'", "'microservice'", "'@'"});
            }
        }
        return unit;
    }

    Import parse_import() {
        expect_keyword("import");
        Import imp;
        Token kind = expect_identifier("import kind");
        imp.kind = kind.text;
        imp.loc = kind.loc;
        expect_keyword("from");
        imp.path = expect_string().text;
        if (accept_ident("as")) imp.alias = expect_identifier("alias").text;
        return imp;
    }

    // ----- types -----------------------------------------------------------

    TypeDecl parse_type_decl(const std::vector<Token>& docs, std::vector<Diagnostic>& notes) {
        expect_keyword("type");
        TypeDecl decl;
        Token name = expect_identifier("type name");
        decl.name = name.text;
        decl.loc = name.loc;
        attach_type_docs(decl, docs, notes);
        decl.body.root = BasicType{NativeType::Void, std::nullopt};
        if (accept_punct(":")) decl.body.root = parse_basic_type();
        if (cur().punct("{")) decl.body.nodes = parse_nodes();
        return decl;
    }

    BasicType parse_basic_type() {
        const Token& t = cur();
        std::optional<NativeType> native;
        if (t.kind == TokenKind::Identifier) native = native_from_keyword(t.text);
        if (!native) expected({"native type"});
        Token kw = take();
        BasicType bt{*native, std::nullopt};
        if (cur().punct("(")) {
            take();
            SourceLocation refLoc = cur().loc;
            bt.refinement = parse_refinement();
            expect_punct(")");
            if (!refinement_compatible(bt.native, *bt.refinement)) {
                fail(codes::RefinementIncompatible,
                     std::string(refinement_name(*bt.refinement)) + " refinement cannot apply to " +
                         std::string(to_string(bt.native)),
                     refLoc);
            }
        }
        (void)kw;
        return bt;
    }

    Refinement parse_refinement() {
        const Token& t = cur();
        if (t.ident("length")) {
            take();
            expect_punct("(");
            LengthRefinement r;
            r.min = expect_natural();
            r.max = accept_punct(",") ? expect_natural() : r.min;
            expect_punct(")");
            return r;
        }
        if (t.ident("range")) {
            take();
            expect_punct("(");
            RangeRefinement r;
            r.lo = expect_number();
            expect_punct(",");
            r.hi = expect_number();
            expect_punct(")");
            return r;
        }
        if (t.ident("regex")) {
            take();
            expect_punct("(");
            RegexRefinement r{expect_string().text};
            expect_punct(")");
            return r;
        }
        if (t.ident("enum")) {
            take();
            expect_punct("(");
            EnumRefinement r;
            r.values.push_back(expect_string().text);
            while (accept_punct(",")) r.values.push_back(expect_string().text);
            expect_punct(")");
            return r;
        }
        expected({"'length'", "'range'", "'regex'", "'enum'"});
    }

    std::vector<Node> parse_nodes() {
        expect_punct("{");
        std::vector<Node> nodes;
        while (!cur().punct("}")) {
            nodes.push_back(parse_node());
            if (!accept_punct(",") && !cur().punct("}") && cur().kind != TokenKind::Identifier) {
                expected({"','", "'}'", "node name"});
            }
        }
        expect_punct("}");
        return nodes;
    }

    Node parse_node() {
        Node n;
        Token name = expect_identifier("node name");
        n.name = name.text;
        n.loc = name.loc;
        if (accept_punct("[")) {
            n.cardinality.min = expect_natural();
            expect_punct(",");
            if (accept_punct("*")) {
                n.cardinality.max = std::nullopt;
            } else if (cur().kind == TokenKind::Integer) {
                n.cardinality.max = expect_natural();
            } else {
                expected({"non-negative integer", "'*'"});
            }
            expect_punct("]");
        }
        expect_punct(":");
        n.type = parse_type_expr();
        return n;
    }

    std::variant<TypeRef, TypeBody> parse_type_expr() {
        const Token& t = cur();
        if (t.kind != TokenKind::Identifier) expected({"type"});
        if (native_from_keyword(t.text)) {
            TypeBody body;
            body.root = parse_basic_type();
            if (cur().punct("{")) body.nodes = parse_nodes();
            return body;
        }
        return parse_type_ref();
    }

    TypeRef parse_type_ref() {
        TypeRef ref;
        Token first = expect_identifier("type name");
        ref.loc = first.loc;
        ref.name = first.text;
        if (accept_punct("::")) ref.name += "::" + expect_identifier("type name").text;
        return ref;
    }

    // ----- annotations in type doc comments ----------------------------------

    void attach_type_docs(TypeDecl& decl, const std::vector<Token>& docs, std::vector<Diagnostic>& notes) {
        std::vector<std::string> text;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            const Token& d = docs[i];
            std::string_view line = d.text;
            if (line.empty() || line.front() != '@') {
                text.push_back(d.text);
                continue;
            }
            // An annotation continues over following doc lines until braces balance.
            std::string raw = d.text;
            int depth = brace_depth(raw);
            while (depth > 0 && i + 1 < docs.size()) {
                ++i;
                raw += ' ' + docs[i].text;
                depth = brace_depth(raw);
            }
            apply_type_annotation(decl, raw, d.loc, notes);
        }
        if (!text.empty()) decl.doc = join(text, "\n");
    }

    static int brace_depth(std::string_view s) {
        int depth = 0;
        bool inString = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (inString) {
                if (c == '\\') ++i;
                else if (c == '"') inString = false;
            } else if (c == '"') {
                inString = true;
            } else if (c == '{' || c == '[' || c == '(') {
                ++depth;
            } else if (c == '}' || c == ']' || c == ')') {
                --depth;
            }
        }
        return depth;
    }

    void apply_type_annotation(TypeDecl& decl, const std::string& raw, const SourceLocation& loc,
                               std::vector<Diagnostic>& notes);

    // ----- Jolie view --------------------------------------------------------

    std::optional<std::string> plain_doc(const std::vector<Token>& docs) {
        if (docs.empty()) return std::nullopt;
        std::vector<std::string> lines;
        for (const auto& d : docs) lines.push_back(d.text);
        return join(lines, "\n");
    }

    Interface parse_jolie_interface(const std::vector<Token>& docs) {
        expect_keyword("interface");
        Interface iface;
        Token name = expect_identifier("interface name");
        iface.name = name.text;
        iface.loc = name.loc;
        iface.doc = plain_doc(docs);
        expect_punct("{");
        while (!cur().punct("}")) {
            OperationSig op;
            JolieOperation shape;
            if (accept_ident("oneWay")) {
                shape.paradigm = Paradigm::OneWay;
            } else if (accept_ident("requestResponse")) {
                shape.paradigm = Paradigm::RequestResponse;
            } else {
                expected({"'oneWay'", "'requestResponse'", "'}'"});
            }
            Token opName = expect_identifier("operation name");
            op.name = opName.text;
            op.loc = opName.loc;
            expect_punct("(");
            shape.request = parse_type_ref();
            expect_punct(")");
            if (shape.paradigm == Paradigm::RequestResponse) {
                expect_punct("->");
                shape.response = parse_type_ref();
            }
            op.shape = std::move(shape);
            iface.operations.push_back(std::move(op));
            accept_punct(",");
        }
        expect_punct("}");
        return iface;
    }

    JolieServiceModel parse_service(const std::vector<Token>& docs) {
        expect_keyword("service");
        JolieServiceModel svc;
        Token name = expect_identifier("service name");
        svc.name = name.text;
        svc.loc = name.loc;
        svc.doc = plain_doc(docs);
        expect_punct("{");
        while (!cur().punct("}")) {
            if (cur().ident("inputPort") || cur().ident("outputPort")) {
                svc.ports.push_back(parse_port());
            } else if (cur().ident("main")) {
                Token mainKw = take();
                if (svc.behaviour) fail(codes::ParseError, "duplicate 'main' block", mainKw.loc);
                svc.behaviour = parse_braced_behaviour();
            } else {
                expected({"'inputPort'", "'outputPort'", "'main'", "'}'"});
            }
        }
        expect_punct("}");
        return svc;
    }

    Port parse_port() {
        Port port;
        Token kw = take();
        port.direction = kw.text == "inputPort" ? PortDirection::Input : PortDirection::Output;
        Token name = expect_identifier("port name");
        port.name = name.text;
        port.loc = name.loc;
        expect_punct("{");
        std::set<std::string> seen;
        while (!cur().punct("}")) {
            const Token& key = cur();
            if (key.kind != TokenKind::Identifier ||
                (key.text != "location" && key.text != "protocol" && key.text != "format" &&
                 key.text != "interfaces")) {
                expected({"'location'", "'protocol'", "'format'", "'interfaces'", "'}'"});
            }
            Token k = take();
            if (!seen.insert(k.text).second) fail(codes::ParseError, "duplicate port field '" + k.text + "'", k.loc);
            expect_punct(":");
            if (k.text == "location") {
                port.location = expect_string().text;
            } else if (k.text == "protocol") {
                port.protocol = expect_identifier("protocol name").text;
            } else if (k.text == "format") {
                port.dataFormat = expect_identifier("format name").text;
            } else {
                port.interfaces.push_back(expect_identifier("interface name").text);
                while (accept_punct(",")) port.interfaces.push_back(expect_identifier("interface name").text);
            }
        }
        for (const char* required : {"location", "protocol"}) {
            if (!seen.count(required)) {
                fail(codes::ParseError, "port '" + port.name + "' lacks '" + required + ":'", cur().loc);
            }
        }
        expect_punct("}");
        return port;
    }

    // ----- behaviours --------------------------------------------------------

    Term parse_braced_behaviour() {
        expect_punct("{");
        if (accept_punct("}")) return nil_term();
        Term t = parse_parallel();
        expect_punct("}");
        return t;
    }

    Term parse_parallel() {
        Term left = parse_sequence();
        if (cur().punct("|")) {
            SourceLocation loc = take().loc;
            Term right = parse_parallel();
            Term t = parallel(std::move(left), std::move(right));
            t.loc = loc;
            return t;
        }
        return left;
    }

    Term parse_sequence() {
        Term first = parse_primary_term();
        if (cur().punct(";")) {
            SourceLocation loc = take().loc;
            Term rest = parse_sequence();
            Term t = sequence(std::move(first), std::move(rest));
            t.loc = loc;
            return t;
        }
        return first;
    }

    Term parse_primary_term() {
        const Token& t = cur();
        if (t.ident("nil")) {
            Term n = nil_term();
            n.loc = take().loc;
            return n;
        }
        if (t.punct("(")) {
            take();
            Term inner = parse_parallel();
            expect_punct(")");
            return inner;
        }
        if (t.ident("replicate")) {
            SourceLocation loc = take().loc;
            Token op = expect_identifier("operation name");
            expect_punct("(");
            Token var = expect_variable();
            expect_punct(")");
            std::optional<Expr> reply;
            if (accept_punct("(")) {
                reply = parse_expr();
                expect_punct(")");
            }
            Term body = cur().punct("{") ? parse_braced_behaviour() : nil_term();
            Term r = replicate(op.text, var.text, std::move(body), std::move(reply));
            r.loc = loc;
            return r;
        }
        if (t.kind == TokenKind::Identifier && !is_reserved_word(t.text)) {
            Token op = take();
            if (accept_punct("@")) {
                Token port = expect_identifier("output port name");
                expect_punct("(");
                Expr payload = cur().punct(")") ? literal(Unit{}) : parse_expr();
                expect_punct(")");
                std::optional<std::string> responseVar;
                if (accept_punct("(")) {
                    responseVar = expect_variable().text;
                    expect_punct(")");
                }
                Term inv = invoke(port.text, op.text, std::move(payload), std::move(responseVar));
                inv.loc = op.loc;
                return inv;
            }
            expect_punct("(");
            Token var = expect_variable();
            expect_punct(")");
            std::optional<Expr> reply;
            if (accept_punct("(")) {
                reply = parse_expr();
                expect_punct(")");
            }
            Term body = cur().punct("{") ? parse_braced_behaviour() : nil_term();
            Term rcv = receive(op.text, var.text, std::move(body), std::move(reply));
            rcv.loc = op.loc;
            return rcv;
        }
        expected({"'nil'", "'('", "'replicate'", "operation name"});
    }

    Token expect_variable() {
        if (cur().kind != TokenKind::Identifier || is_reserved_word(cur().text)) expected({"variable name"});
        return take();
    }

    Expr parse_expr() {
        Expr e = parse_primary_expr();
        while (cur().punct(".") && peek_at(1).kind == TokenKind::Identifier) {
            take();
            Token f = take();
            SourceLocation loc = e.loc;
            e = field(std::move(e), f.text);
            e.loc = loc;
        }
        return e;
    }

    Expr parse_primary_expr() {
        const Token& t = cur();
        Expr e;
        e.loc = t.loc;
        switch (t.kind) {
            case TokenKind::String:
                e.node = LiteralExpr{take().text};
                return e;
            case TokenKind::Char: {
                Token c = take();
                std::size_t i = 0;
                char32_t cp = 0;
                utf8_decode_one(c.text, i, cp);
                e.node = LiteralExpr{Char{cp}};
                return e;
            }
            case TokenKind::Integer:
            case TokenKind::Double:
                e.node = LiteralExpr{number_literal(false)};
                return e;
            case TokenKind::Punct:
                if (t.punct("-")) {
                    take();
                    e.node = LiteralExpr{number_literal(true)};
                    return e;
                }
                if (t.punct("{")) {
                    take();
                    TreeExpr tree;
                    while (!cur().punct("}")) {
                        Token name = expect_identifier("field name");
                        expect_punct(":");
                        tree.fields.emplace_back(name.text, Box<Expr>(parse_expr()));
                        if (!accept_punct(",")) break;
                    }
                    expect_punct("}");
                    e.node = std::move(tree);
                    return e;
                }
                break;
            case TokenKind::Identifier:
                if (t.text == "true" || t.text == "false") {
                    e.node = LiteralExpr{take().text == "true"};
                    return e;
                }
                if (t.text == "void") {
                    take();
                    e.node = LiteralExpr{Unit{}};
                    return e;
                }
                if (t.text != "nil") {
                    e.node = VariableExpr{take().text};
                    return e;
                }
                break;
            default: break;
        }
        expected({"literal", "variable", "'{'"});
    }

    Scalar number_literal(bool negative) {
        if (cur().kind != TokenKind::Integer && cur().kind != TokenKind::Double) expected({"number"});
        Token t = take();
        std::string text = (negative ? "-" : "") + t.text;
        if (t.kind == TokenKind::Integer) {
            std::int64_t v = 0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc{}) fail(codes::ParseError, "integer literal out of range", t.loc);
            return v;
        }
        double d = 0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), d);
        if (res.ec != std::errc{}) fail(codes::ParseError, "number literal out of range", t.loc);
        return d;
    }

    // ----- LEMMA view --------------------------------------------------------

    TechnologyModel parse_technology() {
        expect_keyword("technology");
        TechnologyModel tech;
        Token name = expect_identifier("technology name");
        tech.name = name.text;
        tech.loc = name.loc;
        expect_punct("{");
        bool sawProtocols = false;
        bool sawFormats = false;
        while (!cur().punct("}")) {
            if (cur().ident("protocols")) {
                Token kw = take();
                if (sawProtocols) fail(codes::ParseError, "duplicate 'protocols' section", kw.loc);
                sawProtocols = true;
                expect_punct("{");
                while (!cur().punct("}")) {
                    ProtocolDecl p;
                    p.name = expect_identifier("protocol name").text;
                    if (accept_ident("default")) p.defaultFormat = expect_identifier("format name").text;
                    tech.protocols.push_back(std::move(p));
                    if (!accept_punct(",")) break;
                }
                expect_punct("}");
            } else if (cur().ident("data")) {
                Token kw = take();
                if (sawFormats) fail(codes::ParseError, "duplicate 'data formats' section", kw.loc);
                sawFormats = true;
                expect_keyword("formats");
                expect_punct("{");
                while (!cur().punct("}")) {
                    tech.dataFormats.push_back(expect_identifier("format name").text);
                    if (!accept_punct(",")) break;
                }
                expect_punct("}");
            } else {
                expected({"'protocols'", "'data'", "'}'"});
            }
        }
        expect_punct("}");
        return tech;
    }

    MappingEntry parse_mapping() {
        MappingEntry m;
        m.loc = expect_keyword("map").loc;
        expect_keyword("service");
        m.serviceRef = qualified_name();
        expect_keyword("endpoint");
        m.endpointRef = expect_identifier("endpoint name").text;
        expect_punct("->");
        expect_keyword("technology");
        m.technology = expect_identifier("technology name").text;
        expect_keyword("protocol");
        m.protocol = expect_identifier("protocol name").text;
        expect_keyword("format");
        m.format = expect_identifier("format name").text;
        return m;
    }

    struct LemmaAnnotations {
        std::optional<std::string> language;
        std::optional<std::string> technology;
        std::vector<std::string> extra;
        SourceLocation loc;
        bool any = false;
    };

    LemmaAnnotations parse_lemma_annotations(std::vector<Diagnostic>& notes) {
        LemmaAnnotations out;
        while (cur().punct("@")) {
            Token at = take();
            if (!out.any) out.loc = at.loc;
            out.any = true;
            Token name = expect_identifier("annotation name");
            std::size_t endOffset = name.end;
            std::vector<std::string> args;
            if (cur().punct("(")) {
                take();
                while (!cur().punct(")")) {
                    Token a = take();
                    if (a.kind == TokenKind::End) expected({"')'"});
                    args.push_back(a.text);
                }
                endOffset = take().end;
            }
            std::string raw(source_.substr(at.offset, endOffset - at.offset));
            if (name.text == "behaviour_language" || name.text == "technology") {
                if (args.size() != 1) {
                    fail(codes::AnnotationMalformed,
                         "@" + name.text + " takes exactly one import alias", name.loc);
                }
                auto& slot = name.text == "behaviour_language" ? out.language : out.technology;
                if (slot) fail(codes::AnnotationMalformed, "duplicate @" + name.text, name.loc);
                slot = args[0];
            } else {
                out.extra.push_back(raw);
                notes.push_back(make_warning(codes::AnnotationUnknown,
                                             "unknown annotation '@" + name.text + "' preserved verbatim",
                                             name.loc));
            }
        }
        return out;
    }

    BehaviourBinding parse_binding(const LemmaAnnotations& ann) {
        BehaviourBinding b;
        Token op = expect_identifier("operation name");
        b.operation = op.text;
        b.loc = op.loc;
        expect_punct("(");
        expect_punct(")");
        if (!ann.language || !ann.technology) {
            fail(codes::AnnotationMalformed,
                 "behaviour for '" + op.text + "' needs @behaviour_language and @technology", op.loc);
        }
        b.language = *ann.language;
        b.technology = *ann.technology;
        b.extraAnnotations = ann.extra;
        b.body = parse_braced_behaviour();
        return b;
    }

    LemmaServiceModel parse_microservice(const std::vector<Token>& docs, std::vector<Diagnostic>& notes) {
        expect_keyword("microservice");
        LemmaServiceModel m;
        m.doc = plain_doc(docs);
        m.qualifiedName = qualified_name(&m.loc);
        if (accept_ident("kind")) {
            Token k = expect_identifier("service kind");
            auto kind = service_kind_from_keyword(k.text);
            if (!kind) fail(codes::ParseError, "expected 'functional', 'utility' or 'infrastructure'", k.loc);
            m.kind = *kind;
        }
        expect_punct("{");
        while (!cur().punct("}")) {
            if (cur().ident("interface") && peek_at(1).kind == TokenKind::Identifier &&
                peek_at(2).punct("{")) {
                m.interfaces.push_back(parse_lemma_interface());
            } else if (cur().ident("endpoint") && peek_at(1).kind == TokenKind::Identifier &&
                       peek_at(2).punct("{")) {
                m.endpoints.push_back(parse_endpoint());
            } else if (cur().ident("requires") && peek_at(1).kind == TokenKind::Identifier &&
                       !peek_at(1).punct("(")) {
                take();
                m.requires_.push_back(parse_ref_microservice());
            } else if (cur().punct("@") || cur().kind == TokenKind::Identifier) {
                LemmaAnnotations ann = parse_lemma_annotations(notes);
                m.behaviourBindings.push_back(parse_binding(ann));
            } else {
                expected({"'interface'", "'endpoint'", "'requires'", "'@'", "'}'"});
            }
        }
        expect_punct("}");
        return m;
    }

    RefMicroservice parse_ref_microservice() {
        RefMicroservice r;
        r.loc = cur().loc;
        if (peek_at(1).punct("::")) {
            r.alias = take().text;
            take();
        }
        r.qualifiedName = qualified_name();
        return r;
    }

    LemmaServiceModel parse_extension_block(const std::vector<Token>& docs, std::vector<Diagnostic>& notes) {
        LemmaAnnotations blockAnn = parse_lemma_annotations(notes);
        LemmaServiceModel m;
        m.isExtension = true;
        m.doc = plain_doc(docs);
        if (cur().kind != TokenKind::Identifier) expected({"microservice reference"});
        RefMicroservice target = parse_ref_microservice();
        m.alias = target.alias;
        m.qualifiedName = target.qualifiedName;
        m.loc = target.loc;
        expect_punct("{");
        while (!cur().punct("}")) {
            LemmaAnnotations ann = blockAnn;
            if (cur().punct("@")) {
                LemmaAnnotations own = parse_lemma_annotations(notes);
                if (own.language) ann.language = own.language;
                if (own.technology) ann.technology = own.technology;
                ann.extra.insert(ann.extra.end(), own.extra.begin(), own.extra.end());
            }
            if (cur().kind != TokenKind::Identifier) expected({"operation name", "'}'"});
            m.behaviourBindings.push_back(parse_binding(ann));
        }
        expect_punct("}");
        return m;
    }

    Interface parse_lemma_interface() {
        expect_keyword("interface");
        Interface iface;
        Token name = expect_identifier("interface name");
        iface.name = name.text;
        iface.loc = name.loc;
        expect_punct("{");
        while (!cur().punct("}")) {
            OperationSig op;
            Token opName = expect_identifier("operation name");
            op.name = opName.text;
            op.loc = opName.loc;
            LemmaOperation shape;
            expect_punct("(");
            while (!cur().punct(")")) {
                Parameter p;
                Token pn = expect_identifier("parameter name");
                p.name = pn.text;
                p.loc = pn.loc;
                expect_punct(":");
                if (accept_ident("in")) {
                    p.exchange = Exchange::Incoming;
                } else if (accept_ident("out")) {
                    p.exchange = Exchange::Outgoing;
                } else {
                    expected({"'in'", "'out'"});
                }
                if (accept_ident("sync")) {
                    p.communication = Communication::Synchronous;
                } else if (accept_ident("async")) {
                    p.communication = Communication::Asynchronous;
                } else {
                    expected({"'sync'", "'async'"});
                }
                p.type = parse_type_ref();
                shape.parameters.push_back(std::move(p));
                if (!accept_punct(",")) break;
            }
            expect_punct(")");
            op.shape = std::move(shape);
            iface.operations.push_back(std::move(op));
            accept_punct(",");
        }
        expect_punct("}");
        return iface;
    }

    Endpoint parse_endpoint() {
        expect_keyword("endpoint");
        Endpoint ep;
        Token name = expect_identifier("endpoint name");
        ep.name = name.text;
        ep.loc = name.loc;
        expect_punct("{");
        std::set<std::string> seen;
        while (!cur().punct("}")) {
            const Token& key = cur();
            if (key.kind != TokenKind::Identifier ||
                (key.text != "location" && key.text != "protocol" && key.text != "format" &&
                 key.text != "interfaces")) {
                expected({"'location'", "'protocol'", "'format'", "'interfaces'", "'}'"});
            }
            Token k = take();
            if (!seen.insert(k.text).second) fail(codes::ParseError, "duplicate endpoint field '" + k.text + "'", k.loc);
            expect_punct(":");
            if (k.text == "location") {
                ep.location = expect_string().text;
            } else if (k.text == "protocol" || k.text == "format") {
                TechRef ref;
                ref.technology = expect_identifier("technology name").text;
                expect_punct("::");
                ref.name = expect_identifier(k.text == "protocol" ? "protocol name" : "format name").text;
                (k.text == "protocol" ? ep.protocol : ep.dataFormat) = std::move(ref);
            } else {
                ep.interfaces.push_back(expect_identifier("interface name").text);
                while (accept_punct(",")) ep.interfaces.push_back(expect_identifier("interface name").text);
            }
        }
        if (!seen.count("location")) {
            fail(codes::ParseError, "endpoint '" + ep.name + "' lacks 'location:'", cur().loc);
        }
        expect_punct("}");
        return ep;
    }

    // ----- annotation tokens -------------------------------------------------

    AnnotationToken parse_annotation_token() {
        AnnotationToken a;
        expect_punct("@");
        a.name = expect_identifier("annotation name").text;
        if (accept_punct("(")) {
            std::size_t i = 0;
            while (!cur().punct(")")) {
                a.arguments[std::to_string(i++)] = parse_annotation_value();
                if (!accept_punct(",")) break;
            }
            expect_punct(")");
        }
        if (cur().punct("{")) {
            nlohmann::json obj = parse_annotation_object();
            for (auto& [k, v] : obj.items()) a.arguments[k] = v;
        }
        if (!at_end()) expected({"end of annotation"});
        return a;
    }

    nlohmann::json parse_annotation_object() {
        expect_punct("{");
        nlohmann::json obj = nlohmann::json::object();
        while (!cur().punct("}")) {
            Token key = expect_identifier("property name");
            if (obj.contains(key.text)) fail(codes::AnnotationMalformed, "duplicate property '" + key.text + "'", key.loc);
            expect_punct("=");
            obj[key.text] = parse_annotation_value();
            if (!accept_punct(",")) break;
        }
        expect_punct("}");
        return obj;
    }

    nlohmann::json parse_annotation_value() {
        const Token& t = cur();
        if (t.punct("[")) {
            take();
            nlohmann::json arr = nlohmann::json::array();
            while (!cur().punct("]")) {
                arr.push_back(parse_annotation_value());
                if (!accept_punct(",")) break;
            }
            expect_punct("]");
            return arr;
        }
        if (t.punct("{")) return parse_annotation_object();
        if (t.kind == TokenKind::String) return take().text;
        if (t.kind == TokenKind::Integer || t.kind == TokenKind::Double || t.punct("-")) {
            Scalar s = t.punct("-") ? (take(), number_literal(true)) : number_literal(false);
            return scalar_to_json(s);
        }
        if (t.ident("true") || t.ident("false")) return take().text == "true";
        if (t.kind == TokenKind::Identifier) return qualified_name();
        expected({"identifier", "literal", "'['", "'{'"});
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::string file_;
    std::string_view source_;
    View view_ = View::Jolie;
};

AnnotationParseResult parse_annotation_at(std::string_view text, const SourceLocation& loc) {
    AnnotationParseResult out;
    detail::LexResult lx = detail::lex(text, loc.file, loc.line ? loc.line - 1 : 0,
                                       loc.column ? loc.column - 1 : 0);
    if (lx.error) {
        lx.error->code = std::string(codes::AnnotationMalformed);
        out.diagnostics.push_back(*lx.error);
        return out;
    }
    try {
        Parser p(std::move(lx.tokens), loc.file, text);
        out.annotation = p.parse_annotation_token();
    } catch (const ParseFailure& f) {
        Diagnostic d = f.diag;
        d.code = std::string(codes::AnnotationMalformed);
        out.diagnostics.push_back(std::move(d));
    }
    return out;
}

void Parser::apply_type_annotation(TypeDecl& decl, const std::string& raw, const SourceLocation& loc,
                                   std::vector<Diagnostic>& notes) {
    // The annotation name decides whether the body must parse.
    std::size_t nameEnd = 1;
    while (nameEnd < raw.size() && (std::isalnum(static_cast<unsigned char>(raw[nameEnd])) || raw[nameEnd] == '_')) {
        ++nameEnd;
    }
    std::string name = raw.substr(1, nameEnd - 1);
    if (name != "entity") {
        decl.extraAnnotations.push_back(raw);
        notes.push_back(make_warning(codes::AnnotationUnknown,
                                     "unknown annotation '@" + name + "' preserved verbatim", loc));
        return;
    }
    AnnotationParseResult parsed = parse_annotation_at(raw, loc);
    if (!parsed.annotation) throw ParseFailure{parsed.diagnostics.front()};
    const auto& args = parsed.annotation->arguments;
    if (!args.contains("identity")) {
        fail(codes::AnnotationMalformed, "@entity requires an 'identity' list", loc);
    }
    for (const auto& [k, v] : args.items()) {
        if (k != "identity") fail(codes::AnnotationMalformed, "unknown @entity property '" + k + "'", loc);
    }
    const auto& identity = args["identity"];
    if (!identity.is_array() || identity.empty()) {
        fail(codes::AnnotationMalformed, "@entity identity must be a non-empty list of node names", loc);
    }
    EntityPattern pattern;
    for (const auto& f : identity) {
        if (!f.is_string() || f.get<std::string>().find('.') != std::string::npos) {
            fail(codes::AnnotationMalformed, "@entity identity entries must be node names", loc);
        }
        pattern.identityFields.push_back(f.get<std::string>());
    }
    DddAnnotation ann;
    ann.raw = "@entity { identity = [ " + join(pattern.identityFields, ", ") + " ] }";
    ann.pattern = std::move(pattern);
    ann.loc = loc;
    decl.annotations.push_back(std::move(ann));
}

template <class Fn>
auto with_tokens(std::string_view text, const std::string& file, Fn&& fn)
    -> std::pair<std::optional<decltype(fn(std::declval<Parser&>()))>, std::vector<Diagnostic>> {
    std::vector<Diagnostic> diags;
    if (!utf8_valid(text)) {
        diags.push_back(make_error(codes::ParseError, "input is not valid UTF-8", SourceLocation{file, 1, 1, 1}));
        return {std::nullopt, diags};
    }
    detail::LexResult lx = detail::lex(text, file);
    if (lx.error) {
        diags.push_back(*lx.error);
        return {std::nullopt, diags};
    }
    try {
        Parser p(std::move(lx.tokens), file, text);
        auto value = fn(p);
        return {std::move(value), diags};
    } catch (const ParseFailure& f) {
        diags.push_back(f.diag);
        return {std::nullopt, diags};
    }
}

}  // namespace

std::optional<View> view_from_path(std::string_view path) {
    auto ends_with = [&](std::string_view suffix) {
        return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
    };
    if (ends_with(".jsm")) return View::Jolie;
    if (ends_with(".lsm")) return View::Lemma;
    return std::nullopt;
}

ParseResult parse_unit(std::string_view text, std::optional<View> view, std::string path) {
    auto [unit, diags] = with_tokens(text, path, [&](Parser& p) { return p.parse_unit(view); });
    ParseResult out;
    out.unit = std::move(unit);
    out.diagnostics = std::move(diags);
    return out;
}

TypeExprResult parse_type_expr(std::string_view text) {
    auto [type, diags] = with_tokens(text, {}, [](Parser& p) {
        auto t = p.parse_type_expr();
        if (!p.at_end()) p.expected({"end of type expression"});
        return t;
    });
    return TypeExprResult{std::move(type), std::move(diags)};
}

BehaviourParseResult parse_behaviour(std::string_view text) {
    auto [term, diags] = with_tokens(text, {}, [](Parser& p) {
        Term t = p.at_end() ? nil_term() : p.parse_parallel();
        if (!p.at_end()) p.expected({"';'", "'|'", "end of behaviour"});
        return t;
    });
    return BehaviourParseResult{std::move(term), std::move(diags)};
}

AnnotationParseResult parse_annotation(std::string_view text) {
    return parse_annotation_at(text, SourceLocation{{}, 1, 1, 1});
}

}  // namespace msadl

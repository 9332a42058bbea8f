#include "lexer.hpp"

#include <cctype>

#include "msadl/value.hpp"

namespace msadl::detail {

std::string describe(const Token& t) {
    switch (t.kind) {
        case TokenKind::Identifier: return "identifier '" + t.text + "'";
        case TokenKind::String: return "string literal";
        case TokenKind::Char: return "char literal";
        case TokenKind::Integer:
        case TokenKind::Double: return "number '" + t.text + "'";
        case TokenKind::Punct: return "'" + t.text + "'";
        case TokenKind::DocComment: return "doc comment";
        case TokenKind::End: return "end of input";
    }
    return "token";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
public:
    Lexer(std::string_view text, const std::string& file, std::uint32_t lineOffset,
          std::uint32_t columnOffset)
        : text_(text), file_(file), line_(1 + lineOffset), col_(1 + columnOffset) {}

    LexResult run() {
        LexResult out;
        bool detached = false;
        while (true) {
            // whitespace and comments
            if (pos_ >= text_.size()) break;
            char c = text_[pos_];
            if (c == '\n') {
                if (atLineStart_) detached = true;
                advance();
                atLineStart_ = true;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                atLineStart_ = false;
                if (peek(2) == '/' && peek(3) != '/') {
                    out.tokens.push_back(doc_comment(detached));
                    detached = false;
                    continue;
                }
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                detached = true;
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                atLineStart_ = false;
                SourceLocation start = here(2);
                advance();
                advance();
                bool closed = false;
                while (pos_ < text_.size()) {
                    if (text_[pos_] == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        closed = true;
                        break;
                    }
                    advance();
                }
                if (!closed) {
                    out.error = make_error(codes::ParseError, "unterminated block comment", start);
                    return out;
                }
                detached = true;
                continue;
            }
            atLineStart_ = false;
            const std::size_t tokStart = pos_;
            Token tok;
            std::optional<Diagnostic> err;
            if (ident_start(c)) {
                tok = identifier();
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                tok = number();
            } else if (c == '"') {
                err = string_literal(tok);
            } else if (c == '\'') {
                err = char_literal(tok);
            } else {
                err = punct(tok);
            }
            if (err) {
                out.error = std::move(err);
                return out;
            }
            tok.offset = tokStart;
            tok.end = pos_;
            tok.detached = detached;
            detached = false;
            out.tokens.push_back(std::move(tok));
        }
        Token end;
        end.kind = TokenKind::End;
        end.loc = here(0);
        end.offset = end.end = pos_;
        out.tokens.push_back(end);
        return out;
    }

private:
    char peek(std::size_t k) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    SourceLocation here(std::uint32_t length) const {
        return SourceLocation{file_, line_, col_, col_ + length};
    }

    Token doc_comment(bool detached) {
        Token t;
        t.kind = TokenKind::DocComment;
        t.offset = pos_;
        t.loc = here(3);
        t.detached = detached;
        for (int i = 0; i < 3; ++i) advance();
        t.loc.column = col_;
        if (pos_ < text_.size() && text_[pos_] == ' ') advance();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        std::string_view body = text_.substr(start, pos_ - start);
        while (!body.empty() && (body.back() == '\r' || body.back() == ' ' || body.back() == '\t')) {
            body.remove_suffix(1);
        }
        t.text = std::string(body);
        t.loc.endColumn = col_;
        t.end = pos_;
        return t;
    }

    Token identifier() {
        Token t;
        t.kind = TokenKind::Identifier;
        t.loc = here(0);
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        t.text = std::string(text_.substr(start, pos_ - start));
        t.loc.endColumn = col_;
        return t;
    }

    Token number() {
        Token t;
        t.kind = TokenKind::Integer;
        t.loc = here(0);
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance();
        if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            t.kind = TokenKind::Double;
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance();
        }
        if ((peek(0) == 'e' || peek(0) == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            t.kind = TokenKind::Double;
            advance();
            if (peek(0) == '+' || peek(0) == '-') advance();
            while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance();
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        t.loc.endColumn = col_;
        return t;
    }

    std::optional<Diagnostic> escape_sequence(std::string& out) {
        SourceLocation at = here(2);
        advance();  // backslash
        if (pos_ >= text_.size()) return make_error(codes::ParseError, "unterminated escape", at);
        char e = text_[pos_];
        switch (e) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            case '"': out += '"'; break;
            case '\'': out += '\''; break;
            case '\\': out += '\\'; break;
            case 'u': {
                char32_t cp = 0;
                for (int i = 1; i <= 4; ++i) {
                    char h = peek(i);
                    if (!std::isxdigit(static_cast<unsigned char>(h))) {
                        return make_error(codes::ParseError, "malformed \\u escape", at);
                    }
                    cp = cp * 16 + static_cast<char32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                             ? h - '0'
                                                             : (std::tolower(h) - 'a' + 10));
                }
                for (int i = 0; i < 4; ++i) advance();
                out += utf8_encode(cp);
                break;
            }
            default:
                return make_error(codes::ParseError, std::string("unknown escape '\\") + e + "'", at);
        }
        advance();
        return std::nullopt;
    }

    std::optional<Diagnostic> string_literal(Token& t) {
        t.kind = TokenKind::String;
        t.loc = here(0);
        advance();
        while (true) {
            if (pos_ >= text_.size() || text_[pos_] == '\n') {
                t.loc.endColumn = col_;
                return make_error(codes::ParseError, "unterminated string literal", t.loc);
            }
            char c = text_[pos_];
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                if (auto err = escape_sequence(t.text)) return err;
                continue;
            }
            t.text += c;
            advance();
        }
        t.loc.endColumn = col_;
        return std::nullopt;
    }

    std::optional<Diagnostic> char_literal(Token& t) {
        t.kind = TokenKind::Char;
        t.loc = here(0);
        advance();
        if (pos_ < text_.size() && text_[pos_] == '\\') {
            if (auto err = escape_sequence(t.text)) return err;
        } else {
            std::size_t i = pos_;
            char32_t cp = 0;
            if (pos_ >= text_.size() || text_[pos_] == '\'' || !utf8_decode_one(text_, i, cp)) {
                return make_error(codes::ParseError, "malformed char literal", t.loc);
            }
            t.text = std::string(text_.substr(pos_, i - pos_));
            while (pos_ < i) advance();
        }
        if (pos_ >= text_.size() || text_[pos_] != '\'') {
            t.loc.endColumn = col_;
            return make_error(codes::ParseError, "unterminated char literal", t.loc);
        }
        advance();
        t.loc.endColumn = col_;
        return std::nullopt;
    }

    std::optional<Diagnostic> punct(Token& t) {
        t.kind = TokenKind::Punct;
        t.loc = here(1);
        char c = text_[pos_];
        if (c == '-' && peek(1) == '>') {
            t.text = "->";
        } else if (c == ':' && peek(1) == ':') {
            t.text = "::";
        } else if (std::string_view("{}()[],:;|@=*.-+").find(c) != std::string_view::npos) {
            t.text = std::string(1, c);
        } else {
            std::size_t i = pos_;
            char32_t cp = 0;
            std::string shown = utf8_decode_one(text_, i, cp) ? std::string(text_.substr(pos_, i - pos_))
                                                               : std::string("\\x") + "??";
            return make_error(codes::ParseError, "unexpected character '" + shown + "'", t.loc);
        }
        for (std::size_t i = 0; i < t.text.size(); ++i) advance();
        t.loc.endColumn = col_;
        return std::nullopt;
    }

    std::string_view text_;
    const std::string& file_;
    std::size_t pos_ = 0;
    std::uint32_t line_;
    std::uint32_t col_;
    bool atLineStart_ = true;
};

}  // namespace

LexResult lex(std::string_view text, const std::string& file, std::uint32_t lineOffset,
              std::uint32_t columnOffset) {
    return Lexer(text, file, lineOffset, columnOffset).run();
}

}  // namespace msadl::detail

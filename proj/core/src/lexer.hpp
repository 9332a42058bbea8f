#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msadl/diagnostic.hpp"

namespace msadl::detail {

enum class TokenKind { Identifier, String, Char, Integer, Double, Punct, DocComment, End };

struct Token {
    TokenKind kind = TokenKind::End;
    /// Identifier/punctuation spelling, decoded string or char contents,
    /// number spelling, or doc-comment text after `///`.
    std::string text;
    SourceLocation loc;
    /// Blank line or non-doc comment since the previous doc comment.
    bool detached = false;
    /// Byte range in the lexed text.
    std::size_t offset = 0;
    std::size_t end = 0;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool punct(std::string_view t) const { return kind == TokenKind::Punct && text == t; }
    bool ident(std::string_view t) const { return kind == TokenKind::Identifier && text == t; }
};

std::string describe(const Token& t);

struct LexResult {
    std::vector<Token> tokens;
    std::optional<Diagnostic> error;
};

/// Tokenizes `text`. `//` and `/* */` comments are skipped; `///` lines become
/// DocComment tokens. Positions are 1-based lines and byte columns, offset by
/// `lineOffset`/`columnOffset` for embedded sub-texts.
LexResult lex(std::string_view text, const std::string& file, std::uint32_t lineOffset = 0,
              std::uint32_t columnOffset = 0);

}  // namespace msadl::detail

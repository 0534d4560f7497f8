#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tlc/type.hpp"

namespace tlc {

enum class TokenKind {
    Ident,
    TypeRef,  // #n
    Lambda,
    Colon,
    Dot,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Comma,
    Arrow,
    Star,
    LBracket,
    RBracket,
    End,
};

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t pos;
};

/// Tokenizer shared by the term, type and arrow-term grammars.
std::vector<Token> tokenize(std::string_view text);

/// Recursive-descent cursor over a token list.
class TokenCursor {
public:
    explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool accept(TokenKind kind);
    const Token& expect(TokenKind kind, const char* what);
    bool at_end() const { return peek().kind == TokenKind::End; }
    [[noreturn]] void fail(const std::string& what) const;

private:
    std::vector<Token> tokens_;
    std::size_t at_ = 0;
};

/// type := prod ('->' type)? ; prod := atomic ('*' atomic)* ; atomic := ident | #n | '(' type ')'
Type parse_type(TokenCursor& cursor, const std::vector<Type>* refs = nullptr);

}  // namespace tlc

#include "tlc/lexer.hpp"

#include <algorithm>
#include <cctype>

#include "tlc/error.hpp"

namespace tlc {

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ident_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_start(c)) {
            while (i < text.size() && ident_char(text[i])) ++i;
            out.push_back({TokenKind::Ident, std::string(text.substr(start, i - start)), start});
            continue;
        }
        if (c == '#') {
            ++i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i == start + 1) throw ParseError(start, "expected digits after '#'");
            out.push_back({TokenKind::TypeRef, std::string(text.substr(start + 1, i - start - 1)), start});
            continue;
        }
        if (text.substr(i, 2) == "->") {
            out.push_back({TokenKind::Arrow, "->", start});
            i += 2;
            continue;
        }
        // UTF-8 lambda (U+03BB)
        if (text.substr(i, 2) == "\xCE\xBB") {
            out.push_back({TokenKind::Lambda, "\\", start});
            i += 2;
            continue;
        }
        TokenKind kind;
        switch (c) {
        case '\\': kind = TokenKind::Lambda; break;
        case ':': kind = TokenKind::Colon; break;
        case '.': kind = TokenKind::Dot; break;
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        case '<': kind = TokenKind::LAngle; break;
        case '>': kind = TokenKind::RAngle; break;
        case ',': kind = TokenKind::Comma; break;
        case '*': kind = TokenKind::Star; break;
        case '[': kind = TokenKind::LBracket; break;
        case ']': kind = TokenKind::RBracket; break;
        default:
            throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, std::string(1, c), start});
        ++i;
    }
    out.push_back({TokenKind::End, "", text.size()});
    return out;
}

const Token& TokenCursor::peek(std::size_t ahead) const {
    std::size_t k = std::min(at_ + ahead, tokens_.size() - 1);
    return tokens_[k];
}

const Token& TokenCursor::next() {
    const Token& t = tokens_[at_];
    if (at_ + 1 < tokens_.size()) ++at_;
    return t;
}

bool TokenCursor::accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
}

const Token& TokenCursor::expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
}

void TokenCursor::fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(t.pos, what + (t.kind == TokenKind::End ? " at end of input" : ", found '" + t.text + "'"));
}

namespace {

Type parse_atomic_type(TokenCursor& c, const std::vector<Type>* refs) {
    const Token& t = c.peek();
    if (t.kind == TokenKind::Ident) {
        c.next();
        return Type::atom(t.text);
    }
    if (t.kind == TokenKind::TypeRef) {
        c.next();
        std::size_t k = std::stoul(t.text);
        if (!refs || k >= refs->size()) throw ParseError(t.pos, "unknown type reference #" + t.text);
        return (*refs)[k];
    }
    if (c.accept(TokenKind::LParen)) {
        Type inner = parse_type(c, refs);
        c.expect(TokenKind::RParen, "')'");
        return inner;
    }
    c.fail("expected a type");
}

}  // namespace

Type parse_type(TokenCursor& c, const std::vector<Type>* refs) {
    Type left = parse_atomic_type(c, refs);
    while (c.accept(TokenKind::Star)) left = Type::product(left, parse_atomic_type(c, refs));
    if (c.accept(TokenKind::Arrow)) return Type::arrow(left, parse_type(c, refs));
    return left;
}

}  // namespace tlc

#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "ffbh/bivar.hpp"

namespace ffbh {

// Polynomial expression grammar over F_q[t][x]:
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' natural)?        exponents do not chain
//   atom   := 't' | 'x' | 'u' | natural | '(' expr ')'
// 'u' is the power-basis generator of an extension field and is rejected over
// prime fields. Positions in errors are 1-based byte offsets.

namespace detail {

enum class TokKind { num, var_t, var_x, var_u, plus, minus, star, caret, lparen, rparen, end };

struct Token {
    TokKind kind;
    std::size_t pos; // 1-based
    std::uint64_t value = 0;
};

inline std::vector<Token> lex_poly(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace((unsigned char)c)) {
            ++i;
            continue;
        }
        std::size_t pos = i + 1;
        if (std::isdigit((unsigned char)c)) {
            std::uint64_t v = 0;
            while (i < src.size() && std::isdigit((unsigned char)src[i])) {
                std::uint64_t d = std::uint64_t(src[i] - '0');
                if (v > (UINT64_MAX - d) / 10) throw parse_error("integer literal too large", pos);
                v = v * 10 + d;
                ++i;
            }
            out.push_back({TokKind::num, pos, v});
            continue;
        }
        TokKind kind;
        switch (c) {
        case 't': kind = TokKind::var_t; break;
        case 'x': kind = TokKind::var_x; break;
        case 'u': kind = TokKind::var_u; break;
        case '+': kind = TokKind::plus; break;
        case '-': kind = TokKind::minus; break;
        case '*': kind = TokKind::star; break;
        case '^': kind = TokKind::caret; break;
        case '(': kind = TokKind::lparen; break;
        case ')': kind = TokKind::rparen; break;
        default: throw parse_error(std::string("unexpected character '") + c + "'", pos);
        }
        out.push_back({kind, pos});
        ++i;
    }
    out.push_back({TokKind::end, src.size() + 1});
    return out;
}

struct PolyParser {
    const FieldCtx& F;
    const std::vector<Token>& toks;
    std::size_t at = 0;

    const Token& peek() const { return toks[at]; }
    Token take() { return toks[at++]; }

    BiPoly atom() {
        Token tok = take();
        switch (tok.kind) {
        case TokKind::num: return bi_const(F, F.from_int(tok.value));
        case TokKind::var_t: return bi_t(F);
        case TokKind::var_x: return bi_x(F);
        case TokKind::var_u:
            if (F.k == 1) throw parse_error("'u' is not defined over a prime field", tok.pos);
            return bi_const(F, F.generator_power_basis());
        case TokKind::lparen: {
            BiPoly inner = expr();
            Token close = take();
            if (close.kind != TokKind::rparen) throw parse_error("expected ')'", close.pos);
            return inner;
        }
        default: throw parse_error("expected a value", tok.pos);
        }
    }

    BiPoly power() {
        BiPoly base = atom();
        if (peek().kind != TokKind::caret) return base;
        take();
        Token e = take();
        if (e.kind != TokKind::num) throw parse_error("exponent must be a number", e.pos);
        return bi_pow(base, e.value);
    }

    BiPoly unary() {
        if (peek().kind == TokKind::minus) {
            take();
            return neg(unary());
        }
        return power();
    }

    BiPoly term() {
        BiPoly acc = unary();
        while (peek().kind == TokKind::star) {
            take();
            acc = mul(acc, unary());
        }
        return acc;
    }

    BiPoly expr() {
        BiPoly acc = term();
        while (peek().kind == TokKind::plus || peek().kind == TokKind::minus) {
            bool minus = take().kind == TokKind::minus;
            BiPoly rhs = term();
            acc = minus ? sub(acc, rhs) : add(acc, rhs);
        }
        return acc;
    }
};

} // namespace detail

inline BiPoly parse_poly(const std::string& src, const FieldCtx& F) {
    std::vector<detail::Token> toks = detail::lex_poly(src);
    detail::PolyParser parser{F, toks};
    BiPoly result = parser.expr();
    if (parser.peek().kind != detail::TokKind::end)
        throw parse_error("unexpected trailing input", parser.peek().pos);
    return result;
}

// field descriptions: a prime "p" or a prime power "p^k"
inline const FieldCtx& parse_field(const std::string& src) {
    std::size_t caret = src.find('^');
    auto number = [&](const std::string& part, std::size_t offset) -> std::uint64_t {
        if (part.empty()) throw parse_error("expected a number", offset + 1);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (!std::isdigit((unsigned char)part[i]))
                throw parse_error("expected a digit", offset + i + 1);
            std::uint64_t d = std::uint64_t(part[i] - '0');
            if (v > (UINT64_MAX - d) / 10) throw parse_error("number too large", offset + 1);
            v = v * 10 + d;
        }
        return v;
    };
    std::uint64_t p = number(caret == std::string::npos ? src : src.substr(0, caret), 0);
    std::uint64_t k = 1;
    if (caret != std::string::npos) k = number(src.substr(caret + 1), caret + 1);
    if (p >= (std::uint64_t(1) << 32)) throw invalid_parameter("characteristic out of range");
    if (k == 0 || k > 64) throw invalid_parameter("extension degree out of range");
    return field(std::uint32_t(p), std::uint32_t(k));
}

} // namespace ffbh

#pragma once

#include <cctype>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "discendo/corona.hpp"
#include "discendo/map_expr.hpp"

// Text grammar for map expressions, mirroring the factory vocabulary:
//
//   expr     := scalar '*' expr | primary
//   primary  := 'z' ['^' uint] | 'tau' | 'c(' num ',' num ')'
//             | 'mobius(' num [',' num] ')' | 'affine(' num ',' num ')'
//             | 'blaschke[' zeros ']' | 'rot(' angle ')'
//             | 'compose(' expr ',' expr ')'
//   scalar   := num | 'c(' num ',' num ')'
//   zeros    := 'geometric:' uint | num {',' num}
//   angle    := [num '*'] 'pi' ['/' num] | num      (optionally negated)
//
// Errors carry the character position where parsing stopped; semantic
// violations (a scale factor above 1, a Moebius base outside the disc, ...)
// surface through the factory validation and are wrapped with position info.

namespace discendo {

class parse_error : public std::invalid_argument {
public:
    parse_error(const std::string& message, std::size_t position)
        : std::invalid_argument(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

namespace detail {

class MapParser {
public:
    explicit MapParser(std::string_view text) : text_(text) {}

    MapExpr parse() {
        MapExpr result = expr();
        skip_ws();
        if (pos_ != text_.size()) throw parse_error("unexpected trailing input", pos_);
        return result;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) {
            throw parse_error(std::string("expected '") + c + "'", pos_);
        }
    }

    bool word_ahead(std::string_view word) {
        skip_ws();
        if (text_.substr(pos_, word.size()) != word) return false;
        const std::size_t next = pos_ + word.size();
        // Must not run into a longer identifier.
        return next >= text_.size() ||
               !std::isalpha(static_cast<unsigned char>(text_[next]));
    }

    bool consume_word(std::string_view word) {
        if (!word_ahead(word)) return false;
        pos_ += word.size();
        return true;
    }

    double number() {
        skip_ws();
        const char* begin = text_.data() + pos_;
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin) throw parse_error("expected a number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return value;
    }

    int unsigned_int() {
        skip_ws();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1000000) throw parse_error("integer too large", start);
            ++pos_;
        }
        if (pos_ == start) throw parse_error("expected an integer", start);
        return static_cast<int>(value);
    }

    // Wraps factory validation so semantic errors carry a position too.
    template <class Fn>
    MapExpr checked(std::size_t at, Fn&& build) {
        try {
            return build();
        } catch (const std::domain_error& e) {
            throw parse_error(e.what(), at);
        } catch (const std::invalid_argument& e) {
            throw parse_error(e.what(), at);
        }
    }

    MapExpr expr() {
        const char c = peek();
        const std::size_t at = pos_;
        // A leading number is always a scale prefix; a leading c(...) is a
        // scale prefix only when '*' follows, otherwise a constant map.
        if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
            const double s = number();
            expect('*');
            MapExpr inner = expr();
            return checked(at, [&] { return scale(Complex(s), std::move(inner)); });
        }
        if (word_ahead("c")) {
            const Complex value = complex_literal();
            if (consume('*')) {
                MapExpr inner = expr();
                return checked(at, [&] { return scale(value, std::move(inner)); });
            }
            return checked(at, [&] { return constant(value); });
        }
        return primary();
    }

    Complex complex_literal() {
        consume_word("c");
        expect('(');
        const double re = number();
        expect(',');
        const double im = number();
        expect(')');
        return {re, im};
    }

    MapExpr primary() {
        const std::size_t at = pos_;
        if (consume_word("z")) {
            if (consume('^')) {
                const int k = unsigned_int();
                return checked(at, [&] { return monomial(k); });
            }
            return identity();
        }
        if (consume_word("tau")) return tau();
        if (consume_word("mobius")) {
            expect('(');
            const double re = number();
            const double im = consume(',') ? number() : 0.0;
            expect(')');
            return checked(at, [&] { return moebius(Complex(re, im)); });
        }
        if (consume_word("affine")) {
            expect('(');
            const double a = number();
            expect(',');
            const double b = number();
            expect(')');
            return checked(at, [&] { return affine(Complex(a), Complex(b)); });
        }
        if (consume_word("rot")) {
            expect('(');
            const double theta = angle();
            expect(')');
            return checked(at, [&] { return rotation(theta); });
        }
        if (consume_word("blaschke")) {
            expect('[');
            std::vector<Complex> zeros = zero_list();
            expect(']');
            return checked(at, [&] { return blaschke(std::move(zeros)); });
        }
        if (consume_word("compose")) {
            expect('(');
            MapExpr outer = expr();
            expect(',');
            MapExpr inner = expr();
            expect(')');
            return compose(std::move(outer), std::move(inner));
        }
        throw parse_error("expected a map expression", pos_);
    }

    std::vector<Complex> zero_list() {
        if (consume_word("geometric")) {
            expect(':');
            const std::size_t at = pos_;
            const int count = unsigned_int();
            if (count < 1) throw parse_error("geometric zero count must be >= 1", at);
            std::vector<Complex> zeros;
            for (DiscPoint p : geometric_zero_sequence(count)) zeros.push_back(p.value());
            return zeros;
        }
        std::vector<Complex> zeros{Complex(number())};
        while (consume(',')) zeros.emplace_back(number());
        return zeros;
    }

    double angle() {
        double sign = 1.0;
        // A '-' directly before 'pi' is a sign, not part of a number.
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '-' && word_ahead_at(pos_ + 1, "pi")) {
            ++pos_;
            sign = -1.0;
        }
        double value;
        if (word_ahead("pi")) {
            consume_word("pi");
            value = std::numbers::pi;
        } else {
            value = number();
            if (consume('*')) {
                const std::size_t at = pos_;
                if (!consume_word("pi")) throw parse_error("expected 'pi'", at);
                value *= std::numbers::pi;
            }
        }
        if (consume('/')) value /= number();
        return sign * value;
    }

    bool word_ahead_at(std::size_t at, std::string_view word) {
        std::size_t p = at;
        while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
        if (text_.substr(p, word.size()) != word) return false;
        const std::size_t next = p + word.size();
        return next >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[next]));
    }
};

}  // namespace detail

inline MapExpr parse_map(std::string_view text) { return detail::MapParser(text).parse(); }

}  // namespace discendo

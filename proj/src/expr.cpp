#include "perideg/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace perideg {

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    double parse() {
        const double v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters");
        return v;
    }

private:
    double expr() {
        double v = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                v += term();
            else if (accept('-'))
                v -= term();
            else
                return v;
        }
    }

    double term() {
        double v = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                v *= unary();
            } else if (accept('/')) {
                const double d = unary();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    double unary() {
        skip_ws();
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return primary();
    }

    double primary() {
        skip_ws();
        if (accept('(')) {
            const double v = expr();
            expect(')');
            return v;
        }
        if (std::isdigit(peek()) || peek() == '.') return number();
        if (word("sqrt")) {
            expect('(');
            const double v = expr();
            expect(')');
            if (v < 0.0) fail("sqrt of negative value");
            return std::sqrt(v);
        }
        if (word("cbrt")) {
            expect('(');
            const double v = expr();
            expect(')');
            return std::cbrt(v);
        }
        if (word("pi")) return M_PI;
        fail("expected number, '(', sqrt, cbrt or pi");
        return 0.0;
    }

    double number() {
        const char* start = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start) fail("malformed number");
        pos_ += static_cast<size_t>(end - start);
        return v;
    }

    bool word(const char* w) {
        size_t len = 0;
        while (w[len]) ++len;
        if (s_.compare(pos_, len, w) != 0) return false;
        const size_t after = pos_ + len;
        if (after < s_.size() && std::isalnum(static_cast<unsigned char>(s_[after]))) return false;
        pos_ = after;
        return true;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        skip_ws();
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("expression \"" + s_ + "\": " + why + " at offset " +
                                    std::to_string(pos_));
    }

    const std::string& s_;
    size_t pos_ = 0;
};

}  // namespace

double eval_scalar_expr(const std::string& text) { return Parser(text).parse(); }

}  // namespace perideg

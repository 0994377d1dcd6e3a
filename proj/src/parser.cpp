#include "isochk/parser.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "isochk/format.hpp"

namespace isochk {

namespace {

constexpr unsigned long kMaxExponent = 1000;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    BiPoly parse() {
        BiPoly r = expr();
        skip();
        if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("syntax error at offset " + std::to_string(pos_) + ": " + msg, pos_);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    BiPoly expr() {
        skip();
        bool negate = false;
        if (accept('-'))
            negate = true;
        else
            accept('+');
        BiPoly r = term();
        if (negate) r = -r;
        while (true) {
            if (accept('+'))
                r += term();
            else if (accept('-'))
                r -= term();
            else
                return r;
        }
    }

    BiPoly term() {
        BiPoly r = factor();
        while (accept('*')) r *= factor();
        return r;
    }

    BiPoly factor() {
        BiPoly b = base();
        if (accept('^')) {
            skip();
            const std::size_t at = pos_;
            mpz_class e = digits("exponent");
            if (e > kMaxExponent) {
                pos_ = at;
                fail("exponent too large");
            }
            b = b.pow(static_cast<unsigned>(e.get_ui()));
        }
        return b;
    }

    mpz_class digits(const char* what) {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail(std::string("expected ") + what);
        if (pos_ < s_.size() && s_[pos_] == '.') {
            throw ParseError("exact rationals only: decimal literal at offset " + std::to_string(pos_), pos_);
        }
        return mpz_class(s_.substr(start, pos_ - start));
    }

    BiPoly base() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == 'x' || c == 'y' || c == 'i') {
            ++pos_;
            if (c == 'x') return BiPoly::x();
            if (c == 'y') return BiPoly::y();
            return BiPoly(GaussianRational::i());
        }
        if (c == '(') {
            ++pos_;
            BiPoly r = expr();
            if (!accept(')')) fail("expected ')'");
            return r;
        }
        if (c == '.') throw ParseError("exact rationals only: decimal literal at offset " + std::to_string(pos_), pos_);
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num = digits("integer");
            mpz_class den = 1;
            if (accept('/')) {
                const std::size_t at = pos_;
                den = digits("denominator");
                if (den == 0) {
                    pos_ = at;
                    fail("zero denominator");
                }
            }
            Rational q(num, den);
            q.canonicalize();
            return BiPoly(GaussianRational(q));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

std::string monomial_text(int dx, int dy) {
    std::string m;
    auto part = [](const char* v, int k) {
        return k == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(k);
    };
    if (dx > 0) m = part("x", dx);
    if (dy > 0) m += (m.empty() ? "" : "*") + part("y", dy);
    return m;
}

}  // namespace

BiPoly parse_poly(const std::string& text) {
    for (std::size_t k = 0; k < text.size(); ++k)
        if (static_cast<unsigned char>(text[k]) > 127) throw ParseError("syntax error at offset " + std::to_string(k) + ": non-ASCII character", k);
    return Parser(text).parse();
}

std::string format_poly(const BiPoly& p) {
    std::vector<std::pair<Exponent, GaussianRational>> items(p.terms().begin(), p.terms().end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        const int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        if (da != db) return da < db;
        return a.first.first > b.first.first;
    });
    std::vector<FormatTerm> terms;
    terms.reserve(items.size());
    for (const auto& [e, c] : items) terms.push_back({c, monomial_text(e.first, e.second)});
    return format_sum(terms);
}

}  // namespace isochk

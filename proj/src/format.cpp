#include "isochk/format.hpp"

namespace isochk {

namespace {

// Magnitude text of a term whose coefficient is real or purely imaginary; sign handled by caller.
std::string unsigned_term(const GaussianRational& c, const std::string& mono) {
    std::string coeff;
    if (c.is_real()) {
        Rational a = abs(c.re());
        if (a != 1 || mono.empty()) coeff = rational_string(a);
    } else {
        Rational a = abs(c.im());
        coeff = a == 1 ? "i" : rational_string(a) + "*i";
    }
    if (mono.empty()) return coeff;
    if (coeff.empty()) return mono;
    return coeff + "*" + mono;
}

}  // namespace

std::string format_sum(const std::vector<FormatTerm>& terms) {
    std::string out;
    for (const auto& t : terms) {
        if (t.coeff.is_zero()) continue;
        const bool mixed = !t.coeff.is_real() && sgn(t.coeff.re()) != 0;
        bool negative = false;
        std::string body;
        if (mixed) {
            body = t.monomial.empty() ? t.coeff.to_string() : "(" + t.coeff.to_string() + ")*" + t.monomial;
        } else {
            negative = t.coeff.is_real() ? sgn(t.coeff.re()) < 0 : sgn(t.coeff.im()) < 0;
            body = unsigned_term(t.coeff, t.monomial);
        }
        if (out.empty())
            out = negative ? "-" + body : body;
        else
            out += (negative ? " - " : " + ") + body;
    }
    return out.empty() ? "0" : out;
}

}  // namespace isochk

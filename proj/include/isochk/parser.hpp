#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "isochk/bipoly.hpp"

namespace isochk {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Grammar (ASCII, whitespace ignored):
///   expr     := ['+'|'-'] term (('+'|'-') term)*
///   term     := factor ('*' factor)*
///   factor   := base ('^' uint)?
///   base     := rational | 'i' | 'x' | 'y' | '(' expr ')'
///   rational := uint ('/' uint)?
BiPoly parse_poly(const std::string& text);

/// Canonical text: ascending total degree, higher x power first inside a degree.
std::string format_poly(const BiPoly& p);

}  // namespace isochk

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "cychom/algebra.hpp"
#include "cychom/crossed.hpp"
#include "cychom/groupoid.hpp"
#include "cychom/gsheaf.hpp"

namespace cychom {

// Error in a .groupoid document, located at a 1-based line and column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& origin, int line, int column, const std::string& what);

    const std::string& origin() const noexcept { return origin_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string origin_;
    int line_;
    int column_;
    std::string message_;
};

struct GroupoidDocument {
    std::string name;
    FiniteGroupoid groupoid;
    GSheaf sheaf;                     // constant rank one unless given
    std::optional<FinAlgebra> algebra;  // the same algebra at every object

    // The algebra with the sheaf actions, or the ground field everywhere when
    // neither is given. Throws std::invalid_argument for a linear sheaf with no algebra.
    GAlgebraSheaf algebra_sheaf() const;
};

// Rationals "p", "-p", "p/q"; anything else (floats included) throws std::invalid_argument.
Scalar parse_rational(const std::string& text);

GroupoidDocument parse_groupoid(const std::string& text, const std::string& origin = "<input>");
// Throws std::runtime_error if the file cannot be read.
GroupoidDocument load_groupoid(const std::filesystem::path& path);
// Explicit form: objects, arrows, full composition table, every action
// matrix and the algebra's structure constants.
std::string emit_groupoid(const GroupoidDocument& doc);

}  // namespace cychom

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tablekit/errors.hpp"
#include "tablekit/schema.hpp"

namespace tablekit {

enum class FormatTokenKind {
    Identifier,
    StringLiteral,
    BooleanLiteral,
    Equals,
    Comma,
    OpenParen,
    CloseParen,
    End,
};

/// One lexed token of the attribute-format mini-language. Offsets are
/// 0-based character positions and strictly increase across a stream.
struct FormatToken {
    FormatTokenKind kind = FormatTokenKind::End;
    std::string text;       // string literals carry the unquoted content
    std::size_t offset = 0;
};

/// Lexes a format string after typographic-quote normalization.
/// Throws ParseError on stray characters or unterminated literals.
std::vector<FormatToken> lex_format(std::string_view text);

/// Parses one `!Format` cell, e.g. "ManyToOne('Gene', related_name='transcripts')".
/// Throws ParseError with an offset and an expected-token message.
AttributeFormat parse_attribute_format(std::string_view text);

/// Canonical text for a format: single quotes, ", " between arguments,
/// arguments in the order target, related_name, primary, unique, with
/// default-valued flags omitted. parse(print(f)) == f.
std::string print_attribute_format(const AttributeFormat& fmt);

struct EquationTerm {
    double coefficient = 1.0;
    std::string species;

    bool operator==(const EquationTerm&) const = default;
};

/// A reaction equation such as "2 H2 + O2 ==> 2 H2O".
struct ChemicalEquation {
    std::vector<EquationTerm> reactants;
    std::vector<EquationTerm> products;
    bool reversible = false;

    bool operator==(const ChemicalEquation&) const = default;
};

/// Grammar: side ('==>' | '<=>') side, side = term (' + ' term)*,
/// term = [coefficient ' '] species. '<=>' marks the equation reversible.
ChemicalEquation parse_chemical_equation(std::string_view text);

/// Canonical text: single spaces, coefficient omitted when 1.
std::string print_chemical_equation(const ChemicalEquation& eq);

/// Replaces typographic single and double quotes (including the backtick)
/// with their ASCII counterparts. Applied before lexing markup pasted from
/// typeset documents.
std::string normalize_typographic_quotes(std::string_view text);

/// Shortest round-tripping decimal text for a double, via std::to_chars.
std::string format_double(double value);

}  // namespace tablekit

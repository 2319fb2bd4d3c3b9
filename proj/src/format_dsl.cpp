#include "tablekit/format_dsl.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace tablekit {

std::string normalize_typographic_quotes(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        unsigned char c = text[i];
        if (c == '`') {
            out.push_back('\'');
            ++i;
        } else if (c == 0xC2 && i + 1 < text.size() && (unsigned char)text[i + 1] == 0xB4) {
            out.push_back('\'');  // U+00B4 acute accent
            i += 2;
        } else if (c == 0xE2 && i + 2 < text.size() && (unsigned char)text[i + 1] == 0x80) {
            unsigned char c3 = text[i + 2];
            if (c3 == 0x98 || c3 == 0x99) {
                out.push_back('\'');  // U+2018 / U+2019
                i += 3;
            } else if (c3 == 0x9C || c3 == 0x9D) {
                out.push_back('"');  // U+201C / U+201D
                i += 3;
            } else {
                out.push_back(text[i]);
                ++i;
            }
        } else {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

bool ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9');
}

}  // namespace

std::vector<FormatToken> lex_format(std::string_view text) {
    std::vector<FormatToken> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        if (c == '(') {
            tokens.push_back({FormatTokenKind::OpenParen, "(", i});
            ++i;
        } else if (c == ')') {
            tokens.push_back({FormatTokenKind::CloseParen, ")", i});
            ++i;
        } else if (c == ',') {
            tokens.push_back({FormatTokenKind::Comma, ",", i});
            ++i;
        } else if (c == '=') {
            tokens.push_back({FormatTokenKind::Equals, "=", i});
            ++i;
        } else if (c == '\'' || c == '"') {
            std::size_t start = i;
            char quote = c;
            ++i;
            std::size_t end = text.find(quote, i);
            if (end == std::string_view::npos) {
                throw ParseError("unterminated string literal", start);
            }
            tokens.push_back({FormatTokenKind::StringLiteral, std::string(text.substr(i, end - i)), start});
            i = end + 1;
        } else if (ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && ident_char(text[i])) ++i;
            std::string word(text.substr(start, i - start));
            FormatTokenKind kind = (word == "True" || word == "False") ? FormatTokenKind::BooleanLiteral
                                                                       : FormatTokenKind::Identifier;
            tokens.push_back({kind, std::move(word), start});
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
    }
    tokens.push_back({FormatTokenKind::End, "", text.size()});
    return tokens;
}

namespace {

class FormatParser {
public:
    explicit FormatParser(std::string_view text)
        : text_(normalize_typographic_quotes(text)), tokens_(lex_format(text_)) {}

    AttributeFormat parse() {
        AttributeFormat fmt;
        const FormatToken& head = expect(FormatTokenKind::Identifier, "a format kind");
        auto kind = format_kind_from_name(head.text);
        if (!kind) {
            throw ParseError("unknown kind '" + head.text + "'", head.offset);
        }
        fmt.kind = *kind;

        if (peek().kind == FormatTokenKind::OpenParen) {
            advance();
            parse_args(fmt);
            expect(FormatTokenKind::CloseParen, "`)`");
        }
        expect(FormatTokenKind::End, "end of input");

        finish(fmt);
        return fmt;
    }

private:
    void parse_args(AttributeFormat& fmt) {
        if (peek().kind == FormatTokenKind::CloseParen) return;
        while (true) {
            parse_arg(fmt);
            if (peek().kind == FormatTokenKind::Comma) {
                advance();
                continue;
            }
            return;
        }
    }

    void parse_arg(AttributeFormat& fmt) {
        const FormatToken& tok = peek();
        if (tok.kind == FormatTokenKind::StringLiteral) {
            advance();
            positional(fmt, tok);
            return;
        }
        if (tok.kind == FormatTokenKind::Identifier) {
            advance();
            expect(FormatTokenKind::Equals, "`=`");
            keyword(fmt, tok);
            return;
        }
        throw ParseError("expected an argument", tok.offset);
    }

    void positional(AttributeFormat& fmt, const FormatToken& tok) {
        if (is_relation_kind(fmt.kind)) {
            if (fmt.target_class) {
                throw ParseError(std::string(format_kind_name(fmt.kind)) + " takes a single target class",
                                 tok.offset);
            }
            if (!identifier_valid(tok.text)) {
                throw ParseError("target class must be an identifier", tok.offset);
            }
            fmt.target_class = tok.text;
            return;
        }
        if (fmt.kind == FormatKind::Enum) {
            if (tok.text.empty()) {
                throw ParseError("empty enum member", tok.offset);
            }
            fmt.enum_values.push_back(tok.text);
            return;
        }
        throw ParseError(std::string(format_kind_name(fmt.kind)) + " takes no positional arguments", tok.offset);
    }

    void keyword(AttributeFormat& fmt, const FormatToken& name) {
        if (name.text == "primary" || name.text == "unique") {
            bool is_primary = name.text == "primary";
            if (is_primary && is_relation_kind(fmt.kind)) {
                throw ParseError("primary is not valid for relation kinds", name.offset);
            }
            if (is_primary ? seen_primary_ : seen_unique_) {
                throw ParseError("repeated keyword '" + name.text + "'", name.offset);
            }
            const FormatToken& value = expect(FormatTokenKind::BooleanLiteral, "True or False");
            (is_primary ? fmt.primary : fmt.unique) = value.text == "True";
            (is_primary ? seen_primary_ : seen_unique_) = true;
            return;
        }
        if (name.text == "related_name") {
            if (!is_relation_kind(fmt.kind)) {
                throw ParseError("related_name is not valid for " + std::string(format_kind_name(fmt.kind)),
                                 name.offset);
            }
            if (fmt.related_name) {
                throw ParseError("repeated keyword 'related_name'", name.offset);
            }
            const FormatToken& value = expect(FormatTokenKind::StringLiteral, "a quoted identifier");
            if (!identifier_valid(value.text)) {
                throw ParseError("related_name must be an identifier", value.offset);
            }
            fmt.related_name = value.text;
            return;
        }
        throw ParseError("unknown keyword '" + name.text + "'", name.offset);
    }

    void finish(AttributeFormat& fmt) {
        std::size_t end = text_.size();
        if (is_relation_kind(fmt.kind)) {
            if (!fmt.target_class) {
                throw ParseError(std::string(format_kind_name(fmt.kind)) + " requires a target class", end);
            }
            if (!fmt.related_name) {
                throw ParseError(std::string(format_kind_name(fmt.kind)) + " requires related_name", end);
            }
        }
        if (fmt.kind == FormatKind::Enum && fmt.enum_values.empty()) {
            throw ParseError("Enum requires at least one member", end);
        }
        if (fmt.primary) fmt.unique = true;
    }

    const FormatToken& peek() const { return tokens_[pos_]; }

    const FormatToken& advance() { return tokens_[pos_++]; }

    const FormatToken& expect(FormatTokenKind kind, const std::string& what) {
        const FormatToken& tok = tokens_[pos_];
        if (tok.kind != kind) {
            throw ParseError("expected " + what, tok.offset);
        }
        ++pos_;
        return tok;
    }

    std::string text_;
    std::vector<FormatToken> tokens_;
    std::size_t pos_ = 0;
    bool seen_primary_ = false;
    bool seen_unique_ = false;
};

std::string quote_literal(const std::string& content) {
    if (content.find('\'') == std::string::npos) return "'" + content + "'";
    if (content.find('"') == std::string::npos) return "\"" + content + "\"";
    throw SerializeError("cannot quote a literal containing both quote characters: " + content);
}

}  // namespace

AttributeFormat parse_attribute_format(std::string_view text) {
    return FormatParser(text).parse();
}

std::string print_attribute_format(const AttributeFormat& fmt) {
    std::vector<std::string> args;
    if (fmt.kind == FormatKind::Enum) {
        for (const auto& member : fmt.enum_values) args.push_back(quote_literal(member));
    }
    if (fmt.target_class) args.push_back(quote_literal(*fmt.target_class));
    if (fmt.related_name) args.push_back("related_name=" + quote_literal(*fmt.related_name));
    if (fmt.primary) args.push_back("primary=True");
    if (fmt.unique) args.push_back("unique=True");

    std::string out = format_kind_name(fmt.kind);
    if (!args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) out += ", ";
            out += args[i];
        }
        out += ")";
    }
    return out;
}

namespace {

bool species_valid(std::string_view word) {
    if (word.empty()) return false;
    for (char c : word) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

struct EquationToken {
    enum Kind { Word, Plus, ArrowForward, ArrowReversible, End } kind;
    std::string text;
    std::size_t offset;
};

std::vector<EquationToken> lex_equation(std::string_view text) {
    std::vector<EquationToken> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (c == '+') {
            tokens.push_back({EquationToken::Plus, "+", i});
            ++i;
            continue;
        }
        if (text.substr(i, 3) == "==>") {
            tokens.push_back({EquationToken::ArrowForward, "==>", i});
            i += 3;
            continue;
        }
        if (text.substr(i, 3) == "<=>") {
            tokens.push_back({EquationToken::ArrowReversible, "<=>", i});
            i += 3;
            continue;
        }
        if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.') {
            std::size_t start = i;
            while (i < text.size()) {
                char w = text[i];
                bool ok = (w >= 'A' && w <= 'Z') || (w >= 'a' && w <= 'z') || (w >= '0' && w <= '9') ||
                          w == '_' || w == '.';
                if (!ok) break;
                ++i;
            }
            tokens.push_back({EquationToken::Word, std::string(text.substr(start, i - start)), start});
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    tokens.push_back({EquationToken::End, "", text.size()});
    return tokens;
}

bool parse_decimal(const std::string& word, double& out) {
    if (word.empty()) return false;
    const char* begin = word.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + word.size();
}

class EquationParser {
public:
    explicit EquationParser(std::string_view text) : tokens_(lex_equation(text)) {}

    ChemicalEquation parse() {
        ChemicalEquation eq;
        parse_side(eq.reactants);
        const EquationToken& arrow = advance();
        if (arrow.kind == EquationToken::ArrowReversible) {
            eq.reversible = true;
        } else if (arrow.kind != EquationToken::ArrowForward) {
            throw ParseError("expected '==>' or '<=>'", arrow.offset);
        }
        parse_side(eq.products);
        const EquationToken& tail = peek();
        if (tail.kind != EquationToken::End) {
            throw ParseError("unexpected trailing input", tail.offset);
        }
        return eq;
    }

private:
    void parse_side(std::vector<EquationTerm>& terms) {
        while (true) {
            terms.push_back(parse_term());
            if (peek().kind == EquationToken::Plus) {
                advance();
                continue;
            }
            return;
        }
    }

    EquationTerm parse_term() {
        const EquationToken& first = peek();
        if (first.kind != EquationToken::Word) {
            throw ParseError("expected term", first.offset);
        }
        advance();
        if (peek().kind == EquationToken::Word) {
            // coefficient followed by species
            const EquationToken& second = advance();
            double coefficient = 0;
            if (!parse_decimal(first.text, coefficient)) {
                throw ParseError("expected a decimal coefficient", first.offset);
            }
            if (coefficient <= 0) {
                throw ParseError("coefficient must be positive", first.offset);
            }
            if (!species_valid(second.text)) {
                throw ParseError("malformed species '" + second.text + "'", second.offset);
            }
            return {coefficient, second.text};
        }
        if (!species_valid(first.text)) {
            throw ParseError("malformed species '" + first.text + "'", first.offset);
        }
        return {1.0, first.text};
    }

    const EquationToken& peek() const { return tokens_[pos_]; }
    const EquationToken& advance() { return tokens_[pos_++]; }

    std::vector<EquationToken> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

ChemicalEquation parse_chemical_equation(std::string_view text) {
    return EquationParser(text).parse();
}

std::string print_chemical_equation(const ChemicalEquation& eq) {
    auto print_side = [](const std::vector<EquationTerm>& terms) {
        std::string out;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (i) out += " + ";
            if (terms[i].coefficient != 1.0) {
                out += format_double(terms[i].coefficient);
                out += ' ';
            }
            out += terms[i].species;
        }
        return out;
    };
    return print_side(eq.reactants) + (eq.reversible ? " <=> " : " ==> ") + print_side(eq.products);
}

}  // namespace tablekit

#include "tablekit/cells.hpp"

#include <charconv>
#include <cstdlib>

namespace tablekit {

namespace {

bool all_digits(std::string_view text) {
    if (text.empty()) return false;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

// Accepts "1234" and "1,234,567"; grouping must be in full groups of three.
std::string strip_grouping(const std::string& text) {
    std::string_view body = text;
    std::string sign;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        sign = body[0];
        body.remove_prefix(1);
    }
    if (body.find(',') == std::string_view::npos) {
        if (!all_digits(body)) throw CellError("'" + text + "' is not an integer");
        return sign + std::string(body);
    }
    std::string digits;
    std::size_t group = 0;
    bool first = true;
    while (true) {
        std::size_t comma = body.find(',');
        std::string_view part = body.substr(0, comma);
        bool size_ok = first ? (part.size() >= 1 && part.size() <= 3) : part.size() == 3;
        if (!size_ok || !all_digits(part)) {
            throw CellError("'" + text + "' has malformed digit grouping");
        }
        digits += part;
        first = false;
        ++group;
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    return sign + digits;
}

std::int64_t parse_integer_text(const std::string& text) {
    std::string digits = strip_grouping(text);
    std::string_view body = digits;
    if (!body.empty() && body[0] == '+') body.remove_prefix(1);
    std::int64_t value = 0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), value);
    if (res.ec == std::errc::result_out_of_range) throw CellError("'" + text + "' is out of range");
    if (res.ec != std::errc() || res.ptr != body.data() + body.size()) {
        throw CellError("'" + text + "' is not an integer");
    }
    return value;
}

double parse_float_text(const std::string& text) {
    // Shape check first: strtod accepts hex, inf, and nan spellings that the
    // cell grammar does not.
    std::string_view body = text;
    std::size_t i = 0;
    if (i < body.size() && (body[i] == '-' || body[i] == '+')) ++i;
    std::size_t int_digits = 0;
    while (i < body.size() && body[i] >= '0' && body[i] <= '9') ++i, ++int_digits;
    std::size_t frac_digits = 0;
    if (i < body.size() && body[i] == '.') {
        ++i;
        while (i < body.size() && body[i] >= '0' && body[i] <= '9') ++i, ++frac_digits;
    }
    if (int_digits + frac_digits == 0) throw CellError("'" + text + "' is not a number");
    if (i < body.size() && (body[i] == 'e' || body[i] == 'E')) {
        ++i;
        if (i < body.size() && (body[i] == '-' || body[i] == '+')) ++i;
        std::size_t exp_digits = 0;
        while (i < body.size() && body[i] >= '0' && body[i] <= '9') ++i, ++exp_digits;
        if (exp_digits == 0) throw CellError("'" + text + "' is not a number");
    }
    if (i != body.size()) throw CellError("'" + text + "' is not a number");

    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end != begin + text.size()) throw CellError("'" + text + "' is not a number");
    return value;
}

bool leap_year(int year) { return year % 4 == 0 && (year % 100 != 0 || year % 400 == 0); }

void check_date_text(const std::string& text) {
    auto bad = [&] { throw CellError("'" + text + "' is not a YYYY-MM-DD date"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') bad();
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (text[i] < '0' || text[i] > '9') bad();
    }
    int year = std::stoi(text.substr(0, 4));
    int month = std::stoi(text.substr(5, 2));
    int day = std::stoi(text.substr(8, 2));
    static const int days_in_month[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12 || day < 1) bad();
    int max_day = days_in_month[month - 1];
    if (month == 2 && leap_year(year)) max_day = 29;
    if (day > max_day) bad();
}

void check_url_text(const std::string& text) {
    auto scheme_end = text.find("://");
    auto bad = [&] { throw CellError("'" + text + "' is not an absolute URL"); };
    if (scheme_end == std::string::npos || scheme_end == 0 || scheme_end + 3 >= text.size()) bad();
    char first = text[0];
    if (!((first >= 'A' && first <= 'Z') || (first >= 'a' && first <= 'z'))) bad();
    for (std::size_t i = 1; i < scheme_end; ++i) {
        char c = text[i];
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' ||
                  c == '.' || c == '-';
        if (!ok) bad();
    }
}

std::string trim(std::string_view text) {
    std::size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(begin, end - begin + 1));
}

}  // namespace

Value parse_cell(const AttributeFormat& format, const std::string& text) {
    if (text.empty()) return std::monostate{};

    switch (format.kind) {
        case FormatKind::String:
            return text;
        case FormatKind::Integer:
            return parse_integer_text(text);
        case FormatKind::PositiveInteger: {
            std::int64_t value = parse_integer_text(text);
            if (value < 1) throw CellError("'" + text + "' must be ≥ 1");
            return value;
        }
        case FormatKind::Float:
            return parse_float_text(text);
        case FormatKind::Boolean:
            if (text == "True") return true;
            if (text == "False") return false;
            throw CellError("'" + text + "' is not True or False");
        case FormatKind::Date:
            check_date_text(text);
            return text;
        case FormatKind::Url:
            check_url_text(text);
            return text;
        case FormatKind::Enum:
            for (const std::string& member : format.enum_values) {
                if (member == text) return text;
            }
            throw CellError("'" + text + "' is not a member of the enumeration");
        case FormatKind::ChemicalEquation:
            try {
                return parse_chemical_equation(text);
            } catch (const ParseError& error) {
                throw CellError(std::string("bad equation: ") + error.what());
            }
        case FormatKind::OneToOne:
        case FormatKind::ManyToOne: {
            std::string key = trim(text);
            if (key.empty()) return std::monostate{};
            return Reference{std::move(key)};
        }
        case FormatKind::OneToMany:
        case FormatKind::ManyToMany: {
            ReferenceList refs;
            std::size_t pos = 0;
            while (pos <= text.size()) {
                std::size_t comma = text.find(',', pos);
                std::string piece = trim(std::string_view(text).substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos));
                if (!piece.empty()) refs.push_back(Reference{std::move(piece)});
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            if (refs.empty()) return std::monostate{};
            return refs;
        }
    }
    throw CellError("unhandled format kind");
}

std::string format_cell(const AttributeFormat& format, const Value& value, const Schema* schema) {
    auto reference_key = [&](const Reference& ref) -> std::string {
        if (ref.target && schema) {
            if (auto key = instance_key(*schema, *ref.target)) return *key;
        }
        return ref.key;
    };

    return std::visit(
        [&](const auto& held) -> std::string {
            using T = std::decay_t<decltype(held)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return held;
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(held);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(held);
            } else if constexpr (std::is_same_v<T, bool>) {
                return held ? "True" : "False";
            } else if constexpr (std::is_same_v<T, ChemicalEquation>) {
                return print_chemical_equation(held);
            } else if constexpr (std::is_same_v<T, Reference>) {
                return reference_key(held);
            } else if constexpr (std::is_same_v<T, ReferenceList>) {
                std::string out;
                for (std::size_t i = 0; i < held.size(); ++i) {
                    if (i) out += ", ";
                    out += reference_key(held[i]);
                }
                return out;
            } else {
                // Embedded instances have no single-cell form; their slots
                // are encoded one by one.
                (void)format;
                return "";
            }
        },
        value);
}

}  // namespace tablekit

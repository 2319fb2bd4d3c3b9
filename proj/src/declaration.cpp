#include "tablekit/codec.hpp"
#include "tablekit/format_dsl.hpp"

namespace tablekit {

namespace {

bool key_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

const std::string* Declaration::value(std::string_view key) const {
    for (const auto& [k, v] : pairs) {
        if (k == key) return &v;
    }
    return nullptr;
}

bool looks_like_document_declaration(std::string_view cell) {
    return cell.substr(0, 3) == "!!!";
}

bool looks_like_sheet_declaration(std::string_view cell) {
    return cell.substr(0, 2) == "!!" && !looks_like_document_declaration(cell);
}

Declaration parse_declaration(std::string_view line) {
    std::string text = normalize_typographic_quotes(line);
    Declaration decl;

    std::size_t pos = 0;
    if (looks_like_document_declaration(text)) {
        decl.level = DeclarationLevel::Document;
        pos = 3;
    } else if (looks_like_sheet_declaration(text)) {
        decl.level = DeclarationLevel::Sheet;
        pos = 2;
    } else {
        throw ParseError("declaration must begin with '!!' or '!!!'", 0);
    }

    if (text.compare(pos, kDeclKeyword.size(), kDeclKeyword) != 0) {
        throw ParseError("expected the ObjTables keyword", pos);
    }
    pos += kDeclKeyword.size();
    if (pos < text.size() && key_char(text[pos])) {
        throw ParseError("expected the ObjTables keyword", pos - kDeclKeyword.size());
    }

    while (true) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
        if (pos >= text.size()) break;

        std::size_t key_start = pos;
        while (pos < text.size() && key_char(text[pos])) ++pos;
        if (pos == key_start) throw ParseError("expected a key", pos);
        std::string key = text.substr(key_start, pos - key_start);
        if (decl.value(key)) throw ParseError("duplicate key '" + key + "'", key_start);

        if (pos >= text.size() || text[pos] != '=') throw ParseError("expected '=' after key", pos);
        ++pos;
        if (pos >= text.size() || (text[pos] != '\'' && text[pos] != '"')) {
            throw ParseError("expected a quoted value", pos);
        }
        char quote = text[pos++];
        std::size_t end = text.find(quote, pos);
        if (end == std::string::npos) throw ParseError("unterminated value", pos - 1);
        decl.pairs.emplace_back(std::move(key), text.substr(pos, end - pos));
        pos = end + 1;
        if (pos < text.size() && text[pos] != ' ' && text[pos] != '\t') {
            throw ParseError("expected a space between pairs", pos);
        }
    }

    if (decl.level == DeclarationLevel::Document) {
        if (!decl.value(kDeclVersionKey)) {
            throw ParseError("document declaration requires objTablesVersion", text.size());
        }
    } else {
        const std::string* type = decl.value("type");
        if (!type) throw ParseError("sheet declaration requires a type", text.size());
        if (*type != kDeclTypeData && *type != kDeclTypeSchema && *type != kDeclTypeToc &&
            *type != kDeclTypeMigration) {
            throw ParseError("unknown sheet type '" + *type + "'", text.size());
        }
        if (*type == kDeclTypeData && !decl.value("class")) {
            throw ParseError("Data sheet requires 'class'", text.size());
        }
        if (*type == kDeclTypeMigration &&
            (!decl.value("fromVersion") || !decl.value("toVersion"))) {
            throw ParseError("Migration sheet requires fromVersion and toVersion", text.size());
        }
    }
    return decl;
}

std::string render_declaration(const Declaration& declaration) {
    std::string out = declaration.level == DeclarationLevel::Document ? "!!!" : "!!";
    out += kDeclKeyword;
    for (const auto& [key, value] : declaration.pairs) {
        out += ' ';
        out += key;
        out += '=';
        if (value.find('\'') == std::string::npos) {
            out += '\'' + value + '\'';
        } else if (value.find('"') == std::string::npos) {
            out += '"' + value + '"';
        } else {
            throw SerializeError("declaration value cannot contain both quote characters: " + value);
        }
    }
    return out;
}

std::string trim_copy(std::string_view text) {
    std::size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(begin, end - begin + 1));
}

bool heading_text(std::string_view cell, std::string& out) {
    std::size_t begin = cell.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return false;
    std::size_t end = cell.find_last_not_of(" \t\r\n");
    std::string_view trimmed = cell.substr(begin, end - begin + 1);
    if (trimmed.empty() || trimmed[0] != '!') return false;
    // `!!` opens a declaration, not a heading
    if (trimmed.size() > 1 && trimmed[1] == '!') return false;
    trimmed.remove_prefix(1);
    begin = trimmed.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) {
        out.clear();
        return true;
    }
    end = trimmed.find_last_not_of(" \t\r\n");
    out = std::string(trimmed.substr(begin, end - begin + 1));
    return true;
}

}  // namespace tablekit

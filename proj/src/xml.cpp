#include "xml.hpp"

#include <cstdint>

#include "tablekit/errors.hpp"

namespace tablekit::xml {

namespace {

[[noreturn]] void fail(const std::string& why) { throw FormatError("malformed XML: " + why); }

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(char(cp));
    } else if (cp < 0x800) {
        out.push_back(char(0xC0 | (cp >> 6)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(char(0xE0 | (cp >> 12)));
        out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(char(0xF0 | (cp >> 18)));
        out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    }
}

std::string strip_prefix(std::string_view name) {
    auto colon = name.find(':');
    return std::string(colon == std::string_view::npos ? name : name.substr(colon + 1));
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {
        if (text_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    }

    Node parse_root() {
        while (true) {
            skip_misc();
            if (pos_ >= text_.size()) fail("no root element");
            if (text_[pos_] != '<') fail("text outside the root element");
            if (starts_with("<?") || starts_with("<!")) {
                skip_markup_decl();
                continue;
            }
            Node root = parse_element();
            skip_misc();
            return root;
        }
    }

private:
    bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    void skip_misc() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' || text_[pos_] == '\n')) {
            ++pos_;
        }
    }

    void skip_markup_decl() {
        if (starts_with("<?")) {
            auto end = text_.find("?>", pos_);
            if (end == std::string_view::npos) fail("unterminated processing instruction");
            pos_ = end + 2;
        } else if (starts_with("<!--")) {
            auto end = text_.find("-->", pos_ + 4);
            if (end == std::string_view::npos) fail("unterminated comment");
            pos_ = end + 3;
        } else if (starts_with("<!")) {
            auto end = text_.find('>', pos_);
            if (end == std::string_view::npos) fail("unterminated declaration");
            pos_ = end + 1;
        }
    }

    bool name_char(char c) const {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-' || c == '.' || c == ':';
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
        if (pos_ == start) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size();) {
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                ++i;
                continue;
            }
            auto end = raw.find(';', i);
            if (end == std::string_view::npos) fail("unterminated entity reference");
            std::string_view entity = raw.substr(i + 1, end - i - 1);
            if (entity == "lt") {
                out.push_back('<');
            } else if (entity == "gt") {
                out.push_back('>');
            } else if (entity == "amp") {
                out.push_back('&');
            } else if (entity == "quot") {
                out.push_back('"');
            } else if (entity == "apos") {
                out.push_back('\'');
            } else if (!entity.empty() && entity[0] == '#') {
                std::uint32_t cp = 0;
                bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
                std::string_view digits = entity.substr(hex ? 2 : 1);
                if (digits.empty()) fail("empty character reference");
                for (char c : digits) {
                    std::uint32_t d;
                    if (c >= '0' && c <= '9') {
                        d = c - '0';
                    } else if (hex && c >= 'a' && c <= 'f') {
                        d = c - 'a' + 10;
                    } else if (hex && c >= 'A' && c <= 'F') {
                        d = c - 'A' + 10;
                    } else {
                        fail("bad character reference");
                    }
                    cp = cp * (hex ? 16 : 10) + d;
                    if (cp > 0x10FFFF) fail("character reference out of range");
                }
                append_utf8(out, cp);
            } else {
                fail("unknown entity '" + std::string(entity) + "'");
            }
            i = end + 1;
        }
        return out;
    }

    Node parse_element() {
        ++pos_;  // consume '<'
        Node node;
        node.name = strip_prefix(parse_name());
        while (true) {
            skip_misc();
            if (pos_ >= text_.size()) fail("unterminated start tag");
            if (text_[pos_] == '>') {
                ++pos_;
                parse_content(node);
                return node;
            }
            if (starts_with("/>")) {
                pos_ += 2;
                return node;
            }
            std::string attr_name = strip_prefix(parse_name());
            skip_misc();
            if (pos_ >= text_.size() || text_[pos_] != '=') fail("expected '=' in attribute");
            ++pos_;
            skip_misc();
            if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\'')) {
                fail("expected quoted attribute value");
            }
            char quote = text_[pos_++];
            auto end = text_.find(quote, pos_);
            if (end == std::string_view::npos) fail("unterminated attribute value");
            node.attrs.emplace_back(std::move(attr_name), decode_entities(text_.substr(pos_, end - pos_)));
            pos_ = end + 1;
        }
    }

    void parse_content(Node& node) {
        std::string pending_text;
        auto flush_text = [&] {
            if (!pending_text.empty()) {
                Node text_node;
                text_node.text = std::move(pending_text);
                node.children.push_back(std::move(text_node));
                pending_text.clear();
            }
        };
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated element <" + node.name + ">");
            if (text_[pos_] != '<') {
                std::size_t start = pos_;
                while (pos_ < text_.size() && text_[pos_] != '<') ++pos_;
                pending_text += decode_entities(text_.substr(start, pos_ - start));
                continue;
            }
            if (starts_with("</")) {
                flush_text();
                pos_ += 2;
                std::string closing = strip_prefix(parse_name());
                if (closing != node.name) fail("mismatched closing tag </" + closing + ">");
                skip_misc();
                if (pos_ >= text_.size() || text_[pos_] != '>') fail("malformed closing tag");
                ++pos_;
                return;
            }
            if (starts_with("<![CDATA[")) {
                auto end = text_.find("]]>", pos_ + 9);
                if (end == std::string_view::npos) fail("unterminated CDATA section");
                pending_text += std::string(text_.substr(pos_ + 9, end - pos_ - 9));
                pos_ = end + 3;
                continue;
            }
            if (starts_with("<?") || starts_with("<!")) {
                skip_markup_decl();
                continue;
            }
            flush_text();
            node.children.push_back(parse_element());
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

const std::string* Node::attr(std::string_view key) const {
    for (const auto& [name_, value] : attrs) {
        if (name_ == key) return &value;
    }
    return nullptr;
}

const Node* Node::child(std::string_view child_name) const {
    for (const Node& c : children) {
        if (c.name == child_name) return &c;
    }
    return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view child_name) const {
    std::vector<const Node*> out;
    for (const Node& c : children) {
        if (c.name == child_name) out.push_back(&c);
    }
    return out;
}

std::string Node::text_content() const {
    if (is_text()) return text;
    std::string out;
    for (const Node& c : children) out += c.text_content();
    return out;
}

Node parse_document(std::string_view text) { return Parser(text).parse_root(); }

std::string escape_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '\r': out += "&#xD;"; break;  // literal CR would be folded to LF
            default: out.push_back(c);
        }
    }
    return out;
}

std::string escape_attr(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\r': out += "&#xD;"; break;
            case '\n': out += "&#xA;"; break;
            case '\t': out += "&#x9;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace tablekit::xml

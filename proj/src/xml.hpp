#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tablekit::xml {

/// Element or text node. Text nodes have an empty name and carry `text`;
/// namespace prefixes are stripped from element and attribute names.
struct Node {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<Node> children;
    std::string text;

    bool is_text() const { return name.empty(); }
    const std::string* attr(std::string_view key) const;
    const Node* child(std::string_view child_name) const;
    std::vector<const Node*> children_named(std::string_view child_name) const;
    /// Concatenated text of all descendant text nodes.
    std::string text_content() const;
};

/// Parses one document and returns its root element. Throws FormatError on
/// malformed input. Comments, processing instructions, and DOCTYPE are
/// skipped; CDATA becomes text.
Node parse_document(std::string_view text);

std::string escape_text(std::string_view text);
std::string escape_attr(std::string_view text);

}  // namespace tablekit::xml

#include "tablekit/grid.hpp"

namespace tablekit {

Grid read_delimited_text(std::string name, std::string_view text, char delimiter) {
    Grid grid;
    grid.name = std::move(name);

    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool any_field = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        any_field = true;
    };
    auto end_row = [&] {
        end_field();
        grid.cells.push_back(std::move(row));
        row.clear();
        any_field = false;
    };

    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
        } else if (c == '"') {
            in_quotes = true;
            ++i;
        } else if (c == delimiter) {
            end_field();
            ++i;
        } else if (c == '\r' || c == '\n') {
            end_row();
            i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
        } else {
            field.push_back(c);
            ++i;
        }
    }
    // A final line without a newline still counts; a trailing newline does
    // not open an empty row.
    if (!field.empty() || any_field || in_quotes) end_row();

    grid.normalize_extent();
    if (grid.row_count() > kMaxGridRows || grid.col_count() > kMaxGridCols) {
        throw FormatError("grid '" + grid.name + "' exceeds the supported size");
    }
    return grid;
}

std::string write_delimited_text(const Grid& grid, char delimiter) {
    std::string out;
    for (const auto& row : grid.cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out.push_back(delimiter);
            const std::string& cell = row[c];
            bool needs_quotes = cell.find_first_of("\"\r\n") != std::string::npos ||
                                cell.find(delimiter) != std::string::npos;
            if (!needs_quotes) {
                out += cell;
                continue;
            }
            out.push_back('"');
            for (char ch : cell) {
                if (ch == '"') out.push_back('"');
                out.push_back(ch);
            }
            out.push_back('"');
        }
        out += "\r\n";
    }
    return out;
}

}  // namespace tablekit

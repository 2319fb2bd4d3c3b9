#include <charconv>
#include <cstdint>
#include <map>
#include <set>

#include "tablekit/grid.hpp"
#include "xml.hpp"
#include "zip.hpp"

namespace tablekit {

namespace {

constexpr std::string_view kXmlProlog = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
constexpr std::string_view kMainNs = "http://schemas.openxmlformats.org/spreadsheetml/2006/main";
constexpr std::string_view kRelNs = "http://schemas.openxmlformats.org/officeDocument/2006/relationships";

std::string column_letters(std::size_t col) {
    // 1-based column index to A, B, .., Z, AA, ..
    std::string out;
    while (col > 0) {
        out.insert(out.begin(), char('A' + (col - 1) % 26));
        col = (col - 1) / 26;
    }
    return out;
}

std::string cell_ref(std::size_t row, std::size_t col) {
    return column_letters(col) + std::to_string(row);
}

bool parse_cell_ref(std::string_view ref, std::size_t& row, std::size_t& col) {
    std::size_t i = 0;
    col = 0;
    while (i < ref.size() && ref[i] >= 'A' && ref[i] <= 'Z') {
        col = col * 26 + (ref[i] - 'A' + 1);
        ++i;
    }
    if (i == 0 || i == ref.size()) return false;
    row = 0;
    for (; i < ref.size(); ++i) {
        if (ref[i] < '0' || ref[i] > '9') return false;
        row = row * 10 + (ref[i] - '0');
        if (row > kMaxGridRows) return false;
    }
    return row > 0 && col > 0;
}

// True when the text is a plain integer that survives the trip through an
// IEEE double, so writing it as a numeric cell cannot change it.
bool exact_integer_text(const std::string& text) {
    std::size_t start = text.size() > 0 && text[0] == '-' ? 1 : 0;
    if (start == text.size()) return false;
    if (text[start] == '0') return text == "0";
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    std::int64_t value = 0;
    auto res = std::from_chars(text.data() + start, text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return false;
    return value <= (std::int64_t(1) << 53);
}

// Gathers <t> runs, skipping phonetic <rPh> blocks.
void collect_text_runs(const xml::Node& node, std::string& out) {
    if (node.name == "rPh") return;
    if (node.name == "t") {
        out += node.text_content();
        return;
    }
    for (const xml::Node& child : node.children) {
        if (!child.is_text()) collect_text_runs(child, out);
    }
}

std::string resolve_part_path(std::string_view target) {
    std::string path;
    if (!target.empty() && target[0] == '/') {
        path = std::string(target.substr(1));
    } else {
        path = "xl/" + std::string(target);
    }
    // Collapse "./" and "../" segments.
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        std::size_t slash = path.find('/', pos);
        if (slash == std::string::npos) slash = path.size();
        std::string seg = path.substr(pos, slash - pos);
        if (seg == "..") {
            if (!parts.empty()) parts.pop_back();
        } else if (!seg.empty() && seg != ".") {
            parts.push_back(std::move(seg));
        }
        pos = slash + 1;
    }
    std::string out;
    for (const auto& seg : parts) {
        if (!out.empty()) out += '/';
        out += seg;
    }
    return out;
}

struct CommentEntry {
    std::size_t row = 0;  // 1-based
    std::size_t col = 0;
    std::string text;
};

std::string render_sheet_xml(const Grid& grid, const std::map<std::pair<bool, std::string>, int>& style_ids,
                             bool has_comments) {
    std::string out(kXmlProlog);
    out += "<worksheet xmlns=\"";
    out += kMainNs;
    out += "\" xmlns:r=\"";
    out += kRelNs;
    out += "\"><sheetData>";
    for (std::size_t r = 0; r < grid.row_count(); ++r) {
        const auto& row = grid.cells[r];
        bool row_open = false;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string& value = row[c];
            const CellStyle* style = nullptr;
            if (auto it = grid.styles.find({r, c}); it != grid.styles.end()) style = &it->second;
            bool formatted = style && style->has_format();
            if (value.empty() && !formatted) continue;
            if (!row_open) {
                out += "<row r=\"" + std::to_string(r + 1) + "\">";
                row_open = true;
            }
            std::string ref = cell_ref(r + 1, c + 1);
            std::string style_attr;
            if (formatted) {
                int sid = style_ids.at({style->bold, style->fill});
                style_attr = " s=\"" + std::to_string(sid) + "\"";
            }
            if (value.empty()) {
                out += "<c r=\"" + ref + "\"" + style_attr + "/>";
            } else if (exact_integer_text(value)) {
                out += "<c r=\"" + ref + "\"" + style_attr + "><v>" + value + "</v></c>";
            } else {
                out += "<c r=\"" + ref + "\"" + style_attr + " t=\"inlineStr\"><is><t xml:space=\"preserve\">" +
                       xml::escape_text(value) + "</t></is></c>";
            }
        }
        if (row_open) out += "</row>";
    }
    out += "</sheetData>";
    if (has_comments) out += "<legacyDrawing r:id=\"rId1\"/>";
    out += "</worksheet>";
    return out;
}

std::string render_comments_xml(const std::vector<CommentEntry>& comments) {
    std::string out(kXmlProlog);
    out += "<comments xmlns=\"";
    out += kMainNs;
    out += "\"><authors><author></author></authors><commentList>";
    for (const CommentEntry& comment : comments) {
        out += "<comment ref=\"" + cell_ref(comment.row, comment.col) +
               "\" authorId=\"0\"><text><t xml:space=\"preserve\">" + xml::escape_text(comment.text) +
               "</t></text></comment>";
    }
    out += "</commentList></comments>";
    return out;
}

std::string render_vml(const std::vector<CommentEntry>& comments) {
    std::string out =
        "<xml xmlns:v=\"urn:schemas-microsoft-com:vml\" xmlns:o=\"urn:schemas-microsoft-com:office:office\" "
        "xmlns:x=\"urn:schemas-microsoft-com:office:excel\">"
        "<o:shapelayout v:ext=\"edit\"><o:idmap v:ext=\"edit\" data=\"1\"/></o:shapelayout>"
        "<v:shapetype id=\"_x0000_t202\" coordsize=\"21600,21600\" o:spt=\"202\" "
        "path=\"m,l,21600r21600,l21600,xe\"><v:stroke joinstyle=\"miter\"/>"
        "<v:path gradientshapeok=\"t\" o:connecttype=\"rect\"/></v:shapetype>";
    int shape_id = 1025;
    for (const CommentEntry& comment : comments) {
        out += "<v:shape id=\"_x0000_s" + std::to_string(shape_id++) +
               "\" type=\"#_x0000_t202\" style=\"position:absolute;width:108pt;height:60pt;"
               "z-index:1;visibility:hidden\" fillcolor=\"#ffffe1\" o:insetmode=\"auto\">"
               "<v:fill color2=\"#ffffe1\"/><v:shadow on=\"t\" color=\"black\" obscured=\"t\"/>"
               "<v:path o:connecttype=\"none\"/><v:textbox style=\"mso-direction-alt:auto\"/>"
               "<x:ClientData ObjectType=\"Note\"><x:MoveWithCells/><x:SizeWithCells/>"
               "<x:AutoFill>False</x:AutoFill><x:Row>" +
               std::to_string(comment.row - 1) + "</x:Row><x:Column>" + std::to_string(comment.col - 1) +
               "</x:Column></x:ClientData></v:shape>";
    }
    out += "</xml>";
    return out;
}

std::string render_styles_xml(const std::vector<std::pair<bool, std::string>>& combos) {
    std::string fills =
        "<fill><patternFill patternType=\"none\"/></fill><fill><patternFill patternType=\"gray125\"/></fill>";
    std::map<std::string, int> fill_ids;
    int next_fill = 2;
    for (const auto& [bold, fill] : combos) {
        if (fill.empty() || fill_ids.count(fill)) continue;
        fills += "<fill><patternFill patternType=\"solid\"><fgColor rgb=\"" + fill +
                 "\"/><bgColor indexed=\"64\"/></patternFill></fill>";
        fill_ids[fill] = next_fill++;
    }

    std::string xfs = "<xf numFmtId=\"0\" fontId=\"0\" fillId=\"0\" borderId=\"0\" xfId=\"0\"/>";
    for (const auto& [bold, fill] : combos) {
        int font_id = bold ? 1 : 0;
        int fill_id = fill.empty() ? 0 : fill_ids.at(fill);
        xfs += "<xf numFmtId=\"0\" fontId=\"" + std::to_string(font_id) + "\" fillId=\"" +
               std::to_string(fill_id) + "\" borderId=\"0\" xfId=\"0\"";
        if (bold) xfs += " applyFont=\"1\"";
        if (fill_id) xfs += " applyFill=\"1\"";
        xfs += "/>";
    }

    std::string out(kXmlProlog);
    out += "<styleSheet xmlns=\"";
    out += kMainNs;
    out += "\">";
    out +=
        "<fonts count=\"2\"><font><sz val=\"11\"/><name val=\"Calibri\"/></font>"
        "<font><b/><sz val=\"11\"/><name val=\"Calibri\"/></font></fonts>";
    out += "<fills count=\"" + std::to_string(next_fill) + "\">" + fills + "</fills>";
    out +=
        "<borders count=\"1\"><border><left/><right/><top/><bottom/><diagonal/></border></borders>"
        "<cellStyleXfs count=\"1\"><xf numFmtId=\"0\" fontId=\"0\" fillId=\"0\" borderId=\"0\"/>"
        "</cellStyleXfs>";
    out += "<cellXfs count=\"" + std::to_string(combos.size() + 1) + "\">" + xfs + "</cellXfs>";
    out += "<cellStyles count=\"1\"><cellStyle name=\"Normal\" xfId=\"0\" builtinId=\"0\"/></cellStyles>";
    out += "</styleSheet>";
    return out;
}

}  // namespace

RawWorkbook read_xlsx_bytes(std::string_view bytes) {
    std::map<std::string, std::string> parts;
    for (auto& entry : zip::read_archive(bytes)) {
        parts[std::move(entry.name)] = std::move(entry.data);
    }

    auto part = [&](const std::string& name) -> const std::string* {
        auto it = parts.find(name);
        return it == parts.end() ? nullptr : &it->second;
    };

    const std::string* workbook_xml = part("xl/workbook.xml");
    if (!workbook_xml) throw FormatError("not an xlsx workbook: xl/workbook.xml is missing");
    xml::Node workbook = xml::parse_document(*workbook_xml);

    std::map<std::string, std::string> rel_targets;
    if (const std::string* rels_xml = part("xl/_rels/workbook.xml.rels")) {
        xml::Node rels = xml::parse_document(*rels_xml);
        for (const xml::Node* rel : rels.children_named("Relationship")) {
            const std::string* id = rel->attr("Id");
            const std::string* target = rel->attr("Target");
            if (id && target) rel_targets[*id] = resolve_part_path(*target);
        }
    }

    std::vector<std::string> shared;
    if (const std::string* shared_xml = part("xl/sharedStrings.xml")) {
        xml::Node sst = xml::parse_document(*shared_xml);
        for (const xml::Node* si : sst.children_named("si")) {
            std::string text;
            collect_text_runs(*si, text);
            shared.push_back(std::move(text));
        }
    }

    RawWorkbook result;
    result.source_format = Container::Xlsx;
    std::set<std::string> seen_names;

    const xml::Node* sheets = workbook.child("sheets");
    std::size_t fallback_index = 0;
    for (const xml::Node* sheet : sheets ? sheets->children_named("sheet") : std::vector<const xml::Node*>{}) {
        ++fallback_index;
        const std::string* name = sheet->attr("name");
        const std::string* rid = sheet->attr("id");
        if (!name) throw FormatError("worksheet without a name");
        if (!seen_names.insert(*name).second) {
            throw NameCollisionError("duplicate worksheet name '" + *name + "'");
        }

        std::string path = "xl/worksheets/sheet" + std::to_string(fallback_index) + ".xml";
        if (rid) {
            auto it = rel_targets.find(*rid);
            if (it != rel_targets.end()) path = it->second;
        }
        const std::string* sheet_xml = part(path);
        if (!sheet_xml) throw FormatError("missing worksheet part " + path);
        xml::Node ws = xml::parse_document(*sheet_xml);

        Grid grid;
        grid.name = *name;
        const xml::Node* sheet_data = ws.child("sheetData");
        std::size_t next_row = 1;
        for (const xml::Node* row : sheet_data ? sheet_data->children_named("row")
                                               : std::vector<const xml::Node*>{}) {
            std::size_t row_num = next_row;
            if (const std::string* r = row->attr("r")) {
                row_num = 0;
                for (char c : *r) {
                    if (c < '0' || c > '9') throw FormatError("bad row number in " + path);
                    row_num = row_num * 10 + (c - '0');
                }
            }
            if (row_num == 0 || row_num > kMaxGridRows) throw FormatError("row out of range in " + path);
            next_row = row_num + 1;

            std::size_t next_col = 1;
            for (const xml::Node* cell : row->children_named("c")) {
                std::size_t cell_row = row_num;
                std::size_t cell_col = next_col;
                if (const std::string* r = cell->attr("r")) {
                    if (!parse_cell_ref(*r, cell_row, cell_col)) {
                        throw FormatError("bad cell reference '" + *r + "' in " + path);
                    }
                }
                if (cell_col > kMaxGridCols) throw FormatError("column out of range in " + path);
                next_col = cell_col + 1;

                const std::string* type = cell->attr("t");
                std::string value;
                if (type && *type == "inlineStr") {
                    if (const xml::Node* is = cell->child("is")) collect_text_runs(*is, value);
                } else if (type && *type == "s") {
                    const xml::Node* v = cell->child("v");
                    if (!v) continue;
                    std::size_t index = 0;
                    auto text = v->text_content();
                    auto res = std::from_chars(text.data(), text.data() + text.size(), index);
                    if (res.ec != std::errc() || index >= shared.size()) {
                        throw FormatError("bad shared string index in " + path);
                    }
                    value = shared[index];
                } else if (type && *type == "b") {
                    const xml::Node* v = cell->child("v");
                    value = v && v->text_content() == "1" ? "True" : "False";
                } else {
                    // numbers, formula strings, and error literals all carry
                    // their displayed text in <v>
                    if (const xml::Node* v = cell->child("v")) value = v->text_content();
                }
                if (!value.empty()) grid.set(cell_row - 1, cell_col - 1, std::move(value));
            }
        }
        grid.normalize_extent();
        result.grids.push_back(std::move(grid));
    }
    return result;
}

std::string write_xlsx_bytes(const RawWorkbook& workbook) {
    std::set<std::string> seen_names;
    for (const Grid& grid : workbook.grids) {
        if (!seen_names.insert(grid.name).second) {
            throw NameCollisionError("duplicate worksheet name '" + grid.name + "'");
        }
        if (grid.row_count() > kMaxGridRows || grid.col_count() > kMaxGridCols) {
            throw FormatError("grid '" + grid.name + "' exceeds the supported size");
        }
    }

    // Stable style table: one xf per distinct (bold, fill) pair in first-use
    // order; index 0 stays the default format.
    std::vector<std::pair<bool, std::string>> combos;
    std::map<std::pair<bool, std::string>, int> style_ids;
    for (const Grid& grid : workbook.grids) {
        for (const auto& [pos, style] : grid.styles) {
            if (!style.has_format()) continue;
            auto key = std::make_pair(style.bold, style.fill);
            if (style_ids.emplace(key, int(combos.size()) + 1).second) combos.push_back(key);
        }
    }

    std::vector<zip::Entry> entries;
    std::string content_types(kXmlProlog);
    content_types +=
        "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
        "<Default Extension=\"rels\" "
        "ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
        "<Default Extension=\"xml\" ContentType=\"application/xml\"/>";

    std::string workbook_xml(kXmlProlog);
    workbook_xml += "<workbook xmlns=\"";
    workbook_xml += kMainNs;
    workbook_xml += "\" xmlns:r=\"";
    workbook_xml += kRelNs;
    workbook_xml += "\"><sheets>";

    std::string workbook_rels(kXmlProlog);
    workbook_rels += "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">";

    std::vector<zip::Entry> sheet_entries;
    std::vector<zip::Entry> comment_entries;
    std::size_t comment_file = 0;
    bool any_comments = false;

    for (std::size_t i = 0; i < workbook.grids.size(); ++i) {
        const Grid& grid = workbook.grids[i];
        std::vector<CommentEntry> comments;
        for (const auto& [pos, style] : grid.styles) {
            if (!style.note.empty()) comments.push_back({pos.first + 1, pos.second + 1, style.note});
        }

        std::string sheet_name = "sheet" + std::to_string(i + 1);
        workbook_xml += "<sheet name=\"" + xml::escape_attr(grid.name) + "\" sheetId=\"" +
                        std::to_string(i + 1) + "\" r:id=\"rId" + std::to_string(i + 1) + "\"/>";
        workbook_rels += "<Relationship Id=\"rId" + std::to_string(i + 1) +
                         "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/"
                         "worksheet\" Target=\"worksheets/" +
                         sheet_name + ".xml\"/>";
        content_types += "<Override PartName=\"/xl/worksheets/" + sheet_name +
                         ".xml\" ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml."
                         "worksheet+xml\"/>";

        sheet_entries.push_back({"xl/worksheets/" + sheet_name + ".xml",
                                 render_sheet_xml(grid, style_ids, !comments.empty())});

        if (!comments.empty()) {
            any_comments = true;
            ++comment_file;
            std::string id = std::to_string(comment_file);
            std::string sheet_rels(kXmlProlog);
            sheet_rels +=
                "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
                "<Relationship Id=\"rId1\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/"
                "relationships/vmlDrawing\" Target=\"../drawings/vmlDrawing" +
                id +
                ".vml\"/>"
                "<Relationship Id=\"rId2\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/"
                "relationships/comments\" Target=\"../comments" +
                id + ".xml\"/></Relationships>";
            comment_entries.push_back({"xl/worksheets/_rels/" + sheet_name + ".xml.rels", sheet_rels});
            comment_entries.push_back({"xl/comments" + id + ".xml", render_comments_xml(comments)});
            comment_entries.push_back({"xl/drawings/vmlDrawing" + id + ".vml", render_vml(comments)});
            content_types += "<Override PartName=\"/xl/comments" + id +
                             ".xml\" ContentType=\"application/vnd.openxmlformats-officedocument."
                             "spreadsheetml.comments+xml\"/>";
        }
    }

    workbook_xml += "</sheets></workbook>";
    workbook_rels += "<Relationship Id=\"rId" + std::to_string(workbook.grids.size() + 1) +
                     "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/styles\" "
                     "Target=\"styles.xml\"/></Relationships>";
    if (any_comments) {
        content_types +=
            "<Default Extension=\"vml\" "
            "ContentType=\"application/vnd.openxmlformats-officedocument.vmlDrawing\"/>";
    }
    content_types +=
        "<Override PartName=\"/xl/workbook.xml\" "
        "ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml\"/>"
        "<Override PartName=\"/xl/styles.xml\" "
        "ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.styles+xml\"/>"
        "</Types>";

    std::string root_rels(kXmlProlog);
    root_rels +=
        "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
        "<Relationship Id=\"rId1\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/"
        "relationships/officeDocument\" Target=\"xl/workbook.xml\"/></Relationships>";

    entries.push_back({"[Content_Types].xml", std::move(content_types)});
    entries.push_back({"_rels/.rels", std::move(root_rels)});
    entries.push_back({"xl/workbook.xml", std::move(workbook_xml)});
    entries.push_back({"xl/_rels/workbook.xml.rels", std::move(workbook_rels)});
    entries.push_back({"xl/styles.xml", render_styles_xml(combos)});
    for (auto& entry : sheet_entries) entries.push_back(std::move(entry));
    for (auto& entry : comment_entries) entries.push_back(std::move(entry));
    return zip::write_archive(entries);
}

}  // namespace tablekit

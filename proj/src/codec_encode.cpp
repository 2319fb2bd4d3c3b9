#include "tablekit/codec.hpp"
#include "tablekit/version.hpp"

namespace tablekit {

namespace {

constexpr const char* kHeadingFill = "FFDDEBF7";
constexpr const char* kDeclarationFill = "FFD9D9D9";

struct ColumnSpec {
    const AttributeDef* group = nullptr;
    const AttributeDef* leaf = nullptr;
    bool group_start = false;  // first column of its group span
};

// One grid's content before orientation is applied: headings plus records,
// with styles addressed in logical coordinates.
struct LogicalTable {
    std::vector<std::vector<std::string>> rows;
    std::map<std::pair<std::size_t, std::size_t>, CellStyle> styles;
};

bool attribute_is_group(const Schema& schema, const AttributeDef& attribute) {
    if (!is_relation_kind(attribute.format.kind) || !attribute.format.target_class) return false;
    const ClassDef* target = schema.find_class(*attribute.format.target_class);
    return target && target->layout == ClassLayout::MultipleCells;
}

std::vector<ColumnSpec> plan_columns(const Schema& schema, const ClassDef& class_def) {
    std::vector<ColumnSpec> columns;
    for (const AttributeDef& attribute : class_def.attributes) {
        if (attribute_is_group(schema, attribute)) {
            const ClassDef* target = schema.find_class(*attribute.format.target_class);
            bool first = true;
            for (const AttributeDef& embedded : target->attributes) {
                columns.push_back({&attribute, &embedded, first});
                first = false;
            }
        } else {
            columns.push_back({nullptr, &attribute, false});
        }
    }
    return columns;
}

LogicalTable build_class_table(const Dataset& dataset, const ClassDef& class_def,
                               const EncodeOptions& options) {
    const Schema& schema = *dataset.schema;
    std::vector<ColumnSpec> columns = plan_columns(schema, class_def);
    bool two_rows = false;
    for (const ColumnSpec& column : columns) {
        if (column.group) two_rows = true;
    }

    LogicalTable table;
    if (two_rows) {
        std::vector<std::string> group_row(columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].group_start) group_row[j] = "!" + columns[j].group->verbose_name;
        }
        table.rows.push_back(std::move(group_row));
    }
    std::vector<std::string> heading_row(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        heading_row[j] = "!" + columns[j].leaf->verbose_name;
    }
    table.rows.push_back(std::move(heading_row));

    if (options.pretty) {
        std::size_t heading_rows = two_rows ? 2 : 1;
        for (std::size_t i = 0; i < heading_rows; ++i) {
            for (std::size_t j = 0; j < columns.size(); ++j) {
                if (table.rows[i][j].empty()) continue;
                CellStyle style;
                style.bold = true;
                style.fill = kHeadingFill;
                if (i + 1 == heading_rows) {
                    style.note = columns[j].leaf->name + ": " + print_attribute_format(columns[j].leaf->format);
                }
                table.styles[{i, j}] = std::move(style);
            }
        }
    }

    for (Instance* instance : dataset.instances_of(class_def.name)) {
        std::vector<std::string> row(columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const ColumnSpec& column = columns[j];
            const Instance* holder = instance;
            if (column.group) {
                const Value* group_value = instance->slot(column.group->name);
                const Instance* const* embedded =
                    group_value ? std::get_if<Instance*>(group_value) : nullptr;
                if (!embedded || !*embedded) continue;  // null embedded encodes as blanks
                holder = *embedded;
            }
            const Value* value = holder->slot(column.leaf->name);
            if (!value) continue;
            row[j] = format_cell(column.leaf->format, *value, &schema);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// Declaration rows stay horizontal at the top; the logical table below is
// written straight for row layout and transposed for column layout.
void emit_table(Grid& grid, const LogicalTable& table, std::size_t top, bool transposed) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t j = 0; j < table.rows[i].size(); ++j) {
            const std::string& text = table.rows[i][j];
            std::size_t row = transposed ? top + j : top + i;
            std::size_t col = transposed ? i : j;
            if (!text.empty()) grid.set(row, col, text);
        }
    }
    for (const auto& [pos, style] : table.styles) {
        std::size_t row = transposed ? top + pos.second : top + pos.first;
        std::size_t col = transposed ? pos.first : pos.second;
        grid.set_style(row, col, style);
    }
}

void style_declaration_rows(Grid& grid, std::size_t rows, bool pretty) {
    if (!pretty) return;
    for (std::size_t r = 0; r < rows; ++r) {
        CellStyle style;
        style.bold = true;
        style.fill = kDeclarationFill;
        grid.set_style(r, 0, style);
    }
}

std::string document_declaration_line(const Dataset& dataset) {
    Declaration doc;
    doc.level = DeclarationLevel::Document;
    doc.pairs = dataset.document_metadata;
    if (!doc.value(kDeclVersionKey)) {
        doc.pairs.insert(doc.pairs.begin(),
                         {std::string(kDeclVersionKey), std::string(kFormatVersion)});
    }
    return render_declaration(doc);
}

std::string data_declaration_line(const std::string& class_name) {
    Declaration decl;
    decl.level = DeclarationLevel::Sheet;
    decl.pairs.emplace_back("type", std::string(kDeclTypeData));
    decl.pairs.emplace_back("class", class_name);
    return render_declaration(decl);
}

}  // namespace

RawWorkbook encode_dataset(const Dataset& dataset, const EncodeOptions& options) {
    if (!dataset.schema) throw EncodeError("dataset has no schema");
    const Schema& schema = *dataset.schema;

    Dataset ordered = normalize(dataset);
    std::string doc_line = document_declaration_line(ordered);

    auto display_name = [&](const ClassDef& class_def) -> std::string {
        if (auto it = options.sheet_names.find(class_def.name); it != options.sheet_names.end()) {
            return it->second;
        }
        if (auto it = ordered.sheet_names.find(class_def.name); it != ordered.sheet_names.end()) {
            return it->second;
        }
        return class_def.verbose_name;
    };

    std::vector<const ClassDef*> data_classes;
    for (const ClassDef& class_def : schema.classes) {
        if (class_def.layout == ClassLayout::MultipleCells) continue;
        if (ordered.instance_count(class_def.name) == 0) continue;
        data_classes.push_back(&class_def);
    }

    RawWorkbook workbook;
    workbook.source_format = options.container;
    // xlsx carries the document declaration on the first worksheet only;
    // csv and tsv files each repeat it so every file is self-describing
    auto with_doc = [&](std::size_t grid_index) {
        return options.container != Container::Xlsx || grid_index == 0;
    };

    if (options.toc) {
        Grid grid;
        grid.name = std::string(kTocSheetName);
        std::size_t top = 0;
        if (with_doc(workbook.grids.size())) grid.set(top++, 0, doc_line);
        Declaration decl;
        decl.level = DeclarationLevel::Sheet;
        decl.pairs.emplace_back("type", std::string(kDeclTypeToc));
        grid.set(top, 0, render_declaration(decl));
        style_declaration_rows(grid, top + 1, options.pretty);
        ++top;

        const char* headings[] = {"!Worksheet", "!Description", "!Objects"};
        for (std::size_t c = 0; c < 3; ++c) {
            grid.set(top, c, headings[c]);
            if (options.pretty) {
                CellStyle style;
                style.bold = true;
                style.fill = kHeadingFill;
                grid.set_style(top, c, style);
            }
        }
        ++top;
        for (const ClassDef* class_def : data_classes) {
            grid.set(top, 0, display_name(*class_def));
            if (auto it = options.descriptions.find(class_def->name); it != options.descriptions.end()) {
                grid.set(top, 1, it->second);
            }
            grid.set(top, 2, std::to_string(ordered.instance_count(class_def->name)));
            ++top;
        }
        workbook.grids.push_back(std::move(grid));
    }

    for (const ClassDef* class_def : data_classes) {
        Grid grid;
        grid.name = "!!" + display_name(*class_def);
        std::size_t top = 0;
        if (with_doc(workbook.grids.size())) grid.set(top++, 0, doc_line);
        grid.set(top, 0, data_declaration_line(class_def->name));
        style_declaration_rows(grid, top + 1, options.pretty);
        ++top;

        LogicalTable table = build_class_table(ordered, *class_def, options);
        emit_table(grid, table, top, class_def->layout == ClassLayout::Column);
        workbook.grids.push_back(std::move(grid));
    }

    if (options.include_schema) {
        Grid grid = render_schema_grid(schema);
        if (with_doc(workbook.grids.size())) {
            grid.cells.insert(grid.cells.begin(), std::vector<std::string>(grid.col_count()));
            grid.set(0, 0, doc_line);
        }
        std::size_t declaration_rows = grid.at(0, 0) == doc_line ? 2 : 1;
        style_declaration_rows(grid, declaration_rows, options.pretty);
        if (options.pretty) {
            for (std::size_t c = 0; c < grid.col_count(); ++c) {
                if (grid.at(declaration_rows, c).empty()) continue;
                CellStyle style;
                style.bold = true;
                style.fill = kHeadingFill;
                grid.set_style(declaration_rows, c, style);
            }
        }
        workbook.grids.push_back(std::move(grid));
    }

    for (Grid& grid : workbook.grids) grid.normalize_extent();
    return workbook;
}

}  // namespace tablekit

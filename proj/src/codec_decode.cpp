#include <set>

#include "tablekit/codec.hpp"

namespace tablekit {

namespace {

// Uniform view over a data block: identity for row-layout classes, a
// transpose for column-layout ones. `top` skips the declaration rows, which
// are never transposed.
struct TableView {
    const Grid* grid;
    std::size_t top;
    bool transposed;

    std::size_t rows() const {
        if (transposed) return grid->col_count();
        return grid->row_count() > top ? grid->row_count() - top : 0;
    }
    std::size_t cols() const {
        if (transposed) return grid->row_count() > top ? grid->row_count() - top : 0;
        return grid->col_count();
    }
    const std::string& cell(std::size_t i, std::size_t j) const {
        return transposed ? grid->at(top + j, i) : grid->at(top + i, j);
    }
    CellOrigin origin(std::size_t i, std::size_t j) const {
        if (transposed) return {top + j + 1, i + 1};
        return {top + i + 1, j + 1};
    }
};

struct ColumnBinding {
    const AttributeDef* group = nullptr;  // set when the column feeds an embedded instance
    const AttributeDef* leaf = nullptr;
};

void add_issue(Dataset& dataset, Severity severity, const std::string& worksheet, CellOrigin at,
               std::string class_name, std::string attribute, std::string_view code, std::string message) {
    ReportEntry entry;
    entry.severity = severity;
    entry.worksheet = worksheet;
    entry.row = at.row;
    entry.column = at.column;
    entry.class_name = std::move(class_name);
    entry.attribute = std::move(attribute);
    entry.code = std::string(code);
    entry.message = std::move(message);
    dataset.decode_issues.push_back(std::move(entry));
}

// The group attributes of a class are its to-one relations targeting
// multiple_cells classes; their columns carry the embedded instance.
const AttributeDef* match_group_attribute(const Schema& schema, const ClassDef& class_def,
                                          const std::string& verbose) {
    for (const AttributeDef& attribute : class_def.attributes) {
        if (!is_relation_kind(attribute.format.kind) || !attribute.format.target_class) continue;
        const ClassDef* target = schema.find_class(*attribute.format.target_class);
        if (target && target->layout == ClassLayout::MultipleCells && attribute.verbose_name == verbose) {
            return &attribute;
        }
    }
    return nullptr;
}

bool class_has_group_attributes(const Schema& schema, const ClassDef& class_def) {
    for (const AttributeDef& attribute : class_def.attributes) {
        if (!is_relation_kind(attribute.format.kind) || !attribute.format.target_class) continue;
        const ClassDef* target = schema.find_class(*attribute.format.target_class);
        if (target && target->layout == ClassLayout::MultipleCells) return true;
    }
    return false;
}

bool attribute_is_group(const Schema& schema, const AttributeDef& attribute) {
    if (!is_relation_kind(attribute.format.kind) || !attribute.format.target_class) return false;
    const ClassDef* target = schema.find_class(*attribute.format.target_class);
    return target && target->layout == ClassLayout::MultipleCells;
}

void decode_data_grid(Dataset& dataset, const Grid& grid, const ClassDef& class_def, std::size_t top) {
    const Schema& schema = *dataset.schema;
    TableView table{&grid, top, class_def.layout == ClassLayout::Column};
    if (table.rows() == 0) return;

    auto row_has_heading = [&](std::size_t i) {
        std::string heading;
        for (std::size_t j = 0; j < table.cols(); ++j) {
            if (heading_text(table.cell(i, j), heading)) return true;
        }
        return false;
    };

    // Two heading rows only when the upper row names a group attribute;
    // otherwise a `!`-looking second row is already data.
    bool two_rows = false;
    if (class_has_group_attributes(schema, class_def) && table.rows() >= 2 && row_has_heading(0) &&
        row_has_heading(1)) {
        std::string heading;
        for (std::size_t j = 0; j < table.cols(); ++j) {
            if (heading_text(table.cell(0, j), heading) && match_group_attribute(schema, class_def, heading)) {
                two_rows = true;
                break;
            }
        }
    }
    const std::size_t leaf_row = two_rows ? 1 : 0;
    const std::size_t data_start = leaf_row + 1;

    std::vector<ColumnBinding> bindings(table.cols());
    std::set<std::pair<const AttributeDef*, const AttributeDef*>> bound;
    const AttributeDef* region = nullptr;

    for (std::size_t j = 0; j < table.cols(); ++j) {
        if (two_rows) {
            const std::string& group_cell = table.cell(0, j);
            std::string group_heading;
            if (heading_text(group_cell, group_heading)) {
                const AttributeDef* group = match_group_attribute(schema, class_def, group_heading);
                if (group) {
                    region = group;
                } else {
                    add_issue(dataset, Severity::Error, grid.name, table.origin(0, j), class_def.name, "",
                              kCodeUnknownHeading,
                              "no group attribute of " + class_def.name + " matches '!" + group_heading + "'");
                    region = nullptr;
                }
            } else if (!group_cell.empty()) {
                add_issue(dataset, Severity::Warning, grid.name, table.origin(0, j), class_def.name, "",
                          kCodeIgnoredColumn, "text above the heading row is ignored");
            }
        }

        const std::string& leaf_cell = table.cell(leaf_row, j);
        std::string heading;
        if (!heading_text(leaf_cell, heading)) {
            if (!leaf_cell.empty()) {
                add_issue(dataset, Severity::Warning, grid.name, table.origin(leaf_row, j), class_def.name,
                          "", kCodeIgnoredColumn, "column heading lacks the '!' prefix; column ignored");
            }
            continue;
        }

        const AttributeDef* group = nullptr;
        const AttributeDef* leaf = nullptr;
        if (region) {
            const ClassDef* target = schema.find_class(*region->format.target_class);
            if (const AttributeDef* embedded = target->find_attribute_by_verbose(heading)) {
                group = region;
                leaf = embedded;
            } else {
                region = nullptr;  // region ends where its headings stop matching
            }
        }
        if (!leaf) {
            const AttributeDef* direct = class_def.find_attribute_by_verbose(heading);
            if (direct && attribute_is_group(schema, *direct)) {
                add_issue(dataset, Severity::Error, grid.name, table.origin(leaf_row, j), class_def.name,
                          direct->name, kCodeUnknownHeading,
                          "'!" + heading + "' names an embedded class and must appear in the group row");
                continue;
            }
            if (!direct) {
                add_issue(dataset, Severity::Error, grid.name, table.origin(leaf_row, j), class_def.name, "",
                          kCodeUnknownHeading,
                          "no attribute of " + class_def.name + " matches '!" + heading + "'");
                continue;
            }
            leaf = direct;
        }

        if (!bound.insert({group, leaf}).second) {
            add_issue(dataset, Severity::Error, grid.name, table.origin(leaf_row, j), class_def.name,
                      leaf->name, kCodeDupHeading, "'!" + heading + "' is bound more than once");
            continue;
        }
        bindings[j] = {group, leaf};
    }

    for (std::size_t i = data_start; i < table.rows(); ++i) {
        bool all_empty = true;
        for (std::size_t j = 0; j < table.cols() && all_empty; ++j) {
            all_empty = table.cell(i, j).empty();
        }
        if (all_empty) continue;

        Instance* instance = dataset.create(class_def.name);
        instance->origin.worksheet = grid.name;
        instance->origin.row = table.origin(i, 0).row;
        for (const AttributeDef& attribute : class_def.attributes) {
            instance->slots[attribute.name] = std::monostate{};
        }

        // An embedded instance exists only when at least one of its cells is
        // non-empty; an all-blank group stays null.
        std::map<const AttributeDef*, Instance*> embedded_of;
        for (std::size_t j = 0; j < table.cols(); ++j) {
            const ColumnBinding& binding = bindings[j];
            if (!binding.group || embedded_of.count(binding.group) || table.cell(i, j).empty()) continue;
            Instance* embedded = dataset.create(*binding.group->format.target_class);
            embedded->owner = instance;
            embedded->origin.worksheet = grid.name;
            embedded->origin.row = instance->origin.row;
            const ClassDef* target = schema.find_class(embedded->class_name);
            for (const AttributeDef& attribute : target->attributes) {
                embedded->slots[attribute.name] = std::monostate{};
            }
            instance->slots[binding.group->name] = embedded;
            instance->origin.cells[binding.group->name] = table.origin(i, j);
            embedded_of[binding.group] = embedded;
        }

        for (std::size_t j = 0; j < table.cols(); ++j) {
            const ColumnBinding& binding = bindings[j];
            if (!binding.leaf) continue;
            const std::string& text = table.cell(i, j);
            CellOrigin at = table.origin(i, j);

            Instance* holder = instance;
            if (binding.group) {
                auto it = embedded_of.find(binding.group);
                if (it == embedded_of.end()) continue;  // group is all blank
                holder = it->second;
            }
            holder->origin.cells[binding.leaf->name] = at;
            if (text.empty()) continue;
            try {
                holder->slots[binding.leaf->name] = parse_cell(binding.leaf->format, text);
            } catch (const CellError& error) {
                add_issue(dataset, Severity::Error, grid.name, at, holder->class_name, binding.leaf->name,
                          kCodeBadType, error.what());
            }
        }
    }
}

void decode_toc_grid(Dataset& dataset, const Grid& grid, std::size_t top) {
    std::map<std::string, std::size_t> columns;
    std::string heading;
    for (std::size_t c = 0; c < grid.col_count(); ++c) {
        if (heading_text(grid.at(top, c), heading)) columns.emplace(heading, c);
    }
    auto worksheet_col = columns.find("Worksheet");
    if (worksheet_col == columns.end()) return;

    for (std::size_t r = top + 1; r < grid.row_count(); ++r) {
        TocEntry entry;
        entry.row = r + 1;
        entry.worksheet = trim_copy(grid.at(r, worksheet_col->second));
        if (auto it = columns.find("Description"); it != columns.end()) {
            entry.description = grid.at(r, it->second);
        }
        if (auto it = columns.find("Objects"); it != columns.end()) {
            const std::string& text = grid.at(r, it->second);
            if (!text.empty()) {
                try {
                    AttributeFormat integer_format;
                    integer_format.kind = FormatKind::Integer;
                    entry.objects = std::get<std::int64_t>(parse_cell(integer_format, text));
                } catch (const CellError&) {
                    add_issue(dataset, Severity::Warning, grid.name, {r + 1, it->second + 1}, "", "",
                              kCodeTocMismatch, "object count '" + text + "' is not an integer");
                }
            }
        }
        if (entry.worksheet.empty() && !entry.objects) continue;
        dataset.toc_entries.push_back(std::move(entry));
    }
}

void rebuild_reverse_links(Dataset& dataset) {
    const Schema& schema = *dataset.schema;
    for (Instance& instance : dataset.pool) instance.reverse.clear();
    for (Instance& instance : dataset.pool) {
        const ClassDef* class_def = schema.find_class(instance.class_name);
        if (!class_def) continue;
        for (const AttributeDef& attribute : class_def->attributes) {
            if (!is_relation_kind(attribute.format.kind) || !attribute.format.related_name) continue;
            const std::string& related = *attribute.format.related_name;
            const Value* value = instance.slot(attribute.name);
            if (!value) continue;
            if (auto* const* embedded = std::get_if<Instance*>(value)) {
                if (*embedded) (*embedded)->reverse[related].push_back(&instance);
            } else if (auto* ref = std::get_if<Reference>(value)) {
                if (ref->target) ref->target->reverse[related].push_back(&instance);
            } else if (auto* refs = std::get_if<ReferenceList>(value)) {
                for (const Reference& ref : *refs) {
                    if (ref.target) ref.target->reverse[related].push_back(&instance);
                }
            }
        }
    }
}

}  // namespace

void resolve_dataset_references(Dataset& dataset) {
    const Schema& schema = *dataset.schema;

    // This pass owns dangling-reference bookkeeping; stale entries from a
    // previous resolution would double up.
    std::erase_if(dataset.decode_issues,
                  [](const ReportEntry& entry) { return entry.code == kCodeUnresolvedRef; });

    std::map<std::string, std::map<std::string, Instance*>> index;
    for (const ClassDef& class_def : schema.classes) {
        if (!class_def.primary_attribute()) continue;
        auto& class_index = index[class_def.name];
        for (Instance* instance : dataset.instances_of(class_def.name)) {
            if (auto key = instance_key(schema, *instance)) class_index.emplace(*key, instance);
        }
    }

    auto canonical_key = [&](const ClassDef& target, const std::string& key) -> std::string {
        const AttributeDef* primary = target.primary_attribute();
        if (!primary) return key;
        try {
            Value value = parse_cell(primary->format, key);
            if (value_is_null(value)) return key;
            return format_cell(primary->format, value);
        } catch (const CellError&) {
            return key;
        }
    };

    for (Instance& instance : dataset.pool) {
        const ClassDef* class_def = schema.find_class(instance.class_name);
        if (!class_def) continue;
        for (const AttributeDef& attribute : class_def->attributes) {
            if (!is_relation_kind(attribute.format.kind)) continue;
            const ClassDef* target = schema.find_class(*attribute.format.target_class);
            if (!target || target->layout == ClassLayout::MultipleCells) continue;
            auto slot_it = instance.slots.find(attribute.name);
            if (slot_it == instance.slots.end()) continue;

            auto resolve_one = [&](Reference& ref) {
                std::string canon = canonical_key(*target, ref.key);
                auto& class_index = index[target->name];
                auto hit = class_index.find(canon);
                if (hit != class_index.end()) {
                    ref.target = hit->second;
                    ref.key = canon;
                } else {
                    ref.target = nullptr;
                    add_issue(dataset, Severity::Error, instance.origin.worksheet,
                              instance.origin.cell(attribute.name), instance.class_name, attribute.name,
                              kCodeUnresolvedRef,
                              "no " + target->name + " has key '" + ref.key + "'");
                }
            };
            if (auto* ref = std::get_if<Reference>(&slot_it->second)) {
                resolve_one(*ref);
            } else if (auto* refs = std::get_if<ReferenceList>(&slot_it->second)) {
                for (Reference& ref : *refs) resolve_one(ref);
            }
        }
    }
    rebuild_reverse_links(dataset);
}

Dataset decode_dataset(const RawWorkbook& workbook, std::shared_ptr<const Schema> schema) {
    Dataset dataset;
    dataset.schema = std::move(schema);
    bool have_metadata = false;

    for (const Grid& grid : workbook.grids) {
        std::size_t r = 0;
        const std::string& first = grid.at(0, 0);
        if (looks_like_document_declaration(first)) {
            try {
                Declaration doc = parse_declaration(first);
                if (!have_metadata) {
                    dataset.document_metadata = doc.pairs;
                    have_metadata = true;
                } else if (dataset.document_metadata != doc.pairs) {
                    add_issue(dataset, Severity::Error, grid.name, {1, 1}, "", "", kCodeBadDeclaration,
                              "document declarations disagree between worksheets");
                }
            } catch (const ParseError& error) {
                add_issue(dataset, Severity::Error, grid.name, {1, 1}, "", "", kCodeBadDeclaration,
                          error.what());
            }
            r = 1;
        }

        const std::string& decl_cell = grid.at(r, 0);
        if (!looks_like_sheet_declaration(decl_cell)) {
            add_issue(dataset, Severity::Warning, grid.name, {r + 1, 1}, "", "", kCodeIgnoredSheet,
                      "worksheet has no '!!ObjTables' declaration");
            continue;
        }
        Declaration decl;
        try {
            decl = parse_declaration(decl_cell);
        } catch (const ParseError& error) {
            add_issue(dataset, Severity::Error, grid.name, {r + 1, 1}, "", "", kCodeBadDeclaration,
                      error.what());
            continue;
        }

        const std::string& type = *decl.value("type");
        if (type == kDeclTypeSchema || type == kDeclTypeMigration) continue;
        if (type == kDeclTypeToc) {
            decode_toc_grid(dataset, grid, r + 1);
            continue;
        }

        const std::string& class_name = *decl.value("class");
        const ClassDef* class_def = dataset.schema->find_class(class_name);
        if (!class_def) {
            add_issue(dataset, Severity::Error, grid.name, {r + 1, 1}, class_name, "", kCodeUnknownClass,
                      "schema has no class '" + class_name + "'");
            continue;
        }
        if (class_def->layout == ClassLayout::MultipleCells) {
            add_issue(dataset, Severity::Error, grid.name, {r + 1, 1}, class_name, "", kCodeBadDeclaration,
                      "embedded class '" + class_name + "' cannot govern a worksheet");
            continue;
        }

        std::string display = grid.name;
        if (display.rfind("!!", 0) == 0) display = display.substr(2);
        dataset.sheet_names.emplace(class_name, display);

        decode_data_grid(dataset, grid, *class_def, r + 1);
    }

    resolve_dataset_references(dataset);
    return dataset;
}

}  // namespace tablekit

#include "tablekit/schema.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tablekit {

namespace {

struct KindName {
    FormatKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {FormatKind::String, "String"},
    {FormatKind::Integer, "Integer"},
    {FormatKind::PositiveInteger, "PositiveInteger"},
    {FormatKind::Float, "Float"},
    {FormatKind::Boolean, "Boolean"},
    {FormatKind::Date, "Date"},
    {FormatKind::Url, "Url"},
    {FormatKind::Enum, "Enum"},
    {FormatKind::ChemicalEquation, "ChemicalEquation"},
    {FormatKind::OneToOne, "OneToOne"},
    {FormatKind::OneToMany, "OneToMany"},
    {FormatKind::ManyToOne, "ManyToOne"},
    {FormatKind::ManyToMany, "ManyToMany"},
};

}  // namespace

bool is_relation_kind(FormatKind kind) {
    switch (kind) {
        case FormatKind::OneToOne:
        case FormatKind::OneToMany:
        case FormatKind::ManyToOne:
        case FormatKind::ManyToMany:
            return true;
        default:
            return false;
    }
}

bool is_to_many_kind(FormatKind kind) {
    return kind == FormatKind::OneToMany || kind == FormatKind::ManyToMany;
}

const char* format_kind_name(FormatKind kind) {
    for (const auto& entry : kKindNames) {
        if (entry.kind == kind) return entry.name;
    }
    return "String";
}

std::optional<FormatKind> format_kind_from_name(std::string_view name) {
    for (const auto& entry : kKindNames) {
        if (name == entry.name) return entry.kind;
    }
    return std::nullopt;
}

const char* class_layout_name(ClassLayout layout) {
    switch (layout) {
        case ClassLayout::Row:
            return "row";
        case ClassLayout::Column:
            return "column";
        case ClassLayout::MultipleCells:
            return "multiple_cells";
    }
    return "row";
}

std::optional<ClassLayout> class_layout_from_name(std::string_view name) {
    if (name == "row") return ClassLayout::Row;
    if (name == "column") return ClassLayout::Column;
    if (name == "multiple_cells") return ClassLayout::MultipleCells;
    return std::nullopt;
}

const AttributeDef* ClassDef::find_attribute(std::string_view attr_name) const {
    for (const auto& attr : attributes) {
        if (attr.name == attr_name) return &attr;
    }
    return nullptr;
}

const AttributeDef* ClassDef::find_attribute_by_verbose(std::string_view verbose) const {
    for (const auto& attr : attributes) {
        if (attr.verbose_name == verbose) return &attr;
    }
    return nullptr;
}

const AttributeDef* ClassDef::primary_attribute() const {
    for (const auto& attr : attributes) {
        if (attr.format.primary) return &attr;
    }
    return nullptr;
}

const ClassDef* Schema::find_class(std::string_view name) const {
    for (const auto& cls : classes) {
        if (cls.name == name) return &cls;
    }
    return nullptr;
}

bool identifier_valid(std::string_view name) {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto alnum = [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); };
    if (!alpha(name[0])) return false;
    return std::all_of(name.begin() + 1, name.end(), alnum);
}

namespace {

void check_attribute_format(const Schema& schema, const ClassDef& cls, const AttributeDef& attr,
                            std::vector<SchemaError>& errors) {
    const AttributeFormat& fmt = attr.format;
    auto add = [&](const char* code, std::string message) {
        errors.push_back({code, cls.name, attr.name, std::move(message)});
    };

    if (is_relation_kind(fmt.kind)) {
        if (!fmt.target_class || !fmt.related_name) {
            add(kSchemaBadFormat, "relation attribute requires a target class and a related_name");
        }
        if (fmt.primary) {
            add(kSchemaBadFormat, "a relation attribute cannot be primary");
        }
        if (fmt.related_name && !identifier_valid(*fmt.related_name)) {
            add(kSchemaBadName, "related_name '" + *fmt.related_name + "' is not a valid identifier");
        }
        if (fmt.target_class) {
            const ClassDef* target = schema.find_class(*fmt.target_class);
            if (!target) {
                add(kSchemaMissingTarget, "class " + cls.name + " attribute " + attr.name +
                                              ": unknown relation target '" + *fmt.target_class + "'");
            } else {
                if (target->layout == ClassLayout::MultipleCells) {
                    if (is_to_many_kind(fmt.kind)) {
                        add(kSchemaBadFormat,
                            "an embedded (multiple_cells) class can only be the target of a to-one relation");
                    }
                    if (cls.layout == ClassLayout::MultipleCells) {
                        add(kSchemaBadFormat, "embedded classes cannot embed further embedded classes");
                    }
                }
            }
        }
    } else {
        if (fmt.target_class || fmt.related_name) {
            add(kSchemaBadFormat, "only relation attributes may carry a target class or related_name");
        }
    }
    if (fmt.primary && !fmt.unique) {
        add(kSchemaBadFormat, "a primary attribute must be unique");
    }
    if (fmt.kind == FormatKind::Enum && fmt.enum_values.empty()) {
        add(kSchemaBadFormat, "Enum attribute requires at least one member");
    }
    if (fmt.kind != FormatKind::Enum && !fmt.enum_values.empty()) {
        add(kSchemaBadFormat, "only Enum attributes may carry members");
    }
}

}  // namespace

std::vector<SchemaError> validate_schema(const Schema& schema) {
    std::vector<SchemaError> errors;

    std::set<std::string> seen_classes;
    for (const auto& cls : schema.classes) {
        if (!seen_classes.insert(cls.name).second) {
            errors.push_back({kSchemaDupClass, cls.name, "", "duplicate class name '" + cls.name + "'"});
        }
    }

    for (const auto& cls : schema.classes) {
        if (!identifier_valid(cls.name)) {
            errors.push_back({kSchemaBadName, cls.name, "", "class name '" + cls.name + "' is not a valid identifier"});
        }
        if (cls.verbose_name.empty()) {
            errors.push_back({kSchemaEmptyVerbose, cls.name, "", "class '" + cls.name + "' has an empty verbose name"});
        }

        std::set<std::string> seen_attrs;
        int primaries = 0;
        for (const auto& attr : cls.attributes) {
            if (!seen_attrs.insert(attr.name).second) {
                errors.push_back({kSchemaDupAttr, cls.name, attr.name,
                                  "duplicate attribute '" + attr.name + "' in class '" + cls.name + "'"});
            }
            if (!identifier_valid(attr.name)) {
                errors.push_back({kSchemaBadName, cls.name, attr.name,
                                  "attribute name '" + attr.name + "' is not a valid identifier"});
            }
            if (attr.verbose_name.empty()) {
                errors.push_back({kSchemaEmptyVerbose, cls.name, attr.name,
                                  "attribute '" + cls.name + "." + attr.name + "' has an empty verbose name"});
            }
            if (attr.parent_class != cls.name) {
                errors.push_back({kSchemaBadName, cls.name, attr.name,
                                  "attribute '" + attr.name + "' names parent '" + attr.parent_class +
                                      "' but belongs to class '" + cls.name + "'"});
            }
            if (attr.format.primary) ++primaries;
            check_attribute_format(schema, cls, attr, errors);
        }
        if (primaries > 1) {
            errors.push_back({kSchemaMultiPrimary, cls.name, "",
                              "class '" + cls.name + "' has more than one primary attribute"});
        }
    }

    // Duplicate related_name on the same target class.
    std::map<std::pair<std::string, std::string>, std::string> related_names;
    for (const auto& cls : schema.classes) {
        for (const auto& attr : cls.attributes) {
            if (!attr.format.target_class || !attr.format.related_name) continue;
            auto key = std::make_pair(*attr.format.target_class, *attr.format.related_name);
            auto [it, inserted] = related_names.emplace(key, cls.name + "." + attr.name);
            if (!inserted) {
                errors.push_back({kSchemaDupRelatedName, cls.name, attr.name,
                                  "related_name '" + *attr.format.related_name + "' on target '" +
                                      *attr.format.target_class + "' is already used by " + it->second});
            }
        }
    }

    // A keyed worksheet class that is referenced must expose a primary key.
    for (const auto& cls : schema.classes) {
        for (const auto& attr : cls.attributes) {
            if (!attr.format.target_class) continue;
            const ClassDef* target = schema.find_class(*attr.format.target_class);
            if (!target || target->layout == ClassLayout::MultipleCells) continue;
            if (!target->primary_attribute()) {
                errors.push_back({kSchemaNoPrimary, target->name, cls.name + "." + attr.name,
                                  "class '" + target->name + "' is referenced by " + cls.name + "." + attr.name +
                                      " but has no primary attribute"});
            }
        }
    }

    return errors;
}

}  // namespace tablekit

#include "tablekit/dataset.hpp"

#include <algorithm>

#include "tablekit/cells.hpp"

namespace tablekit {

CellOrigin Provenance::cell(std::string_view attribute) const {
    auto it = cells.find(std::string(attribute));
    return it == cells.end() ? CellOrigin{} : it->second;
}

const Value* Instance::slot(std::string_view attribute) const {
    auto it = slots.find(std::string(attribute));
    return it == slots.end() ? nullptr : &it->second;
}

Instance* Dataset::create(std::string class_name) {
    Instance& instance = pool.emplace_back();
    instance.class_name = class_name;
    by_class[std::move(class_name)].push_back(&instance);
    return &instance;
}

const std::vector<Instance*>& Dataset::instances_of(std::string_view class_name) const {
    static const std::vector<Instance*> empty;
    auto it = by_class.find(std::string(class_name));
    return it == by_class.end() ? empty : it->second;
}

std::size_t Dataset::instance_count(std::string_view class_name) const {
    return instances_of(class_name).size();
}

std::optional<std::string> Dataset::metadata_value(std::string_view key) const {
    for (const auto& [k, v] : document_metadata) {
        if (k == key) return v;
    }
    return std::nullopt;
}

void Dataset::set_metadata(std::string_view key, std::string_view value) {
    for (auto& [k, v] : document_metadata) {
        if (k == key) {
            v = std::string(value);
            return;
        }
    }
    document_metadata.emplace_back(std::string(key), std::string(value));
}

Dataset Dataset::clone() const {
    Dataset copy;
    copy.schema = schema;
    copy.document_metadata = document_metadata;
    copy.decode_issues = decode_issues;
    copy.toc_entries = toc_entries;
    copy.sheet_names = sheet_names;

    std::map<const Instance*, Instance*> remap;
    for (const Instance& instance : pool) {
        copy.pool.push_back(instance);
        remap[&instance] = &copy.pool.back();
    }
    for (const auto& [class_name, list] : by_class) {
        auto& copied = copy.by_class[class_name];
        copied.reserve(list.size());
        for (Instance* instance : list) copied.push_back(remap.at(instance));
    }

    for (Instance& instance : copy.pool) {
        if (instance.owner) instance.owner = remap.at(instance.owner);
        for (auto& [attribute, value] : instance.slots) {
            if (auto* ref = std::get_if<Reference>(&value)) {
                if (ref->target) ref->target = remap.at(ref->target);
            } else if (auto* refs = std::get_if<ReferenceList>(&value)) {
                for (Reference& ref : *refs) {
                    if (ref.target) ref.target = remap.at(ref.target);
                }
            } else if (auto* embedded = std::get_if<Instance*>(&value)) {
                if (*embedded) *embedded = remap.at(*embedded);
            }
        }
        for (auto& [related_name, members] : instance.reverse) {
            for (Instance*& member : members) member = remap.at(member);
        }
    }
    return copy;
}

std::optional<std::string> instance_key(const Schema& schema, const Instance& instance) {
    const ClassDef* class_def = schema.find_class(instance.class_name);
    if (!class_def) return std::nullopt;
    const AttributeDef* primary = class_def->primary_attribute();
    if (!primary) return std::nullopt;
    const Value* value = instance.slot(primary->name);
    if (!value || value_is_null(*value)) return std::nullopt;
    return format_cell(primary->format, *value, &schema);
}

namespace {

// Keyless embedded instances borrow their owner's key so they stay beside it.
std::string sort_key(const Schema& schema, const Instance* instance) {
    if (auto key = instance_key(schema, *instance)) return *key;
    if (instance->owner) {
        if (auto key = instance_key(schema, *instance->owner)) return *key;
    }
    return "";
}

}  // namespace

void normalize_in_place(Dataset& dataset) {
    if (!dataset.schema) return;
    const Schema& schema = *dataset.schema;

    for (auto& [class_name, instances] : dataset.by_class) {
        const ClassDef* class_def = schema.find_class(class_name);
        if (class_def && class_def->layout == ClassLayout::MultipleCells) continue;
        std::stable_sort(instances.begin(), instances.end(), [&](Instance* a, Instance* b) {
            auto ka = instance_key(schema, *a);
            auto kb = instance_key(schema, *b);
            if (ka.has_value() != kb.has_value()) return ka.has_value();  // keyless sink to the end
            if (!ka) return false;
            return *ka < *kb;
        });
    }

    // Embedded instances are re-listed in owner order: owners per class in
    // schema order, then the owner's group attributes in schema order.
    std::map<std::string, std::vector<Instance*>> embedded_order;
    for (const ClassDef& class_def : schema.classes) {
        if (class_def.layout == ClassLayout::MultipleCells) continue;
        for (Instance* owner : dataset.instances_of(class_def.name)) {
            for (const AttributeDef& attribute : class_def.attributes) {
                const Value* value = owner->slot(attribute.name);
                if (!value) continue;
                if (auto* const* embedded = std::get_if<Instance*>(value); embedded && *embedded) {
                    embedded_order[(*embedded)->class_name].push_back(*embedded);
                }
            }
        }
    }
    for (auto& [class_name, ordered] : embedded_order) {
        auto it = dataset.by_class.find(class_name);
        if (it != dataset.by_class.end() && it->second.size() == ordered.size()) {
            it->second = std::move(ordered);
        }
    }

    for (Instance& instance : dataset.pool) {
        for (auto& [attribute, value] : instance.slots) {
            if (auto* refs = std::get_if<ReferenceList>(&value)) {
                auto key_of = [&](const Reference& ref) -> std::string {
                    if (ref.target) {
                        if (auto key = instance_key(schema, *ref.target)) return *key;
                    }
                    return ref.key;
                };
                std::stable_sort(refs->begin(), refs->end(), [&](const Reference& a, const Reference& b) {
                    return key_of(a) < key_of(b);
                });
            }
        }
        for (auto& [related_name, members] : instance.reverse) {
            std::stable_sort(members.begin(), members.end(), [&](Instance* a, Instance* b) {
                return sort_key(schema, a) < sort_key(schema, b);
            });
        }
    }
}

Dataset normalize(const Dataset& dataset) {
    Dataset copy = dataset.clone();
    normalize_in_place(copy);
    return copy;
}

}  // namespace tablekit

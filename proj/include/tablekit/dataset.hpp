#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tablekit/format_dsl.hpp"
#include "tablekit/report.hpp"
#include "tablekit/schema.hpp"

namespace tablekit {

struct Instance;

/// Link to a keyed instance. `key` is the primary-key text; `target` is
/// filled by the resolution pass and stays null for dangling references.
struct Reference {
    std::string key;
    Instance* target = nullptr;
};

using ReferenceList = std::vector<Reference>;

/// Slot contents. monostate is the null value of an empty cell; Instance*
/// holds an embedded multiple_cells record owned by the enclosing instance.
using Value = std::variant<std::monostate, std::string, std::int64_t, double, bool, ChemicalEquation,
                           Reference, ReferenceList, Instance*>;

inline bool value_is_null(const Value& value) {
    return std::holds_alternative<std::monostate>(value);
}

/// 1-based grid coordinates of a decoded cell.
struct CellOrigin {
    std::size_t row = 0;
    std::size_t column = 0;
};

struct Provenance {
    std::string worksheet;
    std::size_t row = 0;  // heading-relative record anchor, 1-based grid row
    std::map<std::string, CellOrigin> cells;  // attribute name -> origin

    CellOrigin cell(std::string_view attribute) const;
};

struct Instance {
    std::string class_name;
    std::map<std::string, Value> slots;
    // related_name -> instances pointing here; rebuilt after resolution
    std::map<std::string, std::vector<Instance*>> reverse;
    Instance* owner = nullptr;  // set for embedded instances
    Provenance origin;

    const Value* slot(std::string_view attribute) const;
    Value& slot_ref(const std::string& attribute) { return slots[attribute]; }
};

/// One row of a `!!_Table of contents` grid, kept for cross-checking.
struct TocEntry {
    std::string worksheet;
    std::string description;
    std::optional<std::int64_t> objects;
    std::size_t row = 0;  // grid row the entry came from, 1-based
};

struct Dataset {
    std::shared_ptr<const Schema> schema;
    std::deque<Instance> pool;  // owns every instance; deque keeps addresses stable
    std::map<std::string, std::vector<Instance*>> by_class;
    std::vector<std::pair<std::string, std::string>> document_metadata;
    std::vector<ReportEntry> decode_issues;  // cell-level problems found while decoding
    std::vector<TocEntry> toc_entries;
    std::map<std::string, std::string> sheet_names;  // class -> worksheet it decoded from

    Instance* create(std::string class_name);
    const std::vector<Instance*>& instances_of(std::string_view class_name) const;
    std::size_t instance_count(std::string_view class_name) const;

    std::optional<std::string> metadata_value(std::string_view key) const;
    void set_metadata(std::string_view key, std::string_view value);

    /// Deep copy; references, owners, and reverse lists are rewired to the
    /// copied instances.
    Dataset clone() const;
};

/// Primary-key text of an instance, canonically formatted, or nullopt when
/// the class has no primary attribute or the slot is null.
std::optional<std::string> instance_key(const Schema& schema, const Instance& instance);

/// Canonical ordering: classes in schema order, keyed instances by key
/// (byte-wise), embedded instances following their owners, reference lists
/// by target key. Idempotent.
Dataset normalize(const Dataset& dataset);
void normalize_in_place(Dataset& dataset);

}  // namespace tablekit

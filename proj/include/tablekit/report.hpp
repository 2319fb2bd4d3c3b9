#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tablekit {

// Stable report codes. Tools match on these, not on message text.
inline constexpr std::string_view kCodeBadType = "BAD_TYPE";
inline constexpr std::string_view kCodeMissingRequired = "MISSING_REQUIRED";
inline constexpr std::string_view kCodeDupPrimary = "DUP_PRIMARY";
inline constexpr std::string_view kCodeNonUnique = "NON_UNIQUE";
inline constexpr std::string_view kCodeUnresolvedRef = "UNRESOLVED_REF";
inline constexpr std::string_view kCodeUnknownHeading = "UNKNOWN_HEADING";
inline constexpr std::string_view kCodeDupHeading = "DUP_HEADING";
inline constexpr std::string_view kCodeIgnoredColumn = "IGNORED_COLUMN";
inline constexpr std::string_view kCodeIgnoredSheet = "IGNORED_SHEET";
inline constexpr std::string_view kCodeBadDeclaration = "BAD_DECLARATION";
inline constexpr std::string_view kCodeUnknownClass = "UNKNOWN_CLASS";
inline constexpr std::string_view kCodeTocMismatch = "TOC_MISMATCH";
inline constexpr std::string_view kCodeReverseMismatch = "REVERSE_MISMATCH";

enum class Severity { Error, Warning };

/// One finding. row/column are 1-based grid coordinates; 0 means the entry
/// is not anchored to a cell.
struct ReportEntry {
    Severity severity = Severity::Error;
    std::string worksheet;
    std::size_t row = 0;
    std::size_t column = 0;
    std::string class_name;
    std::string attribute;
    std::string code;
    std::string message;

    bool operator==(const ReportEntry&) const = default;
};

struct ValidationReport {
    std::vector<ReportEntry> entries;

    std::size_t error_count() const;
    std::size_t warning_count() const;
    bool has_errors() const { return error_count() > 0; }

    void add(ReportEntry entry) { entries.push_back(std::move(entry)); }

    /// Per-code entry counts.
    std::map<std::string, std::size_t> summary() const;

    /// Stable sort by (worksheet, row, column); ties keep insertion order.
    void sort_entries();

    /// Entries whose code matches.
    std::vector<const ReportEntry*> with_code(std::string_view code) const;
};

}  // namespace tablekit

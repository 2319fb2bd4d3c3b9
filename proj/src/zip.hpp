#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tablekit::zip {

struct Entry {
    std::string name;
    std::string data;
};

/// Parses a zip archive. Rejects multi-disk, zip64, and encrypted input;
/// only stored and deflated entries are accepted.
std::vector<Entry> read_archive(std::string_view bytes);

/// Writes a zip archive with deflated entries and a fixed timestamp so
/// identical input produces identical bytes.
std::string write_archive(const std::vector<Entry>& entries);

}  // namespace tablekit::zip

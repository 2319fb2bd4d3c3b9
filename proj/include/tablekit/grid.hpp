#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tablekit/errors.hpp"

namespace tablekit {

inline constexpr std::size_t kMaxGridRows = std::size_t(1) << 20;
inline constexpr std::size_t kMaxGridCols = std::size_t(1) << 14;

/// Write-only presentation hints. CSV and TSV drop them; reads never
/// populate them.
struct CellStyle {
    bool bold = false;
    std::string fill;  // RGB hex such as "FFDDEBF7"; empty means no fill
    std::string note;

    bool has_format() const { return bold || !fill.empty(); }
};

/// A named rectangular block of cell strings. The empty string doubles as
/// the absent cell; cells holds no other sentinel.
struct Grid {
    std::string name;
    std::vector<std::vector<std::string>> cells;
    std::map<std::pair<std::size_t, std::size_t>, CellStyle> styles;  // 0-based (row, column)

    std::size_t row_count() const { return cells.size(); }
    std::size_t col_count() const { return cells.empty() ? 0 : cells.front().size(); }

    /// Out-of-range coordinates read as empty.
    const std::string& at(std::size_t row, std::size_t col) const;

    /// Grows the matrix as needed, keeping it rectangular.
    void set(std::size_t row, std::size_t col, std::string value);

    void set_style(std::size_t row, std::size_t col, CellStyle style);

    /// Drops trailing all-empty rows and columns and pads ragged rows.
    void normalize_extent();
};

enum class Container { Xlsx, CsvDir, TsvDir };

std::string_view container_name(Container container);
std::optional<Container> container_from_name(std::string_view name);

struct RawWorkbook {
    std::vector<Grid> grids;
    Container source_format = Container::Xlsx;

    const Grid* find_grid(std::string_view name) const;
};

/// Reads an xlsx file or a directory of csv/tsv files. Grid order is the
/// workbook sheet order, or byte-wise filename order for directories.
RawWorkbook read_grids(const std::filesystem::path& source, Container format);

/// Inverse of read_grids on names and cell strings. Returns the files
/// written. Styles survive only in xlsx.
std::vector<std::filesystem::path> write_grids(const RawWorkbook& workbook, Container format,
                                               const std::filesystem::path& dest);

/// In-memory variants, shared by the file paths above and the HTTP service.
RawWorkbook read_xlsx_bytes(std::string_view bytes);
std::string write_xlsx_bytes(const RawWorkbook& workbook);

/// One csv/tsv file holds one grid; these parse and render its text.
Grid read_delimited_text(std::string name, std::string_view text, char delimiter);
std::string write_delimited_text(const Grid& grid, char delimiter);

/// Filename (without directory) a grid maps to in csv/tsv mode.
std::string grid_file_name(std::string_view grid_name, Container format);

}  // namespace tablekit

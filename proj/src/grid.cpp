#include "tablekit/grid.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace tablekit {

namespace fs = std::filesystem;

const std::string& Grid::at(std::size_t row, std::size_t col) const {
    static const std::string empty;
    if (row >= cells.size() || col >= cells[row].size()) return empty;
    return cells[row][col];
}

void Grid::set(std::size_t row, std::size_t col, std::string value) {
    if (row >= kMaxGridRows || col >= kMaxGridCols) {
        throw FormatError("grid '" + name + "' exceeds the supported size");
    }
    std::size_t width = std::max(col_count(), col + 1);
    if (row >= cells.size()) cells.resize(row + 1);
    for (auto& r : cells) {
        if (r.size() < width) r.resize(width);
    }
    cells[row][col] = std::move(value);
}

void Grid::set_style(std::size_t row, std::size_t col, CellStyle style) {
    styles[{row, col}] = std::move(style);
}

void Grid::normalize_extent() {
    while (!cells.empty() &&
           std::all_of(cells.back().begin(), cells.back().end(), [](const std::string& c) { return c.empty(); })) {
        cells.pop_back();
    }
    std::size_t width = 0;
    for (const auto& row : cells) {
        for (std::size_t c = row.size(); c-- > 0;) {
            if (!row[c].empty()) {
                width = std::max(width, c + 1);
                break;
            }
        }
    }
    for (auto& row : cells) row.resize(width);
}

std::string_view container_name(Container container) {
    switch (container) {
        case Container::Xlsx: return "xlsx";
        case Container::CsvDir: return "csv";
        case Container::TsvDir: return "tsv";
    }
    return "xlsx";
}

std::optional<Container> container_from_name(std::string_view name) {
    if (name == "xlsx") return Container::Xlsx;
    if (name == "csv" || name == "csv-dir") return Container::CsvDir;
    if (name == "tsv" || name == "tsv-dir") return Container::TsvDir;
    return std::nullopt;
}

const Grid* RawWorkbook::find_grid(std::string_view name) const {
    for (const Grid& grid : grids) {
        if (grid.name == name) return &grid;
    }
    return nullptr;
}

namespace {

std::string read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return std::move(buffer).str();
}

void write_file_bytes(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), std::streamsize(bytes.size()));
    out.flush();
    if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace

std::string grid_file_name(std::string_view grid_name, Container format) {
    std::string file_name(grid_name);
    for (char& c : file_name) {
        if (c == '/' || c == '\\') c = '_';
    }
    file_name += format == Container::TsvDir ? ".tsv" : ".csv";
    return file_name;
}

RawWorkbook read_grids(const fs::path& source, Container format) {
    std::error_code ec;
    if (format == Container::Xlsx) {
        if (!fs::is_regular_file(source, ec)) throw IoError("no such file: " + source.string());
        return read_xlsx_bytes(read_file_bytes(source));
    }

    if (!fs::is_directory(source, ec)) throw IoError("not a directory: " + source.string());
    const std::string extension = format == Container::TsvDir ? ".tsv" : ".csv";
    const char delimiter = format == Container::TsvDir ? '\t' : ',';

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(source)) {
        if (entry.is_regular_file() && entry.path().extension() == extension) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    RawWorkbook workbook;
    workbook.source_format = format;
    std::set<std::string> seen;
    for (const fs::path& file : files) {
        std::string name = file.filename().string();
        name.resize(name.size() - extension.size());
        if (!seen.insert(name).second) {
            throw NameCollisionError("two files map to grid name '" + name + "'");
        }
        workbook.grids.push_back(read_delimited_text(std::move(name), read_file_bytes(file), delimiter));
    }
    return workbook;
}

std::vector<fs::path> write_grids(const RawWorkbook& workbook, Container format, const fs::path& dest) {
    std::error_code ec;
    if (format == Container::Xlsx) {
        if (dest.has_parent_path()) fs::create_directories(dest.parent_path(), ec);
        write_file_bytes(dest, write_xlsx_bytes(workbook));
        return {dest};
    }

    fs::create_directories(dest, ec);
    if (ec) throw IoError("cannot create directory " + dest.string());
    const char delimiter = format == Container::TsvDir ? '\t' : ',';

    std::vector<fs::path> written;
    std::set<std::string> used;
    for (const Grid& grid : workbook.grids) {
        if (grid.row_count() > kMaxGridRows || grid.col_count() > kMaxGridCols) {
            throw FormatError("grid '" + grid.name + "' exceeds the supported size");
        }
        std::string file_name = grid_file_name(grid.name, format);
        if (!used.insert(file_name).second) {
            throw NameCollisionError("grid names collide on file '" + file_name + "'");
        }
        fs::path path = dest / file_name;
        write_file_bytes(path, write_delimited_text(grid, delimiter));
        written.push_back(std::move(path));
    }
    return written;
}

}  // namespace tablekit

#include "zip.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>

#include "tablekit/errors.hpp"

namespace tablekit::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;

// All writes use one fixed DOS date (2020-06-01) so archives are
// byte-reproducible.
constexpr std::uint16_t kDosDate = (40 << 9) | (6 << 5) | 1;
constexpr std::uint16_t kDosTime = 0;

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(char(v & 0xFF));
    out.push_back(char(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

std::uint16_t get_u16(std::string_view bytes, std::size_t pos) {
    return std::uint16_t(std::uint8_t(bytes[pos])) | std::uint16_t(std::uint8_t(bytes[pos + 1])) << 8;
}

std::uint32_t get_u32(std::string_view bytes, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = v << 8 | std::uint8_t(bytes[pos + i]);
    return v;
}

std::string deflate_raw(std::string_view data) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw FormatError("deflate initialization failed");
    }
    std::string out;
    out.resize(deflateBound(&zs, data.size()));
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = uInt(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = uInt(out.size());
    int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw FormatError("deflate failed");
    out.resize(zs.total_out);
    return out;
}

std::string inflate_raw(std::string_view data, std::size_t expected_size) {
    z_stream zs{};
    if (inflateInit2(&zs, -15) != Z_OK) throw FormatError("inflate initialization failed");
    std::string out;
    out.resize(expected_size);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = uInt(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = uInt(out.size());
    int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != expected_size) {
        throw FormatError("corrupt deflate stream in zip archive");
    }
    return out;
}

}  // namespace

std::vector<Entry> read_archive(std::string_view bytes) {
    if (bytes.size() < 22) throw FormatError("zip archive too short");

    // The end record allows a trailing comment of up to 64 KiB; scan back for
    // its signature.
    std::size_t scan_floor = bytes.size() > 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
    std::size_t end_pos = std::string_view::npos;
    for (std::size_t pos = bytes.size() - 22 + 1; pos-- > scan_floor;) {
        if (get_u32(bytes, pos) == kEndSig) {
            end_pos = pos;
            break;
        }
    }
    if (end_pos == std::string_view::npos) throw FormatError("zip end record not found");

    std::uint16_t disk = get_u16(bytes, end_pos + 4);
    std::uint16_t central_disk = get_u16(bytes, end_pos + 6);
    std::uint16_t disk_entries = get_u16(bytes, end_pos + 8);
    std::uint16_t total_entries = get_u16(bytes, end_pos + 10);
    std::uint32_t central_size = get_u32(bytes, end_pos + 12);
    std::uint32_t central_offset = get_u32(bytes, end_pos + 16);
    if (disk != 0 || central_disk != 0 || disk_entries != total_entries) {
        throw FormatError("multi-disk zip archives are not supported");
    }
    if (total_entries == 0xFFFF || central_size == 0xFFFFFFFF || central_offset == 0xFFFFFFFF) {
        throw FormatError("zip64 archives are not supported");
    }
    if (std::size_t(central_offset) + central_size > bytes.size()) {
        throw FormatError("zip central directory out of range");
    }

    std::vector<Entry> entries;
    std::size_t pos = central_offset;
    for (std::uint16_t i = 0; i < total_entries; ++i) {
        if (pos + 46 > bytes.size() || get_u32(bytes, pos) != kCentralSig) {
            throw FormatError("corrupt zip central directory");
        }
        std::uint16_t flags = get_u16(bytes, pos + 8);
        std::uint16_t method = get_u16(bytes, pos + 10);
        std::uint32_t crc = get_u32(bytes, pos + 16);
        std::uint32_t comp_size = get_u32(bytes, pos + 20);
        std::uint32_t uncomp_size = get_u32(bytes, pos + 24);
        std::uint16_t name_len = get_u16(bytes, pos + 28);
        std::uint16_t extra_len = get_u16(bytes, pos + 30);
        std::uint16_t comment_len = get_u16(bytes, pos + 32);
        std::uint32_t local_offset = get_u32(bytes, pos + 42);
        if (pos + 46 + name_len > bytes.size()) throw FormatError("corrupt zip central directory");
        std::string name(bytes.substr(pos + 46, name_len));
        pos += 46 + std::size_t(name_len) + extra_len + comment_len;

        if (flags & 0x1) throw FormatError("encrypted zip entries are not supported");
        if (comp_size == 0xFFFFFFFF || uncomp_size == 0xFFFFFFFF || local_offset == 0xFFFFFFFF) {
            throw FormatError("zip64 archives are not supported");
        }
        if (method != 0 && method != 8) throw FormatError("unsupported zip compression method");

        // The local header repeats the name and may carry its own extra field.
        if (std::size_t(local_offset) + 30 > bytes.size() || get_u32(bytes, local_offset) != kLocalSig) {
            throw FormatError("corrupt zip local header");
        }
        std::uint16_t local_name_len = get_u16(bytes, local_offset + 26);
        std::uint16_t local_extra_len = get_u16(bytes, local_offset + 28);
        std::size_t data_pos = std::size_t(local_offset) + 30 + local_name_len + local_extra_len;
        if (data_pos + comp_size > bytes.size()) throw FormatError("zip entry data out of range");

        std::string_view raw = bytes.substr(data_pos, comp_size);
        std::string data = method == 0 ? std::string(raw) : inflate_raw(raw, uncomp_size);
        if (method == 0 && data.size() != uncomp_size) throw FormatError("zip entry size mismatch");
        if (crc32(0, reinterpret_cast<const Bytef*>(data.data()), uInt(data.size())) != crc) {
            throw FormatError("zip entry checksum mismatch");
        }
        entries.push_back({std::move(name), std::move(data)});
    }
    return entries;
}

std::string write_archive(const std::vector<Entry>& entries) {
    std::string out;
    std::string central;
    for (const Entry& entry : entries) {
        std::uint32_t crc =
            crc32(0, reinterpret_cast<const Bytef*>(entry.data.data()), uInt(entry.data.size()));
        std::string compressed = deflate_raw(entry.data);
        std::uint32_t offset = std::uint32_t(out.size());

        put_u32(out, kLocalSig);
        put_u16(out, 20);  // version needed
        put_u16(out, 0);   // flags
        put_u16(out, 8);   // deflate
        put_u16(out, kDosTime);
        put_u16(out, kDosDate);
        put_u32(out, crc);
        put_u32(out, std::uint32_t(compressed.size()));
        put_u32(out, std::uint32_t(entry.data.size()));
        put_u16(out, std::uint16_t(entry.name.size()));
        put_u16(out, 0);  // extra
        out += entry.name;
        out += compressed;

        put_u32(central, kCentralSig);
        put_u16(central, 20);  // version made by
        put_u16(central, 20);  // version needed
        put_u16(central, 0);
        put_u16(central, 8);
        put_u16(central, kDosTime);
        put_u16(central, kDosDate);
        put_u32(central, crc);
        put_u32(central, std::uint32_t(compressed.size()));
        put_u32(central, std::uint32_t(entry.data.size()));
        put_u16(central, std::uint16_t(entry.name.size()));
        put_u16(central, 0);  // extra
        put_u16(central, 0);  // comment
        put_u16(central, 0);  // disk start
        put_u16(central, 0);  // internal attrs
        put_u32(central, 0);  // external attrs
        put_u32(central, offset);
        central += entry.name;
    }

    std::uint32_t central_offset = std::uint32_t(out.size());
    out += central;
    put_u32(out, kEndSig);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, std::uint16_t(entries.size()));
    put_u16(out, std::uint16_t(entries.size()));
    put_u32(out, std::uint32_t(central.size()));
    put_u32(out, central_offset);
    put_u16(out, 0);
    return out;
}

}  // namespace tablekit::zip

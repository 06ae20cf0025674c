#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "nnm/dataset.hpp"
#include "nnm/error.hpp"

namespace nnm {
namespace {

static_assert(std::endian::native == std::endian::little,
              "native blobs are written as raw little-endian f32");

std::string checksum_hex(std::uint32_t crc) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", crc);
    return buf;
}

std::uint32_t parse_checksum(const std::string& text) {
    if (text.size() != 8 || text.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
        throw FormatError("header checksum '" + text + "' is not 8 hex digits");
    }
    return static_cast<std::uint32_t>(std::stoul(text, nullptr, 16));
}

}  // namespace

NativePaths native_paths(const std::filesystem::path& path) {
    std::filesystem::path prefix = path;
    const auto ext = path.extension();
    if (ext == ".json" || ext == ".f32" || ext == ".payload") prefix.replace_extension();
    auto with = [&](const char* suffix) {
        auto p = prefix;
        p += suffix;
        return p;
    };
    return {with(".json"), with(".f32"), with(".payload")};
}

std::uint32_t crc32_of(std::span<const float> data) {
    const auto* bytes = reinterpret_cast<const Bytef*>(data.data());
    std::size_t remaining = data.size_bytes();
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes a uInt length; feed large blobs in chunks.
    while (remaining > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(remaining, 1u << 30));
        crc = ::crc32(crc, bytes, chunk);
        bytes += chunk;
        remaining -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

void save_native(const VectorDataset& ds, const std::filesystem::path& path) {
    const auto paths = native_paths(path);
    nlohmann::json header = {
        {"name", ds.name()},
        {"dim", ds.dim()},
        {"count", ds.count()},
        {"dtype", "f32"},
        {"source", std::string(to_string(ds.source()))},
        {"checksum", checksum_hex(crc32_of(ds.data()))},
    };
    if (!ds.attributes().empty()) header["attributes"] = ds.attributes();

    {
        std::ofstream blob(paths.blob, std::ios::binary | std::ios::trunc);
        if (!blob) throw FormatError("cannot write " + paths.blob.string());
        blob.write(reinterpret_cast<const char*>(ds.data().data()),
                   static_cast<std::streamsize>(ds.data().size_bytes()));
        if (!blob) throw FormatError("failed writing " + paths.blob.string());
    }
    std::ofstream out(paths.header, std::ios::trunc);
    if (!out) throw FormatError("cannot write " + paths.header.string());
    out << header.dump(2) << '\n';
    if (!out) throw FormatError("failed writing " + paths.header.string());
}

DatasetHeader read_native_header(const std::filesystem::path& path) {
    const auto paths = native_paths(path);
    std::ifstream in(paths.header);
    if (!in) throw FormatError("cannot open header " + paths.header.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(paths.header.string() + ": " + e.what());
    }
    DatasetHeader h;
    try {
        h.name = j.at("name").get<std::string>();
        h.dim = j.at("dim").get<std::size_t>();
        h.count = j.at("count").get<std::size_t>();
        h.dtype = j.at("dtype").get<std::string>();
        h.source = parse_data_source(j.at("source").get<std::string>());
        h.checksum = parse_checksum(j.at("checksum").get<std::string>());
        if (j.contains("attributes")) {
            h.attributes = j.at("attributes").get<VectorDataset::Attributes>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(paths.header.string() + ": " + e.what());
    }
    if (h.dtype != "f32") throw FormatError("unsupported dtype '" + h.dtype + "'");
    if (h.dim == 0 || h.count == 0) throw FormatError("header declares an empty dataset");
    return h;
}

VectorDataset load_native(const std::filesystem::path& path) {
    const auto paths = native_paths(path);
    const DatasetHeader h = read_native_header(paths.header);

    std::ifstream blob(paths.blob, std::ios::binary | std::ios::ate);
    if (!blob) throw FormatError("cannot open data blob " + paths.blob.string());
    const auto size = static_cast<std::size_t>(blob.tellg());
    const std::size_t expected = h.count * h.dim * sizeof(float);
    if (size != expected) {
        throw FormatError(paths.blob.string() + ": " + std::to_string(size) +
                          " bytes, header implies " + std::to_string(expected) + " (" +
                          std::to_string(h.count) + " x " + std::to_string(h.dim) + " f32)");
    }
    std::vector<float> data(h.count * h.dim);
    blob.seekg(0);
    blob.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(size));
    if (!blob) throw FormatError("failed reading " + paths.blob.string());

    const std::uint32_t crc = crc32_of(data);
    if (crc != h.checksum) {
        throw FormatError(paths.blob.string() + ": checksum " + checksum_hex(crc) +
                          " does not match header " + checksum_hex(h.checksum));
    }
    return VectorDataset(h.name, h.dim, std::move(data), h.source, h.attributes);
}

}  // namespace nnm

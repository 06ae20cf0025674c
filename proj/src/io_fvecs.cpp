#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "nnm/dataset.hpp"
#include "nnm/error.hpp"

namespace nnm {
namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t load_le32(const unsigned char* p) {
    std::uint32_t v;
    std::memcpy(&v, p, 4);
    if constexpr (std::endian::native == std::endian::big) {
        v = (v >> 24) | ((v >> 8) & 0xFF00u) | ((v << 8) & 0xFF0000u) | (v << 24);
    }
    return v;
}

void store_le32(unsigned char* p, std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        v = (v >> 24) | ((v >> 8) & 0xFF00u) | ((v << 8) & 0xFF0000u) | (v << 24);
    }
    std::memcpy(p, &v, 4);
}

// Shared walker for the two record layouts; element_bytes is 4 (f32) or 1 (u8).
VectorDataset decode_vecs(const std::filesystem::path& path, std::size_t element_bytes) {
    const auto bytes = read_all(path);
    const std::string file = path.string();
    if (bytes.empty()) throw FormatError(file + ": empty file");

    std::size_t dim = 0;
    std::vector<float> data;
    std::size_t offset = 0;
    std::size_t record = 0;
    while (offset < bytes.size()) {
        if (bytes.size() - offset < 4) {
            throw FormatError(file + ": truncated dimension prefix in record " +
                              std::to_string(record));
        }
        const auto declared = static_cast<std::int32_t>(load_le32(&bytes[offset]));
        offset += 4;
        if (declared <= 0) {
            throw FormatError(file + ": record " + std::to_string(record) +
                              " declares non-positive dimension " + std::to_string(declared));
        }
        if (record == 0) {
            dim = static_cast<std::size_t>(declared);
            data.reserve(bytes.size() / (4 + dim * element_bytes) * dim);
        } else if (static_cast<std::size_t>(declared) != dim) {
            throw FormatError(file + ": record " + std::to_string(record) + " has dimension " +
                              std::to_string(declared) + ", expected " + std::to_string(dim));
        }
        if (bytes.size() - offset < dim * element_bytes) {
            throw FormatError(file + ": truncated record " + std::to_string(record));
        }
        for (std::size_t j = 0; j < dim; ++j) {
            if (element_bytes == 4) {
                data.push_back(std::bit_cast<float>(load_le32(&bytes[offset + 4 * j])));
            } else {
                data.push_back(static_cast<float>(bytes[offset + j]));
            }
        }
        offset += dim * element_bytes;
        ++record;
    }
    return VectorDataset(path.stem().string(), dim, std::move(data), DataSource::fvecs);
}

}  // namespace

VectorDataset load_fvecs(const std::filesystem::path& path) { return decode_vecs(path, 4); }

VectorDataset load_bvecs(const std::filesystem::path& path) { return decode_vecs(path, 1); }

void save_fvecs(const VectorDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    std::vector<unsigned char> record(4 + 4 * ds.dim());
    store_le32(record.data(), static_cast<std::uint32_t>(ds.dim()));
    for (std::size_t i = 0; i < ds.count(); ++i) {
        const auto row = ds.row(i);
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            store_le32(&record[4 + 4 * j], std::bit_cast<std::uint32_t>(row[j]));
        }
        out.write(reinterpret_cast<const char*>(record.data()),
                  static_cast<std::streamsize>(record.size()));
    }
    if (!out) throw FormatError("failed writing " + path.string());
}

}  // namespace nnm

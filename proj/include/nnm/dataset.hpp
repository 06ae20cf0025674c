#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nnm {

enum class DataSource { synthetic, fvecs, native, ingested };

std::string_view to_string(DataSource source);
DataSource parse_data_source(std::string_view text);

/// Immutable row-major matrix of f32 vectors. Copies share the same buffer.
///
/// Construction rejects non-finite components and a buffer whose length is
/// not count * dim, so every downstream distance is finite.
class VectorDataset {
public:
    using Attributes = std::map<std::string, std::string>;

    VectorDataset(std::string name, std::size_t dim, std::vector<float> data,
                  DataSource source, Attributes attributes = {});

    const std::string& name() const noexcept { return name_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t count() const noexcept { return count_; }
    DataSource source() const noexcept { return source_; }

    /// Free-form provenance (generator parameters, projection source, ...).
    const Attributes& attributes() const noexcept { return attributes_; }

    std::span<const float> data() const noexcept { return {data_->data(), data_->size()}; }
    std::span<const float> row(std::size_t i) const noexcept {
        return {data_->data() + i * dim_, dim_};
    }

    /// Same data under a different name and provenance.
    VectorDataset relabel(std::string name, Attributes attributes) const;

private:
    std::string name_;
    std::size_t dim_;
    std::size_t count_;
    std::shared_ptr<const std::vector<float>> data_;
    DataSource source_;
    Attributes attributes_;
};

/// Queries: either rows of the profiled dataset (skipped during their own
/// scan) or vectors supplied from outside.
class QuerySet {
public:
    enum class Mode { sampled_indices, external_vectors };

    static QuerySet sampled(std::vector<std::size_t> indices, std::uint64_t seed);
    static QuerySet external(std::vector<float> vectors, std::size_t dim);

    Mode mode() const noexcept { return mode_; }
    std::size_t size() const noexcept;
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

    std::span<const float> query(const VectorDataset& ds, std::size_t i) const;

    /// Row to leave out of query i's scan, if any.
    std::optional<std::size_t> excluded_row(std::size_t i) const;

    /// Throws ConfigError unless the set can be scanned against `ds`.
    void validate_against(const VectorDataset& ds) const;

private:
    QuerySet() = default;

    Mode mode_ = Mode::sampled_indices;
    std::vector<std::size_t> indices_;
    std::vector<float> vectors_;
    std::size_t dim_ = 0;
    std::uint64_t seed_ = 0;
};

/// m distinct rows drawn uniformly without replacement; a pure function of
/// (ds.count(), m, seed).
QuerySet sample_queries(const VectorDataset& ds, std::size_t m, std::uint64_t seed);
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t m, std::uint64_t seed);

/// Original-space records aligned by position with dataset rows.
class PayloadStore {
public:
    explicit PayloadStore(std::vector<std::string> records) : records_(std::move(records)) {}

    std::size_t size() const noexcept { return records_.size(); }
    const std::vector<std::string>& records() const noexcept { return records_; }

    /// Throws FormatError when the record count differs from the row count.
    void check_attached(const VectorDataset& ds) const;

private:
    std::vector<std::string> records_;
};

PayloadStore load_payloads(const std::filesystem::path& path);
void save_payloads(const PayloadStore& store, const std::filesystem::path& path);

std::vector<std::string> retrieve_payloads(const PayloadStore& store,
                                           std::span<const std::size_t> ids);

// ---------------------------------------------------------------------------
// Files

struct DatasetHeader {
    std::string name;
    std::size_t dim = 0;
    std::size_t count = 0;
    std::string dtype = "f32";
    DataSource source = DataSource::native;
    std::uint32_t checksum = 0;
    VectorDataset::Attributes attributes;
};

/// The three files making up a native dataset: `<prefix>.json`,
/// `<prefix>.f32` and the optional `<prefix>.payload`.
struct NativePaths {
    std::filesystem::path header;
    std::filesystem::path blob;
    std::filesystem::path payload;
};

/// Accepts either the bare prefix or any of the three file names.
NativePaths native_paths(const std::filesystem::path& path);

std::uint32_t crc32_of(std::span<const float> data);

void save_native(const VectorDataset& ds, const std::filesystem::path& path);
VectorDataset load_native(const std::filesystem::path& path);
DatasetHeader read_native_header(const std::filesystem::path& path);

VectorDataset load_fvecs(const std::filesystem::path& path);
VectorDataset load_bvecs(const std::filesystem::path& path);
void save_fvecs(const VectorDataset& ds, const std::filesystem::path& path);

/// Picks the loader from the extension: .fvecs, .bvecs, otherwise native.
VectorDataset load_dataset(const std::filesystem::path& path);

}  // namespace nnm

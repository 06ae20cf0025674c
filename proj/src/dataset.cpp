#include "nnm/dataset.hpp"

#include <cmath>
#include <fstream>

#include "nnm/error.hpp"
#include "nnm/random.hpp"

namespace nnm {

std::string_view to_string(DataSource source) {
    switch (source) {
        case DataSource::synthetic: return "synthetic";
        case DataSource::fvecs: return "fvecs";
        case DataSource::native: return "native";
        case DataSource::ingested: return "ingested";
    }
    return "native";
}

DataSource parse_data_source(std::string_view text) {
    if (text == "synthetic") return DataSource::synthetic;
    if (text == "fvecs") return DataSource::fvecs;
    if (text == "native") return DataSource::native;
    if (text == "ingested") return DataSource::ingested;
    throw FormatError("unknown dataset source '" + std::string(text) + "'");
}

VectorDataset::VectorDataset(std::string name, std::size_t dim, std::vector<float> data,
                             DataSource source, Attributes attributes)
    : name_(std::move(name)), dim_(dim), count_(0), source_(source),
      attributes_(std::move(attributes)) {
    if (dim_ == 0) throw FormatError("dataset '" + name_ + "': dimension must be positive");
    if (data.empty()) throw FormatError("dataset '" + name_ + "': no rows");
    if (data.size() % dim_ != 0) {
        throw FormatError("dataset '" + name_ + "': " + std::to_string(data.size()) +
                          " values do not form rows of dimension " + std::to_string(dim_));
    }
    count_ = data.size() / dim_;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i])) {
            throw FormatError("dataset '" + name_ + "': non-finite value at row " +
                              std::to_string(i / dim_) + ", component " +
                              std::to_string(i % dim_));
        }
    }
    data_ = std::make_shared<const std::vector<float>>(std::move(data));
}

VectorDataset VectorDataset::relabel(std::string name, Attributes attributes) const {
    VectorDataset copy = *this;
    copy.name_ = std::move(name);
    copy.attributes_ = std::move(attributes);
    return copy;
}

// ---------------------------------------------------------------------------

QuerySet QuerySet::sampled(std::vector<std::size_t> indices, std::uint64_t seed) {
    if (indices.empty()) throw ConfigError("query set must contain at least one query");
    QuerySet qs;
    qs.mode_ = Mode::sampled_indices;
    qs.indices_ = std::move(indices);
    qs.seed_ = seed;
    return qs;
}

QuerySet QuerySet::external(std::vector<float> vectors, std::size_t dim) {
    if (dim == 0 || vectors.empty() || vectors.size() % dim != 0) {
        throw ConfigError("external queries must be a non-empty whole number of rows");
    }
    for (float v : vectors) {
        if (!std::isfinite(v)) throw FormatError("external query contains a non-finite value");
    }
    QuerySet qs;
    qs.mode_ = Mode::external_vectors;
    qs.vectors_ = std::move(vectors);
    qs.dim_ = dim;
    return qs;
}

std::size_t QuerySet::size() const noexcept {
    return mode_ == Mode::sampled_indices ? indices_.size() : vectors_.size() / dim_;
}

std::span<const float> QuerySet::query(const VectorDataset& ds, std::size_t i) const {
    if (mode_ == Mode::sampled_indices) return ds.row(indices_[i]);
    return {vectors_.data() + i * dim_, dim_};
}

std::optional<std::size_t> QuerySet::excluded_row(std::size_t i) const {
    if (mode_ == Mode::sampled_indices) return indices_[i];
    return std::nullopt;
}

void QuerySet::validate_against(const VectorDataset& ds) const {
    if (mode_ == Mode::external_vectors) {
        if (dim_ != ds.dim()) {
            throw ConfigError("query dimension " + std::to_string(dim_) +
                              " does not match dataset dimension " + std::to_string(ds.dim()));
        }
        return;
    }
    if (indices_.size() > ds.count()) {
        throw ConfigError("more sampled queries than dataset rows");
    }
    std::vector<bool> seen(ds.count(), false);
    for (std::size_t id : indices_) {
        if (id >= ds.count()) {
            throw ConfigError("query row " + std::to_string(id) + " out of range");
        }
        if (seen[id]) throw ConfigError("query row " + std::to_string(id) + " repeated");
        seen[id] = true;
    }
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw ConfigError("query count must be at least 1");
    if (m > n) {
        throw ConfigError("cannot sample " + std::to_string(m) + " distinct queries from " +
                          std::to_string(n) + " rows");
    }
    // Partial Fisher-Yates: the first m slots become the sample.
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return pool;
}

QuerySet sample_queries(const VectorDataset& ds, std::size_t m, std::uint64_t seed) {
    return QuerySet::sampled(sample_indices(ds.count(), m, seed), seed);
}

// ---------------------------------------------------------------------------

void PayloadStore::check_attached(const VectorDataset& ds) const {
    if (records_.size() != ds.count()) {
        throw FormatError("payload sidecar has " + std::to_string(records_.size()) +
                          " records for " + std::to_string(ds.count()) + " rows");
    }
}

PayloadStore load_payloads(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open payload file " + path.string());
    std::vector<std::string> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        records.push_back(std::move(line));
    }
    return PayloadStore(std::move(records));
}

void save_payloads(const PayloadStore& store, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write payload file " + path.string());
    for (const auto& r : store.records()) {
        if (r.find('\n') != std::string::npos) {
            throw FormatError("payload record contains a newline");
        }
        out << r << '\n';
    }
    if (!out) throw FormatError("failed writing payload file " + path.string());
}

std::vector<std::string> retrieve_payloads(const PayloadStore& store,
                                           std::span<const std::size_t> ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (std::size_t id : ids) {
        if (id >= store.size()) {
            throw ConfigError("row id " + std::to_string(id) + " out of range for " +
                              std::to_string(store.size()) + " payloads");
        }
        out.push_back(store.records()[id]);
    }
    return out;
}

VectorDataset load_dataset(const std::filesystem::path& path) {
    const auto ext = path.extension();
    if (ext == ".fvecs") return load_fvecs(path);
    if (ext == ".bvecs") return load_bvecs(path);
    return load_native(path);
}

}  // namespace nnm

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>

namespace sidkit {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A labeled set of N samples in R^n, one sample per row.
///
/// Construction validates the invariants (N >= 1, n >= 1, all entries
/// finite), so a live EmbeddingCloud is always well-formed.
class EmbeddingCloud {
 public:
  EmbeddingCloud(std::string label, RowMatrix data,
                 std::set<std::string> tags = {});

  const std::string& label() const noexcept { return label_; }
  const RowMatrix& data() const noexcept { return data_; }
  const std::set<std::string>& tags() const noexcept { return tags_; }
  Eigen::Index count() const noexcept { return data_.rows(); }
  Eigen::Index dim() const noexcept { return data_.cols(); }

  void set_label(std::string label) { label_ = std::move(label); }
  void add_tag(std::string tag) { tags_.insert(std::move(tag)); }

  /// Label, tags and data are equal; data compared bitwise.
  friend bool operator==(const EmbeddingCloud& a, const EmbeddingCloud& b);

 private:
  std::string label_;
  RowMatrix data_;
  std::set<std::string> tags_;
};

struct CsvOptions {
  bool skip_header = false;
};

/// Reads an EMB1 file, or falls back to comma-separated text when the magic
/// bytes are absent. The label defaults to the file stem.
EmbeddingCloud read_cloud(const std::filesystem::path& path,
                          const CsvOptions& csv = {});

/// Writes the cloud in EMB1 format.
void write_cloud(const EmbeddingCloud& cloud,
                 const std::filesystem::path& path);

/// Encodes/decodes the EMB1 byte layout. `fallback_label` is used when the
/// stored label is empty.
std::string encode_emb1(const EmbeddingCloud& cloud);
EmbeddingCloud decode_emb1(const std::string& bytes,
                           const std::string& fallback_label = "cloud");

EmbeddingCloud parse_csv_cloud(const std::string& text,
                               const std::string& label,
                               const CsvOptions& csv = {});

/// Picks `cap` rows using a seeded shuffle (the first `cap` entries of the
/// permuted index). Clouds with count <= cap are returned unchanged. The
/// permutation depends only on (count, seed), so equal clouds subsample
/// identically.
EmbeddingCloud subsample(const EmbeddingCloud& cloud, Eigen::Index cap,
                         std::uint64_t seed);

}  // namespace sidkit

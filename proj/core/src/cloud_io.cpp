#include "sidkit/cloud.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "sidkit/errors.hpp"
#include "sidkit/rng.hpp"

namespace sidkit {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::uint16_t kVersion = 1;
// Bit 0 is reserved and must be zero. Bit 1 marks a tag block after the
// flags word: u16 tag count, then (u16 length, bytes) per tag.
constexpr std::uint32_t kFlagReserved = 1u << 0;
constexpr std::uint32_t kFlagTags = 1u << 1;

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
void put_le(std::string& out, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(buf, buf + sizeof(T));
  }
  out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* field) {
    need(sizeof(T), field);
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(buf, buf + sizeof(T));
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
  }

  std::string get_string(std::size_t len, const char* field) {
    need(len, field);
    std::string s = bytes_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t len, const char* field) const {
    if (bytes_.size() - pos_ < len) {
      throw FormatError(std::string("truncated file while reading '") + field +
                        "'");
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

void check_finite(const RowMatrix& data) {
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (!std::isfinite(data(i, j))) {
        throw DataError("non-finite value", static_cast<long>(i),
                        static_cast<long>(j));
      }
    }
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed for '" + path.string() + "'");
  }
  return std::move(ss).str();
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

EmbeddingCloud::EmbeddingCloud(std::string label, RowMatrix data,
                               std::set<std::string> tags)
    : label_(std::move(label)), data_(std::move(data)), tags_(std::move(tags)) {
  if (data_.rows() == 0 || data_.cols() == 0) {
    throw EmptyCloudError("cloud '" + label_ + "' has N=" +
                          std::to_string(data_.rows()) +
                          ", n=" + std::to_string(data_.cols()));
  }
  check_finite(data_);
}

bool operator==(const EmbeddingCloud& a, const EmbeddingCloud& b) {
  if (a.label_ != b.label_ || a.tags_ != b.tags_ ||
      a.data_.rows() != b.data_.rows() || a.data_.cols() != b.data_.cols()) {
    return false;
  }
  return std::memcmp(a.data_.data(), b.data_.data(),
                     sizeof(double) * static_cast<std::size_t>(a.data_.size())) ==
         0;
}

std::string encode_emb1(const EmbeddingCloud& cloud) {
  const auto& label = cloud.label();
  if (label.size() > 0xFFFF) {
    throw FormatError("label longer than 65535 bytes");
  }
  if (cloud.count() > 0xFFFFFFFFLL || cloud.dim() > 0xFFFFFFFFLL) {
    throw FormatError("N or n exceeds u32 range");
  }
  std::string out;
  out.reserve(32 + label.size() +
              sizeof(double) * static_cast<std::size_t>(cloud.data().size()));
  out.append(kMagic, 4);
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(label.size()));
  out.append(label);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cloud.count()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cloud.dim()));
  const auto& tags = cloud.tags();
  put_le<std::uint32_t>(out, tags.empty() ? 0u : kFlagTags);
  if (!tags.empty()) {
    if (tags.size() > 0xFFFF) throw FormatError("more than 65535 tags");
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(tags.size()));
    for (const auto& t : tags) {
      if (t.size() > 0xFFFF) throw FormatError("tag longer than 65535 bytes");
      put_le<std::uint16_t>(out, static_cast<std::uint16_t>(t.size()));
      out.append(t);
    }
  }
  const RowMatrix& data = cloud.data();
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    put_le<double>(out, data.data()[i]);
  }
  return out;
}

EmbeddingCloud decode_emb1(const std::string& bytes,
                           const std::string& fallback_label) {
  Reader rd(bytes);
  if (rd.get_string(4, "magic") != std::string(kMagic, 4)) {
    throw FormatError("bad magic, expected 'EMB1'");
  }
  const auto version = rd.get<std::uint16_t>("version");
  if (version != kVersion) {
    throw FormatError("unsupported version " + std::to_string(version));
  }
  const auto label_len = rd.get<std::uint16_t>("label length");
  std::string label = rd.get_string(label_len, "label");
  const auto count = rd.get<std::uint32_t>("N");
  const auto dim = rd.get<std::uint32_t>("n");
  const auto flags = rd.get<std::uint32_t>("flags");
  if (flags & kFlagReserved) {
    throw FormatError("flags: reserved bit 0 is set");
  }
  if (flags & ~(kFlagReserved | kFlagTags)) {
    throw FormatError("flags: unknown bits set");
  }
  std::set<std::string> tags;
  if (flags & kFlagTags) {
    const auto ntags = rd.get<std::uint16_t>("tag count");
    for (unsigned t = 0; t < ntags; ++t) {
      const auto len = rd.get<std::uint16_t>("tag length");
      tags.insert(rd.get_string(len, "tag"));
    }
  }
  if (count == 0 || dim == 0) {
    throw EmptyCloudError("header declares N=" + std::to_string(count) +
                          ", n=" + std::to_string(dim));
  }
  const std::uint64_t expected =
      std::uint64_t{count} * std::uint64_t{dim} * sizeof(double);
  if (rd.remaining() != expected) {
    throw FormatError("data: header declares N=" + std::to_string(count) +
                      ", n=" + std::to_string(dim) + " (" +
                      std::to_string(expected) + " bytes) but " +
                      std::to_string(rd.remaining()) + " bytes follow");
  }
  RowMatrix data(count, dim);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    data.data()[i] = rd.get<double>("data");
  }
  if (label.empty()) label = fallback_label;
  return EmbeddingCloud(std::move(label), std::move(data), std::move(tags));
}

EmbeddingCloud parse_csv_cloud(const std::string& text,
                               const std::string& label,
                               const CsvOptions& csv) {
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  bool skipped = !csv.skip_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!skipped) {
      skipped = true;
      continue;
    }
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    Eigen::Index c = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const std::string_view field = trim(body.substr(
          start, comma == std::string_view::npos ? comma : comma - start));
      double v = 0.0;
      const auto* first = field.data();
      const auto* last = field.data() + field.size();
      if (!field.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (field.empty() || ec != std::errc() || ptr != last) {
        throw FormatError("line " + std::to_string(line_no) + ", column " +
                          std::to_string(c) + ": cannot parse '" +
                          std::string(field) + "' as a number");
      }
      if (!std::isfinite(v)) {
        throw DataError("non-finite value", static_cast<long>(rows),
                        static_cast<long>(c));
      }
      values.push_back(v);
      ++c;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols < 0) {
      cols = c;
    } else if (c != cols) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " columns, found " +
                        std::to_string(c));
    }
    ++rows;
  }
  if (rows == 0) {
    throw EmptyCloudError("CSV input '" + label + "' has no rows");
  }
  RowMatrix data = Eigen::Map<RowMatrix>(values.data(), rows, cols);
  return EmbeddingCloud(label, std::move(data));
}

EmbeddingCloud read_cloud(const std::filesystem::path& path,
                          const CsvOptions& csv) {
  const std::string bytes = slurp(path);
  const std::string stem = path.stem().string();
  if (bytes.size() >= 4 && bytes.compare(0, 4, kMagic, 4) == 0) {
    return decode_emb1(bytes, stem);
  }
  return parse_csv_cloud(bytes, stem, csv);
}

void write_cloud(const EmbeddingCloud& cloud,
                 const std::filesystem::path& path) {
  const std::string bytes = encode_emb1(cloud);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw IoError("write failed for '" + path.string() + "'");
  }
}

EmbeddingCloud subsample(const EmbeddingCloud& cloud, Eigen::Index cap,
                         std::uint64_t seed) {
  if (cap < 1) throw ArgumentError("subsample cap must be >= 1");
  if (cloud.count() <= cap) return cloud;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(cloud.count()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  Engine rng(derive_seed(seed, static_cast<std::uint64_t>(cloud.count())));
  // Fisher-Yates with our own index draw; std::shuffle's use of the engine
  // is implementation-defined.
  for (std::size_t i = idx.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(
        uniform01(rng) * static_cast<double>(i + 1));
    std::swap(idx[i], idx[std::min(j, i)]);
  }
  RowMatrix out(cap, cloud.dim());
  for (Eigen::Index r = 0; r < cap; ++r) {
    out.row(r) = cloud.data().row(idx[static_cast<std::size_t>(r)]);
  }
  return EmbeddingCloud(cloud.label(), std::move(out), cloud.tags());
}

}  // namespace sidkit

#include "trajclust/matrix_cache.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "cache format assumes a little-endian host");
static_assert(sizeof(double) == 8);

namespace trajclust {

namespace {

constexpr char kMagic[4] = {'D', 'T', 'W', 'M'};
constexpr std::uint16_t kVersion = 1;

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr);
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t len) {
    EVP_DigestUpdate(ctx_, data, len);
  }
  template <typename T>
  void update_value(const T& v) {
    update(&v, sizeof(T));
  }
  Hash256 finish() {
    Hash256 out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, out.data(), &len);
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

Hash256 dataset_hash(const Dataset& dataset) {
  Sha256 h;
  const std::uint64_t n = dataset.size();
  h.update_value(n);
  for (const Trajectory& t : dataset) {
    const std::uint64_t id_len = t.id.size();
    h.update_value(id_len);
    h.update(t.id.data(), t.id.size());
    const std::uint8_t cls = static_cast<std::uint8_t>(t.user_class);
    h.update_value(cls);
    const std::uint64_t len = static_cast<std::uint64_t>(t.size());
    h.update_value(len);
    h.update(t.frames.data(), t.frames.size() * sizeof(std::int64_t));
    // Row-major x,y pairs; Points is column-major, so copy out row by row.
    for (Index i = 0; i < t.size(); ++i) {
      const double row[2] = {t.xy(i, 0), t.xy(i, 1)};
      h.update(row, sizeof(row));
    }
  }
  return h.finish();
}

Hash256 file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for hashing: " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.finish();
}

std::string to_hex(const Hash256& h) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint8_t b : h) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

void save_matrix_cache(const std::filesystem::path& path,
                       const DissimilarityMatrix& m, const Hash256& hash) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write matrix cache: " + path.string());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
  const std::uint32_t n = static_cast<std::uint32_t>(m.n());
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(hash.data()),
            static_cast<std::streamsize>(hash.size()));
  for (Index i = 0; i < m.n(); ++i) {
    for (Index j = i; j < m.n(); ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::optional<DissimilarityMatrix> load_matrix_cache(
    const std::filesystem::path& path, const Hash256& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open matrix cache: " + path.string());

  char magic[4];
  std::uint16_t version = 0;
  std::uint32_t n = 0;
  Hash256 stored{};
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(stored.data()),
          static_cast<std::streamsize>(stored.size()));
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("not a matrix cache file: " + path.string());
  }
  if (version != kVersion) {
    throw DataError("unsupported matrix cache version " +
                    std::to_string(version) + ": " + path.string());
  }
  if (stored != expected) return std::nullopt;

  DissimilarityMatrix m;
  m.values = Mat::Zero(n, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i; j < n; ++j) {
      double v = 0;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      m.values(i, j) = v;
      m.values(j, i) = v;
    }
  }
  if (!in) throw DataError("truncated matrix cache: " + path.string());
  return m;
}

DissimilarityMatrix load_or_build(
    const Dataset& dataset, int workers,
    const std::optional<std::filesystem::path>& cache_dir) {
  if (!cache_dir) return build_matrix(dataset, workers);

  const Hash256 hash = dataset_hash(dataset);
  const std::filesystem::path file = *cache_dir / (to_hex(hash) + ".dtwm");
  if (std::filesystem::exists(file)) {
    if (auto cached = load_matrix_cache(file, hash)) return std::move(*cached);
  }
  DissimilarityMatrix m = build_matrix(dataset, workers);
  std::filesystem::create_directories(*cache_dir);
  save_matrix_cache(file, m, hash);
  return m;
}

}  // namespace trajclust

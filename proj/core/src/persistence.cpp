#include "omnibus/persistence.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "omnibus/errors.hpp"
#include "omnibus/transforms.hpp"

namespace omnibus {

namespace {

constexpr char kMagic[8] = {'O', 'M', 'N', 'I', 'T', 'B', 'L', '1'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint32_t crc32(const unsigned char* data, std::size_t size) {
  static const std::array<std::uint32_t, 256> table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) {
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      }
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < size; ++i) {
    crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

// Little-endian scalar encoding, independent of the host byte order.
template <typename T>
void put_scalar(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T scalar() {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!in_.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
      throw PersistenceError(PersistenceError::Kind::Truncated,
                             "null table file ends before its declared contents");
    }
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
  }

  std::string bytes(std::size_t size) {
    std::string out(size, '\0');
    if (!in_.read(out.data(), static_cast<std::streamsize>(size))) {
      throw PersistenceError(PersistenceError::Kind::Truncated,
                             "null table file ends before its declared contents");
    }
    return out;
  }

 private:
  std::istream& in_;
};

std::string encode_header(const NullTable& table) {
  std::string header;
  put_scalar<std::uint32_t>(header, static_cast<std::uint32_t>(table.m()));
  put_scalar<std::int64_t>(header, table.replicates());
  put_scalar<std::uint64_t>(header, table.seed());
  put_scalar<double>(header, table.transform().alpha);
  const std::string_view tag = table.transform().name();
  put_scalar<std::uint8_t>(header, static_cast<std::uint8_t>(tag.size()));
  header.append(tag);
  put_scalar<std::uint8_t>(header, static_cast<std::uint8_t>(table.rng_id().size()));
  header.append(table.rng_id());
  return header;
}

void append_section(std::string& out, std::span<const double> values) {
  put_scalar<std::uint64_t>(out, values.size());
  for (double v : values) {
    put_scalar<double>(out, v);
  }
}

}  // namespace

void save_null_table(const NullTable& table, const std::filesystem::path& path) {
  const std::string header = encode_header(table);

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw PersistenceError(PersistenceError::Kind::Io,
                             "cannot open '" + tmp.string() + "' for writing");
    }
    std::string blob;
    blob.reserve(header.size() + 64 +
                 8 * static_cast<std::size_t>(table.replicates()) *
                     (static_cast<std::size_t>(table.m()) + 1));
    blob.append(kMagic, sizeof(kMagic));
    put_scalar<std::uint32_t>(blob, kFormatVersion);
    put_scalar<std::uint32_t>(blob, static_cast<std::uint32_t>(header.size()));
    blob += header;
    put_scalar<std::uint32_t>(blob,
                              crc32(reinterpret_cast<const unsigned char*>(header.data()),
                                    header.size()));
    for (int i = 0; i < table.m(); ++i) {
      append_section(blob, table.column(i));
    }
    append_section(blob, table.tstar_null());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) {
      throw PersistenceError(PersistenceError::Kind::Io, "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw PersistenceError(PersistenceError::Kind::Io,
                           "cannot move '" + tmp.string() + "' to '" + path.string() +
                               "': " + ec.message());
  }
}

NullTable load_null_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PersistenceError(PersistenceError::Kind::Io,
                           "cannot open '" + path.string() + "' for reading");
  }
  Reader reader(in);

  const std::string magic = reader.bytes(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) {
    throw PersistenceError(PersistenceError::Kind::BadMagic,
                           "'" + path.string() + "' is not a null table file");
  }
  const auto version = reader.scalar<std::uint32_t>();
  if (version != kFormatVersion) {
    throw PersistenceError(PersistenceError::Kind::BadVersion,
                           "'" + path.string() + "' has format version " +
                               std::to_string(version) + ", expected " +
                               std::to_string(kFormatVersion));
  }
  const auto header_size = reader.scalar<std::uint32_t>();
  const std::string header = reader.bytes(header_size);
  const auto stored_crc = reader.scalar<std::uint32_t>();
  const std::uint32_t actual_crc =
      crc32(reinterpret_cast<const unsigned char*>(header.data()), header.size());
  if (stored_crc != actual_crc) {
    throw PersistenceError(PersistenceError::Kind::BadChecksum,
                           "'" + path.string() + "' failed the header checksum");
  }

  std::istringstream header_in(header);
  Reader fields(header_in);
  const auto m = fields.scalar<std::uint32_t>();
  const auto replicates = fields.scalar<std::int64_t>();
  const auto seed = fields.scalar<std::uint64_t>();
  const auto alpha = fields.scalar<double>();
  const auto tag_size = fields.scalar<std::uint8_t>();
  const std::string tag = fields.bytes(tag_size);
  const auto rng_size = fields.scalar<std::uint8_t>();
  const std::string rng_id = fields.bytes(rng_size);

  Transform transform;
  try {
    transform = Transform::from_name(tag, alpha);
  } catch (const ConfigError& e) {
    throw PersistenceError(PersistenceError::Kind::BadValue, e.what());
  }
  if (m < 1 || replicates < 1) {
    throw PersistenceError(PersistenceError::Kind::BadValue,
                           "'" + path.string() + "' declares an empty table");
  }

  std::vector<double> columns;
  columns.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(replicates));
  for (std::uint32_t i = 0; i < m; ++i) {
    const auto count = reader.scalar<std::uint64_t>();
    if (count != static_cast<std::uint64_t>(replicates)) {
      throw PersistenceError(PersistenceError::Kind::Truncated,
                             "'" + path.string() + "' column length does not match B");
    }
    double* col = columns.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(replicates);
    for (std::int64_t b = 0; b < replicates; ++b) {
      col[b] = reader.scalar<double>();
    }
  }
  const auto tstar_count = reader.scalar<std::uint64_t>();
  if (tstar_count != static_cast<std::uint64_t>(replicates)) {
    throw PersistenceError(PersistenceError::Kind::Truncated,
                           "'" + path.string() + "' T* length does not match B");
  }
  std::vector<double> tstar(static_cast<std::size_t>(replicates));
  for (std::int64_t b = 0; b < replicates; ++b) {
    tstar[static_cast<std::size_t>(b)] = reader.scalar<double>();
  }

  return NullTable::from_parts(static_cast<int>(m), transform, replicates, seed, rng_id,
                               std::move(columns), std::move(tstar));
}

PValueVector read_pvalues(const std::filesystem::path& path, bool clamp_zero) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open p-value file '" + path.string() + "'");
  }
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      std::string_view token(line.data() + pos, comma - pos);
      while (!token.empty() && (token.front() == ' ' || token.front() == '\t' || token.front() == '\r')) {
        token.remove_prefix(1);
      }
      while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
        token.remove_suffix(1);
      }
      if (!token.empty()) {
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
          throw ValidationError("p-value file '" + path.string() + "' line " +
                                std::to_string(lineno) + ": cannot parse '" + std::string(token) +
                                "'");
        }
        if (value == 0.0) {
          if (clamp_zero) {
            value = kClampFloor;
          } else {
            throw ValidationError("p-value file '" + path.string() + "' line " +
                                  std::to_string(lineno) +
                                  ": p-value is 0; pass --clamp-zero to map it to 1e-300");
          }
        }
        if (!(value > 0.0 && value <= 1.0)) {
          throw ValidationError("p-value file '" + path.string() + "' line " +
                                std::to_string(lineno) + ": value " + std::to_string(value) +
                                " outside (0, 1]");
        }
        values.push_back(value);
      }
      if (comma == line.size()) break;
      pos = comma + 1;
    }
  }
  if (values.empty()) {
    throw ValidationError("p-value file '" + path.string() + "' contains no values");
  }
  return PValueVector(std::move(values));
}

}  // namespace omnibus

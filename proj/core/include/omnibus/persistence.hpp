#ifndef OMNIBUS_PERSISTENCE_HPP
#define OMNIBUS_PERSISTENCE_HPP

#include <filesystem>

#include "omnibus/null_table.hpp"
#include "omnibus/pvalues.hpp"

namespace omnibus {

// Binary null-table cache, magic "OMNITBL1": CRC-checked header
// (version, m, B, seed, transform tag, power alpha, rng id) followed by the
// m sorted columns and the sorted T* null distribution as length-prefixed
// little-endian doubles. Written atomically (temp file + rename), so a
// partial write never passes the checksum. Round trips bit for bit.
void save_null_table(const NullTable& table, const std::filesystem::path& path);

// Validates magic, version and checksum, then re-checks the table invariants
// (sorted columns, T* range). Throws PersistenceError with a distinct kind
// per failure.
NullTable load_null_table(const std::filesystem::path& path);

// Text p-values: one per line or comma-separated, '#' starts a comment.
// Values must lie in (0, 1]; zeros are rejected with a pointer to the
// --clamp-zero policy unless clamp_zero is set, which maps them to 1e-300.
// Parse errors name the offending line.
PValueVector read_pvalues(const std::filesystem::path& path, bool clamp_zero = false);

}  // namespace omnibus

#endif

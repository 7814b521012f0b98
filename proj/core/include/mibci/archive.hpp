#pragma once

#include <filesystem>

#include "mibci/trial.hpp"

namespace mibci {

inline constexpr int kArchiveVersion = 1;

/// Reads a trial archive directory: `meta.json` plus one headerless CSV per
/// trial (rows = samples, columns = channels). Labels may be "-1"/"+1", the
/// aliases "hand"/"left" (-1) and "foot"/"right" (+1), or null.
///
/// Throws IoError naming the offending file on a missing or malformed
/// metadata file, an unknown version, a channel-count mismatch, ragged rows,
/// a non-finite value, or a sample count that differs between trials.
TrialSet load_archive(const std::filesystem::path& dir);

/// Writes `set` to `dir` (created if needed). Values are written with 17
/// significant digits so a reload reproduces them exactly.
void save_archive(const TrialSet& set, const std::filesystem::path& dir);

}  // namespace mibci

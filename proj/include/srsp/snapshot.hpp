#pragma once

#include "srsp/field.hpp"

#include <filesystem>
#include <string>

namespace srsp {

/**
 * Binary field snapshot, little-endian:
 *
 *   bytes 0..4   magic "SPSF1"
 *   bytes 5..12  n as int64
 *   bytes 13..20 box length L as IEEE-754 double
 *   then n^3 complex samples as (re, im) double pairs, x-fastest.
 */
inline constexpr char snapshot_magic[] = "SPSF1";

void write_snapshot(const std::filesystem::path& path, const Field& u);
/// Throws ParseError on a bad magic, truncated payload, trailing bytes, or invalid grid.
Field read_snapshot(const std::filesystem::path& path);

std::string encode_snapshot(const Field& u);
Field decode_snapshot(const std::string& bytes);

/// CSV "coordinate,abs_u" along one axis through the grid centre (axis 0 = x, 1 = y, 2 = z).
std::string axis_slice_csv(const Field& u, int axis);

/// Writes to a sibling temporary then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace srsp

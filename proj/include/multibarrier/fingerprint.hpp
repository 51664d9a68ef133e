#pragma once

#include <cstdint>
#include <string>

namespace mbp {

/// FNV-1a 64-bit over the given bytes.
std::uint64_t fnv1a64(const std::string& bytes);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t v);

/// %.17g rendering: round-trips doubles exactly, used for fingerprints and
/// for every value that must be byte-stable across runs.
std::string g17(double v);

}  // namespace mbp

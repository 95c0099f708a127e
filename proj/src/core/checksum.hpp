#pragma once

#include <cstdint>
#include <string>

namespace nightsense {

// FNV-1a over raw bytes; manifests store the hex digest of each artifact so
// reruns can be compared without diffing whole files.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);
std::string fnv1a64_hex(const std::string& s);
std::string checksum_file(const std::string& path);

} // namespace nightsense

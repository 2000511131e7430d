#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "noisectl/tensor.hpp"

namespace noisectl {

// NCT1 binary tensor interchange: magic "NCT1", u32 rank, u64 per extent,
// then the payload as little-endian f64. All multi-byte fields little-endian.
void write_nct(std::ostream& os, const Tensor& t);
Tensor read_nct(std::istream& is);

void save_nct(const std::filesystem::path& path, const Tensor& t);
Tensor load_nct(const std::filesystem::path& path);

// Tagged container: one UTF-8 header line of "key=value" pairs terminated by
// '\n', followed by a fixed number of NCT1 blobs. Used for checkpoints that
// need a little metadata next to their tensors.
void write_tagged(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& header,
                  const std::vector<const Tensor*>& tensors);
std::vector<std::pair<std::string, std::string>> read_tagged_header(std::istream& is);

// Binary PPM (P6). Values are clamped to [0,1] and scaled to 0..255; a
// single-channel image is replicated to gray RGB.
void write_ppm(const std::filesystem::path& path, const Tensor& image);

// FNV-1a 64-bit over a file's bytes; the manifest's content hash.
uint64_t fnv1a_file(const std::filesystem::path& path);

// Writes manifest.txt ("<hex hash>  <relative path>" per line, sorted) over
// every regular file under dir except the manifest itself.
void write_manifest(const std::filesystem::path& dir);

// Parses a manifest back into (hash, relpath) pairs.
std::vector<std::pair<std::string, std::string>> read_manifest(const std::filesystem::path& dir);

}  // namespace noisectl

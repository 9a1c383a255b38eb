#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "hyperaug/image.hpp"

/// Patch file formats.
///
/// HSB v1 (".hsb"): the bytes "HSB1", then little-endian u32 height, width,
/// channels, then height*width*channels little-endian IEEE-754 binary32
/// samples in row-major channel-last order.
///
/// NumPy ".npy" (format 1.0 written; 1.0-3.0 read): C-order arrays of shape
/// (H, W) or (H, W, C). Float and integer little-endian dtypes are read and
/// converted to float without rescaling; '<f4' is written.
namespace hyperaug::io {

std::vector<std::byte> encode_hsb(const HyperImage& image);
HyperImage decode_hsb(std::span<const std::byte> bytes);

std::vector<std::byte> encode_npy(const HyperImage& image);
HyperImage decode_npy(std::span<const std::byte> bytes);

std::vector<std::byte> read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames, so readers never see a partial file.
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

/// True for the extensions load_patch understands (".hsb", ".npy").
bool is_patch_file(const std::filesystem::path& path);

/// Loads a patch by extension. Errors name the path.
HyperImage load_patch(const std::filesystem::path& path);
void save_hsb(const std::filesystem::path& path, const HyperImage& image);
void save_npy(const std::filesystem::path& path, const HyperImage& image);

}  // namespace hyperaug::io

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hyperaug/image.hpp"
#include "hyperaug/random.hpp"
#include "hyperaug/transforms.hpp"

namespace hyperaug {

struct SampleEntry {
  std::filesystem::path path;
  std::size_t label_index = 0;
};

/// Class-per-folder catalog: root/<ClassName>/<patch files>. Labels follow
/// the ascending order of class names.
struct DatasetIndex {
  std::vector<std::string> class_names;
  std::vector<SampleEntry> samples;

  std::size_t num_classes() const noexcept { return class_names.size(); }
  std::size_t size() const noexcept { return samples.size(); }
};

/// Scans `root` for class subdirectories and the patch files (see
/// io::is_patch_file) inside each, both sorted by name. Throws
/// empty_dataset when there are no class folders, empty_class (naming the
/// class) when a folder holds no patches, and io when root is unreadable.
DatasetIndex index_dataset(const std::filesystem::path& root);

std::vector<float> one_hot(std::size_t label_index, std::size_t num_classes);

struct SeedRecipe {
  Seed master_seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t batch = 0;
  std::uint64_t sample_slot = 0;
};

/// h = mix64(master); then h = mix64(h ^ v) for v in (epoch, batch, slot).
Seed derive_seed(const SeedRecipe& recipe) noexcept;

inline constexpr std::uint64_t kPlanSeedTag = 0x9E6C63D0676A9A99ULL;

/// Sample ids drawn for one epoch.
///
/// The run-wide draw sequence is an endless concatenation of permutations
/// of [0, dataset_size); permutation k is a Fisher-Yates shuffle seeded by
/// fold_seed(mix64(master_seed ^ kPlanSeedTag), k). Epoch e is the slice
/// [e * n, (e + 1) * n) with n = batches_per_epoch * batch_size, so usage
/// counts over any prefix of epochs differ by at most one.
std::vector<std::size_t> epoch_plan(std::size_t dataset_size, std::size_t batches_per_epoch,
                                    std::size_t batch_size, Seed master_seed, std::uint64_t epoch);
std::vector<std::size_t> epoch_plan(const DatasetIndex& index, std::size_t batches_per_epoch,
                                    std::size_t batch_size, Seed master_seed, std::uint64_t epoch);

/// A stacked batch: images is [batch_size, height, width, channels] and
/// labels is [batch_size, num_classes], both dense row-major float.
struct Batch {
  std::size_t batch_size = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::size_t num_classes = 0;
  std::vector<float> images;
  std::vector<float> labels;

  std::size_t image_size() const noexcept { return height * width * channels; }
  std::span<const float> image(std::size_t i) const noexcept {
    return std::span<const float>(images).subspan(i * image_size(), image_size());
  }
  std::span<const float> label(std::size_t i) const noexcept {
    return std::span<const float>(labels).subspan(i * num_classes, num_classes);
  }

  friend bool operator==(const Batch&, const Batch&) = default;
};

/// Loads plan[batch * batch_size + slot] for each slot, augments it with
/// derive_seed({master_seed, epoch, batch, slot}) and stacks the results.
/// Throws io (naming the path) or shape_mismatch.
Batch next_batch(const DatasetIndex& index, std::span<const std::size_t> plan, std::size_t batch,
                 std::size_t batch_size, const AugmentConfig& config, Seed master_seed,
                 std::uint64_t epoch);

/// HSBB v1 batch container: "HSBB", little-endian u32 batch_size, height,
/// width, channels, num_classes, then images and labels as little-endian
/// binary32.
std::vector<std::byte> encode_batch(const Batch& batch);
Batch decode_batch(std::span<const std::byte> bytes);

struct GeneratorSettings {
  AugmentConfig config;
  std::size_t batch_size = 128;
  std::size_t batches_per_epoch = 500;
  std::size_t epochs = 1;
  Seed master_seed = 0;
  std::size_t workers = 1;  ///< 0 = hardware concurrency
};

/// Produces every (epoch, batch) of a run with `settings.workers` threads.
/// `sink` may be called concurrently and in any order; the bytes of each
/// batch do not depend on the worker count.
void generate_batches(const DatasetIndex& index, const GeneratorSettings& settings,
                      const std::function<void(std::uint64_t epoch, std::size_t batch, Batch&&)>& sink);

}  // namespace hyperaug

#include "hyperaug/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "bytes.hpp"
#include "hyperaug/error.hpp"
#include "hyperaug/io.hpp"
#include "hyperaug/parallel.hpp"

namespace hyperaug {
namespace {

namespace fs = std::filesystem;

constexpr std::array<std::byte, 4> kBatchMagic{std::byte{'H'}, std::byte{'S'}, std::byte{'B'},
                                                std::byte{'B'}};
constexpr std::size_t kBatchHeader = 24;

std::vector<fs::path> sorted_entries(const fs::path& dir, bool want_directories) {
  std::vector<fs::path> out;
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot list '" + dir.string() + "': " + ec.message());
  for (const auto& entry : it) {
    const auto name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    if (want_directories ? entry.is_directory() : (entry.is_regular_file() && io::is_patch_file(entry.path()))) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return out;
}

std::vector<std::size_t> permutation(std::size_t n, Seed seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace

DatasetIndex index_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::io, "dataset root '" + root.string() + "' is not a directory");
  }
  DatasetIndex index;
  for (const auto& class_dir : sorted_entries(root, true)) {
    const std::size_t label = index.class_names.size();
    const auto files = sorted_entries(class_dir, false);
    const auto name = class_dir.filename().string();
    if (files.empty()) {
      throw Error(ErrorCode::empty_class, "class '" + name + "' has no sample files");
    }
    index.class_names.push_back(name);
    for (const auto& file : files) index.samples.push_back({file, label});
  }
  if (index.class_names.empty()) {
    throw Error(ErrorCode::empty_dataset, "no class folders under '" + root.string() + "'");
  }
  return index;
}

std::vector<float> one_hot(std::size_t label_index, std::size_t num_classes) {
  if (label_index >= num_classes) {
    throw Error(ErrorCode::invalid_argument, "label " + std::to_string(label_index) +
                                                 " out of range for " + std::to_string(num_classes) +
                                                 " classes");
  }
  std::vector<float> v(num_classes, 0.0f);
  v[label_index] = 1.0f;
  return v;
}

Seed derive_seed(const SeedRecipe& recipe) noexcept {
  Seed h = mix64(recipe.master_seed);
  h = fold_seed(h, recipe.epoch);
  h = fold_seed(h, recipe.batch);
  return fold_seed(h, recipe.sample_slot);
}

std::vector<std::size_t> epoch_plan(std::size_t dataset_size, std::size_t batches_per_epoch,
                                    std::size_t batch_size, Seed master_seed, std::uint64_t epoch) {
  if (dataset_size == 0) throw Error(ErrorCode::empty_dataset, "cannot plan over an empty dataset");
  if (batches_per_epoch == 0 || batch_size == 0) {
    throw Error(ErrorCode::invalid_argument, "batch size and batches per epoch must be >= 1");
  }
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (batch_size > kMax / batches_per_epoch) {
    throw Error(ErrorCode::invalid_argument, "epoch length overflows");
  }
  const std::uint64_t per_epoch = std::uint64_t{batches_per_epoch} * batch_size;
  if (epoch > kMax / per_epoch - 1) throw Error(ErrorCode::invalid_argument, "epoch index overflows");

  const Seed plan_root = mix64(master_seed ^ kPlanSeedTag);
  const std::uint64_t start = epoch * per_epoch;
  std::vector<std::size_t> plan;
  plan.reserve(per_epoch);
  std::uint64_t cycle = start / dataset_size;
  std::uint64_t pos = start % dataset_size;
  while (plan.size() < per_epoch) {
    const auto perm = permutation(dataset_size, fold_seed(plan_root, cycle));
    const auto take = std::min<std::uint64_t>(dataset_size - pos, per_epoch - plan.size());
    plan.insert(plan.end(), perm.begin() + static_cast<std::ptrdiff_t>(pos),
                perm.begin() + static_cast<std::ptrdiff_t>(pos + take));
    ++cycle;
    pos = 0;
  }
  return plan;
}

std::vector<std::size_t> epoch_plan(const DatasetIndex& index, std::size_t batches_per_epoch,
                                    std::size_t batch_size, Seed master_seed, std::uint64_t epoch) {
  return epoch_plan(index.size(), batches_per_epoch, batch_size, master_seed, epoch);
}

Batch next_batch(const DatasetIndex& index, std::span<const std::size_t> plan, std::size_t batch,
                 std::size_t batch_size, const AugmentConfig& config, Seed master_seed,
                 std::uint64_t epoch) {
  if (batch_size == 0) throw Error(ErrorCode::invalid_argument, "batch size must be >= 1");
  const std::size_t first = batch * batch_size;
  if (first / batch_size != batch || plan.size() < first || plan.size() - first < batch_size) {
    throw Error(ErrorCode::invalid_argument,
                "plan of " + std::to_string(plan.size()) + " ids does not cover batch " +
                    std::to_string(batch));
  }
  config.validate();

  Batch out;
  out.batch_size = batch_size;
  out.num_classes = index.num_classes();
  out.labels.assign(batch_size * out.num_classes, 0.0f);
  for (std::size_t slot = 0; slot < batch_size; ++slot) {
    const std::size_t id = plan[first + slot];
    if (id >= index.size()) {
      throw Error(ErrorCode::invalid_argument, "plan references sample " + std::to_string(id) +
                                                   " beyond the index");
    }
    const SampleEntry& entry = index.samples[id];
    HyperImage image = augment_image(io::load_patch(entry.path), config,
                                     derive_seed({master_seed, epoch, batch, slot}));
    if (slot == 0) {
      out.height = image.height();
      out.width = image.width();
      out.channels = image.channels();
      out.images.reserve(batch_size * image.size());
    } else if (image.height() != out.height || image.width() != out.width ||
               image.channels() != out.channels) {
      throw Error(ErrorCode::shape_mismatch,
                  "'" + entry.path.string() + "' is " + std::to_string(image.height()) + "x" +
                      std::to_string(image.width()) + "x" + std::to_string(image.channels()) +
                      ", batch is " + std::to_string(out.height) + "x" + std::to_string(out.width) +
                      "x" + std::to_string(out.channels));
    }
    out.images.insert(out.images.end(), image.data().begin(), image.data().end());
    out.labels[slot * out.num_classes + entry.label_index] = 1.0f;
  }
  return out;
}

std::vector<std::byte> encode_batch(const Batch& batch) {
  std::vector<std::byte> out;
  out.reserve(kBatchHeader + (batch.images.size() + batch.labels.size()) * sizeof(float));
  out.insert(out.end(), kBatchMagic.begin(), kBatchMagic.end());
  for (std::size_t v : {batch.batch_size, batch.height, batch.width, batch.channels, batch.num_classes}) {
    detail::append_le(out, static_cast<std::uint32_t>(v));
  }
  detail::append_floats_le(out, batch.images.data(), batch.images.size());
  detail::append_floats_le(out, batch.labels.data(), batch.labels.size());
  return out;
}

Batch decode_batch(std::span<const std::byte> bytes) {
  if (bytes.size() < kBatchHeader || !std::equal(kBatchMagic.begin(), kBatchMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::format, "missing HSBB header");
  }
  Batch b;
  b.batch_size = detail::load_le<std::uint32_t>(bytes.data() + 4);
  b.height = detail::load_le<std::uint32_t>(bytes.data() + 8);
  b.width = detail::load_le<std::uint32_t>(bytes.data() + 12);
  b.channels = detail::load_le<std::uint32_t>(bytes.data() + 16);
  b.num_classes = detail::load_le<std::uint32_t>(bytes.data() + 20);
  const std::uint64_t n_images = std::uint64_t{b.batch_size} * b.height * b.width * b.channels;
  const std::uint64_t n_labels = std::uint64_t{b.batch_size} * b.num_classes;
  if (bytes.size() - kBatchHeader != (n_images + n_labels) * sizeof(float)) {
    throw Error(ErrorCode::format, "HSBB payload size does not match its header");
  }
  b.images.resize(n_images);
  b.labels.resize(n_labels);
  detail::load_floats_le(bytes.data() + kBatchHeader, b.images.data(), n_images);
  detail::load_floats_le(bytes.data() + kBatchHeader + n_images * sizeof(float), b.labels.data(),
                         n_labels);
  return b;
}

void generate_batches(const DatasetIndex& index, const GeneratorSettings& settings,
                      const std::function<void(std::uint64_t, std::size_t, Batch&&)>& sink) {
  settings.config.validate();
  for (std::uint64_t epoch = 0; epoch < settings.epochs; ++epoch) {
    const auto plan = epoch_plan(index, settings.batches_per_epoch, settings.batch_size,
                                 settings.master_seed, epoch);
    parallel_for(settings.batches_per_epoch, settings.workers, [&](std::size_t b) {
      sink(epoch, b,
           next_batch(index, plan, b, settings.batch_size, settings.config, settings.master_seed, epoch));
    });
  }
}

}  // namespace hyperaug

#include "cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "hyperaug/hyperaug.hpp"

namespace hyperaug::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct AugmentFlags {
  AugmentConfig config;
};

void add_augment_flags(CLI::App& cmd, AugmentFlags& f) {
  auto& c = f.config;
  cmd.add_flag("--flip-h", c.flip_horizontal, "Random horizontal flip (p = 0.5)");
  cmd.add_flag("--flip-v", c.flip_vertical, "Random vertical flip (p = 0.5)");
  cmd.add_option("--rotation", c.max_rotation, "Max rotation in degrees")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--translation", c.max_translation, "Max translation, fraction of image size")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--zoom", c.max_zoom, "Max zoom factor (>= 1), drawn from [1/zoom, zoom]")
      ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
  cmd.add_option("--shear", c.max_shear, "Max x-shear coefficient")->check(CLI::NonNegativeNumber);
  cmd.add_option("--speckle-variance", c.speckle_variance, "Multiplicative noise variance")
      ->check(CLI::NonNegativeNumber);
}

json to_json(const AugmentConfig& c) {
  return {{"flip_h", c.flip_horizontal},   {"flip_v", c.flip_vertical},
          {"rotation", c.max_rotation},    {"translation", c.max_translation},
          {"zoom", c.max_zoom},            {"shear", c.max_shear},
          {"speckle_variance", c.speckle_variance}};
}

void echo_config(std::ostream& out, const json& config) { out << "config: " << config.dump() << '\n'; }

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("hyperaug", std::move(sink));
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("HYPERAUG_LOG"); env && *env) {
    log->set_level(spdlog::level::from_str(env));
  }
  return log;
}

std::vector<fs::path> list_patches(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::io, "'" + root.string() + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && io::is_patch_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::io, "cannot create directory '" + dir.string() + "'");
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char ch : s) {
    if (ch == '\'') q += "'\\''";
    else q += ch;
  }
  return q + "'";
}

// Runs `command` with {in} and {out} substituted; the command must write a
// .npy band to {out}.
BandDecoder external_decoder(const std::string& command, spdlog::logger& log) {
  return [command, &log](const fs::path& band) {
    static std::atomic<unsigned> counter{0};
    const fs::path tmp = fs::temp_directory_path() /
                         ("hyperaug_band_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter++) + ".npy");
    std::string cmd = command;
    for (auto [key, value] : {std::pair{std::string("{in}"), band.string()},
                              std::pair{std::string("{out}"), tmp.string()}}) {
      for (auto pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos)) {
        const auto quoted = shell_quote(value);
        cmd.replace(pos, key.size(), quoted);
        pos += quoted.size();
      }
    }
    log.info("decoding band: {}", cmd);
    const int status = std::system(cmd.c_str());
    if (status != 0) {
      throw Error(ErrorCode::io, "decode command failed for '" + band.string() + "'");
    }
    HyperImage image = io::load_patch(tmp);
    std::error_code ec;
    fs::remove(tmp, ec);
    return image;
  };
}

struct Common {
  Seed seed = 0;
  std::size_t workers = 0;
};

void add_common(CLI::App& cmd, Common& c, bool with_workers) {
  cmd.add_option("--seed", c.seed, "Master seed")->capture_default_str();
  if (with_workers) {
    cmd.add_option("--workers", c.workers, "Worker threads (0 = all cores)")->capture_default_str();
  }
}

int cmd_augment(const AugmentFlags& flags, const Common& common, std::size_t copies,
                const fs::path& in_dir, const fs::path& out_dir, std::ostream& out,
                spdlog::logger& log) {
  const std::size_t workers = resolve_workers(common.workers);
  echo_config(out, {{"command", "augment"},
                    {"augment", to_json(flags.config)},
                    {"seed", common.seed},
                    {"workers", workers},
                    {"copies", copies},
                    {"input", in_dir.string()},
                    {"output", out_dir.string()}});
  const auto files = list_patches(in_dir);
  ensure_dir(out_dir);
  std::vector<fs::path> targets(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    targets[i] = out_dir / fs::relative(files[i], in_dir);
    ensure_dir(targets[i].parent_path());
  }
  parallel_for(files.size() * copies, workers, [&](std::size_t job) {
    const std::size_t i = job / copies;
    const std::size_t copy = job % copies;
    const HyperImage image = io::load_patch(files[i]);
    const Seed seed = derive_seed({common.seed, 0, i, copy});
    fs::path target = targets[i];
    if (copies > 1) target.replace_filename(target.stem().string() + "_aug" + std::to_string(copy));
    target.replace_extension(".hsb");
    io::save_hsb(target, augment_image(image, flags.config, seed));
    log.debug("wrote {}", target.string());
  });
  out << "augmented " << files.size() * copies << " patches\n";
  return kExitOk;
}

struct ExtractArgs {
  fs::path shapefile;
  fs::path raster;
  fs::path labels;
  fs::path out_dir;
  std::size_t size = 64;
  std::string policy = "skip";
  std::string decode_cmd;
};

int cmd_extract(const ExtractArgs& a, const Common& common, std::ostream& out,
                spdlog::logger& log) {
  const std::size_t workers = resolve_workers(common.workers);
  echo_config(out, {{"command", "extract"},
                    {"shapefile", a.shapefile.string()},
                    {"raster", a.raster.string()},
                    {"labels", a.labels.string()},
                    {"size", a.size},
                    {"policy", a.policy},
                    {"decode_cmd", a.decode_cmd},
                    {"workers", workers},
                    {"output", a.out_dir.string()}});
  auto points = read_shapefile_points(a.shapefile);
  if (!a.labels.empty()) attach_labels(points, parse_labels_csv(read_text(a.labels)));
  const BandDecoder decoder = a.decode_cmd.empty() ? BandDecoder{} : external_decoder(a.decode_cmd, log);
  const InMemoryRaster raster = load_band_raster(a.raster, decoder);
  log.info("raster {}x{}x{}, {} points", raster.height(), raster.width(), raster.channels(),
           points.size());
  const auto policy = a.policy == "edge-pad" ? BorderPolicy::edge_pad : BorderPolicy::skip;
  const ExtractReport report = extract_all(raster, points, a.size, policy, a.out_dir, workers);
  for (std::size_t i = 0; i < report.skipped.size(); ++i) {
    log.warn("skipped record {}: {}", report.skipped[i], report.skip_reasons[i]);
  }
  out << "report: " << json{{"written", report.written}, {"skipped", report.skipped}}.dump() << '\n';
  return kExitOk;
}

struct GenerateArgs {
  fs::path data_dir;
  fs::path out_dir;
  std::size_t batch_size = 128;
  std::size_t batches = 500;
  std::size_t epochs = 1;
};

json generator_json(const char* command, const GenerateArgs& g, const AugmentFlags& flags,
                    Seed seed, std::size_t workers) {
  json j{{"command", command},
         {"augment", to_json(flags.config)},
         {"seed", seed},
         {"workers", workers},
         {"batch_size", g.batch_size},
         {"batches", g.batches},
         {"epochs", g.epochs},
         {"data", g.data_dir.string()}};
  if (!g.out_dir.empty()) j["output"] = g.out_dir.string();
  return j;
}

std::string batch_file_name(std::uint64_t epoch, std::size_t batch) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "epoch%04llu_batch%04zu.hsbb",
                static_cast<unsigned long long>(epoch), batch);
  return buf;
}

int cmd_generate(const GenerateArgs& g, const AugmentFlags& flags, const Common& common,
                 std::ostream& out, spdlog::logger& log) {
  const std::size_t workers = resolve_workers(common.workers);
  echo_config(out, generator_json("generate", g, flags, common.seed, workers));
  const DatasetIndex index = index_dataset(g.data_dir);
  log.info("indexed {} samples in {} classes", index.size(), index.num_classes());
  ensure_dir(g.out_dir);
  {
    json classes = index.class_names;
    const std::string text = classes.dump() + "\n";
    io::write_file(g.out_dir / "classes.json", std::as_bytes(std::span(text)));
  }
  GeneratorSettings settings{flags.config, g.batch_size, g.batches, g.epochs, common.seed, workers};
  generate_batches(index, settings, [&](std::uint64_t epoch, std::size_t batch, Batch&& b) {
    io::write_file(g.out_dir / batch_file_name(epoch, batch), encode_batch(b));
  });
  out << "wrote " << g.epochs * g.batches << " batches\n";
  return kExitOk;
}

int cmd_bench(const GenerateArgs& g, const AugmentFlags& flags, const Common& common,
              std::ostream& out, spdlog::logger& log) {
  const std::size_t workers = resolve_workers(common.workers);
  echo_config(out, generator_json("bench", g, flags, common.seed, workers));
  const DatasetIndex index = index_dataset(g.data_dir);
  log.info("indexed {} samples in {} classes", index.size(), index.num_classes());
  GeneratorSettings settings{flags.config, g.batch_size, g.batches, g.epochs, common.seed, workers};
  std::atomic<std::size_t> produced{0};
  const auto start = std::chrono::steady_clock::now();
  generate_batches(index, settings, [&](std::uint64_t, std::size_t, Batch&& b) {
    if (!b.images.empty()) produced.fetch_add(1, std::memory_order_relaxed);
  });
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  const double rate = static_cast<double>(produced.load()) / std::max(elapsed.count(), 1e-9);
  out << "throughput_batches_per_sec=" << rate << '\n';
  return kExitOk;
}

int cmd_convert(const fs::path& in, const fs::path& target, std::ostream& out) {
  echo_config(out, {{"command", "convert"}, {"input", in.string()}, {"output", target.string()}});
  const auto ext = target.extension();
  if (ext != ".hsb" && ext != ".npy") {
    throw Error(ErrorCode::invalid_argument,
                "output must end in .hsb or .npy, got '" + target.string() + "'");
  }
  const HyperImage image = io::load_patch(in);
  if (ext == ".npy") io::save_npy(target, image);
  else io::save_hsb(target, image);
  out << "converted " << image.height() << "x" << image.width() << "x" << image.channels() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperspectral patch augmentation, extraction and batch generation", "hyperaug"};
  app.require_subcommand(1);

  AugmentFlags aug_flags;
  Common common;
  std::size_t copies = 1;
  fs::path in_dir;
  fs::path out_dir;
  auto* augment = app.add_subcommand("augment", "Write augmented copies of every patch under IN");
  add_augment_flags(*augment, aug_flags);
  add_common(*augment, common, true);
  augment->add_option("--copies", copies, "Augmented copies per patch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  augment->add_option("in", in_dir, "Input patch directory")->required();
  augment->add_option("out", out_dir, "Output directory")->required();

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Crop patches around shapefile points");
  extract->add_option("--shapefile", ex.shapefile, "ESRI .shp with Point/PointZ records")->required();
  extract->add_option("--raster", ex.raster, "Raster JSON sidecar")->required();
  extract->add_option("--labels", ex.labels, "CSV with header record,label");
  extract->add_option("--size", ex.size, "Patch size in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  extract->add_option("--policy", ex.policy, "Border policy")
      ->check(CLI::IsMember({"skip", "edge-pad"}))
      ->capture_default_str();
  extract->add_option("--decode-cmd", ex.decode_cmd,
                      "Command decoding a non-HSB/NPY band: {in} -> .npy at {out}");
  add_common(*extract, common, true);
  extract->add_option("out", ex.out_dir, "Output dataset directory")->required();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write augmented HSBB batch files");
  add_augment_flags(*generate, aug_flags);
  add_common(*generate, common, true);
  generate->add_option("--batch-size", gen.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("--batches", gen.batches, "Batches per epoch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--epochs", gen.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  generate->add_option("data", gen.data_dir, "Class-per-folder dataset root")->required();
  generate->add_option("out", gen.out_dir, "Output directory")->required();

  GenerateArgs bench_args;
  bench_args.batches = 10;
  auto* bench = app.add_subcommand("bench", "Measure end-to-end batch generation throughput");
  add_augment_flags(*bench, aug_flags);
  add_common(*bench, common, true);
  bench->add_option("--batch-size", bench_args.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--batches", bench_args.batches, "Batches per epoch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--epochs", bench_args.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("data", bench_args.data_dir, "Class-per-folder dataset root")->required();

  fs::path convert_in;
  fs::path convert_out;
  auto* convert = app.add_subcommand("convert", "Convert a patch between .hsb and .npy");
  convert->add_option("in", convert_in, "Input .hsb or .npy")->required();
  convert->add_option("out", convert_out, "Output .hsb or .npy")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  auto log = make_logger(err);
  try {
    if (augment->parsed()) {
      return cmd_augment(aug_flags, common, copies, in_dir, out_dir, out, *log);
    }
    if (extract->parsed()) return cmd_extract(ex, common, out, *log);
    if (generate->parsed()) return cmd_generate(gen, aug_flags, common, out, *log);
    if (bench->parsed()) return cmd_bench(bench_args, aug_flags, common, out, *log);
    if (convert->parsed()) return cmd_convert(convert_in, convert_out, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace hyperaug::cli

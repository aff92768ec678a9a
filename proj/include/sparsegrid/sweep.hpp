#pragma once

#include "sparsegrid/generators.hpp"
#include "sparsegrid/reconstruction.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sparsegrid {

struct SweepConfig {
  std::filesystem::path datasetDir;
  std::vector<PatternType> patternTypes{PatternType::Rand, PatternType::Sobol, PatternType::Gauss};
  std::vector<RngSeed> seeds{1, 2, 3};
  std::vector<double> densities{0.05, 0.1, 0.2, 0.3, 0.5, 0.7};
  std::vector<Reconstructor> reconstructors{Reconstructor::Lin, Reconstructor::Fsr};
  FsrParams fsrParams;
  GaussParams gaussParams;
  std::size_t maxImages = 30;
  std::optional<GridDims> crop;  // center crop applied to every image on load
  unsigned threads = 1;          // execution only; never changes results

  /// Throws InvalidArgument: empty selections, densities not strictly
  /// increasing or outside (0, 1].
  void validate() const;
};

struct SweepRow {
  PatternType pattern;
  Reconstructor reconstructor;
  double density = 0.0;
  double meanPsnrDb = 0.0;            // mean over seeds of the per-seed image mean
  std::vector<double> perSeedPsnrDb;  // one entry per seed; a single entry for Sobol
  std::size_t imagesUsed = 0;
};

struct DatasetEntry {
  std::filesystem::path path;
  std::string digest;  // FNV-1a 64 of the file bytes, 16 hex digits
};

struct SweepResult {
  std::vector<DatasetEntry> images;
  std::vector<SweepRow> rows;  // ordered by pattern type, reconstructor, density
};

/// `<dir>/<index>.pgm` files in ascending numeric index order, at most
/// `max_images`. Throws MissingDataset if the directory is absent or empty.
std::vector<std::filesystem::path> list_dataset(const std::filesystem::path& dir, std::size_t max_images);

std::string fnv1a64_hex(std::span<const unsigned char> bytes);
std::string file_digest(const std::filesystem::path& path);

/// Generates one incremental pattern per (type, seed, image size) up to the
/// largest density, reconstructs every density prefix from scratch and averages
/// PSNR (against the 8-bit rounded reconstruction) over images, then seeds.
SweepResult run_sweep(const SweepConfig& config);

inline constexpr std::string_view kSweepCsvHeader =
    "pattern,reconstructor,density,mean_psnr_db,per_seed_psnr_db,images_used";

std::string sweep_csv(const SweepResult& result);

/// Line chart of mean PSNR against density, one polyline per pattern type.
std::string sweep_svg(const SweepResult& result, Reconstructor reconstructor);

/// JSON run manifest: full configuration plus dataset digests.
std::string sweep_manifest(const SweepConfig& config, const SweepResult& result);

/// Rebuilds the configuration from a manifest. Throws MissingDataset when an
/// image listed in the manifest is missing or its digest changed.
SweepConfig config_from_manifest(std::string_view manifest_json);

/// Writes sweep.csv, sweep_<reconstructor>.svg and manifest.json into out_dir.
void write_sweep_outputs(const SweepConfig& config, const SweepResult& result, const std::filesystem::path& out_dir);

}  // namespace sparsegrid

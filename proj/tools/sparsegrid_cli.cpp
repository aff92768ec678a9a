#include "sparsegrid/discrepancy.hpp"
#include "sparsegrid/error.hpp"
#include "sparsegrid/generators.hpp"
#include "sparsegrid/imask.hpp"
#include "sparsegrid/metrics.hpp"
#include "sparsegrid/parallel.hpp"
#include "sparsegrid/raster.hpp"
#include "sparsegrid/reconstruction.hpp"
#include "sparsegrid/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace sparsegrid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGenerator = 3;
constexpr int kExitDataset = 4;

const char* kExitHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  I/O or file format error\n"
    "  2  invalid arguments or mismatched inputs\n"
    "  3  pattern generator error\n"
    "  4  dataset missing or changed since the manifest was written\n";

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidParams:
    case ErrorCode::InvalidSchedule:
    case ErrorCode::DimsMismatch:
    case ErrorCode::CropTooLarge:
    case ErrorCode::EmptySet:
    case ErrorCode::EmptyPointSet:
    case ErrorCode::TooManyPoints:
    case ErrorCode::InsufficientPoints:
      return kExitUsage;
    case ErrorCode::CountTooLarge:
    case ErrorCode::SobolExhausted:
    case ErrorCode::AlreadySampled:
    case ErrorCode::DegenerateField:
      return kExitGenerator;
    case ErrorCode::MissingDataset:
      return kExitDataset;
    default:
      return kExitRuntime;
  }
}

GridDims parse_dims(const std::string& text) {
  int w = 0, h = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X') || w <= 0 || h <= 0) {
    throw Error(ErrorCode::InvalidArgument, "dimensions must look like WxH, got '" + text + "'");
  }
  return {w, h};
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw Error(ErrorCode::InvalidArgument, "empty entry in list '" + text + "'");
    out.push_back(parse(item));
  }
  return out;
}

PatternType pattern_type_arg(const std::string& s) {
  auto t = parse_pattern_type(s);
  if (!t) throw Error(ErrorCode::InvalidArgument, "unknown pattern type '" + s + "' (rand, sobol, gauss)");
  return *t;
}

Reconstructor reconstructor_arg(const std::string& s) {
  auto r = parse_reconstructor(s);
  if (!r) throw Error(ErrorCode::InvalidArgument, "unknown reconstructor '" + s + "' (lin, fsr)");
  return *r;
}

double number_arg(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  return v;
}

RngSeed seed_arg(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorCode::InvalidArgument, "not a seed: '" + s + "'");
  return v;
}

struct FsrFlags {
  std::string configFile;
  std::optional<int> iterations, blockSize, windowSize;
  std::optional<double> rho, gamma;
  std::optional<bool> frequencyPrior;

  void add(CLI::App* app) {
    app->add_option("--fsr-config", configFile, "key=value file with FSR parameters");
    app->add_option("--fsr-iterations", iterations, "FSR iterations per block");
    app->add_option("--fsr-block", blockSize, "FSR block size");
    app->add_option("--fsr-window", windowSize, "FSR window size");
    app->add_option("--fsr-rho", rho, "FSR spatial weight decay");
    app->add_option("--fsr-gamma", gamma, "FSR coefficient step");
    app->add_option("--fsr-frequency-prior", frequencyPrior, "favor low frequencies (true/false)");
  }

  FsrParams resolve() const {
    FsrParams p;
    if (!configFile.empty()) p = load_fsr_config(configFile, p);
    if (iterations) p.iterations = *iterations;
    if (blockSize) p.blockSize = *blockSize;
    if (windowSize) p.windowSize = *windowSize;
    if (rho) p.rho = *rho;
    if (gamma) p.gamma = *gamma;
    if (frequencyPrior) p.frequencyPrior = *frequencyPrior;
    p.validate();
    return p;
  }
};

DensityPrefix select_prefix(const SamplingPattern& pattern, std::optional<double> density, std::optional<std::size_t> count) {
  if (density && count) throw Error(ErrorCode::InvalidArgument, "give either --density or --count, not both");
  if (count) return prefix_of_count(pattern, *count);
  if (density) return prefix(pattern, *density);
  return prefix_of_count(pattern, pattern.size());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental non-regular sampling patterns and image reconstruction"};
  app.footer(kExitHelp);
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate an incremental sampling pattern (IMASK)");
  std::string genType, genDims, genOut, genPgm;
  std::optional<std::size_t> genCount;
  std::optional<double> genDensity;
  RngSeed genSeed = 1;
  GaussParams genGauss;
  gen->add_option("--type", genType, "rand, sobol or gauss")->required();
  gen->add_option("--dims", genDims, "grid size WxH")->required();
  auto* genCountOpt = gen->add_option("--count", genCount, "number of points");
  gen->add_option("--density", genDensity, "fraction of cells, in (0, 1]")->excludes(genCountOpt);
  auto* genSeedOpt = gen->add_option("--seed", genSeed, "random seed (ignored for sobol)");
  gen->add_option("--tau", genGauss.tau, "gauss suppression exponent");
  gen->add_option("--sigma-scale", genGauss.sigmaScale, "gauss distance divisor");
  gen->add_option("--cutoff", genGauss.cutoffRadius, "gauss kernel radius in pixels");
  gen->add_option("--out", genOut, "output IMASK file")->required();
  gen->add_option("--pgm", genPgm, "also write the mask as a PGM (255 = sampled)");

  // sample
  auto* smp = app.add_subcommand("sample", "multiply an image by a density prefix of a pattern");
  std::string smpImage, smpMask, smpOut, smpMaskPgm, smpCrop;
  std::optional<double> smpDensity;
  std::optional<std::size_t> smpCount;
  smp->add_option("--image", smpImage, "reference PGM")->required();
  smp->add_option("--mask", smpMask, "IMASK pattern")->required();
  smp->add_option("--density", smpDensity, "prefix density");
  smp->add_option("--count", smpCount, "prefix length");
  smp->add_option("--crop", smpCrop, "center crop WxH applied to the image first");
  smp->add_option("--out", smpOut, "sampled PGM (unsampled pixels are 0)")->required();
  smp->add_option("--mask-pgm", smpMaskPgm, "also write the prefix as a PGM");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "reconstruct a full image from a sampled image and its pattern");
  std::string recImage, recMask, recMethod = "lin", recOut, recCrop;
  std::optional<double> recDensity;
  std::optional<std::size_t> recCount;
  unsigned recThreads = 0;
  FsrFlags recFsr;
  rec->add_option("--image", recImage, "sampled (or reference) PGM; only pixels in the prefix are read")->required();
  rec->add_option("--mask", recMask, "IMASK pattern")->required();
  rec->add_option("--density", recDensity, "prefix density");
  rec->add_option("--count", recCount, "prefix length");
  rec->add_option("--crop", recCrop, "center crop WxH applied to the image first");
  rec->add_option("--method", recMethod, "lin or fsr");
  rec->add_option("--threads", recThreads, "worker threads (default: SPARSEGRID_THREADS or all cores)");
  rec->add_option("--out", recOut, "reconstructed PGM")->required();
  recFsr.add(rec);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "print the PSNR between two PGM images");
  std::string evRef, evCand;
  ev->add_option("reference", evRef, "reference PGM")->required();
  ev->add_option("candidate", evCand, "reconstructed PGM")->required();

  // discrepancy
  auto* dis = app.add_subcommand("discrepancy", "estimate the discrepancy of a pattern prefix");
  std::string disMask;
  std::optional<double> disDensity;
  std::optional<std::size_t> disCount;
  std::size_t disRects = 100'000;
  RngSeed disSeed = 1;
  bool disExact = false;
  dis->add_option("--mask", disMask, "IMASK pattern")->required();
  dis->add_option("--density", disDensity, "prefix density");
  dis->add_option("--count", disCount, "prefix length");
  dis->add_option("--rectangles", disRects, "random rectangles tested");
  dis->add_option("--seed", disSeed, "rectangle seed");
  dis->add_flag("--exact", disExact, "also compute the exact value (at most 256 points)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "lower the randomness measure of a prefix by Metropolis swaps");
  std::string optMask, optOut;
  double optDensity = 0;
  MetropolisOptions optOptions;
  double optT0 = -1;
  opt->add_option("--mask", optMask, "IMASK pattern")->required();
  opt->add_option("--density", optDensity, "prefix density to optimize")->required();
  opt->add_option("--steps", optOptions.steps, "proposals");
  opt->add_option("--t0", optT0, "start temperature (default: the starting measure)");
  opt->add_option("--cooling", optOptions.cooling, "cooling factor in (0, 1]");
  opt->add_option("--rectangles", optOptions.rectangles, "frozen rectangle count");
  opt->add_option("--seed", optOptions.seed, "rectangle and proposal seed");
  opt->add_option("--out", optOut, "optimized IMASK (the order is no longer incremental)")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "PSNR over densities for every pattern type and reconstructor");
  std::string swDataset, swOut, swPatterns = "rand,sobol,gauss", swSeeds = "1,2,3",
                                swDensities = "0.05,0.1,0.2,0.3,0.5,0.7", swRecs = "lin,fsr", swCrop, swManifest;
  std::size_t swMax = 30;
  unsigned swThreads = 0;
  FsrFlags swFsr;
  sw->add_option("--dataset", swDataset, "directory of <index>.pgm images");
  sw->add_option("--out-dir", swOut, "directory for sweep.csv, SVG charts and manifest.json")->required();
  sw->add_option("--patterns", swPatterns, "comma list of rand, sobol, gauss");
  sw->add_option("--seeds", swSeeds, "comma list of seeds");
  sw->add_option("--densities", swDensities, "comma list, strictly increasing");
  sw->add_option("--reconstructors", swRecs, "comma list of lin, fsr");
  sw->add_option("--crop", swCrop, "center crop WxH");
  sw->add_option("--max-images", swMax, "use at most this many images");
  sw->add_option("--threads", swThreads, "worker threads (default: SPARSEGRID_THREADS or all cores)");
  sw->add_option("--manifest", swManifest, "rerun exactly the configuration of a previous manifest.json");
  swFsr.add(sw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const auto threads_or_default = [](unsigned t) { return t == 0 ? default_thread_count() : t; };

  try {
    if (*gen) {
      const PatternType type = pattern_type_arg(genType);
      const GridDims dims = parse_dims(genDims);
      if (!genCount && !genDensity) throw Error(ErrorCode::InvalidArgument, "give --count or --density");
      if (type == PatternType::Sobol && genSeedOpt->count() > 0) {
        std::cerr << "warning: --seed is ignored for sobol patterns, which are deterministic\n";
      }
      if (genDensity && !(*genDensity > 0.0 && *genDensity <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
      }
      const std::size_t count = genCount ? *genCount : density_to_count(dims, *genDensity);
      genGauss.validate();
      const SamplingPattern pattern = generate(type, dims, count, genSeed, genGauss);
      write_imask(pattern, genOut);
      if (!genPgm.empty()) write_prefix_pgm(prefix_of_count(pattern, pattern.size()), genPgm);
    } else if (*smp) {
      GrayImage image = load_pgm(smpImage);
      if (!smpCrop.empty()) image = center_crop(image, parse_dims(smpCrop));
      const SamplingPattern pattern = read_imask(smpMask);
      const SampledImage s = apply_mask(image, select_prefix(pattern, smpDensity, smpCount));
      save_pgm(s.values, smpOut);
      if (!smpMaskPgm.empty()) save_pgm(bitmap_to_gray(s.mask), smpMaskPgm);
    } else if (*rec) {
      const Reconstructor method = reconstructor_arg(recMethod);
      const FsrParams params = recFsr.resolve();
      GrayImage image = load_pgm(recImage);
      if (!recCrop.empty()) image = center_crop(image, parse_dims(recCrop));
      const SamplingPattern pattern = read_imask(recMask);
      const SampledImage s = apply_mask(image, select_prefix(pattern, recDensity, recCount));
      const GrayImage out = method == Reconstructor::Lin
                                ? lin_reconstruct(s)
                                : fsr_reconstruct(s, params, {threads_or_default(recThreads), BlockOrder::Forward});
      save_pgm(out, recOut);
    } else if (*ev) {
      const GrayImage a = load_pgm(evRef);
      const GrayImage b = load_pgm(evCand);
      if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimsMismatch, "images differ in size");
      }
      const PsnrResult r = psnr(a, b);
      if (r.infinite()) {
        std::printf("psnr_db=inf\n");
      } else {
        std::printf("psnr_db=%.4f\n", r.psnrDb);
      }
    } else if (*dis) {
      const SamplingPattern pattern = read_imask(disMask);
      const auto points = to_unit_points(select_prefix(pattern, disDensity, disCount));
      const DiscrepancyReport r = estimate_discrepancy(points, disRects, disSeed);
      std::printf("points=%zu\nrectangles=%zu\nsup_estimate=%.9f\nmean_abs_deviation=%.9f\n", points.size(),
                  r.rectanglesTested, r.supEstimate, r.meanAbsDeviation);
      if (disExact) std::printf("exact=%.9f\n", exact_discrepancy(points));
    } else if (*opt) {
      const SamplingPattern pattern = read_imask(optMask);
      if (optT0 >= 0) optOptions.t0 = optT0;
      const MetropolisResult r = metropolis_optimize(pattern, optDensity, optOptions);
      write_imask(r.pattern, optOut);
      std::printf("initial_measure=%.9f\nbest_measure=%.9f\naccepted_moves=%zu\n", r.initialMeasure, r.bestMeasure,
                  r.acceptedMoves);
    } else if (*sw) {
      SweepConfig config;
      if (!swManifest.empty()) {
        config = config_from_manifest(read_text(swManifest));
      } else {
        if (swDataset.empty()) throw Error(ErrorCode::InvalidArgument, "give --dataset or --manifest");
        config.datasetDir = swDataset;
        config.patternTypes = parse_list<PatternType>(swPatterns, pattern_type_arg);
        config.seeds = parse_list<RngSeed>(swSeeds, seed_arg);
        config.densities = parse_list<double>(swDensities, number_arg);
        config.reconstructors = parse_list<Reconstructor>(swRecs, reconstructor_arg);
        config.fsrParams = swFsr.resolve();
        config.maxImages = swMax;
        if (!swCrop.empty()) config.crop = parse_dims(swCrop);
      }
      config.threads = threads_or_default(swThreads);
      const SweepResult result = run_sweep(config);
      write_sweep_outputs(config, result, swOut);
      std::cout << sweep_csv(result);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

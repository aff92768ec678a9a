#include "sparsegrid/sweep.hpp"

#include "sparsegrid/error.hpp"
#include "sparsegrid/metrics.hpp"
#include "sparsegrid/parallel.hpp"
#include "sparsegrid/raster.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

namespace sparsegrid {

using nlohmann::json;

void SweepConfig::validate() const {
  if (patternTypes.empty()) throw Error(ErrorCode::InvalidArgument, "no pattern types selected");
  if (reconstructors.empty()) throw Error(ErrorCode::InvalidArgument, "no reconstructors selected");
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "no seeds given");
  if (densities.empty()) throw Error(ErrorCode::InvalidArgument, "no densities given");
  for (std::size_t i = 0; i < densities.size(); ++i) {
    if (!(densities[i] > 0.0 && densities[i] <= 1.0)) throw Error(ErrorCode::InvalidArgument, "densities must lie in (0, 1]");
    if (i > 0 && !(densities[i] > densities[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "densities must be strictly increasing");
    }
  }
  if (maxImages == 0) throw Error(ErrorCode::InvalidArgument, "max images must be positive");
  fsrParams.validate();
  gaussParams.validate();
}

std::vector<std::filesystem::path> list_dataset(const std::filesystem::path& dir, std::size_t max_images) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::MissingDataset, "no dataset directory " + dir.string());
  std::vector<std::pair<unsigned long long, std::filesystem::path>> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".pgm") continue;
    const std::string stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](unsigned char c) { return std::isdigit(c); })) continue;
    found.emplace_back(std::stoull(stem), entry.path());
  }
  if (found.empty()) throw Error(ErrorCode::MissingDataset, "no <index>.pgm files in " + dir.string());
  std::sort(found.begin(), found.end());
  std::vector<std::filesystem::path> out;
  for (std::size_t i = 0; i < found.size() && i < max_images; ++i) out.push_back(found[i].second);
  return out;
}

std::string fnv1a64_hex(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingDataset, "cannot read " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a64_hex(bytes);
}

namespace {

struct PatternKey {
  PatternType type;
  std::size_t seedSlot;
  GridDims dims;
};

std::size_t seed_slots(const SweepConfig& c, PatternType type) {
  return type == PatternType::Sobol ? 1 : c.seeds.size();
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  const auto files = list_dataset(config.datasetDir, config.maxImages);

  std::vector<GrayImage> images;
  for (const auto& f : files) {
    GrayImage img = load_pgm(f);
    if (config.crop) img = center_crop(img, *config.crop);
    images.push_back(std::move(img));
    result.images.push_back({f, file_digest(f)});
  }

  // One incremental pattern per (type, seed, size); every density is a prefix.
  std::vector<PatternKey> keys;
  std::set<std::pair<int, int>> sizes;
  for (const auto& img : images) sizes.insert({static_cast<int>(img.cols()), static_cast<int>(img.rows())});
  for (PatternType t : config.patternTypes)
    for (std::size_t s = 0; s < seed_slots(config, t); ++s)
      for (const auto& [w, h] : sizes) keys.push_back({t, s, {w, h}});

  const double max_density = config.densities.back();
  std::vector<SamplingPattern> patterns(keys.size());
  parallel_for(keys.size(), config.threads, [&](std::size_t i) {
    const PatternKey& k = keys[i];
    patterns[i] = generate(k.type, k.dims, density_to_count(k.dims, max_density), config.seeds[k.seedSlot],
                           config.gaussParams);
  });
  auto pattern_for = [&](PatternType t, std::size_t slot, GridDims d) -> const SamplingPattern& {
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (keys[i].type == t && keys[i].seedSlot == slot && keys[i].dims == d) return patterns[i];
    throw Error(ErrorCode::InvalidArgument, "pattern missing");
  };

  struct Job {
    std::size_t typeIdx, slot, densityIdx, reconIdx, imageIdx;
  };
  std::vector<Job> jobs;
  for (std::size_t t = 0; t < config.patternTypes.size(); ++t)
    for (std::size_t s = 0; s < seed_slots(config, config.patternTypes[t]); ++s)
      for (std::size_t d = 0; d < config.densities.size(); ++d)
        for (std::size_t r = 0; r < config.reconstructors.size(); ++r)
          for (std::size_t i = 0; i < images.size(); ++i) jobs.push_back({t, s, d, r, i});

  std::vector<double> psnr_db(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const GrayImage& ref = images[job.imageIdx];
    const SamplingPattern& pat =
        pattern_for(config.patternTypes[job.typeIdx], job.slot, dims_of(ref));
    const SampledImage s = apply_mask(ref, prefix(pat, config.densities[job.densityIdx]));
    const GrayImage rec = config.reconstructors[job.reconIdx] == Reconstructor::Lin
                              ? lin_reconstruct(s)
                              : fsr_reconstruct(s, config.fsrParams);
    psnr_db[j] = psnr(ref, quantize8(rec)).psnrDb;
  });

  // Canonical reduction: jobs are laid out in row order with images innermost.
  std::size_t j = 0;
  for (std::size_t t = 0; t < config.patternTypes.size(); ++t) {
    const std::size_t slots = seed_slots(config, config.patternTypes[t]);
    std::vector<std::vector<std::vector<double>>> per(config.densities.size(),
                                                      std::vector<std::vector<double>>(config.reconstructors.size()));
    for (std::size_t s = 0; s < slots; ++s)
      for (std::size_t d = 0; d < config.densities.size(); ++d)
        for (std::size_t r = 0; r < config.reconstructors.size(); ++r) {
          std::span<const double> values(psnr_db.data() + j, images.size());
          per[d][r].push_back(mean_psnr(values));
          j += images.size();
        }
    for (std::size_t r = 0; r < config.reconstructors.size(); ++r)
      for (std::size_t d = 0; d < config.densities.size(); ++d) {
        SweepRow row{config.patternTypes[t], config.reconstructors[r], config.densities[d], 0.0, per[d][r],
                     images.size()};
        row.meanPsnrDb = mean_psnr(std::span<const double>(row.perSeedPsnrDb));
        result.rows.push_back(std::move(row));
      }
  }
  return result;
}

namespace {

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string shortest(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const SweepRow& row : result.rows) {
    std::string seeds;
    for (std::size_t i = 0; i < row.perSeedPsnrDb.size(); ++i) {
      if (i) seeds += ';';
      seeds += fixed(row.perSeedPsnrDb[i], 6);
    }
    out += std::string(to_string(row.pattern)) + ',' + std::string(to_string(row.reconstructor)) + ',' +
           shortest(row.density) + ',' + fixed(row.meanPsnrDb, 6) + ',' + seeds + ',' +
           std::to_string(row.imagesUsed) + '\n';
  }
  return out;
}

std::string sweep_svg(const SweepResult& result, Reconstructor reconstructor) {
  constexpr double kW = 640, kH = 420, kLeft = 60, kRight = 130, kTop = 40, kBottom = 50;
  std::vector<const SweepRow*> rows;
  for (const SweepRow& r : result.rows)
    if (r.reconstructor == reconstructor && std::isfinite(r.meanPsnrDb)) rows.push_back(&r);

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\">\n";
  svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(kLeft, 1) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">PSNR vs density (" +
         std::string(to_string(reconstructor)) + ")</text>\n";
  if (rows.empty()) return svg + "</svg>\n";

  double dmin = rows.front()->density, dmax = dmin, pmin = rows.front()->meanPsnrDb, pmax = pmin;
  for (const SweepRow* r : rows) {
    dmin = std::min(dmin, r->density);
    dmax = std::max(dmax, r->density);
    pmin = std::min(pmin, r->meanPsnrDb);
    pmax = std::max(pmax, r->meanPsnrDb);
  }
  pmin = std::floor(pmin);
  pmax = std::ceil(pmax);
  if (pmax <= pmin) pmax = pmin + 1;
  if (dmax <= dmin) dmax = dmin + 0.01;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double d) { return kLeft + (d - dmin) / (dmax - dmin) * pw; };
  auto sy = [&](double p) { return kTop + (1.0 - (p - pmin) / (pmax - pmin)) * ph; };

  svg += "<g stroke=\"black\" fill=\"none\"><rect x=\"" + fixed(kLeft, 1) + "\" y=\"" + fixed(kTop, 1) + "\" width=\"" +
         fixed(pw, 1) + "\" height=\"" + fixed(ph, 1) + "\"/></g>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double d = dmin + (dmax - dmin) * i / ticks;
    const double p = pmin + (pmax - pmin) * i / ticks;
    svg += "<text x=\"" + fixed(sx(d), 1) + "\" y=\"" + fixed(kH - kBottom + 18, 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + fixed(d, 2) + "</text>\n";
    svg += "<text x=\"" + fixed(kLeft - 6, 1) + "\" y=\"" + fixed(sy(p) + 4, 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + fixed(p, 1) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(kLeft + pw / 2, 1) + "\" y=\"" + fixed(kH - 10, 1) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">sampling density</text>\n";
  svg += "<text x=\"16\" y=\"" + fixed(kTop + ph / 2, 1) + "\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 " + fixed(kTop + ph / 2, 1) + ")\" text-anchor=\"middle\">PSNR [dB]</text>\n";

  const std::map<PatternType, std::string> colors{
      {PatternType::Rand, "#1f77b4"}, {PatternType::Sobol, "#2ca02c"}, {PatternType::Gauss, "#d62728"}};
  int legend = 0;
  for (PatternType t : {PatternType::Rand, PatternType::Sobol, PatternType::Gauss}) {
    std::string points;
    for (const SweepRow* r : rows)
      if (r->pattern == t) points += fixed(sx(r->density), 2) + "," + fixed(sy(r->meanPsnrDb), 2) + " ";
    if (points.empty()) continue;
    points.pop_back();
    const std::string& color = colors.at(t);
    svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    const double ly = kTop + 16 + 18 * legend++;
    svg += "<line x1=\"" + fixed(kW - kRight + 12, 1) + "\" y1=\"" + fixed(ly, 1) + "\" x2=\"" +
           fixed(kW - kRight + 36, 1) + "\" y2=\"" + fixed(ly, 1) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed(kW - kRight + 42, 1) + "\" y=\"" + fixed(ly + 4, 1) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + std::string(to_string(t)) + "</text>\n";
  }
  return svg + "</svg>\n";
}

std::string sweep_manifest(const SweepConfig& c, const SweepResult& result) {
  json m;
  m["format"] = "sparsegrid-sweep-manifest";
  m["version"] = 1;
  m["dataset_dir"] = c.datasetDir.string();
  m["max_images"] = c.maxImages;
  json images = json::array();
  for (const DatasetEntry& e : result.images) {
    images.push_back({{"file", e.path.filename().string()}, {"fnv1a64", e.digest}});
  }
  m["images"] = images;
  json patterns = json::array();
  for (PatternType t : c.patternTypes) patterns.push_back(std::string(to_string(t)));
  m["patterns"] = patterns;
  m["seeds"] = c.seeds;
  m["densities"] = c.densities;
  json recs = json::array();
  for (Reconstructor r : c.reconstructors) recs.push_back(std::string(to_string(r)));
  m["reconstructors"] = recs;
  m["fsr"] = {{"block_size", c.fsrParams.blockSize},     {"window_size", c.fsrParams.windowSize},
              {"iterations", c.fsrParams.iterations},    {"rho", c.fsrParams.rho},
              {"gamma", c.fsrParams.gamma},              {"delta", c.fsrParams.delta},
              {"frequency_prior", c.fsrParams.frequencyPrior}};
  m["gauss"] = {{"tau", c.gaussParams.tau},
                {"sigma_scale", c.gaussParams.sigmaScale},
                {"cutoff_radius", c.gaussParams.cutoffRadius},
                {"uniform_fallback", c.gaussParams.uniformFallback}};
  if (c.crop) {
    m["crop"] = {{"width", c.crop->width}, {"height", c.crop->height}};
  } else {
    m["crop"] = nullptr;
  }
  m["csv_fnv1a64"] = [&] {
    const std::string csv = sweep_csv(result);
    return fnv1a64_hex(std::span(reinterpret_cast<const unsigned char*>(csv.data()), csv.size()));
  }();
  return m.dump(2) + "\n";
}

SweepConfig config_from_manifest(std::string_view text) {
  json m;
  try {
    m = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    if (m.at("format").get<std::string>() != "sparsegrid-sweep-manifest") {
      throw Error(ErrorCode::FormatError, "not a sweep manifest");
    }
    SweepConfig c;
    c.datasetDir = m.at("dataset_dir").get<std::string>();
    c.maxImages = m.at("max_images").get<std::size_t>();
    c.patternTypes.clear();
    for (const auto& p : m.at("patterns")) {
      auto t = parse_pattern_type(p.get<std::string>());
      if (!t) throw Error(ErrorCode::FormatError, "unknown pattern type in manifest");
      c.patternTypes.push_back(*t);
    }
    c.seeds = m.at("seeds").get<std::vector<RngSeed>>();
    c.densities = m.at("densities").get<std::vector<double>>();
    c.reconstructors.clear();
    for (const auto& r : m.at("reconstructors")) {
      auto rec = parse_reconstructor(r.get<std::string>());
      if (!rec) throw Error(ErrorCode::FormatError, "unknown reconstructor in manifest");
      c.reconstructors.push_back(*rec);
    }
    const auto& f = m.at("fsr");
    c.fsrParams.blockSize = f.at("block_size").get<int>();
    c.fsrParams.windowSize = f.at("window_size").get<int>();
    c.fsrParams.iterations = f.at("iterations").get<int>();
    c.fsrParams.rho = f.at("rho").get<double>();
    c.fsrParams.gamma = f.at("gamma").get<double>();
    c.fsrParams.delta = f.at("delta").get<double>();
    c.fsrParams.frequencyPrior = f.at("frequency_prior").get<bool>();
    const auto& g = m.at("gauss");
    c.gaussParams.tau = g.at("tau").get<double>();
    c.gaussParams.sigmaScale = g.at("sigma_scale").get<double>();
    c.gaussParams.cutoffRadius = g.at("cutoff_radius").get<int>();
    c.gaussParams.uniformFallback = g.at("uniform_fallback").get<bool>();
    if (!m.at("crop").is_null()) c.crop = GridDims{m["crop"].at("width").get<int>(), m["crop"].at("height").get<int>()};

    const auto files = list_dataset(c.datasetDir, c.maxImages);
    const auto& listed = m.at("images");
    if (listed.size() != files.size()) throw Error(ErrorCode::MissingDataset, "dataset image count changed");
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (listed[i].at("file").get<std::string>() != files[i].filename().string() ||
          listed[i].at("fnv1a64").get<std::string>() != file_digest(files[i])) {
        throw Error(ErrorCode::MissingDataset, "dataset image changed: " + files[i].string());
      }
    }
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed manifest: ") + e.what());
  }
}

void write_sweep_outputs(const SweepConfig& config, const SweepResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    out << text;
  };
  write(out_dir / "sweep.csv", sweep_csv(result));
  for (Reconstructor r : config.reconstructors) {
    write(out_dir / ("sweep_" + std::string(to_string(r)) + ".svg"), sweep_svg(result, r));
  }
  write(out_dir / "manifest.json", sweep_manifest(config, result));
}

}  // namespace sparsegrid

#include "sparsegrid/error.hpp"
#include "sparsegrid/parallel.hpp"
#include "sparsegrid/reconstruction.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sparsegrid {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

void FsrParams::validate() const {
  if (blockSize < 1) throw Error(ErrorCode::InvalidParams, "block_size must be positive");
  if (windowSize <= blockSize) throw Error(ErrorCode::InvalidParams, "window_size must exceed block_size");
  if (windowSize % 2 != 0) throw Error(ErrorCode::InvalidParams, "window_size must be even");
  if ((windowSize - blockSize) % 2 != 0) throw Error(ErrorCode::InvalidParams, "window_size - block_size must be even");
  if (iterations < 0) throw Error(ErrorCode::InvalidParams, "iterations must be non-negative");
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::InvalidParams, "rho must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::InvalidParams, "gamma must lie in (0, 1]");
  if (delta != 0.0) throw Error(ErrorCode::InvalidParams, "only delta = 0 is supported");
}

std::string_view to_string(BlockOrder order) { return order == BlockOrder::Forward ? "forward" : "reverse"; }

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& text, long line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::FormatError, "bad numeric value '" + text + "'", line);
  }
  return value;
}

// Precomputed transforms shared by all windows of one reconstruction.
struct SpectralContext {
  int n = 0;
  int half = 0;          // n / 2 + 1 stored frequency columns
  RealMatrix cosine;     // dft = cosine - i * sine, both symmetric
  RealMatrix sine;
  ComplexMatrix idft;    // exp(+2 pi i k x / n)
  RealMatrix decay;      // rho^distance from the window center
  RealMatrix prior2;     // n x half squared selection prior on magnitudes

  explicit SpectralContext(const FsrParams& p) : n(p.windowSize), half(p.windowSize / 2 + 1) {
    cosine.resize(n, n);
    sine.resize(n, n);
    idft.resize(n, n);
    for (int k = 0; k < n; ++k)
      for (int x = 0; x < n; ++x) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * x) % n) / n;
        cosine(k, x) = std::cos(angle);
        sine(k, x) = std::sin(angle);
        idft(k, x) = Complex(cosine(k, x), sine(k, x));
      }
    decay = window_decay(p).matrix();
    prior2 = RealMatrix::Ones(n, half);
    if (p.frequencyPrior) {
      for (int ku = 0; ku < n; ++ku)
        for (int kv = 0; kv < half; ++kv) {
          const double fu = std::min(ku, n - ku);
          const double fv = std::min(kv, n - kv);
          const double prior = 1.0 - std::sqrt(2.0) / n * std::sqrt(fu * fu + fv * fv);
          prior2(ku, kv) = prior * prior;
        }
    }
  }

  // Real and imaginary parts of dft * x * dft restricted to the first `cols`
  // frequency columns, for real x.
  void forward(const RealMatrix& x, int cols, RealMatrix& re, RealMatrix& im) const {
    const RealMatrix cx = cosine * x;
    const RealMatrix sx = sine * x;
    re.noalias() = cx * cosine.leftCols(cols);
    re.noalias() -= sx * sine.leftCols(cols);
    im.noalias() = -(cx * sine.leftCols(cols));
    im.noalias() -= sx * cosine.leftCols(cols);
  }
};

// Coefficients of the greedy weighted fit; model(x) = sum_k coeff(k) exp(2 pi i k.x / n).
// Complex arithmetic is spelled out on real and imaginary planes so it vectorizes.
ComplexMatrix fit_coefficients(const SpectralContext& ctx, const RealMatrix& values, const RealMatrix& weights,
                               double gamma, int iterations) {
  const int n = ctx.n;
  const int half = ctx.half;
  ComplexMatrix coeff = ComplexMatrix::Zero(n, n);
  const double w0 = weights.sum();
  if (!(w0 > 0.0) || iterations == 0) return coeff;

  // Weight spectrum tiled 2x2 so every shifted copy is a plain block.
  RealMatrix wre, wim;
  ctx.forward(weights, n, wre, wim);
  RealMatrix tre(2 * n, 2 * n), tim(2 * n, 2 * n);
  tre << wre, wre, wre, wre;
  tim << wim, wim, wim, wim;
  // Weighted residual spectrum on the non-redundant half plane; the residual is
  // real, so the other half is its conjugate mirror.
  RealMatrix rre, rim;
  ctx.forward(values.cwiseProduct(weights), half, rre, rim);

  const double* prior2 = ctx.prior2.data();
  auto select = [&] {
    int best = 0;
    double best_score = -1.0;
    for (int k = 0; k < n * half; ++k) {
      const double score = (rre.data()[k] * rre.data()[k] + rim.data()[k] * rim.data()[k]) * prior2[k];
      if (score > best_score) {
        best_score = score;
        best = k;
      }
    }
    return best;
  };

  // The prior is non-negative, so ranking squared magnitudes is the same as
  // ranking weighted magnitudes.
  int pick = select();
  for (int it = 0; it < iterations; ++it) {
    const int u = pick % n;
    const int v = pick / n;
    const int cu = (n - u) % n;
    const int cv = (n - v) % n;
    // Residual spectrum at m shifts by c * W(m - k) + conj(c) * W(m + k).
    const auto are = tre.block(n - u, n - v, n, half);
    const auto aim = tim.block(n - u, n - v, n, half);
    if (cu == u && cv == v) {
      // Real basis function (DC or Nyquist); its residual correlation is real.
      const double c = gamma * rre(u, v) / w0;
      coeff(u, v) += c;
      rre -= c * are;
      rim -= c * aim;
    } else {
      const double cr = gamma * rre(u, v) / w0;
      const double ci = gamma * rim(u, v) / w0;
      coeff(u, v) += Complex(cr, ci);
      coeff(cu, cv) += Complex(cr, -ci);
      const auto bre = tre.block(u, v, n, half);
      const auto bim = tim.block(u, v, n, half);
      rre -= cr * (are + bre) - ci * (aim - bim);
      rim -= cr * (aim + bim) + ci * (are - bre);
    }
    if (it + 1 < iterations) pick = select();
  }
  return coeff;
}

int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace

GrayImage window_decay(const FsrParams& p) {
  const int n = p.windowSize;
  const double center = (n - 1) / 2.0;
  GrayImage decay(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) decay(y, x) = std::pow(p.rho, std::hypot(y - center, x - center));
  return decay;
}

GrayImage fit_window_model(const GrayImage& values, const GrayImage& weights, const FsrParams& params,
                           int iterations) {
  params.validate();
  const int n = params.windowSize;
  if (values.rows() != n || values.cols() != n || weights.rows() != n || weights.cols() != n) {
    throw Error(ErrorCode::DimsMismatch, "window arrays must be window_size square");
  }
  const SpectralContext ctx(params);
  const ComplexMatrix coeff =
      fit_coefficients(ctx, values.matrix(), weights.matrix(), params.gamma, iterations);
  return (ctx.idft * coeff * ctx.idft).real().array();
}

GrayImage fsr_reconstruct(const SampledImage& sampled, const FsrParams& params, const FsrExecution& exec) {
  params.validate();
  const GridDims dims = sampled.dims();
  if (dims_of(sampled.mask) != dims) throw Error(ErrorCode::DimsMismatch, "mask and values differ in size");
  if (!sampled.mask.any()) throw Error(ErrorCode::InvalidArgument, "no sampled pixels");

  const int b = params.blockSize;
  const int n = params.windowSize;
  const int border = (n - b) / 2;
  const int blocks_x = (dims.width + b - 1) / b;
  const int blocks_y = (dims.height + b - 1) / b;
  const int padded_w = blocks_x * b + 2 * border;
  const int padded_h = blocks_y * b + 2 * border;

  // Mirror-padded samples and mask. Reconstructed values never feed back.
  RealMatrix padded_values(padded_h, padded_w);
  RealMatrix padded_mask(padded_h, padded_w);
  for (int y = 0; y < padded_h; ++y) {
    const int sy = reflect(y - border, dims.height);
    for (int x = 0; x < padded_w; ++x) {
      const int sx = reflect(x - border, dims.width);
      const bool s = sampled.mask(sy, sx);
      padded_mask(y, x) = s ? 1.0 : 0.0;
      padded_values(y, x) = s ? sampled.values(sy, sx) : 0.0;
    }
  }

  double sample_sum = 0.0;
  for (int y = 0; y < dims.height; ++y)
    for (int x = 0; x < dims.width; ++x)
      if (sampled.mask(y, x)) sample_sum += sampled.values(y, x);
  const double sample_mean = sample_sum / static_cast<double>(sampled.sample_count());

  const SpectralContext ctx(params);
  GrayImage out = sampled.values;
  const std::size_t total_blocks = static_cast<std::size_t>(blocks_x) * blocks_y;

  auto process = [&](std::size_t job) {
    const std::size_t block = exec.order == BlockOrder::Forward ? job : total_blocks - 1 - job;
    const int bx = static_cast<int>(block % blocks_x);
    const int by = static_cast<int>(block / blocks_x);
    const int x0 = bx * b;
    const int y0 = by * b;
    const int x1 = std::min(x0 + b, dims.width);
    const int y1 = std::min(y0 + b, dims.height);

    bool complete = true;
    for (int y = y0; y < y1 && complete; ++y)
      for (int x = x0; x < x1; ++x)
        if (!sampled.mask(y, x)) {
          complete = false;
          break;
        }
    if (complete) return;

    // Window of the padded raster centered on the block.
    const RealMatrix weights = padded_mask.block(y0, x0, n, n).cwiseProduct(ctx.decay);
    const RealMatrix values = padded_values.block(y0, x0, n, n);
    RealMatrix model;
    if (weights.sum() > 0.0) {
      const ComplexMatrix coeff = fit_coefficients(ctx, values, weights, params.gamma, params.iterations);
      model = (ctx.idft.middleRows(border, b) * coeff * ctx.idft.middleCols(border, b)).real();
    } else {
      model = RealMatrix::Constant(b, b, sample_mean);
    }
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x)
        if (!sampled.mask(y, x)) out(y, x) = std::clamp(model(y - y0, x - x0), 0.0, 255.0);
  };

  parallel_for(total_blocks, exec.threads, process);
  return out;
}

FsrParams parse_fsr_config(std::string_view text, FsrParams base) {
  FsrParams p = base;
  std::istringstream in{std::string(text)};
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::FormatError, "expected key=value", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "block_size") p.blockSize = parse_number<int>(value, line_no);
    else if (key == "window_size") p.windowSize = parse_number<int>(value, line_no);
    else if (key == "iterations") p.iterations = parse_number<int>(value, line_no);
    else if (key == "rho") p.rho = parse_number<double>(value, line_no);
    else if (key == "gamma") p.gamma = parse_number<double>(value, line_no);
    else if (key == "delta") p.delta = parse_number<double>(value, line_no);
    else if (key == "frequency_prior") {
      if (value == "true" || value == "1") p.frequencyPrior = true;
      else if (value == "false" || value == "0") p.frequencyPrior = false;
      else throw Error(ErrorCode::FormatError, "frequency_prior must be true or false", line_no);
    } else {
      throw Error(ErrorCode::FormatError, "unknown key '" + key + "'", line_no);
    }
  }
  p.validate();
  return p;
}

FsrParams load_fsr_config(const std::filesystem::path& path, FsrParams base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fsr_config(ss.str(), base);
}

std::string format_fsr_config(const FsrParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "block_size=" << p.blockSize << "\nwindow_size=" << p.windowSize << "\niterations=" << p.iterations
      << "\nrho=" << p.rho << "\ngamma=" << p.gamma << "\ndelta=" << p.delta
      << "\nfrequency_prior=" << (p.frequencyPrior ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace sparsegrid

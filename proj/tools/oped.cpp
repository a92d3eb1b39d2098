#include "oped/analysis.hpp"
#include "oped/cylinder.hpp"
#include "oped/io.hpp"
#include "oped/kernel.hpp"
#include "oped/phantom.hpp"
#include "oped/reconstruct.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct RunConfig {
  int m = 1;
  int n = 0;  // 0: default to 2m
  double L = 1.0;
  int grid_res = 256;
  std::string variant = "plain";
  std::string phantom_path;
  std::string sino_path;
  std::string out_prefix;
  std::string fill = "zero";
  bool raw = false;
  bool pgm = false;
  int dim = 2;
  std::vector<int> ms;
};

double fill_value(const RunConfig& cfg) {
  return cfg.fill == "nan" ? std::numeric_limits<double>::quiet_NaN() : 0.0;
}

void write_raster_outputs(const RunConfig& cfg, const oped::Image& img,
                          json sidecar) {
  const bool want_raw = cfg.raw || !cfg.pgm;   // default: both
  const bool want_pgm = cfg.pgm || !cfg.raw;
  const auto [lo, hi] = oped::finite_range(img.values);
  sidecar["min"] = lo;
  sidecar["max"] = hi;
  sidecar["width"] = img.grid.width;
  sidecar["height"] = img.grid.height;
  if (want_pgm) oped::write_pgm(cfg.out_prefix + ".pgm", img.values, lo, hi);
  if (want_raw) oped::write_raw(cfg.out_prefix + ".raw", img.values);
  std::ofstream side(cfg.out_prefix + ".json");
  if (!side) throw std::runtime_error("cannot open sidecar: " + cfg.out_prefix + ".json");
  side << sidecar.dump(2) << '\n';
}

int cmd_sinogram(const RunConfig& cfg) {
  const oped::Phantom ph = oped::load_phantom(cfg.phantom_path);
  if (cfg.dim == 3) {
    const int n = cfg.n > 0 ? cfg.n : 2 * cfg.m;
    // Phantom files describe planar densities; the volume is z-independent.
    const auto slice_at = [&ph](double) { return ph; };
    oped::save_sinogram(cfg.out_prefix, oped::sinogram3d(slice_at, cfg.m, n, cfg.L));
  } else {
    oped::save_sinogram(cfg.out_prefix, oped::sinogram2d(ph, cfg.m));
  }
  return 0;
}

int cmd_reconstruct(const RunConfig& cfg) {
  const oped::Sinogram2D s = oped::load_sinogram2d(cfg.sino_path);
  const oped::ImageGrid grid(cfg.grid_res, cfg.grid_res);
  oped::Image img;
  if (cfg.variant == "eta") {
    const oped::Multiplier eta = oped::eta_default();
    img = oped::reconstruct_eta(s, grid, eta, fill_value(cfg));
  } else {
    img = oped::reconstruct(s, grid, nullptr, fill_value(cfg));
  }
  json sidecar;
  sidecar["m"] = s.m;
  sidecar["variant"] = cfg.variant;
  write_raster_outputs(cfg, img, std::move(sidecar));
  return 0;
}

int cmd_recon3d(const RunConfig& cfg) {
  oped::Sinogram3D s;
  if (!cfg.sino_path.empty()) {
    s = oped::load_sinogram3d(cfg.sino_path);
  } else {
    const oped::Phantom ph = oped::load_phantom(cfg.phantom_path);
    const int n = cfg.n > 0 ? cfg.n : 2 * cfg.m;
    s = oped::sinogram3d([&ph](double) { return ph; }, cfg.m, n, cfg.L);
  }
  const oped::ImageGrid grid(cfg.grid_res, cfg.grid_res);
  const int heights = std::max(s.n, 16);
  Eigen::ArrayXd zs(heights);
  for (int i = 0; i < heights; ++i)
    zs[i] = heights == 1 ? s.L / 2 : s.L * i / (heights - 1);
  const oped::CylinderImage vol = oped::reconstruct3d(s, grid, zs, fill_value(cfg));

  double lo = 0.0, hi = 0.0;
  bool seen = false;
  for (const auto& slice : vol.slices) {
    const auto [slo, shi] = oped::finite_range(slice);
    if (!seen) {
      lo = slo;
      hi = shi;
      seen = true;
    } else {
      lo = std::min(lo, slo);
      hi = std::max(hi, shi);
    }
  }
  const bool want_raw = cfg.raw || !cfg.pgm;
  const bool want_pgm = cfg.pgm || !cfg.raw;
  char suffix[32];
  for (std::size_t i = 0; i < vol.slices.size(); ++i) {
    std::snprintf(suffix, sizeof(suffix), "_z%03zu", i);
    if (want_pgm)
      oped::write_pgm(cfg.out_prefix + suffix + ".pgm", vol.slices[i], lo, hi);
    if (want_raw) oped::write_raw(cfg.out_prefix + suffix + ".raw", vol.slices[i]);
  }
  json sidecar;
  sidecar["min"] = lo;
  sidecar["max"] = hi;
  sidecar["width"] = grid.width;
  sidecar["height"] = grid.height;
  sidecar["m"] = s.m;
  sidecar["n"] = s.n;
  sidecar["L"] = s.L;
  sidecar["variant"] = "plain";
  sidecar["zs"] = std::vector<double>(vol.zs.data(), vol.zs.data() + vol.zs.size());
  std::ofstream side(cfg.out_prefix + ".json");
  if (!side) throw std::runtime_error("cannot open sidecar: " + cfg.out_prefix + ".json");
  side << sidecar.dump(2) << '\n';
  return 0;
}

std::ostream& open_csv(std::ofstream& file, const RunConfig& cfg) {
  if (cfg.out_prefix.empty()) return std::cout;
  file.open(cfg.out_prefix);
  if (!file) throw std::runtime_error("cannot open output file: " + cfg.out_prefix);
  return file;
}

int cmd_lebesgue(const RunConfig& cfg) {
  const oped::NormScan scan = oped::norm_scan(cfg.ms, cfg.grid_res);
  std::ofstream file;
  std::ostream& out = open_csv(file, cfg);
  out << "m,max_lambda,ratio\n";
  char buf[96];
  for (std::size_t i = 0; i < scan.ms.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", scan.ms[i],
                  scan.maxima[Eigen::Index(i)], scan.ratios[Eigen::Index(i)]);
    out << buf;
  }
  return 0;
}

int cmd_convergence(const RunConfig& cfg) {
  const oped::Phantom ph = oped::load_phantom(cfg.phantom_path);
  const auto variant = cfg.variant == "eta" ? oped::TableVariant::eta
                                            : oped::TableVariant::plain;
  const auto rows = oped::convergence_study(ph, cfg.ms, cfg.grid_res, variant);
  std::ofstream file;
  std::ostream& out = open_csv(file, cfg);
  out << "m,linf,l2\n";
  char buf[96];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", row.m, row.linf, row.l2);
    out << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OPED: image reconstruction from parallel-beam Radon projections"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_raster_flags = [&cfg](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid_res, "raster resolution")->check(CLI::Range(2, 1 << 14));
    sub->add_option("--fill", cfg.fill, "value outside the disk mask")
        ->check(CLI::IsMember({"zero", "nan"}));
    sub->add_flag("--raw", cfg.raw, "write raw float64 raster");
    sub->add_flag("--pgm", cfg.pgm, "write 16-bit PGM raster");
    sub->add_option("--out", cfg.out_prefix, "output path prefix")->required();
  };

  CLI::App* sino = app.add_subcommand("sinogram", "phantom -> sinogram file");
  sino->add_option("--phantom", cfg.phantom_path, "phantom description file")->required();
  sino->add_option("--m", cfg.m, "resolution parameter")->required()->check(CLI::PositiveNumber);
  sino->add_option("--dim", cfg.dim, "2 or 3")->check(CLI::IsMember({2, 3}));
  sino->add_option("--n", cfg.n, "slice count (3D; default 2m)")->check(CLI::PositiveNumber);
  sino->add_option("--L", cfg.L, "cylinder height (3D)")->check(CLI::PositiveNumber);
  sino->add_option("--out", cfg.out_prefix, "output sinogram path")->required();

  CLI::App* rec = app.add_subcommand("reconstruct", "sinogram file -> raster");
  rec->add_option("--sino", cfg.sino_path, "sinogram file")->required();
  rec->add_option("--variant", cfg.variant, "plain or eta")
      ->check(CLI::IsMember({"plain", "eta"}));
  add_raster_flags(rec);

  CLI::App* r3 = app.add_subcommand("recon3d", "cylinder reconstruction -> raster stack");
  r3->add_option("--sino", cfg.sino_path, "3D sinogram file");
  r3->add_option("--phantom", cfg.phantom_path, "phantom file (z-independent volume)");
  r3->add_option("--m", cfg.m, "resolution parameter")->check(CLI::PositiveNumber);
  r3->add_option("--n", cfg.n, "slice count (default 2m)")->check(CLI::PositiveNumber);
  r3->add_option("--L", cfg.L, "cylinder height")->check(CLI::PositiveNumber);
  add_raster_flags(r3);

  CLI::App* leb = app.add_subcommand("lebesgue", "operator-norm growth scan -> CSV");
  leb->add_option("--ms", cfg.ms, "m values")->required()->delimiter(',');
  CLI::Option* leb_grid =
      leb->add_option("--grid", cfg.grid_res, "scan resolution")->check(CLI::Range(64, 1 << 14));
  leb->add_option("--out", cfg.out_prefix, "CSV path (stdout when omitted)");

  CLI::App* conv = app.add_subcommand("convergence", "per-m reconstruction error -> CSV");
  conv->add_option("--phantom", cfg.phantom_path, "phantom file")->required();
  conv->add_option("--ms", cfg.ms, "m values")->required()->delimiter(',');
  conv->add_option("--grid", cfg.grid_res, "raster resolution")->check(CLI::Range(2, 1 << 14));
  conv->add_option("--variant", cfg.variant, "plain or eta")
      ->check(CLI::IsMember({"plain", "eta"}));
  conv->add_option("--out", cfg.out_prefix, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (leb->parsed() && leb_grid->count() == 0) cfg.grid_res = 128;
    if (sino->parsed()) return cmd_sinogram(cfg);
    if (rec->parsed()) return cmd_reconstruct(cfg);
    if (r3->parsed()) {
      if (cfg.sino_path.empty() && cfg.phantom_path.empty())
        throw std::invalid_argument("recon3d needs --sino or --phantom");
      return cmd_recon3d(cfg);
    }
    if (leb->parsed()) return cmd_lebesgue(cfg);
    if (conv->parsed()) return cmd_convergence(cfg);
  } catch (const oped::PhantomParseError& e) {
    std::cerr << "error: " << cfg.phantom_path << ":" << e.line << ": " << e.what()
              << '\n';
    return 2;
  } catch (const oped::SinogramFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

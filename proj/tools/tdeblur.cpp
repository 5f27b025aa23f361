#include <CLI11.hpp>
#include <tkrylov/tkrylov.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tkrylov;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += fmt(vs[i]);
  }
  return out;
}

using KvPairs = std::vector<std::pair<std::string, std::string>>;

void write_kv(const fs::path& path, const KvPairs& kv) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [k, v] : kv) f << k << " = " << v << "\n";
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::map<std::string, std::string> read_kv(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  return kv;
}

const std::string& kv_get(const std::map<std::string, std::string>& kv,
                          const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("metadata is missing key '" + key + "'");
  return it->second;
}

// Config files are flat `key = value` lines with # comments. Keys name long
// options without the leading dashes; command-line values win on conflict.
void apply_config_overrides(CLI::App* sub) {
  const CLI::Option* cfg = sub->get_option_no_throw("--config");
  if (cfg == nullptr || cfg->count() == 0) return;
  const auto kv = read_kv(cfg->as<std::string>());
  for (const auto& [key, val] : kv) {
    if (key == "config") continue;
    CLI::Option* op = sub->get_option_no_throw("--" + key);
    if (op == nullptr)
      throw std::invalid_argument("unknown config key '" + key + "'");
    if (op->count() > 0) continue;
    op->add_result(val);
    op->run_callback();
  }
}

void require_value(const std::string& value, const std::string& flag) {
  if (value.empty())
    throw std::invalid_argument(flag + " is required (flag or config file)");
}

std::string frame_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04zu.ppm", index);
  return buf;
}

void save_preview(const Tensor3& t, const fs::path& dir,
                  const std::string& stem) {
  if (t.n3() == 3) {
    save_ppm(tensor_to_image(t), (dir / (stem + ".ppm")).string());
    return;
  }
  const std::vector<RgbImage> frames = tensor_to_frames(t);
  for (std::size_t f = 0; f < frames.size(); ++f)
    save_ppm(frames[f],
             (dir / (stem + "_" + frame_name(f + 1))).string());
}

struct BlurSpec {
  double sigma = 4.0;
  std::size_t band_r = 6;
  double alpha = 0.8;
  double beta = 0.1;
  double gamma = 0.1;
  bool within = false;
};

TensorLinearOperator build_operator(const BlurSpec& blur, std::size_t n,
                                    std::size_t n3) {
  if (n3 % 3 != 0 || n3 == 0)
    throw std::invalid_argument("tensor depth must be a positive multiple of 3");
  if (blur.within)
    return build_within_channel_video_blur(n, n3 / 3, blur.sigma, blur.band_r);
  if (n3 != 3)
    throw std::invalid_argument(
        "cross-channel blur applies to single images; use --within for frame stacks");
  return build_cross_channel_blur(
      blur_model(n, blur.sigma, blur.band_r, blur.alpha, blur.beta, blur.gamma));
}

// ---------------------------------------------------------------- degrade

struct DegradeOptions {
  std::string in_path;
  std::string synth_kind;
  std::size_t synth_n = 64;
  std::string frames_dir;
  BlurSpec blur;
  double nu = 1e-3;
  std::uint64_t seed = 1;
  std::string out_dir;
};

Tensor3 load_source(const DegradeOptions& opt) {
  const int sources = (!opt.in_path.empty() ? 1 : 0) +
                      (!opt.synth_kind.empty() ? 1 : 0) +
                      (!opt.frames_dir.empty() ? 1 : 0);
  if (sources != 1)
    throw std::invalid_argument(
        "exactly one of --in, --synth, --frames must be given");

  if (!opt.in_path.empty()) {
    const RgbImage img = load_ppm(opt.in_path);
    if (img.n1 != img.n2)
      throw std::invalid_argument("input image must be square");
    return image_to_tensor(img);
  }
  if (!opt.synth_kind.empty()) {
    return image_to_tensor(
        synth_image(synth_kind_from_string(opt.synth_kind), opt.synth_n, opt.seed));
  }
  std::vector<RgbImage> frames;
  for (std::size_t f = 1;; ++f) {
    const fs::path p = fs::path(opt.frames_dir) / frame_name(f);
    if (!fs::exists(p)) break;
    frames.push_back(load_ppm(p.string()));
  }
  if (frames.empty())
    throw std::invalid_argument("no frame_0001.ppm found in " + opt.frames_dir);
  if (frames[0].n1 != frames[0].n2)
    throw std::invalid_argument("input frames must be square");
  return frames_to_tensor(frames);
}

int cmd_degrade(const DegradeOptions& opt) {
  require_value(opt.out_dir, "--out");
  Tensor3 xhat = load_source(opt);
  BlurSpec blur = opt.blur;
  if (!opt.frames_dir.empty()) blur.within = true;

  const TensorLinearOperator op = build_operator(blur, xhat.n1(), xhat.n3());
  const Tensor3 chat = op.apply(xhat);
  const NoiseResult noisy = add_noise(chat, {opt.nu, opt.seed});

  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  save_t3((dir / "xhat.t3").string(), xhat);
  save_t3((dir / "chat.t3").string(), chat);
  save_t3((dir / "c.t3").string(), noisy.c);
  save_t3((dir / "noise.t3").string(), noisy.noise);
  save_preview(xhat, dir, "xhat");
  save_preview(noisy.c, dir, "c");

  write_kv(dir / "meta.txt",
           {{"kind", xhat.n3() == 3 ? "image" : "video"},
            {"n1", std::to_string(xhat.n1())},
            {"n2", std::to_string(xhat.n2())},
            {"n3", std::to_string(xhat.n3())},
            {"sigma", fmt(blur.sigma)},
            {"band_r", std::to_string(blur.band_r)},
            {"within", blur.within ? "1" : "0"},
            {"alpha", fmt(blur.alpha)},
            {"beta", fmt(blur.beta)},
            {"gamma", fmt(blur.gamma)},
            {"nu", fmt(opt.nu)},
            {"seed", std::to_string(opt.seed)},
            {"eps", fmt(noisy.eps)},
            {"chat_norm", fmt(frob_norm(chat))}});

  std::cout << "degraded " << xhat.n1() << "x" << xhat.n2() << "x" << xhat.n3()
            << " tensor -> " << dir.string() << " (eps = " << fmt(noisy.eps)
            << ")\n";
  return 0;
}

// ---------------------------------------------------------------- restore

struct RestoreOptions {
  std::string in_dir;
  std::string out_dir;
  std::string solver;
  std::string m = "10";
  std::size_t iter_max = 10;
  double tol = 1e-6;
  std::optional<double> mu;
  double eta = 1.1;
  std::size_t m_max = 200;
  std::optional<double> epsilon;
};

BlurSpec blur_from_meta(const std::map<std::string, std::string>& meta) {
  BlurSpec blur;
  blur.sigma = std::stod(kv_get(meta, "sigma"));
  blur.band_r = std::stoul(kv_get(meta, "band_r"));
  blur.within = kv_get(meta, "within") == "1";
  blur.alpha = std::stod(kv_get(meta, "alpha"));
  blur.beta = std::stod(kv_get(meta, "beta"));
  blur.gamma = std::stod(kv_get(meta, "gamma"));
  return blur;
}

int cmd_restore(const RestoreOptions& opt) {
  require_value(opt.in_dir, "--in");
  require_value(opt.out_dir, "--out");
  require_value(opt.solver, "--solver");
  const fs::path in(opt.in_dir);
  const auto meta = read_kv(in / "meta.txt");
  const Tensor3 c = load_t3((in / "c.t3").string());
  const Tensor3 xhat = load_t3((in / "xhat.t3").string());
  const TensorLinearOperator op =
      build_operator(blur_from_meta(meta), c.n1(), c.n3());

  SolveReport rep;
  KvPairs config_echo;
  if (opt.solver == "gmres") {
    GmresConfig cfg;
    cfg.m = opt.m == "full" ? c.size() : std::stoul(opt.m);
    cfg.iter_max = opt.iter_max;
    cfg.tol = opt.tol;
    cfg.fixed_mu = opt.mu;
    rep = gmres_restarted(op, c, Tensor3(c.n1(), c.n2(), c.n3()), cfg);
    config_echo = {{"m", std::to_string(cfg.m)},
                   {"iter_max", std::to_string(cfg.iter_max)},
                   {"tol", fmt(cfg.tol)}};
    if (cfg.fixed_mu) config_echo.emplace_back("mu_fixed", fmt(*cfg.fixed_mu));
  } else if (opt.solver == "ggkb") {
    GgkbConfig cfg;
    cfg.epsilon = opt.epsilon ? *opt.epsilon : std::stod(kv_get(meta, "eps"));
    cfg.eta = opt.eta;
    cfg.m_max = opt.m_max;
    if (!(cfg.epsilon > 0.0))
      throw std::invalid_argument(
          "noise-free data: pass --epsilon to set the discrepancy bound");
    rep = ggkb_tikhonov(op, c, cfg);
    config_echo = {{"epsilon", fmt(cfg.epsilon)},
                   {"eta", fmt(cfg.eta)},
                   {"m_max", std::to_string(cfg.m_max)}};
  } else {
    throw std::invalid_argument("unknown solver '" + opt.solver +
                                "' (expected gmres or ggkb)");
  }

  const double snr_db = snr(rep.x, xhat);
  const double rel_err = relative_error(rep.x, xhat);
  const double mu_final = rep.mu.empty() ? 0.0 : rep.mu.back();

  const fs::path out(opt.out_dir);
  fs::create_directories(out);
  save_t3((out / "x.t3").string(), rep.x);
  save_preview(rep.x, out, "x");

  KvPairs report = {{"solver", opt.solver},
                    {"n1", std::to_string(c.n1())},
                    {"n2", std::to_string(c.n2())},
                    {"n3", std::to_string(c.n3())}};
  report.insert(report.end(), config_echo.begin(), config_echo.end());
  report.emplace_back("m_used", std::to_string(rep.m_used));
  report.emplace_back("mu_final", fmt(mu_final));
  report.emplace_back("final_residual", fmt(rep.final_residual));
  report.emplace_back("snr_db", fmt(snr_db));
  report.emplace_back("relative_error", fmt(rel_err));
  report.emplace_back("wall_seconds", fmt(rep.wall_seconds));
  report.emplace_back("mu_history", fmt_list(rep.mu));
  report.emplace_back("residual_history", fmt_list(rep.residual_history));
  report.emplace_back("warnings_count", std::to_string(rep.warnings.size()));
  for (std::size_t i = 0; i < rep.warnings.size(); ++i)
    report.emplace_back("warning_" + std::to_string(i), rep.warnings[i]);
  write_kv(out / "report.txt", report);

  std::cout << "solver    SNR (dB)   rel. error   CPU-time (sec)   m     mu\n"
            << opt.solver << (opt.solver == "gmres" ? "     " : "      ");
  char row[160];
  std::snprintf(row, sizeof(row), "%-10.2f %-12.3g %-16.3f %-5zu %.3g\n",
                snr_db, rel_err, rep.wall_seconds, rep.m_used, mu_final);
  std::cout << row;
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

// ---------------------------------------------------------------- validate

struct Check {
  std::string name;
  double residual;
  double tol;
};

void run_validate_suites(std::vector<Check>& checks, const std::string& fault) {
  std::mt19937_64 g(20240801);
  auto random_tensor = [&g](std::size_t a, std::size_t b, std::size_t c) {
    Tensor3 t(a, b, c);
    std::normal_distribution<double> d(0.0, 1.0);
    for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = d(g);
    return t;
  };

  {
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      std::uniform_int_distribution<std::size_t> dim(1, 6), depth(1, 5);
      const std::size_t p = dim(g), q = dim(g), r = dim(g), n3 = depth(g);
      const Tensor3 a = random_tensor(p, q, n3);
      const Tensor3 b = random_tensor(q, r, n3);
      const Tensor3 fast = t_product(a, b);
      const Tensor3 slow = fold(bcirc(a) * unfold(b), n3);
      const double scale = 1.0 + frob_norm(a) * frob_norm(b);
      worst = std::max(worst,
                       (fast.flat() - slow.flat()).abs().maxCoeff() / scale);
    }
    checks.push_back({"t_product_vs_bcirc", worst, 1e-10});
  }

  {
    const Tensor3 a = random_tensor(8, 8, 3);
    const TensorLinearOperator op = TensorLinearOperator::one_sided(a, 8);
    const Tensor3 seed = random_tensor(8, 8, 3);
    ArnoldiDecomposition d = t_global_arnoldi(op, seed, 5);
    if (fault == "hessenberg") d.h_tilde(0, 0) += 1e-4;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < d.h_tilde.cols(); ++j) {
      const Tensor3 lhs = apply(op, d.v[static_cast<std::size_t>(j)]);
      const Tensor3 rhs = stack_combine(d.v, d.h_tilde.col(j));
      worst = std::max(worst, (lhs.flat() - rhs.flat()).abs().maxCoeff());
    }
    const Eigen::MatrixXd gram = diamond(d.v, d.v);
    const double defect =
        (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
            .cwiseAbs()
            .maxCoeff();
    checks.push_back({"arnoldi_relation", worst, 1e-10});
    checks.push_back({"arnoldi_orthonormality", defect, 1e-10});
  }

  {
    const Tensor3 a = random_tensor(7, 5, 3);
    const Tensor3 b = random_tensor(4, 6, 3);
    const TensorLinearOperator op = TensorLinearOperator::two_sided(a, b);
    const Tensor3 c = random_tensor(7, 6, 3);
    const GolubKahanDecomposition d = t_global_golub_kahan(op, c, 5);
    double worst = 0.0;
    const Eigen::MatrixXd cmt = d.c_tilde.topRows(5).transpose();
    for (std::size_t j = 0; j < 5; ++j) {
      const Tensor3 fwd = apply(op, d.u[j]);
      const Tensor3 fwd_rhs = stack_combine(d.v, d.c_tilde.col(j));
      const Tensor3 bwd = apply_transpose(op, d.v[j]);
      const Tensor3 bwd_rhs = stack_combine(d.u, cmt.col(j));
      worst = std::max(worst, (fwd.flat() - fwd_rhs.flat()).abs().maxCoeff());
      worst = std::max(worst, (bwd.flat() - bwd_rhs.flat()).abs().maxCoeff());
    }
    checks.push_back({"golub_kahan_relations", worst, 1e-10});
  }

  {
    double worst = 0.0;
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      const Eigen::Index m = 1 + trial % 20;
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
      for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) h(i, j) = entry(g);
        h(j + 1, j) = 0.5 + 0.5 * std::abs(entry(g));
      }
      const GcvContext ctx(h, 1.0);
      for (double mu : {1e-3, 0.1, 1.0, 10.0}) {
        const double lhs = gcv_value_extended(ctx, mu);
        const Eigen::MatrixXd hmu =
            h.transpose() * h + mu * mu * Eigen::MatrixXd::Identity(m, m);
        const Eigen::MatrixXd p = Eigen::MatrixXd::Identity(m + 1, m + 1) -
                                  h * hmu.inverse() * h.transpose();
        Eigen::VectorXd be1 = Eigen::VectorXd::Zero(m + 1);
        be1[0] = 1.0;
        const double rhs = (p * be1).squaredNorm() / (p.trace() * p.trace());
        worst = std::max(worst,
                         std::abs(lhs - rhs) / (std::abs(rhs) + 1e-4));
      }
    }
    checks.push_back({"gcv_form_equivalence", worst, 1e-9});
  }

  {
    const Tensor3 a = random_tensor(6, 6, 2);
    const TensorLinearOperator op = TensorLinearOperator::one_sided(a, 6);
    const Tensor3 c = random_tensor(6, 6, 2);
    const GolubKahanDecomposition d = t_global_golub_kahan(op, c, 6);
    const QuadratureContext ctx(d.c_tilde, d.beta1, 0.1, 1.1);
    const Eigen::MatrixXd k = dense_matrix(op);
    const Eigen::VectorXd cvec = c.flat().matrix();
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
      const double mu = 1e-4 * std::pow(10.0, 6.0 * i / 24.0);
      const Eigen::MatrixXd amat =
          k.transpose() * k +
          (1.0 / mu) * Eigen::MatrixXd::Identity(k.cols(), k.cols());
      const Eigen::VectorXd x = amat.ldlt().solve(k.transpose() * cvec);
      const double phi = (k * x - cvec).squaredNorm();
      const double scale = 1.0 + phi;
      worst = std::max(worst, (gauss_rule(ctx, mu) - phi) / scale);
      worst = std::max(worst, (phi - gauss_radau_rule(ctx, mu)) / scale);
    }
    checks.push_back({"quadrature_bracketing", worst, 1e-10});
  }
}

int cmd_validate(const std::string& fault) {
  if (!fault.empty() && fault != "hessenberg")
    throw std::invalid_argument("unknown fault injection '" + fault + "'");
  std::vector<Check> checks;
  run_validate_suites(checks, fault);

  bool ok = true;
  for (const auto& c : checks) {
    const bool pass = c.residual <= c.tol;
    ok = ok && pass;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.name
              << "  residual = " << fmt(c.residual) << "  (tol " << fmt(c.tol)
              << ")\n";
  }
  std::cout << (ok ? "validation passed" : "validation FAILED") << "\n";
  return ok ? 0 : 3;
}

// ---------------------------------------------------------------- bench

int cmd_bench(std::size_t n, std::uint64_t seed) {
  const Tensor3 xhat = image_to_tensor(synth_image(SynthKind::disks, n, seed));
  BlurSpec blur;
  const TensorLinearOperator op = build_operator(blur, n, 3);

  const auto t0 = std::chrono::steady_clock::now();
  Tensor3 chat = op.apply(xhat);
  for (int i = 0; i < 9; ++i) chat = op.apply(xhat);
  const double apply_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count() /
      10.0;

  const NoiseResult noisy = add_noise(chat, {1e-3, seed});

  GmresConfig gcfg;
  const SolveReport grep =
      gmres_restarted(op, noisy.c, Tensor3(n, n, 3), gcfg);

  GgkbConfig kcfg;
  kcfg.epsilon = noisy.eps;
  const SolveReport krep = ggkb_tikhonov(op, noisy.c, kcfg);

  std::cout << "n = " << n << "\n"
            << "apply_ms = " << fmt(apply_ms) << "\n"
            << "gmres_seconds = " << fmt(grep.wall_seconds) << "\n"
            << "gmres_snr_db = " << fmt(snr(grep.x, xhat)) << "\n"
            << "ggkb_seconds = " << fmt(krep.wall_seconds) << "\n"
            << "ggkb_snr_db = " << fmt(snr(krep.x, xhat)) << "\n"
            << "ggkb_m = " << krep.m_used << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor t-product deblurring toolkit"};
  app.require_subcommand(1);

  DegradeOptions dopt;
  std::string degrade_config;
  CLI::App* degrade = app.add_subcommand("degrade", "blur and add noise");
  degrade->add_option("--config", degrade_config,
                      "configuration file (key = value lines)");
  degrade->add_option("--in", dopt.in_path, "input PPM image");
  degrade->add_option("--synth", dopt.synth_kind,
                      "synthetic image kind (checker|gradient|disks)");
  degrade->add_option("--n", dopt.synth_n, "synthetic image side");
  degrade->add_option("--frames", dopt.frames_dir,
                      "directory of frame_%04d.ppm files");
  degrade->add_option("--sigma", dopt.blur.sigma, "Gaussian blur spread");
  degrade->add_option("--band-r", dopt.blur.band_r, "blur band radius");
  degrade->add_option("--alpha", dopt.blur.alpha, "cross-channel weight alpha");
  degrade->add_option("--beta", dopt.blur.beta, "cross-channel weight beta");
  degrade->add_option("--gamma", dopt.blur.gamma, "cross-channel weight gamma");
  degrade->add_flag("--within", dopt.blur.within,
                    "within-channel blur only (video model)");
  degrade->add_option("--nu", dopt.nu, "noise level");
  degrade->add_option("--seed", dopt.seed, "RNG seed");
  degrade->add_option("--out", dopt.out_dir, "output directory");

  RestoreOptions ropt;
  std::string restore_config;
  CLI::App* restore = app.add_subcommand("restore", "run a solver");
  restore->add_option("--config", restore_config,
                      "configuration file (key = value lines)");
  restore->add_option("--in", ropt.in_dir, "degraded-data directory");
  restore->add_option("--out", ropt.out_dir, "output directory");
  restore->add_option("--solver", ropt.solver, "gmres or ggkb");
  restore->add_option("--m", ropt.m, "inner iterations, or 'full'");
  restore->add_option("--iter-max", ropt.iter_max, "restart count");
  restore->add_option("--tol", ropt.tol, "residual stopping threshold");
  double mu_in = 0.0;
  CLI::Option* mu_opt =
      restore->add_option("--mu", mu_in, "fixed regularization parameter");
  restore->add_option("--eta", ropt.eta, "discrepancy safety factor");
  restore->add_option("--m-max", ropt.m_max, "bidiagonalization cap");
  double eps_in = 0.0;
  CLI::Option* eps_opt =
      restore->add_option("--epsilon", eps_in, "noise-norm bound override");

  std::string fault;
  CLI::App* validate = app.add_subcommand("validate", "run oracle suites");
  validate->add_option("--inject-fault", fault,
                       "perturb an internal quantity (test hook)");

  std::size_t bench_n = 64;
  std::uint64_t bench_seed = 1;
  CLI::App* bench = app.add_subcommand("bench", "time the pipelines");
  bench->add_option("--n", bench_n, "image side");
  bench->add_option("--seed", bench_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (degrade->parsed()) {
      apply_config_overrides(degrade);
      return cmd_degrade(dopt);
    }
    if (restore->parsed()) {
      apply_config_overrides(restore);
      if (mu_opt->count()) ropt.mu = mu_in;
      if (eps_opt->count()) ropt.epsilon = eps_in;
      return cmd_restore(ropt);
    }
    if (validate->parsed()) return cmd_validate(fault);
    if (bench->parsed()) return cmd_bench(bench_n, bench_seed);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

// Command-line front end: solve, verify, sweep, besov, symbols-audit.
//
// Exit codes: 0 success, 1 tolerance failure, 2 configuration error,
// 3 data-compatibility violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include "tpstokes/bvp_oracle.hpp"
#include "tpstokes/estimates.hpp"
#include "tpstokes/field_io.hpp"
#include "tpstokes/manufactured.hpp"
#include "tpstokes/marcinkiewicz.hpp"
#include "tpstokes/run_config.hpp"
#include "tpstokes/sampled_data.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tpstokes;

namespace {

struct CliFlags {
  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  bool perturb_q0 = false;
  double resolution_scale = 1.0;
};

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

SolverOptions make_solver_options(const RunConfig& cfg, bool perturb) {
  SolverOptions opt;
  opt.box.modes = cfg.lift_modes;
  if (perturb) opt.boundary.perturb = Q0Perturbation::flip_xi_hn_sign;
  return opt;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

// Deterministic artifacts get hashed into the manifest; summary.json holds
// timings and is deliberately left out.
void write_timings(const fs::path& dir, const json& timings) {
  json j{{"timings", timings}};
  write_text(dir / "timings.json", j.dump(2) + "\n");
}

void write_manifest(const fs::path& dir, const std::vector<std::string>& artifacts) {
  std::ostringstream out;
  out << "# fnv1a-64  file\n";
  for (const auto& name : artifacts) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a_file((dir / name).string())));
    out << buf << "  " << name << '\n';
  }
  write_text(dir / "manifest.txt", out.str());
}

struct NamedData {
  ProfileField f, g;
  BoundaryData h;
  // exact solution when the generator provides one
  bool has_truth = false;
  ProfileField u_true, p_true;
};

BoundaryData load_boundary_file(const std::string& path, const GridPtr& grid) {
  LoadedField lf = read_field_file(path);
  const auto& h = lf.header;
  if (h.nz != 1 || h.n != grid->dim() || h.nt != grid->nt() || h.nx1 != grid->nx() ||
      h.nx2 != grid->nx2() || h.components != grid->dim())
    throw config_error("boundary file " + path + ": lattice does not match the run grid");
  std::vector<cdouble> work(lf.samples.begin(), lf.samples.end());
  detail::transform_lattice(work, h.components, h.nt, h.nx1, h.nx2, 1, true);
  BoundaryModes modes(grid, h.components);
  modes.raw() = std::move(work);
  return BoundaryData(std::move(modes));
}

NamedData load_data(const RunConfig& cfg, const GridPtr& grid) {
  NamedData d{ProfileField(grid, grid->dim()), ProfileField(grid, 1),
              BoundaryData{BoundaryModes(grid, grid->dim())},
              false, ProfileField(), ProfileField()};
  if (!cfg.generator.empty()) {
    const auto& cat = manufactured_catalogue();
    if (cfg.generator == "zero") return d;
    if (std::find(cat.begin(), cat.end(), cfg.generator) != cat.end()) {
      auto b = manufactured_solution(cfg.generator, grid);
      d.f = std::move(b.f);
      d.g = std::move(b.g);
      d.h = std::move(b.h);
      d.has_truth = true;
      d.u_true = std::move(b.u);
      d.p_true = std::move(b.p);
      return d;
    }
    if (cfg.generator == "spectral_tail") {
      auto b = spectral_tail_data(grid, cfg.seed);
      d.f = std::move(b.f);
      d.g = std::move(b.g);
      d.h = std::move(b.h);
      return d;
    }
    if (cfg.generator == "random_bundle") {
      auto e = random_bundle_ensemble(grid, 1, cfg.seed,
                                      std::min(cfg.draw_time, grid->time_half_modes()),
                                      std::min(cfg.draw_tang, grid->tang_half_modes()));
      d.f = std::move(e[0].f);
      d.g = std::move(e[0].g);
      d.h = std::move(e[0].h);
      return d;
    }
    throw config_error("unknown generator '" + cfg.generator + "'");
  }
  if (!cfg.f_file.empty())
    d.f = sampled_to_profiles(to_physical_field(read_field_file(cfg.f_file), grid),
                              cfg.lift_modes, /*odd=*/true);
  if (!cfg.g_file.empty())
    d.g = sampled_to_profiles(to_physical_field(read_field_file(cfg.g_file), grid),
                              cfg.lift_modes, /*odd=*/false);
  if (!cfg.h_file.empty()) d.h = load_boundary_file(cfg.h_file, grid);
  return d;
}

json residual_json(const ResidualReport& rep) {
  json j{{"momentum", rep.momentum},
         {"divergence", rep.divergence},
         {"trace", rep.trace},
         {"periodicity", rep.periodicity},
         {"q", rep.q}};
  for (const auto& [name, norm] : rep.stage_velocity_norms) j["stage_velocity_norms"][name] = norm;
  return j;
}

int run_solve(const RunConfig& cfg, const CliFlags& flags) {
  Timer total;
  const GridPtr grid = cfg.make_run_grid(flags.resolution_scale);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  NamedData data = load_data(cfg, grid);
  Timer solve_timer;
  SolverOptions opt = make_solver_options(cfg, flags.perturb_q0);
  StokesSolution sol = solve_full(data.f, data.g, data.h, opt);
  const double solve_seconds = solve_timer.seconds();

  Timer residual_timer;
  ResidualReport rep = residual_check(sol, data.f, data.g, data.h, cfg.q);
  const double residual_seconds = residual_timer.seconds();

  write_field_file((dir / "u.field").string(), sol.u.to_physical());
  write_field_file((dir / "p.field").string(), sol.p.to_physical());

  std::ostringstream csv;
  csv << "quantity,value\nmomentum," << detail::format_double(rep.momentum) << "\ndivergence,"
      << detail::format_double(rep.divergence) << "\ntrace," << detail::format_double(rep.trace)
      << "\nperiodicity,0\n";
  write_text(dir / "residuals.csv", csv.str());

  json summary;
  summary["config_hash"] = fnv1a_file(flags.config_path);
  summary["action"] = "solve";
  summary["resolution"] = {{"K", grid->time_half_modes()},
                           {"N", 2 * grid->tang_half_modes()},
                           {"normal_nodes", grid->nz()},
                           {"lift_modes", cfg.lift_modes}};
  summary["residuals"] = residual_json(rep);
  for (const auto& st : sol.stages)
    summary["stages"].push_back({{"name", st.name}, {"modes", st.velocity.mode_count()}});
  if (data.has_truth) {
    ProfileField du = sol.u;
    du += cdouble{-1.0, 0.0} * data.u_true;
    ProfileField dgp = pressure_gradient(sol.p);
    dgp += cdouble{-1.0, 0.0} * pressure_gradient(data.p_true);
    const double nu = lq_norm_profile(data.u_true, cfg.q);
    const double np = lq_norm_profile(pressure_gradient(data.p_true), cfg.q);
    summary["recovery"] = {
        {"u_rel_error", nu > 0 ? lq_norm_profile(du, cfg.q) / nu : lq_norm_profile(du, cfg.q)},
        {"grad_p_rel_error",
         np > 0 ? lq_norm_profile(dgp, cfg.q) / np : lq_norm_profile(dgp, cfg.q)}};
  }
  const bool ok = rep.momentum <= cfg.tol_momentum && rep.divergence <= cfg.tol_divergence &&
                  rep.trace <= cfg.tol_trace;
  summary["pass"] = ok;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  write_timings(dir, {{"solve_seconds", solve_seconds},
                      {"residual_seconds", residual_seconds},
                      {"total_seconds", total.seconds()}});
  write_manifest(dir, {"u.field", "p.field", "residuals.csv", "summary.json"});

  std::cout << (ok ? "[PASS]" : "[FAIL]") << " solve: momentum " << rep.momentum
            << ", divergence " << rep.divergence << ", trace " << rep.trace << "\n";
  return ok ? 0 : 1;
}

struct SuiteResult {
  std::string name;
  bool pass = true;
  json details;
};

SuiteResult suite_transforms(const RunConfig& cfg, const GridPtr& grid) {
  SuiteResult r{"transforms", true, {}};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PhysicalField f(grid, grid->dim());
  for (auto& v : f.raw()) v = dist(rng);
  auto spec = forward_transform(f);
  auto back = inverse_transform(spec);
  double rt = 0.0;
  for (std::size_t i = 0; i < f.raw().size(); ++i)
    rt = std::max(rt, std::abs(f.raw()[i] - back.raw()[i]));
  auto ps = project_steady(spec);
  auto po = project_oscillatory(spec);
  double proj = 0.0;
  for (std::size_t i = 0; i < spec.raw().size(); ++i)
    proj = std::max(proj, std::abs(ps.raw()[i] + po.raw()[i] - spec.raw()[i]));
  const double idem = project_steady(po).max_abs();
  const double phys = lq_norm(f, 2.0);
  const double parseval = mixed_norm(spec, NormSpec{0.0, 0.0, 2.0});
  const double plancherel =
      std::abs(phys - parseval) / std::max(1e-300, std::max(phys, parseval));
  r.details = {{"roundtrip_max_error", rt},
               {"projection_sum_defect", proj},
               {"projection_cross_defect", idem},
               {"plancherel_rel_defect", plancherel}};
  r.pass = rt < 1e-12 && proj == 0.0 && idem == 0.0 && plancherel < 1e-12;
  return r;
}

SuiteResult suite_partition(const RunConfig& cfg) {
  SuiteResult r{"partition", true, {}};
  ParabolicScale scale(1);
  BumpSpec bump;
  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> logr(-8.0, 8.0), frac(0.0, 1.0);
  double sum_defect = 0.0;
  bool support_ok = true;
  for (int trial = 0; trial < 10000; ++trial) {
    const double rho = std::pow(2.0, logr(rng));
    const double t = frac(rng);
    const double eta = rho * rho * t;
    const double xi = std::pow(std::max(0.0, std::pow(rho, 4.0) - eta * eta), 0.25);
    double sum = 0.0;
    for (int l = -14; l <= 14; ++l) {
      const double v = partition_phi(scale, bump, l, eta, xi);
      if (v < 0.0) support_ok = false;
      if (v > 0.0) {
        const double scaled = std::ldexp(scale(eta, xi), -l);
        if (scaled <= 0.5 || scaled >= 2.0) support_ok = false;
      }
      sum += v;
    }
    sum_defect = std::max(sum_defect, std::abs(sum - 1.0));
  }
  // single-shell scaling
  auto g = make_grid(2.0 * pi, 2, 6, 8, 2.0 * pi, graded_normal_grid(20.0, 16));
  BoundaryModes h(g, 1);
  h.set_hermitian(0, g->time_zero_index() + 4, g->tang_zero_index(), 0, cdouble{0.7, 0.2});
  const double s = 1.25;
  const double bes = besov_norm(h, NormSpec{0.0, s, cfg.q, NormFlavor::anisotropic_besov});
  const double plain = lq_norm_boundary(h, cfg.q);
  const double shell_defect = std::abs(bes - std::pow(2.0, s) * plain) / (std::pow(2.0, s) * plain);
  r.details = {{"sum_defect", sum_defect},
               {"support_positivity_ok", support_ok},
               {"single_shell_scaling_defect", shell_defect}};
  r.pass = sum_defect < 1e-12 && support_ok && shell_defect < 1e-12;
  return r;
}

SuiteResult suite_symbols(const RunConfig& cfg) {
  SuiteResult r{"symbols", true, {}};
  const int tang = cfg.n - 1;
  double m_bound = 0.0;
  for (int a = -40; a <= 40; ++a)
    for (int b = 1; b <= 40; ++b) {
      const double eta = (a < 0 ? -1 : 1) * std::pow(10.0, std::abs(a) / 8.0 - 3.0);
      const double xi = std::pow(10.0, b / 8.0 - 3.0);
      m_bound = std::max(m_bound, std::abs(symbol_M(eta, xi)));
    }
  bool stable = true, finite = true, unbounded_flag = false;
  json audits = json::array();
  const std::vector<std::pair<std::string, SymbolFn>> symbols = {
      {"M", [](double eta, const std::array<double, 2>& xi) {
         return symbol_M(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]));
       }},
      {"M1", [](double eta, const std::array<double, 2>& xi) { return symbol_M1(eta, xi)[0]; }},
      {"M2", [](double eta, const std::array<double, 2>& xi) {
         return symbol_M2(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]));
       }},
      {"heat_profile_x1", [](double eta, const std::array<double, 2>& xi) {
         return symbol_heat_profile(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]), 1.0, 1);
       }}};
  for (const auto& [name, fn] : symbols) {
    auto coarse = marcinkiewicz_audit(fn, name, tang, 1);
    auto fine = marcinkiewicz_audit(fn, name, tang, 2);
    finite = finite && std::isfinite(coarse.max_sup()) && std::isfinite(fine.max_sup());
    if (fine.max_sup() > coarse.max_sup() * 1.05) stable = false;
    if (coarse.suspected_unbounded) unbounded_flag = true;
    audits.push_back({{"symbol", name},
                      {"sup_coarse", coarse.max_sup()},
                      {"sup_fine", fine.max_sup()}});
  }
  // pressure symbol spot checks against the closed form
  const ModePoint mode{1.0, {1.0, 0.0}};
  const cdouble root = std::sqrt(cdouble{1.0, 1.0});
  const cdouble qa = q0_symbol(mode, {cdouble{}, cdouble{}}, cdouble{1.0, 0.0});
  const cdouble qb = q0_symbol(mode, {cdouble{1.0, 0.0}, cdouble{}}, cdouble{});
  const double q0_defect = std::max(std::abs(qa - (root + cdouble{1.0, 1.0})),
                                    std::abs(qb + iunit * (cdouble{1.0, 0.0} + root)));
  r.details = {{"sup_abs_M", m_bound},
               {"audits", audits},
               {"q0_formula_defect", q0_defect}};
  r.pass = m_bound <= 1.0 + 1e-12 && stable && finite && !unbounded_flag && q0_defect < 1e-14;
  return r;
}

SuiteResult suite_oracle(const RunConfig& cfg, const GridPtr& grid, bool perturb) {
  SuiteResult r{"oracle", true, {}};
  BoundarySolverOptions bopt;
  if (perturb) bopt.perturb = Q0Perturbation::flip_xi_hn_sign;
  std::mt19937_64 rng(cfg.seed + 2);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  int tested = 0;
  const int K = std::min(cfg.draw_time, grid->time_half_modes());
  const int Mx = std::min(cfg.draw_tang, grid->tang_half_modes());
  for (int dk = 1; dk <= K; dk += std::max(1, K / 4))
    for (int dj = 1; dj <= Mx; dj += std::max(1, Mx / 4)) {
      BoundaryModes m(grid, grid->dim());
      const std::array<cdouble, 2> hp{cdouble{dist(rng), dist(rng)}, cdouble{}};
      const cdouble hn{dist(rng), dist(rng)};
      m.set_hermitian(0, grid->time_zero_index() + dk, grid->tang_zero_index() + dj, 0, hp[0]);
      m.set_hermitian(grid->dim() - 1, grid->time_zero_index() + dk,
                      grid->tang_zero_index() + dj, 0, hn);
      auto vp = solve_boundary_oscillatory(BoundaryData(std::move(m)), bopt);
      const int it = grid->time_zero_index() + dk;
      const int j1 = grid->tang_zero_index() + dj;
      const ModePoint mode{grid->time_freq(it), {grid->tang_freq(j1), 0.0}};
      auto oracle = bvp_oracle(mode, hp, hn, 1, OracleOptions{4096, 6.0, grid->x_max()});
      worst = std::max(worst, oracle_profile_distance(oracle, *vp.velocity.find(it, j1, 0),
                                                      vp.pressure.find(it, j1, 0)->at(0)));
      ++tested;
    }
  r.details = {{"modes_tested", tested}, {"worst_relative_distance", worst}};
  r.pass = worst < 1e-6;
  return r;
}

SuiteResult suite_uniqueness(const RunConfig& cfg, const GridPtr& grid, bool perturb) {
  SuiteResult r{"uniqueness", true, {}};
  SolverOptions opt = make_solver_options(cfg, perturb);
  auto bundle = recipe_mixed_ensemble(grid);
  auto fo = bundle.f.oscillatory_part();
  auto go = bundle.g.oscillatory_part();
  auto ho = boundary_oscillatory_part(bundle.h);
  auto a = solve_full(fo, go, ho, opt);

  auto ub = solve_boundary_oscillatory(ho, opt.boundary);
  auto v = solve_heat_dirichlet_zero(fo, opt.box);
  ProfileField G = go;
  G += cdouble{-1.0, 0.0} * v.divergence();
  G.compact(1e-15 * std::max(1.0, G.max_coef_magnitude()));
  auto corr = solve_divergence_corrector(G, opt.box);
  BoundaryData h2{BoundaryModes(grid, grid->dim())};
  BoundaryModes tw = corr.velocity.trace();
  for (std::size_t i = 0; i < h2.modes.raw().size(); ++i) h2.modes.raw()[i] = -tw.raw()[i];
  auto ub2 = solve_boundary_oscillatory(h2, opt.boundary);

  ProfileField u_b = ub.velocity;
  u_b += v;
  u_b += corr.velocity;
  u_b += ub2.velocity;
  ProfileField p_b = ub.pressure;
  p_b += corr.pressure;
  p_b += ub2.pressure;

  ProfileField du = a.u;
  du += cdouble{-1.0, 0.0} * u_b;
  ProfileField dp = a.p;
  dp += cdouble{-1.0, 0.0} * p_b;
  const double u_gap = lq_norm_profile(du, 2.0);
  const double p_gap = lq_norm_profile(pressure_gradient(dp), 2.0);
  r.details = {{"velocity_gap", u_gap}, {"pressure_gradient_gap", p_gap}};
  r.pass = u_gap < 1e-8 && p_gap < 1e-8;
  return r;
}

SuiteResult suite_manufactured(const RunConfig& cfg, const GridPtr& grid, bool perturb) {
  SuiteResult r{"manufactured", true, {}};
  SolverOptions opt = make_solver_options(cfg, perturb);
  json rows = json::array();
  double worst = 0.0;
  for (const auto& name : manufactured_catalogue()) {
    auto b = manufactured_solution(name, grid);
    auto self = residual_check(b.u, b.p, b.f, b.g, b.h, cfg.q);
    auto sol = solve_full(b.f, b.g, b.h, opt);
    ProfileField du = sol.u;
    du += cdouble{-1.0, 0.0} * b.u;
    ProfileField dgp = pressure_gradient(sol.p);
    dgp += cdouble{-1.0, 0.0} * pressure_gradient(b.p);
    const double nu = std::max(1e-300, lq_norm_profile(b.u, cfg.q));
    const double np = std::max(1e-300, lq_norm_profile(pressure_gradient(b.p), cfg.q));
    const double eu = b.u.mode_count() ? lq_norm_profile(du, cfg.q) / nu : lq_norm_profile(du, cfg.q);
    const double ep = lq_norm_profile(dgp, cfg.q) / np;
    rows.push_back({{"recipe", name},
                    {"self_residual", self.worst()},
                    {"u_rel_error", eu},
                    {"grad_p_rel_error", ep}});
    worst = std::max({worst, self.worst() * 1e6, eu, ep});
  }
  r.details = {{"recipes", rows}, {"worst", worst}};
  r.pass = worst < 1e-6;
  return r;
}

SuiteResult suite_identities(const RunConfig& cfg, const GridPtr& grid, bool perturb) {
  SuiteResult r{"identities", true, {}};
  BoundarySolverOptions bopt;
  if (perturb) bopt.perturb = Q0Perturbation::flip_xi_hn_sign;
  BoundaryModes m(grid, grid->dim());
  std::mt19937_64 rng(cfg.seed + 3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int dk : {1, 2}) {
    const int dj = dk;
    m.set_hermitian(0, grid->time_zero_index() + dk, grid->tang_zero_index() + dj, 0,
                    cdouble{dist(rng), dist(rng)});
    m.set_hermitian(grid->dim() - 1, grid->time_zero_index() + dk, grid->tang_zero_index() + dj,
                    0, cdouble{dist(rng), dist(rng)});
  }
  BoundaryData H(m);
  auto vp = solve_boundary_oscillatory(H, bopt);
  BoundaryModes tr = vp.velocity.trace();
  double trace_gap = 0.0;
  for (std::size_t i = 0; i < tr.raw().size(); ++i)
    trace_gap = std::max(trace_gap, std::abs(tr.raw()[i] - H.modes.raw()[i]));
  ProfileField div = vp.velocity.divergence();
  ProfileField zf(grid, grid->dim());
  ProfileField mom = momentum_residual_field(vp.velocity, vp.pressure, zf);
  double worst_pointwise = 0.0;
  for (const auto* field : {&div, &mom})
    for (const auto& [key, profs] : field->modes())
      for (const auto& p : profs)
        for (double x : grid->normal_nodes())
          worst_pointwise = std::max(worst_pointwise, std::abs(p.eval(x)));
  r.details = {{"trace_defect", trace_gap}, {"momentum_divergence_pointwise", worst_pointwise}};
  r.pass = trace_gap < 1e-12 && worst_pointwise < 1e-12;
  return r;
}

int run_verify(const RunConfig& cfg, const CliFlags& flags) {
  const GridPtr grid = cfg.make_run_grid(flags.resolution_scale);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  std::set<std::string> wanted;
  if (!cfg.suites.empty()) {
    std::istringstream ss(cfg.suites);
    std::string item;
    while (std::getline(ss, item, ',')) wanted.insert(item);
  }
  auto enabled = [&](const std::string& name) { return wanted.empty() || wanted.count(name); };

  std::vector<SuiteResult> results;
  Timer total;
  if (enabled("transforms")) results.push_back(suite_transforms(cfg, grid));
  if (enabled("partition")) results.push_back(suite_partition(cfg));
  if (enabled("symbols")) results.push_back(suite_symbols(cfg));
  if (enabled("oracle")) results.push_back(suite_oracle(cfg, grid, flags.perturb_q0));
  if (enabled("identities")) results.push_back(suite_identities(cfg, grid, flags.perturb_q0));
  if (enabled("uniqueness")) results.push_back(suite_uniqueness(cfg, grid, flags.perturb_q0));
  if (enabled("manufactured")) results.push_back(suite_manufactured(cfg, grid, flags.perturb_q0));
  if (results.empty()) throw config_error("verify: no known suite selected");

  json report;
  report["config_hash"] = fnv1a_file(flags.config_path);
  report["action"] = "verify";
  report["perturb_q0"] = flags.perturb_q0;
  bool all = true;
  for (const auto& s : results) {
    report["suites"].push_back({{"name", s.name}, {"pass", s.pass}, {"details", s.details}});
    std::cout << (s.pass ? "[PASS] " : "[FAIL] ") << s.name << "\n";
    all = all && s.pass;
  }
  report["pass"] = all;
  write_text(dir / "verify.json", report.dump(2) + "\n");
  write_timings(dir, {{"total_seconds", total.seconds()}});
  write_manifest(dir, {"verify.json"});
  return all ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, const CliFlags& flags) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  Timer total;

  std::ostringstream csv;
  csv << "resolution_K,trial,kind,lhs,rhs,ratio,degenerate\n";
  json summary;
  summary["config_hash"] = fnv1a_file(flags.config_path);
  summary["action"] = "sweep";
  summary["q"] = cfg.q;
  summary["trials"] = cfg.trials;

  double max_base = 0.0, max_fine = 0.0;
  for (int level = 0; level < 2; ++level) {
    const double scale = flags.resolution_scale * (level == 0 ? 1.0 : 2.0);
    const GridPtr grid = cfg.make_run_grid(scale);
    auto bundles = random_bundle_ensemble(grid, cfg.trials, cfg.seed,
                                          std::min(cfg.draw_time, grid->time_half_modes()),
                                          std::min(cfg.draw_tang, grid->tang_half_modes()));
    auto report = estimate_constant_sweep(bundles, cfg.q, make_solver_options(cfg, flags.perturb_q0));
    for (const auto& row : report.rows)
      csv << report.resolution_time << ',' << row.trial << ',' << row.kind << ','
          << detail::format_double(row.lhs) << ',' << detail::format_double(row.rhs) << ','
          << detail::format_double(row.ratio) << ',' << (row.degenerate ? 1 : 0) << '\n';
    json stats = {{"K", report.resolution_time},
                  {"max_oscillatory", report.max_ratio("oscillatory")},
                  {"median_oscillatory", report.median_ratio("oscillatory")},
                  {"max_steady", report.max_ratio("steady")},
                  {"median_steady", report.median_ratio("steady")}};
    summary["resolutions"].push_back(stats);
    const double m = std::max(report.max_ratio("oscillatory"), report.max_ratio("steady"));
    (level == 0 ? max_base : max_fine) = m;
  }
  const double stability =
      std::abs(max_fine - max_base) / std::max({max_base, max_fine, 1e-300});
  summary["max_ratio_relative_change"] = stability;
  summary["stable_within_10_percent"] = stability < 0.10;

  write_text(dir / "ratios.csv", csv.str());
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  write_timings(dir, {{"total_seconds", total.seconds()}});
  write_manifest(dir, {"ratios.csv", "summary.json"});
  std::cout << (stability < 0.10 ? "[PASS]" : "[FAIL]")
            << " sweep: max-ratio change under doubling " << stability * 100.0 << "%\n";
  return stability < 0.10 ? 0 : 1;
}

int run_besov(const RunConfig& cfg, const CliFlags& flags) {
  const GridPtr grid = cfg.make_run_grid(flags.resolution_scale);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  BoundaryData h{BoundaryModes(grid, grid->dim())};
  if (!cfg.generator.empty()) {
    NamedData d = load_data(cfg, grid);
    h = d.h;
  } else {
    // single-shell demonstration datum: <k, xi> = 2 exactly
    h.modes.set_hermitian(0, grid->time_zero_index() + std::min(4, grid->time_half_modes()),
                          grid->tang_zero_index(), 0, cdouble{1.0, 0.0});
  }
  const NormSpec spec{0.0, cfg.besov_s, cfg.q, NormFlavor::anisotropic_besov, 1};
  const double total = besov_norm(h.modes, spec);
  const double top_share = besov_top_shell_share(h.modes, spec);

  const ParabolicScale scale(1);
  const BumpSpec bump;
  std::ostringstream csv;
  csv << "l,weight,shell_lq_norm,contribution\n";
  const int lmax = besov_shell_limit(*grid, 1);
  for (int l = 0; l <= lmax; ++l) {
    BoundaryModes shell = h.modes;
    const auto& g = *grid;
    for (int c = 0; c < shell.components(); ++c)
      for (int it = 0; it < g.nt(); ++it)
        for (int j1 = 0; j1 < g.nx(); ++j1)
          for (int j2 = 0; j2 < g.nx2(); ++j2) {
            const auto xi = g.tang_freqs(j1, j2);
            shell.at(c, it, j1, j2) *= partition_phi(scale, bump, l, g.time_freq(it),
                                                     std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]));
          }
    const double shell_norm = lq_norm_boundary(shell, cfg.q);
    csv << l << ',' << detail::format_double(std::pow(2.0, cfg.besov_s * l)) << ','
        << detail::format_double(shell_norm) << ','
        << detail::format_double(std::pow(2.0, cfg.besov_s * l) * shell_norm) << '\n';
  }
  write_text(dir / "besov.csv", csv.str());

  json summary;
  summary["config_hash"] = fnv1a_file(flags.config_path);
  summary["action"] = "besov";
  summary["s"] = cfg.besov_s;
  summary["q"] = cfg.q;
  summary["norm"] = total;
  summary["top_shell_share"] = top_share;
  summary["top_shell_flagged"] = top_share > 0.01;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  write_manifest(dir, {"besov.csv", "summary.json"});
  std::cout << "[OK] besov norm " << total << " (top shell share " << top_share << ")\n";
  return 0;
}

int run_symbols_audit(const RunConfig& cfg, const CliFlags& flags) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const int tang = cfg.n - 1;
  const std::vector<std::pair<std::string, SymbolFn>> symbols = {
      {"M", [](double eta, const std::array<double, 2>& xi) {
         return symbol_M(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]));
       }},
      {"M1", [](double eta, const std::array<double, 2>& xi) { return symbol_M1(eta, xi)[0]; }},
      {"M2", [](double eta, const std::array<double, 2>& xi) {
         return symbol_M2(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]));
       }},
      {"heat_profile_x0.1", [](double eta, const std::array<double, 2>& xi) {
         return symbol_heat_profile(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]), 0.1, 1);
       }},
      {"heat_profile_x1", [](double eta, const std::array<double, 2>& xi) {
         return symbol_heat_profile(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]), 1.0, 1);
       }},
      {"heat_profile_x10", [](double eta, const std::array<double, 2>& xi) {
         return symbol_heat_profile(eta, std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]), 10.0, 1);
       }}};
  std::ostringstream csv;
  csv << "symbol,eps_mask,sup,points_per_octave\n";
  bool all_ok = true;
  for (const auto& [name, fn] : symbols) {
    for (int ppo : {1, 2}) {
      auto rep = marcinkiewicz_audit(fn, name, tang, ppo);
      if (rep.suspected_unbounded) all_ok = false;
      for (const auto& e : rep.entries)
        csv << name << ',' << e.mask << ',' << detail::format_double(e.sup) << ',' << ppo << '\n';
    }
  }
  write_text(dir / "audit.csv", csv.str());
  json summary;
  summary["config_hash"] = fnv1a_file(flags.config_path);
  summary["action"] = "symbols-audit";
  summary["all_bounded"] = all_ok;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  write_manifest(dir, {"audit.csv", "summary.json"});
  std::cout << (all_ok ? "[PASS]" : "[FAIL]") << " symbols-audit\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver and verification harness for time-periodic Stokes flow in a half-space"};
  app.require_subcommand(1);

  CliFlags flags;
  for (const char* name : {"solve", "verify", "sweep", "besov", "symbols-audit"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config_path, "run configuration file")->required();
    sub->add_option("--out", flags.out_override, "output directory override");
    sub->add_option("--seed", flags.seed_override, "random seed override")
        ->each([&](const std::string&) { flags.seed_given = true; });
    sub->add_flag("--perturb-q0", flags.perturb_q0,
                  "test-only fault injection: flip a sign in the pressure trace symbol");
    sub->add_option("--resolution-scale", flags.resolution_scale,
                    "scale K and N by this factor");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string action = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = load_run_config(flags.config_path);
    if (!cfg.action.empty() && cfg.action != action)
      throw config_error("config action '" + cfg.action + "' does not match subcommand '" +
                         action + "'");
    if (!flags.out_override.empty()) cfg.out_dir = flags.out_override;
    if (flags.seed_given) cfg.seed = flags.seed_override;

    if (action == "solve") return run_solve(cfg, flags);
    if (action == "verify") return run_verify(cfg, flags);
    if (action == "sweep") return run_sweep(cfg, flags);
    if (action == "besov") return run_besov(cfg, flags);
    return run_symbols_audit(cfg, flags);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const precondition_error& e) {
    std::cerr << "compatibility error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

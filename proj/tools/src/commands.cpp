// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <boost/program_options.hpp>
#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "artifacts.hpp"
#include "spn/errors.hpp"
#include "spn/hessian.hpp"
#include "spn/spectral.hpp"
#include "spn/stability.hpp"
#include "spn/wiener.hpp"

#ifndef SPN_LAB_VERSION
#define SPN_LAB_VERSION "unknown"
#endif

namespace spn::cli {
namespace {

namespace po = boost::program_options;
using nlohmann::json;

constexpr double kJelliumTolerance = 1e-10;

struct Globals {
  std::uint64_t seed = 0;
  int workers = 1;
};

struct Context {
  const RunConfig& cfg;
  const Globals& globals;
  RunDirectory& dir;
  std::ostream& out;
};

json index_json(const FrequencyIndex& h, int d) {
  json a = json::array();
  for (int i = 0; i < d; ++i) a.push_back(h[static_cast<std::size_t>(i)]);
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json occupation_json(const OccupationSet& set, int d) {
  json a = json::array();
  for (const auto& h : set.orbitals()) a.push_back(index_json(h, d));
  return a;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

GroundState make_ground_state(const Context& ctx, const IonDensityModel& sigma) {
  const auto& b = ctx.cfg.basis;
  BasisPtr basis = enumerate_basis(sigma.spec(), b.cutoff, b.capacity);
  GroundStateChoice choice;
  choice.set_index = b.ground_set;
  for (const auto& set : b.mixture) choice.mixture.emplace_back(set, cplx(1.0));
  if (choice.mixture.empty()) {
    const auto sets = ground_occupations(sigma.spec(), b.capacity).sets.size();
    if (b.ground_set >= sets) {
      throw ConfigError("basis.ground_set = " + std::to_string(b.ground_set) + " but only " +
                        std::to_string(sets) + " minimal occupation sets exist");
    }
  }
  GroundState gs = build_ground_state(basis, sigma, ctx.cfg.model.mass, choice);
  ctx.out << "basis: " << basis->size() << " determinants, omega0 = " << num(gs.omega0) << "\n";
  return gs;
}

json spectrum_json(const HessianSpectrum& s) {
  return {{"kernel_dim", s.kernel_dim},
          {"lambda_min", s.lambda_min()},
          {"kernel_tolerance", s.tolerance},
          {"largest_kernel_eigenvalue", s.largest_kernel},
          {"smallest_nonzero_eigenvalue", s.smallest_nonzero}};
}

std::string spectrum_csv(const HessianSpectrum& s) {
  CsvTable t({"index", "eigenvalue"});
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    t.row({static_cast<double>(i), s.eigenvalues(i)});
  }
  return t.str();
}

int cmd_density(const Context& ctx) {
  const TorusSpec spec = make_spec(ctx.cfg.model);
  const IonDensityModel sigma = make_density(ctx.cfg.model, spec);
  const int d = spec.dimension();

  const JelliumVerdict verdict = jellium_check(sigma, kJelliumTolerance);
  json jel = {{"density", sigma.kind_name()},
              {"holds", verdict.holds},
              {"max_violation", verdict.max_violation},
              {"relative_violation", verdict.max_violation / sigma.total_charge()},
              {"worst_frequency", index_json(verdict.worst, d)},
              {"checked", verdict.checked},
              {"tolerance", kJelliumTolerance},
              {"uniform_ion_deviation", uniform_ion_check(sigma)}};
  if (!std::holds_alternative<GridDensity>(sigma.kind())) {
    const JelliumVerdict wide =
        jellium_check(sigma, kJelliumTolerance, ctx.cfg.model.wiener_radius);
    jel["closed_form"] = {{"radius", ctx.cfg.model.wiener_radius},
                          {"holds", wide.holds},
                          {"max_violation", wide.max_violation},
                          {"worst_frequency", index_json(wide.worst, d)},
                          {"checked", wide.checked}};
  }
  ctx.dir.write_json("jellium.json", jel);

  const WienerReport rep = wiener_report(sigma, ctx.cfg.model.wiener_radius);
  std::vector<std::string> header;
  for (int i = 1; i <= d; ++i) header.push_back("theta_" + std::to_string(i));
  header.insert(header.end(), {"lambda_min", "lambda_max", "kernel_dim"});
  CsvTable csv(header);
  json entries = json::array();
  for (const auto& e : rep.entries) {
    const Vec3 theta = spec.frequency(e.theta);
    std::vector<double> row(theta.data(), theta.data() + d);
    row.insert(row.end(), {e.lambda_min(), e.lambda_max(), static_cast<double>(e.kernel_dim())});
    csv.row(row);
    std::vector<double> eig(e.eigenvalues.data(), e.eigenvalues.data() + e.eigenvalues.size());
    entries.push_back({{"h", index_json(e.theta, d)},
                       {"theta", std::vector<double>(theta.data(), theta.data() + d)},
                       {"matrix", matrix_json(e.matrix)},
                       {"eigenvalues", eig},
                       {"kernel_dim", e.kernel_dim()},
                       {"tail_bound", e.tail_bound}});
  }
  ctx.dir.write("wiener_spectra.csv", csv.str());
  ctx.dir.write_json("wiener_report.json",
                     {{"wiener_holds", rep.wiener_holds},
                      {"verdict_certified", rep.verdict_certified},
                      {"dim_V", rep.degeneracy_dim},
                      {"min_lambda", rep.min_lambda()},
                      {"truncation_radius", rep.truncation_radius},
                      {"max_tail_bound", rep.max_tail_bound},
                      {"relative_tolerance", rep.relative_tolerance},
                      {"entries", entries}});
  ctx.out << "jellium " << (verdict.holds ? "holds" : "violated") << ", wiener "
          << (rep.wiener_holds ? "holds" : "fails") << " (dim V = " << rep.degeneracy_dim
          << ")\n";
  return kExitOk;
}

int cmd_ground_state(const Context& ctx) {
  const TorusSpec spec = make_spec(ctx.cfg.model);
  const IonDensityModel sigma = make_density(ctx.cfg.model, spec);
  const GroundState gs = make_ground_state(ctx, sigma);
  const int d = spec.dimension();
  const CrystalState s = gs.state();
  const EnergyTerms terms = energy_terms(s, sigma);

  double deviation = 0.0;
  for (double v : dft_inverse_real(one_body_density(gs.psi0, sigma.e()))) {
    deviation = std::max(deviation, std::abs(v + sigma.total_charge()));
  }
  double total = 0.0;
  for (double v : dft_inverse_real(assemble_rho(s, sigma))) total = std::max(total, std::abs(v));

  json sets = json::array();
  for (const auto& set : gs.occupations.sets) sets.push_back(occupation_json(set, d));
  json chosen = json::array();
  if (ctx.cfg.basis.mixture.empty()) {
    chosen.push_back(occupation_json(gs.occupations.sets[ctx.cfg.basis.ground_set], d));
  } else {
    for (const auto& set : ctx.cfg.basis.mixture) chosen.push_back(occupation_json(set, d));
  }
  const double E = terms.total();
  ctx.dir.write_json("ground_state.json",
                     {{"omega0", gs.omega0},
                      {"Z", sigma.Z()},
                      {"e", sigma.e()},
                      {"energy", E},
                      {"energy_minus_omega0_Z", E - gs.omega0 * sigma.Z()},
                      {"electron_kinetic", terms.electron_kinetic},
                      {"coulomb", terms.coulomb},
                      {"charge", gs.psi0.charge()},
                      {"max_density_deviation", deviation},
                      {"max_total_density", total},
                      {"degenerate", gs.occupations.degenerate()},
                      {"minimal_sets", sets},
                      {"chosen", chosen},
                      {"basis_size", gs.psi0.basis->size()},
                      {"basis_cutoff", gs.psi0.basis->cutoff()}});
  ctx.out << "E(S) = " << num(E) << ", omega0 Z = " << num(gs.omega0 * sigma.Z()) << "\n";
  return kExitOk;
}

int cmd_hessian(const Context& ctx) {
  const TorusSpec spec = make_spec(ctx.cfg.model);
  const IonDensityModel sigma = make_density(ctx.cfg.model, spec);
  const GroundState gs = make_ground_state(ctx, sigma);
  const double tol = ctx.cfg.stability.kernel_tolerance;
  const HessianForm form = hessian_assemble(gs);
  const HessianSpectrum full = hessian_spectrum(form, Subspace::full, tol);
  const HessianSpectrum cons = hessian_spectrum(form, Subspace::constrained, tol);
  const WienerReport rep = wiener_report(sigma, ctx.cfg.model.wiener_radius);
  const int predicted = spec.dimension() + rep.degeneracy_dim;

  ctx.dir.write("hessian_full.csv", spectrum_csv(full));
  ctx.dir.write("hessian_constrained.csv", spectrum_csv(cons));
  ctx.dir.write_json("hessian_report.json",
                     {{"dimension", form.dimension()},
                      {"constrained_dimension", form.constrained_basis.cols()},
                      {"kernel_dim_full", full.kernel_dim},
                      {"kernel_dim_constrained", cons.kernel_dim},
                      {"lambda_min_constrained", cons.lambda_min()},
                      {"wiener_holds", rep.wiener_holds},
                      {"dim_V", rep.degeneracy_dim},
                      {"predicted_kernel_dim", predicted},
                      {"prediction_matches", predicted == full.kernel_dim},
                      {"full", spectrum_json(full)},
                      {"constrained", spectrum_json(cons)}});
  ctx.out << "kernel full " << full.kernel_dim << " (predicted " << predicted
          << "), constrained lambda_min = " << num(cons.lambda_min()) << "\n";
  return kExitOk;
}

int cmd_evolve(const Context& ctx) {
  const TorusSpec spec = make_spec(ctx.cfg.model);
  const IonDensityModel sigma = make_density(ctx.cfg.model, spec);
  const GroundState gs = make_ground_state(ctx, sigma);
  const auto& dyn = ctx.cfg.dynamics;

  CrystalState x0 = gs.state();
  if (dyn.perturbation > 0.0) {
    const HessianForm form = hessian_assemble(gs);
    x0 = perturbed_state(gs, sample_tangent_perturbation(gs, form, ctx.globals.seed, 0),
                         dyn.perturbation);
  }
  const EvolveOptions options{dyn.method,    dyn.dt,         dyn.duration,
                              dyn.tolerance, dyn.max_iterations, dyn.log_every};
  const auto steps = static_cast<std::size_t>(std::llround(dyn.duration / dyn.dt));
  std::vector<double> distance{distance_to_manifold(x0, gs).distance};
  auto observer = [&](std::size_t k, double, const CrystalState& x) {
    if (k % dyn.log_every == 0 || k == steps) {
      distance.push_back(distance_to_manifold(x, gs).distance);
    }
  };
  const EvolveResult result = evolve(x0, sigma, options, observer);

  const auto& rec = result.log.records;
  CsvTable csv({"t", "E", "Q", "energy_drift", "charge_drift", "distance"});
  double max_distance = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    csv.row({rec[i].t, rec[i].energy, rec[i].charge, std::abs(rec[i].energy - rec[0].energy),
             std::abs(rec[i].charge - rec[0].charge), distance[i]});
    max_distance = std::max(max_distance, distance[i]);
  }
  ctx.dir.write("trajectory.csv", csv.str());
  ctx.dir.write_json("evolve_summary.json",
                     {{"method", std::string(method_name(dyn.method))},
                      {"dt", dyn.dt},
                      {"duration", dyn.duration},
                      {"steps", steps},
                      {"perturbation", dyn.perturbation},
                      {"seed", ctx.globals.seed},
                      {"max_energy_drift", result.log.max_energy_drift()},
                      {"max_charge_drift", result.log.max_charge_drift()},
                      {"initial_distance", distance.front()},
                      {"final_distance", distance.back()},
                      {"max_distance", max_distance}});
  ctx.out << "energy drift " << num(result.log.max_energy_drift()) << ", max distance "
          << num(max_distance) << "\n";
  return kExitOk;
}

int cmd_stability(const Context& ctx) {
  const TorusSpec spec = make_spec(ctx.cfg.model);
  const IonDensityModel sigma = make_density(ctx.cfg.model, spec);
  const GroundState gs = make_ground_state(ctx, sigma);
  const auto& dyn = ctx.cfg.dynamics;
  const auto& st = ctx.cfg.stability;

  const HessianForm form = hessian_assemble(gs);
  const HessianSpectrum full = hessian_spectrum(form, Subspace::full, st.kernel_tolerance);
  const HessianSpectrum cons = hessian_spectrum(form, Subspace::constrained, st.kernel_tolerance);
  const WienerReport rep = wiener_report(sigma, ctx.cfg.model.wiener_radius);

  StabilityOptions options;
  options.deltas = st.deltas;
  options.perturbations = st.perturbations;
  options.seed = ctx.globals.seed;
  options.include_baseline = st.include_baseline;
  options.include_translation = st.include_translation;
  options.evolve = {dyn.method, dyn.dt, dyn.duration, dyn.tolerance, dyn.max_iterations,
                    dyn.log_every};
  options.sample_every = st.sample_every;
  const StabilityTable table = stability_experiment(gs, options);

  json runs = json::array();
  for (std::size_t i = 0; i < table.runs.size(); ++i) {
    const StabilityRun& r = table.runs[i];
    json entry = {{"kind", r.kind},
                  {"perturbation", r.perturbation},
                  {"delta", r.delta},
                  {"initial_distance", r.initial_distance},
                  {"sup_distance", r.sup_distance},
                  {"energy_drift", r.energy_drift},
                  {"charge_drift", r.charge_drift}};
    if (ctx.cfg.output.trajectories) {
      char name[48];
      std::snprintf(name, sizeof name, "stability_run_%03zu.csv", i);
      CsvTable csv({"t", "distance"});
      for (const auto& [t, dist] : r.distance_series) csv.row({t, dist});
      ctx.dir.write(name, csv.str());
      entry["file"] = name;
    }
    runs.push_back(entry);
  }

  json per_delta = json::array();
  for (double delta : st.deltas) {
    double translation = 0.0;
    for (const auto& r : table.runs) {
      if (r.kind == "translation" && r.delta == delta) translation = r.sup_distance;
    }
    const double sup = table.sup_distance(delta);
    per_delta.push_back({{"delta", delta},
                         {"sup_distance", sup},
                         {"sup_over_delta", delta > 0.0 ? sup / delta : 0.0},
                         {"translation_sup_distance", translation}});
  }
  double baseline = 0.0;
  for (const auto& r : table.runs) {
    if (r.kind == "baseline") baseline = std::max(baseline, r.sup_distance);
  }

  ctx.dir.write_json("stability.json",
                     {{"omega0", gs.omega0},
                      {"energy", energy(gs.state(), sigma)},
                      {"kernel_dim_full", full.kernel_dim},
                      {"kernel_dim_constrained", cons.kernel_dim},
                      {"lambda_min_constrained", cons.lambda_min()},
                      {"wiener_holds", rep.wiener_holds},
                      {"dim_V", rep.degeneracy_dim},
                      {"sup_distance_per_delta", per_delta},
                      {"baseline_sup_distance", baseline},
                      {"seed", ctx.globals.seed},
                      {"method", std::string(method_name(dyn.method))},
                      {"dt", dyn.dt},
                      {"duration", dyn.duration},
                      {"runs", runs}});
  ctx.out << table.runs.size() << " runs, baseline sup distance " << num(baseline) << "\n";
  return kExitOk;
}

const std::map<std::string, std::function<int(const Context&)>>& commands() {
  static const std::map<std::string, std::function<int(const Context&)>> table{
      {"density", cmd_density},     {"ground-state", cmd_ground_state},
      {"hessian", cmd_hessian},     {"evolve", cmd_evolve},
      {"stability", cmd_stability},
  };
  return table;
}

json config_echo(const RunConfig& cfg) {
  json echo = json::object();
  for (const auto& [path, value] : cfg.resolved) {
    const auto dot = path.find('.');
    echo[path.substr(0, dot)][path.substr(dot + 1)] = value;
  }
  return echo;
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (text.empty() || text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("--seed expects an unsigned 64-bit integer, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("--seed expects an unsigned 64-bit integer");
  return v;
}

constexpr const char* kUsage =
    "usage: spn-lab <density|ground-state|hessian|evolve|stability> [--config FILE] [--out DIR] "
    "[--seed N] [--workers N]";

}  // namespace

int exit_code_for(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const InputDataError&) {
    return kExitInputData;
  } catch (const InvalidDensityError&) {
    return kExitInputData;
  } catch (const ModelRefusal&) {
    return kExitRefusal;
  } catch (const AdmissibilityError&) {
    return kExitRefusal;
  } catch (const CapacityError&) {
    return kExitCapacity;
  } catch (const IntegratorError&) {
    return kExitIntegrator;
  } catch (...) {
    return kExitConfig;
  }
}

IonDensityModel read_density_file(const std::string& path, const ModelConfig& model,
                                  const TorusSpec& spec) {
  std::ifstream in(path);
  if (!in) throw InputDataError("cannot open density file '" + path + "'");
  int d = 0, n = 0, ng = 0;
  double Z = 0.0, e = 0.0;
  if (!(in >> d >> n >> ng >> Z >> e)) {
    throw InputDataError("density file '" + path + "': header must read 'd N n_g Z e'");
  }
  if (d != spec.dimension() || n != spec.cells_per_axis() || ng != spec.grid_per_axis()) {
    throw InputDataError("density file '" + path + "': grid (d, N, n_g) = (" +
                         std::to_string(d) + ", " + std::to_string(n) + ", " +
                         std::to_string(ng) + ") does not match the model block");
  }
  if (std::abs(Z - model.Z) > 1e-12 * model.Z || std::abs(e - model.e) > 1e-12 * model.e) {
    throw InputDataError("density file '" + path + "': Z or e differs from the model block");
  }
  std::vector<double> samples;
  samples.reserve(spec.grid_size());
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) {
      throw InputDataError("density file '" + path + "': bad sample '" + tok + "'");
    }
    samples.push_back(v);
  }
  if (samples.size() != spec.grid_size()) {
    throw InputDataError("density file '" + path + "': expected " +
                         std::to_string(spec.grid_size()) + " samples, found " +
                         std::to_string(samples.size()));
  }
  return IonDensityModel::from_grid(spec, std::move(samples), model.Z, model.e);
}

IonDensityModel make_density(const ModelConfig& m, const TorusSpec& spec) {
  if (m.density == "box") return IonDensityModel::box(spec, m.box_order, m.Z, m.e);
  if (m.density == "perturbed_box") {
    return IonDensityModel::perturbed_box(
        spec, PerturbedBoxDensity{m.box_order, m.epsilon, m.gaussian_width, m.modes}, m.Z, m.e);
  }
  return read_density_file(m.density_file, m, spec);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  po::options_description flags("options");
  flags.add_options()("help,h", "show usage")("version", "print the tool version")(
      "config", po::value<std::string>(), "INI configuration file")(
      "out", po::value<std::string>(), "output directory (overrides output.directory)")(
      "seed", po::value<std::string>(), "random seed for perturbations")(
      "workers", po::value<int>(), "worker threads (default: available parallelism)");
  po::options_description all;
  all.add(flags).add_options()("command", po::value<std::string>(), "");
  po::positional_options_description positional;
  positional.add("command", 1);

  po::variables_map vm;
  try {
    po::store(po::command_line_parser(args).options(all).positional(positional).run(), vm);
    po::notify(vm);
  } catch (const po::error& e) {
    err << "error: " << e.what() << "\n" << kUsage << "\n";
    return kExitConfig;
  }
  if (vm.count("help")) {
    out << kUsage << "\n" << flags;
    return kExitOk;
  }
  if (vm.count("version")) {
    out << "spn-lab " << SPN_LAB_VERSION << "\n";
    return kExitOk;
  }
  if (!vm.count("command") || !commands().count(vm["command"].as<std::string>())) {
    err << "error: missing or unknown command\n" << kUsage << "\n";
    return kExitConfig;
  }
  const std::string command = vm["command"].as<std::string>();

  Globals globals;
  std::optional<RunConfig> cfg;
  try {
    if (vm.count("seed")) globals.seed = parse_seed(vm["seed"].as<std::string>());
#ifdef _OPENMP
    globals.workers = omp_get_num_procs();
#endif
    if (vm.count("workers")) {
      globals.workers = vm["workers"].as<int>();
      if (globals.workers < 1) throw ConfigError("--workers must be >= 1");
    }
    std::optional<std::string> path;
    if (vm.count("config")) path = vm["config"].as<std::string>();
    cfg = load_config(path);
    if (vm.count("out")) {
      cfg->output.directory = vm["out"].as<std::string>();
      cfg->resolved["output.directory"] = cfg->output.directory;
    }
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
#ifdef _OPENMP
  omp_set_num_threads(globals.workers);
#endif

  const std::string started = utc_now();
  std::optional<RunDirectory> dir;
  try {
    dir.emplace(cfg->output.directory);
  } catch (const std::exception& e) {
    err << "error: cannot create output directory: " << e.what() << "\n";
    return kExitConfig;
  }

  int code = kExitOk;
  std::string message = "ok";
  try {
    code = commands().at(command)(Context{*cfg, globals, *dir, out});
  } catch (const IntegratorError& e) {
    code = kExitIntegrator;
    message = std::string(e.what()) + " (step " + std::to_string(e.step()) + ", t = " +
              num(e.time()) + ", residual = " + num(e.residual()) + ")";
  } catch (const ModelRefusal& e) {
    code = kExitRefusal;
    message = std::string(e.what()) + " (diagnostic " + num(e.diagnostic()) + ")";
  } catch (const CapacityError& e) {
    code = kExitCapacity;
    message = std::string(e.what()) + " (budget " + std::to_string(e.budget()) + ")";
  } catch (const std::exception& e) {
    code = exit_code_for(std::current_exception());
    message = e.what();
  }
  if (code != kExitOk) err << command << " failed: " << message << "\n";

  json files = json::array();
  for (const auto& f : dir->inventory()) {
    files.push_back({{"name", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  }
  const json manifest = {{"tool", "spn-lab"},
                         {"version", SPN_LAB_VERSION},
                         {"command", command},
                         {"status", code == kExitOk ? "ok" : "error"},
                         {"exit_code", code},
                         {"message", message},
                         {"seed", globals.seed},
                         {"workers", globals.workers},
                         {"started_utc", started},
                         {"finished_utc", utc_now()},
                         {"config", config_echo(*cfg)},
                         {"files", files}};
  try {
    write_atomic(dir->root() / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << "\n";
    if (code == kExitOk) code = kExitConfig;
  }
  return code;
}

}  // namespace spn::cli

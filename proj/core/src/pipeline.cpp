#include "pairspec/pipeline.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "pairspec/biphoton.hpp"
#include "pairspec/constants.hpp"
#include "pairspec/dispersion.hpp"
#include "pairspec/keyvalue.hpp"
#include "pairspec/numerics.hpp"
#include "pairspec/textio.hpp"

namespace pairspec {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out.good()) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("none");
}

}  // namespace

SimulateResult run_simulate(const RunConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  SimulateResult result;

  CrystalSpec crystal = cfg.resolve_crystal();
  const double wl_deg = cfg.degenerate_wavelength_um();
  result.dl_used_ps = cfg.resolved_dl_ps(crystal);
  result.dl_source = cfg.dl_source(crystal);
  std::optional<double> mismatch_sellmeier;
  try {
    mismatch_sellmeier = sellmeier_mismatch(crystal, wl_deg);
    result.dl_sellmeier_ps = *mismatch_sellmeier * crystal.length_mm;
  } catch (const std::domain_error&) {
    // Crystal model not defined at the degenerate wavelength; the configured
    // override still lets the run proceed, only the comparison is skipped.
  }

  SpectralGrid grid = detection_grid(result.dl_used_ps, cfg.pump_wavelength_um, cfg.filter,
                                     cfg.grid_n_points, cfg.grid_lobes_each_side);
  result.center_omega = grid.center_omega;
  BiphotonState state = build_state(grid, result.dl_used_ps, cfg.pump_wavelength_um);
  SpectralDensity marginal = signal_marginal(state);
  fs::path marginal_path = out_dir / "marginal.csv";
  marginal.write_csv(marginal_path);
  result.files.push_back(marginal_path);

  SpectralDensity filtered = apply_filter(marginal, cfg.filter);
  SpectralDensity detected =
      detected_spectrum(filtered, cfg.filter, cfg.michelson.background_weight);
  fs::path detected_path = out_dir / "detected_spectrum.csv";
  detected.write_csv(detected_path);
  result.files.push_back(detected_path);

  MichelsonConfig mc = cfg.michelson;
  mc.seed = cfg.seed;
  Interferogram gram = simulate_scan(detected, mc);
  gram.meta.config_hash = cfg.hash();
  result.interferogram_path = out_dir / "interferogram.csv";
  gram.write_csv(result.interferogram_path);
  result.files.push_back(result.interferogram_path);

  fs::path meta_path = out_dir / "run_meta";
  {
    auto out = open_out(meta_path);
    out << "# effective configuration\n";
    cfg.echo(out);
    out << "# derived\n";
    out << "config_hash = " << cfg.hash() << '\n';
    out << "crystal.name = " << crystal.name << '\n';
    out << "crystal.length_mm = " << format_double(crystal.length_mm) << '\n';
    out << "wavelength_degenerate_um = " << format_double(wl_deg) << '\n';
    out << "center_omega_rad_per_ps = " << format_double(grid.center_omega) << '\n';
    out << "dl_used_ps = " << format_double(result.dl_used_ps) << '\n';
    out << "dl_source = " << result.dl_source << '\n';
    out << "mismatch_sellmeier_ps_per_mm = " << opt_str(mismatch_sellmeier) << '\n';
    out << "dl_sellmeier_ps = " << opt_str(result.dl_sellmeier_ps) << '\n';
    if (result.dl_sellmeier_ps) {
      double rel = (*result.dl_sellmeier_ps - result.dl_used_ps) / result.dl_used_ps;
      out << "dl_sellmeier_rel_deviation = " << format_double(rel) << '\n';
    } else {
      out << "dl_sellmeier_rel_deviation = none\n";
    }
    std::optional<double> ivo, ive;
    try {
      ivo = inverse_group_velocity(crystal, RayKind::ordinary, wl_deg);
      ive = inverse_group_velocity(crystal, RayKind::extraordinary, wl_deg);
    } catch (const std::domain_error&) {
    }
    out << "inv_group_velocity_o_ps_per_mm = " << opt_str(ivo) << '\n';
    out << "inv_group_velocity_e_ps_per_mm = " << opt_str(ive) << '\n';
    out << "grid.nu_max_rad_per_ps = " << format_double(grid.nu_max) << '\n';
    out << "grid.spacing_rad_per_ps = " << format_double(grid.spacing()) << '\n';
    out << "marginal_first_zero_rad_per_ps = "
        << format_double(2.0 * kPi / result.dl_used_ps) << '\n';
    out << "tail_mass_estimate = " << format_double(state.tail_mass_estimate) << '\n';
    out << "scan.n_points = " << mc.n_points() << '\n';
    for (const auto& w : state.warnings) out << "# warning: " << w << '\n';
    close_checked(out, meta_path);
  }
  result.files.push_back(meta_path);
  return result;
}

AnalyzeResult run_analyze(const RunConfig& cfg, const fs::path& interferogram_csv,
                          const fs::path& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  AnalyzeResult result;

  Interferogram gram = Interferogram::read_csv(interferogram_csv);
  Envelope env = extract_envelope(gram);
  fs::path env_path = out_dir / "envelope.csv";
  env.write_csv(env_path);
  result.files.push_back(env_path);

  if (!gram.meta.config.envelope_only) {
    RecoveryOptions ropts;
    ropts.window = cfg.window;
    SpectralDensity recovered = recover_spectrum(gram, ropts);
    fs::path rec_path = out_dir / "spectrum_recovered.csv";
    recovered.write_csv(rec_path);
    result.files.push_back(rec_path);
    result.recovered = true;
  }

  NotchFitOptions fopts;
  fopts.spike = cfg.spike;
  fopts.mask_halfwidth_um = cfg.spike_mask_um;
  result.fit = fit_notch(env, fopts);

  const double lambda_ref_nm =
      2.0 * kPi * kSpeedOfLightUmPerPs / gram.meta.center_omega * 1e3;
  result.bandwidth =
      bandwidth_from_base(result.fit.base_width_um, env.convention, lambda_ref_nm);
  result.bandwidth_agrees =
      std::abs(result.bandwidth.fwhm_nm - cfg.bandwidth_reference_nm) <=
      0.2 * cfg.bandwidth_reference_nm;

  if (cfg.spike == SpikeHandling::fit) {
    // A Gaussian filter of width dlambda produces a Gaussian visibility
    // spike of FWHM (4 ln2 / pi) lambda^2 / dlambda in optical path.
    double lambda_um = lambda_ref_nm * 1e-3;
    double dlambda_um = cfg.filter.fwhm_nm * 1e-3;
    double optical = 4.0 * std::log(2.0) / kPi * lambda_um * lambda_um / dlambda_um;
    double pf = env.convention == PathConvention::optical_path ? 1.0 : 2.0;
    result.spike_fwhm_expected_um = optical / pf;
  }

  fs::path report_path = out_dir / "fit_report";
  {
    auto out = open_out(report_path);
    out << "# notch fit\n";
    out << "config_hash = " << gram.meta.config_hash << '\n';
    out << "path_convention = " << to_string(env.convention) << '\n';
    out << "carrier_resolved = " << (env.carrier_resolved ? "true" : "false") << '\n';
    result.fit.write_keyvalues(out);
    out << "# bandwidth translation (sinc^2 model)\n";
    out << "base_width_arm_um = " << format_double(result.bandwidth.base_width_arm_um) << '\n';
    out << "dl_ps = " << format_double(result.bandwidth.dl_ps) << '\n';
    out << "fwhm_rad_per_ps = " << format_double(result.bandwidth.fwhm_rad_per_ps) << '\n';
    out << "fwhm_thz = " << format_double(result.bandwidth.fwhm_thz) << '\n';
    out << "fwhm_nm = " << format_double(result.bandwidth.fwhm_nm) << '\n';
    out << "reference_wavelength_nm = "
        << format_double(result.bandwidth.reference_wavelength_nm) << '\n';
    out << "bandwidth_reference_nm = " << format_double(cfg.bandwidth_reference_nm) << '\n';
    out << "bandwidth_within_20pct = " << (result.bandwidth_agrees ? "true" : "false") << '\n';
    out << "spike_fwhm_expected_um = " << opt_str(result.spike_fwhm_expected_um) << '\n';
    close_checked(out, report_path);
  }
  result.files.push_back(report_path);
  return result;
}

namespace {

// Entropy artifacts shared by the model-based and external-density paths.
void write_entropy_files(const fs::path& out_dir, const std::string& config_hash,
                         EntropyResult& result) {
  fs::path sweep_path = out_dir / "entropy_sweep.csv";
  {
    auto out = open_out(sweep_path);
    result.sweep.write_csv(out);
    close_checked(out, sweep_path);
  }
  result.files.push_back(sweep_path);

  fs::path ledger_path = out_dir / "entropy_ledger.csv";
  {
    auto out = open_out(ledger_path);
    out << EntropyReport::csv_header() << '\n' << result.ledger.csv_row() << '\n';
    close_checked(out, ledger_path);
  }
  result.files.push_back(ledger_path);

  fs::path report_path = out_dir / "entropy_report.txt";
  {
    auto out = open_out(report_path);
    out << "# subsystem entropy report\n";
    out << "config_hash = " << config_hash << '\n';
    result.ledger.write_keyvalues(out);
    out << "sweep_rows = " << result.sweep.rows.size() << '\n';
    std::size_t flagged = 0;
    for (const auto& row : result.sweep.rows) flagged += row.flagged ? 1 : 0;
    out << "sweep_flagged = " << flagged << '\n';
    out << "sweep_reference = " << format_double(result.sweep.reference) << '\n';
    out << "sweep_rel_tolerance = " << format_double(result.sweep.rel_tolerance) << '\n';
    if (result.sweep.best_row) {
      const auto& row = result.sweep.rows[*result.sweep.best_row];
      out << "closest_match = " << to_string(row.convention.mode) << '/'
          << to_string(row.convention.variable) << '/' << to_string(row.convention.log_base)
          << ' ' << row.domain << " entropy=" << format_double(row.entropy) << '\n';
    } else {
      out << "closest_match = none\n";
    }
    close_checked(out, report_path);
  }
  result.files.push_back(report_path);
}

}  // namespace

EntropyResult run_entropy(const RunConfig& cfg, const std::optional<fs::path>& density_csv,
                          const fs::path& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  EntropyResult result;

  if (density_csv) {
    DensitySamples samples = DensitySamples::read_csv(*density_csv);
    const std::size_t n = samples.weight.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(samples.weight[i] >= 0.0) || !std::isfinite(samples.weight[i])) {
        throw std::invalid_argument(
            fmt::format("{}: weight[{}] = {} is not a finite nonnegative number",
                        density_csv->string(), i, samples.weight[i]));
      }
      total += samples.weight[i];
    }
    if (!(total > 0.0)) {
      throw std::invalid_argument(fmt::format("{}: zero total weight", density_csv->string()));
    }
    std::vector<double> masses(n);
    for (std::size_t i = 0; i < n; ++i) masses[i] = samples.weight[i] / total;

    result.purity_value = purity(masses);
    std::string domain = fmt::format("external(n={})", n);
    result.sweep.reference = cfg.entropy_reference;
    result.sweep.rel_tolerance = cfg.entropy_rel_tolerance;
    for (auto base : {LogBase::natural, LogBase::log2}) {
      result.sweep.add_row({EntropyMode::discrete_bins, EntropyVariable::detuning_nu, base},
                           domain, discrete_entropy(masses, base));
    }
    // Differential rows need a uniform axis to carry a meaningful measure.
    bool uniform = n >= 3;
    double dx = n >= 2 ? samples.nu[1] - samples.nu[0] : 0.0;
    for (std::size_t i = 1; i < n && uniform; ++i) {
      uniform = std::abs((samples.nu[i] - samples.nu[i - 1]) - dx) <=
                1e-9 * std::max(std::abs(dx), 1.0);
    }
    if (uniform && dx > 0.0) {
      std::vector<double> p(n);
      double norm = trapezoid(samples.weight, dx);
      for (std::size_t i = 0; i < n; ++i) p[i] = samples.weight[i] / norm;
      std::vector<double> integrand(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (p[i] > 0.0) integrand[i] = -p[i] * std::log(p[i]);
      }
      double s_nu_nats = trapezoid(integrand, dx);
      for (auto base : {LogBase::natural, LogBase::log2}) {
        double scale = base == LogBase::log2 ? 1.0 / std::log(2.0) : 1.0;
        result.sweep.add_row({EntropyMode::differential, EntropyVariable::detuning_nu, base},
                             domain, s_nu_nats * scale);
      }
    }
    result.sweep.finalize_best();
    result.ledger = entropy_ledger(
        discrete_entropy(masses, LogBase::natural), result.purity_value,
        {EntropyMode::discrete_bins, EntropyVariable::detuning_nu, LogBase::natural},
        fmt::format("external({})", density_csv->filename().string()));
  } else {
    CrystalSpec crystal = cfg.resolve_crystal();
    double dl = cfg.resolved_dl_ps(crystal);
    SpectralGrid grid =
        default_grid(dl, cfg.pump_wavelength_um, cfg.grid_n_points, cfg.grid_lobes_each_side);
    result.sweep = convention_sweep(dl, grid, cfg.entropy_x_spans, cfg.entropy_reference,
                                    cfg.entropy_rel_tolerance);
    SpectralDensity marginal = signal_marginal(build_state(grid, dl, cfg.pump_wavelength_um));
    auto masses = marginal.masses();
    result.purity_value = purity(masses);
    result.ledger = entropy_ledger(
        discrete_entropy(masses, LogBase::natural), result.purity_value,
        {EntropyMode::discrete_bins, EntropyVariable::detuning_nu, LogBase::natural},
        fmt::format("grid_n={}", grid.n_points));
  }

  write_entropy_files(out_dir, cfg.hash(), result);
  return result;
}

ReportResult run_report(const RunConfig& cfg, const fs::path& out_dir) {
  ReportResult result;
  SimulateResult sim = run_simulate(cfg, out_dir);
  AnalyzeResult ana = run_analyze(cfg, sim.interferogram_path, out_dir);
  EntropyResult ent = run_entropy(cfg, std::nullopt, out_dir);
  result.files = sim.files;
  result.files.insert(result.files.end(), ana.files.begin(), ana.files.end());
  result.files.insert(result.files.end(), ent.files.begin(), ent.files.end());

  fs::path summary_path = out_dir / "summary.txt";
  {
    auto out = open_out(summary_path);
    out << "# run summary\n";
    out << "config_hash = " << cfg.hash() << '\n';
    out << "# dispersion\n";
    out << "dl_used_ps = " << format_double(sim.dl_used_ps) << '\n';
    out << "dl_source = " << sim.dl_source << '\n';
    out << "dl_sellmeier_ps = " << opt_str(sim.dl_sellmeier_ps) << '\n';
    if (sim.dl_sellmeier_ps) {
      out << "dl_sellmeier_rel_deviation = "
          << format_double((*sim.dl_sellmeier_ps - sim.dl_used_ps) / sim.dl_used_ps) << '\n';
    }
    out << "# interference\n";
    out << "base_width_um = " << format_double(ana.fit.base_width_um) << '\n';
    out << "peak_visibility = " << format_double(ana.fit.peak_visibility) << '\n';
    out << "spike_amplitude = " << format_double(ana.fit.spike_amplitude) << '\n';
    out << "spike_fwhm_um = " << format_double(ana.fit.spike_fwhm_um) << '\n';
    out << "spike_fwhm_expected_um = " << opt_str(ana.spike_fwhm_expected_um) << '\n';
    out << "# bandwidth\n";
    out << "fwhm_nm = " << format_double(ana.bandwidth.fwhm_nm) << '\n';
    out << "bandwidth_reference_nm = " << format_double(cfg.bandwidth_reference_nm) << '\n';
    out << "bandwidth_within_20pct = " << (ana.bandwidth_agrees ? "true" : "false") << '\n';
    out << "# subsystem state\n";
    out << "purity = " << format_double(ent.purity_value) << '\n';
    out << "s_subsystem = " << format_double(ent.ledger.s_subsystem) << " ("
        << to_string(ent.ledger.convention.mode) << '/'
        << to_string(ent.ledger.convention.log_base) << ")\n";
    out << "s_conditional = " << format_double(ent.ledger.s_signal_given_idler) << '\n';
    out << "s_mutual = " << format_double(ent.ledger.s_mutual) << '\n';
    std::size_t flagged = 0;
    for (const auto& row : ent.sweep.rows) flagged += row.flagged ? 1 : 0;
    out << "entropy_sweep_flagged = " << flagged << " of " << ent.sweep.rows.size() << '\n';
    close_checked(out, summary_path);
  }
  result.files.push_back(summary_path);
  return result;
}

}  // namespace pairspec

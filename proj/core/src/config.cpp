#include "pairspec/config.hpp"

#include <fmt/format.h>

#include <sstream>
#include <stdexcept>

#include "pairspec/keyvalue.hpp"
#include "pairspec/textio.hpp"

namespace pairspec {

namespace {

std::vector<double> parse_double_list(const std::string& text, const std::string& context) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    auto b = token.find_first_not_of(" \t");
    auto e = token.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(parse_double_strict(token.substr(b, e - b + 1), context));
  }
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
  KeyValueFile kv = KeyValueFile::parse_file(path);
  RunConfig cfg;

  cfg.crystal_preset = kv.get_string("crystal.preset", cfg.crystal_preset);
  if (kv.has("crystal.file")) {
    std::string f = kv.get_string("crystal.file");
    cfg.crystal_file = (f == "none" || f.empty()) ? std::nullopt : std::make_optional(f);
  }
  if (kv.has("crystal.override_dl_ps")) {
    std::string v = kv.get_string("crystal.override_dl_ps");
    cfg.override_dl_ps =
        v == "none" ? std::nullopt
                    : std::make_optional(parse_double_strict(v, "crystal.override_dl_ps"));
  }
  if (kv.has("crystal.override_mismatch_ps_per_mm")) {
    std::string v = kv.get_string("crystal.override_mismatch_ps_per_mm");
    cfg.override_mismatch_ps_per_mm =
        v == "none"
            ? std::nullopt
            : std::make_optional(parse_double_strict(v, "crystal.override_mismatch_ps_per_mm"));
  }
  cfg.pump_wavelength_um = kv.get_double("pump.wavelength_um", cfg.pump_wavelength_um);
  cfg.grid_n_points = static_cast<int>(kv.get_int("grid.n_points", cfg.grid_n_points));
  cfg.grid_lobes_each_side = kv.get_double("grid.lobes_each_side", cfg.grid_lobes_each_side);
  cfg.filter.center_nm = kv.get_double("filter.center_nm", cfg.filter.center_nm);
  cfg.filter.fwhm_nm = kv.get_double("filter.fwhm_nm", cfg.filter.fwhm_nm);
  cfg.michelson.scan_min_um = kv.get_double("scan.min_um", cfg.michelson.scan_min_um);
  cfg.michelson.scan_max_um = kv.get_double("scan.max_um", cfg.michelson.scan_max_um);
  cfg.michelson.step_um = kv.get_double("scan.step_um", cfg.michelson.step_um);
  cfg.michelson.background_weight =
      kv.get_double("scan.background_weight", cfg.michelson.background_weight);
  cfg.michelson.rate_scale_cps = kv.get_double("scan.rate_scale_cps", cfg.michelson.rate_scale_cps);
  cfg.michelson.dwell_time_s = kv.get_double("scan.dwell_time_s", cfg.michelson.dwell_time_s);
  if (kv.has("scan.noise")) {
    cfg.michelson.noise = noise_model_from_string(kv.get_string("scan.noise"));
  }
  if (kv.has("scan.path_convention")) {
    cfg.michelson.path_convention =
        path_convention_from_string(kv.get_string("scan.path_convention"));
  }
  cfg.michelson.envelope_only = kv.get_bool("scan.envelope_only", cfg.michelson.envelope_only);
  cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<std::int64_t>(cfg.seed)));
  if (kv.has("analysis.window")) {
    cfg.window = apodization_from_string(kv.get_string("analysis.window"));
  }
  if (kv.has("analysis.spike")) {
    cfg.spike = spike_handling_from_string(kv.get_string("analysis.spike"));
  }
  cfg.spike_mask_um = kv.get_double("analysis.spike_mask_um", cfg.spike_mask_um);
  if (kv.has("entropy.x_spans")) {
    cfg.entropy_x_spans = parse_double_list(kv.get_string("entropy.x_spans"), "entropy.x_spans");
  }
  cfg.entropy_reference = kv.get_double("entropy.reference", cfg.entropy_reference);
  cfg.entropy_rel_tolerance = kv.get_double("entropy.rel_tolerance", cfg.entropy_rel_tolerance);
  cfg.bandwidth_reference_nm =
      kv.get_double("bandwidth.reference_nm", cfg.bandwidth_reference_nm);

  kv.reject_unknown();
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  if (!(pump_wavelength_um > 0.0)) {
    throw std::invalid_argument(
        fmt::format("pump.wavelength_um must be > 0, got {}", pump_wavelength_um));
  }
  if (grid_n_points < 3 || grid_n_points % 2 == 0) {
    throw std::invalid_argument(
        fmt::format("grid.n_points must be odd and >= 3, got {}", grid_n_points));
  }
  if (!(grid_lobes_each_side > 0.0)) {
    throw std::invalid_argument(
        fmt::format("grid.lobes_each_side must be > 0, got {}", grid_lobes_each_side));
  }
  if (override_dl_ps && !(*override_dl_ps > 0.0)) {
    throw std::invalid_argument(
        fmt::format("crystal.override_dl_ps must be > 0, got {}", *override_dl_ps));
  }
  filter.validate();
  michelson.validate();
  if (!(spike_mask_um >= 0.0)) {
    throw std::invalid_argument(
        fmt::format("analysis.spike_mask_um must be >= 0, got {}", spike_mask_um));
  }
  if (entropy_x_spans.empty()) {
    throw std::invalid_argument("entropy.x_spans must name at least one span");
  }
  for (double s : entropy_x_spans) {
    if (!(s > 0.0)) throw std::invalid_argument(fmt::format("entropy span {} must be > 0", s));
  }
  if (!(entropy_reference >= 0.0)) {
    throw std::invalid_argument(
        fmt::format("entropy.reference must be >= 0, got {}", entropy_reference));
  }
  if (!(entropy_rel_tolerance > 0.0)) {
    throw std::invalid_argument(
        fmt::format("entropy.rel_tolerance must be > 0, got {}", entropy_rel_tolerance));
  }
  if (!(bandwidth_reference_nm > 0.0)) {
    throw std::invalid_argument(
        fmt::format("bandwidth.reference_nm must be > 0, got {}", bandwidth_reference_nm));
  }
}

void RunConfig::echo(std::ostream& out) const {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("none");
  };
  out << "crystal.preset = " << crystal_preset << '\n';
  out << "crystal.file = " << (crystal_file ? *crystal_file : "none") << '\n';
  out << "crystal.override_dl_ps = " << opt(override_dl_ps) << '\n';
  out << "crystal.override_mismatch_ps_per_mm = " << opt(override_mismatch_ps_per_mm) << '\n';
  out << "pump.wavelength_um = " << format_double(pump_wavelength_um) << '\n';
  out << "grid.n_points = " << grid_n_points << '\n';
  out << "grid.lobes_each_side = " << format_double(grid_lobes_each_side) << '\n';
  out << "filter.center_nm = " << format_double(filter.center_nm) << '\n';
  out << "filter.fwhm_nm = " << format_double(filter.fwhm_nm) << '\n';
  out << "scan.min_um = " << format_double(michelson.scan_min_um) << '\n';
  out << "scan.max_um = " << format_double(michelson.scan_max_um) << '\n';
  out << "scan.step_um = " << format_double(michelson.step_um) << '\n';
  out << "scan.background_weight = " << format_double(michelson.background_weight) << '\n';
  out << "scan.rate_scale_cps = " << format_double(michelson.rate_scale_cps) << '\n';
  out << "scan.dwell_time_s = " << format_double(michelson.dwell_time_s) << '\n';
  out << "scan.noise = " << to_string(michelson.noise) << '\n';
  out << "scan.path_convention = " << to_string(michelson.path_convention) << '\n';
  out << "scan.envelope_only = " << (michelson.envelope_only ? "true" : "false") << '\n';
  out << "seed = " << seed << '\n';
  out << "analysis.window = " << to_string(window) << '\n';
  out << "analysis.spike = " << to_string(spike) << '\n';
  out << "analysis.spike_mask_um = " << format_double(spike_mask_um) << '\n';
  out << "entropy.x_spans = " << join_doubles(entropy_x_spans) << '\n';
  out << "entropy.reference = " << format_double(entropy_reference) << '\n';
  out << "entropy.rel_tolerance = " << format_double(entropy_rel_tolerance) << '\n';
  out << "bandwidth.reference_nm = " << format_double(bandwidth_reference_nm) << '\n';
}

std::string RunConfig::echo_string() const {
  std::ostringstream out;
  echo(out);
  return out.str();
}

std::string RunConfig::hash() const { return fnv1a_hex(echo_string()); }

CrystalSpec RunConfig::resolve_crystal() const {
  CrystalSpec crystal;
  if (crystal_file) {
    crystal = CrystalSpec::load(*crystal_file);
  } else if (crystal_preset == "bbo-type2-degenerate") {
    crystal = CrystalSpec::bbo_type2_degenerate();
  } else {
    throw std::invalid_argument(fmt::format(
        "unknown crystal preset '{}' (available: bbo-type2-degenerate, or set crystal.file)",
        crystal_preset));
  }
  crystal.validate();
  return crystal;
}

double RunConfig::resolved_dl_ps(const CrystalSpec& crystal) const {
  if (override_dl_ps) return *override_dl_ps;
  if (override_mismatch_ps_per_mm) return *override_mismatch_ps_per_mm * crystal.length_mm;
  return group_delay_spread(crystal, degenerate_wavelength_um());
}

std::string RunConfig::dl_source(const CrystalSpec& crystal) const {
  if (override_dl_ps) return "config override (crystal.override_dl_ps)";
  if (override_mismatch_ps_per_mm) return "config override (crystal.override_mismatch_ps_per_mm)";
  if (crystal.override_mismatch_ps_per_mm) return "crystal file override";
  return "Sellmeier model";
}

}  // namespace pairspec

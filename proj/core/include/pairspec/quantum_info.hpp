#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairspec/spectral_density.hpp"

namespace pairspec {

enum class LogBase { log2, natural };
enum class EntropyVariable { dimensionless_x, detuning_nu };
enum class EntropyMode { differential, discrete_bins };

std::string to_string(LogBase b);
std::string to_string(EntropyVariable v);
std::string to_string(EntropyMode m);

// Every reported entropy names all three choices explicitly; there is no
// implicit default in any serialized output.
struct EntropyConvention {
  EntropyMode mode = EntropyMode::discrete_bins;
  EntropyVariable variable = EntropyVariable::detuning_nu;
  LogBase log_base = LogBase::natural;
};

// Tr rho^2 of the diagonal reduced state, on the discrete bin masses.
double purity(std::span<const double> masses);
double purity(const SpectralDensity& density);

// -sum q log q over bin masses (terms with q = 0 contribute zero).
double discrete_entropy(std::span<const double> masses, LogBase base);

// -int p log p over the continuous variable.  For the dimensionless variable
// x = DL nu / 2 the density is rescaled by the Jacobian before integrating,
// so S_x = S_nu + log(2 / DL) holds up to quadrature error.
double differential_entropy(const SpectralDensity& density, EntropyVariable variable,
                            LogBase base, double dl_ps);

// Dispatch on the convention; dl_ps is only consulted for differential-x.
double subsystem_entropy(const SpectralDensity& density, const EntropyConvention& convention,
                         double dl_ps);

// Entropy bookkeeping for one photon of a pure pair state: the joint state
// carries zero entropy while each subsystem carries S, so the conditional
// entropies are negative and the mutual information is 2S.
struct EntropyReport {
  double purity = 0.0;
  double s_subsystem = 0.0;
  double s_total = 0.0;
  double s_signal = 0.0;
  double s_idler = 0.0;
  double s_signal_given_idler = 0.0;
  double s_idler_given_signal = 0.0;
  double s_mutual = 0.0;
  EntropyConvention convention;
  std::string provenance;  // grid or span the numbers were computed on

  // Verifies the pure-state identities to `tol`; serialization calls this
  // again so a corrupted report cannot be written.
  void check_identities(double tol = 1e-12) const;
  void write_keyvalues(std::ostream& out) const;
  static std::string csv_header();
  std::string csv_row() const;
};

EntropyReport entropy_ledger(double s_subsystem, double purity_value,
                             const EntropyConvention& convention, std::string provenance);

struct EntropySweepRow {
  EntropyConvention convention;
  std::string domain;
  double entropy = 0.0;
  bool flagged = false;  // |S - reference| <= rel_tolerance * reference
};

struct EntropySweep {
  double reference = 0.0;
  double rel_tolerance = 0.0;
  std::vector<EntropySweepRow> rows;
  std::optional<std::size_t> best_row;  // closest flagged row, if any

  void add_row(const EntropyConvention& convention, std::string domain, double entropy);
  void finalize_best();

  static std::string csv_header();
  void write_csv(std::ostream& out) const;
};

// Tabulates the subsystem entropy of the pure sinc^2 marginal under every
// convention combination: differential over fixed dimensionless spans and
// over the run grid, and bin-resolved on the run grid and a 2x-refined copy.
EntropySweep convention_sweep(double dl_ps, const SpectralGrid& base_grid,
                              std::span<const double> x_spans, double reference,
                              double rel_tolerance);

}  // namespace pairspec

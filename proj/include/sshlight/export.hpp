#pragma once

#include <string>
#include <vector>

#include "sshlight/sweep.hpp"

namespace sshlight::cli {

// Fixed-schema tabular writers. All numbers are printed with %.12g through
// one shared formatter, so identical results serialize byte-identically.
void export_spectrum_csv(const std::string& path,
                         const spectral::Spectrum& spectrum);
void export_ldos_csv(const std::string& path,
                     const spectral::LdosProfile& profile);
void export_intensity_csv(const std::string& path,
                          const propagation::IntensityMap& map);
void export_reports_csv(const std::string& path,
                        const std::vector<CorrelationReport>& reports);
void export_counting_csv(const std::string& path,
                         const std::vector<CountingStats>& stats);

// one machine-readable document for the whole run
void export_run_json(const std::string& path, const SweepResult& result);

void write_text_file(const std::string& path, const std::string& text);

// self-contained vector figures with the plotted data embedded as comments
void svg_band_diagram(const std::string& path,
                      const spectral::Spectrum& spectrum,
                      const std::vector<std::size_t>& gap_modes);
void svg_ldos(const std::string& path, const spectral::LdosProfile& profile);
void svg_heatmap(const std::string& path, const propagation::IntensityMap& map);
void svg_metric_vs_z(const std::string& path, const std::string& metric_label,
                     const std::vector<CorrelationReport>& reports,
                     double CorrelationReport::*field, bool log_scale);

std::string format_number(double value);

}  // namespace sshlight::cli

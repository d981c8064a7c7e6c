#include "sshlight/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sshlight/errors.hpp"

namespace sshlight::cli {

using nlohmann::json;

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

void export_spectrum_csv(const std::string& path,
                         const spectral::Spectrum& spectrum) {
  auto out = open_out(path);
  out << "mode_index,eigenvalue_per_mm\n";
  for (std::size_t m = 0; m < spectrum.eigenvalues.size(); ++m)
    out << m << ',' << format_number(spectrum.eigenvalues[m]) << '\n';
  finish(out, path);
}

void export_ldos_csv(const std::string& path,
                     const spectral::LdosProfile& profile) {
  auto out = open_out(path);
  out << "site,ldos\n";
  for (std::size_t i = 0; i < profile.values.size(); ++i)
    out << (i + 1) << ',' << format_number(profile.values[i]) << '\n';
  finish(out, path);
}

void export_intensity_csv(const std::string& path,
                          const propagation::IntensityMap& map) {
  auto out = open_out(path);
  out << "z_mm,site,intensity\n";
  for (std::size_t r = 0; r < map.z_grid_mm.size(); ++r)
    for (std::size_t i = 0; i < map.intensities.cols(); ++i)
      out << format_number(map.z_grid_mm[r]) << ',' << (i + 1) << ','
          << format_number(map.intensities(r, i)) << '\n';
  finish(out, path);
}

void export_reports_csv(const std::string& path,
                        const std::vector<CorrelationReport>& reports) {
  auto out = open_out(path);
  out << "port,z_mm,g2_cross,g2_heralded,eta_H,lambda_sq,mean_n\n";
  for (const auto& r : reports)
    out << r.port << ',' << format_number(r.z_mm) << ','
        << format_number(r.g2_cross) << ',' << format_number(r.g2_heralded)
        << ',' << format_number(r.eta_h) << ',' << format_number(r.lambda_sq)
        << ',' << format_number(r.mean_photon) << '\n';
  finish(out, path);
}

void export_counting_csv(const std::string& path,
                         const std::vector<CountingStats>& stats) {
  auto out = open_out(path);
  out << "port,z_mm,trials,undefined,g2_cross_mean,g2_cross_std,"
         "g2_heralded_mean,g2_heralded_std,lambda_sq_mean,lambda_sq_std\n";
  for (const auto& s : stats)
    out << s.port << ',' << format_number(s.z_mm) << ',' << s.trials << ','
        << (s.undefined ? 1 : 0) << ',' << format_number(s.g2_cross_mean)
        << ',' << format_number(s.g2_cross_std) << ','
        << format_number(s.g2_heralded_mean) << ','
        << format_number(s.g2_heralded_std) << ','
        << format_number(s.lambda_sq_mean) << ','
        << format_number(s.lambda_sq_std) << '\n';
  finish(out, path);
}

void export_run_json(const std::string& path, const SweepResult& result) {
  json j;
  j["config"] = json::parse(result.resolved_config);
  j["kernel"] = kern::active().name;

  j["spectrum"]["eigenvalues_per_mm"] = result.pump_spectrum.eigenvalues;
  j["spectrum"]["gap_modes"] = result.gap_modes;
  j["spectrum"]["ldos_zero_energy"] = result.gap_ldos.values;

  for (const auto& map : result.intensity_maps) {
    json m;
    m["port"] = map.input_site;
    m["z_mm"] = map.z_grid_mm;
    auto metrics = propagation::localization_metrics(map, map.input_site);
    m["return_probability"] = metrics.return_probability;
    m["spread"] = metrics.spread;
    j["propagation"].push_back(m);
  }

  for (const auto& r : result.reports) {
    json rep;
    rep["port"] = r.port;
    rep["z_mm"] = r.z_mm;
    rep["g2_cross"] = r.g2_cross;
    rep["g2_heralded"] = r.g2_heralded;
    rep["eta_H"] = r.eta_h;
    rep["lambda_sq"] = r.lambda_sq;
    rep["mean_n"] = r.mean_photon;
    rep["n_signal"] = r.n_signal;
    rep["n_idler"] = r.n_idler;
    rep["pairing_abs"] = r.pairing_abs;
    rep["non_classical"] = r.non_classical;
    rep["bell_capable"] = r.bell_capable;
    rep["tmsv_like"] = r.tmsv_like;
    j["reports"].push_back(rep);
  }

  for (const auto& s : result.counting) {
    json c;
    c["port"] = s.port;
    c["z_mm"] = s.z_mm;
    c["trials"] = s.trials;
    c["undefined"] = s.undefined;
    c["g2_cross"] = {{"mean", s.g2_cross_mean}, {"std", s.g2_cross_std}};
    c["g2_heralded"] = {{"mean", s.g2_heralded_mean}, {"std", s.g2_heralded_std}};
    c["lambda_sq"] = {{"mean", s.lambda_sq_mean}, {"std", s.lambda_sq_std}};
    j["counting"].push_back(c);
  }

  write_text_file(path, j.dump(2) + "\n");
}

namespace {

struct SvgCanvas {
  std::ostringstream body;
  double width, height;

  SvgCanvas(double w, double h) : width(w), height(h) {}

  std::string finalize(const std::string& data_comment) const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
        << height << "\">\n"
        << "<!--\n" << data_comment << "-->\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body.str() << "</svg>\n";
    return out.str();
  }

  void text(double x, double y, const std::string& s, int size = 12,
            const char* anchor = "start") {
    body << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
         << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">"
         << s << "</text>\n";
  }

  void line(double x1, double y1, double x2, double y2,
            const char* color = "#333", double w = 1.0) {
    body << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2
         << "\" y2=\"" << y2 << "\" stroke=\"" << color << "\" stroke-width=\""
         << w << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
         << "\" height=\"" << h << "\" fill=\"" << fill << "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill) {
    body << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r
         << "\" fill=\"" << fill << "\"/>\n";
  }
};

// perceptual-ish three-stop ramp, dark blue -> magenta -> yellow
std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [](double a, double b, double f) { return a + (b - a) * f; };
  double r, g, b;
  if (t < 0.5) {
    const double f = t / 0.5;
    r = lerp(13, 183, f);
    g = lerp(8, 55, f);
    b = lerp(135, 121, f);
  } else {
    const double f = (t - 0.5) / 0.5;
    r = lerp(183, 240, f);
    g = lerp(55, 220, f);
    b = lerp(121, 40, f);
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r),
                static_cast<int>(g), static_cast<int>(b));
  return buf;
}

const std::array<const char*, 6> kSeriesColors = {
    "#1b7837", "#d73027", "#4575b4", "#984ea3", "#ff7f00", "#666666"};

}  // namespace

void svg_band_diagram(const std::string& path,
                      const spectral::Spectrum& spectrum,
                      const std::vector<std::size_t>& gap_modes) {
  const double w = 480, h = 360, ml = 60, mr = 20, mt = 30, mb = 45;
  SvgCanvas svg(w, h);

  double emax = 1e-12;
  for (double e : spectrum.eigenvalues) emax = std::max(emax, std::abs(e));
  emax *= 1.1;
  const std::size_t n = spectrum.eigenvalues.size();

  std::ostringstream data;
  data << "mode_index,eigenvalue_per_mm\n";
  for (std::size_t m = 0; m < n; ++m)
    data << m << ',' << format_number(spectrum.eigenvalues[m]) << '\n';

  auto xm = [&](std::size_t m) {
    return ml + (w - ml - mr) * (static_cast<double>(m) + 0.5) / n;
  };
  auto ye = [&](double e) { return mt + (h - mt - mb) * (1.0 - (e + emax) / (2 * emax)); };

  svg.line(ml, ye(0.0), w - mr, ye(0.0), "#bbb");
  for (std::size_t m = 0; m < n; ++m) {
    const bool gap = std::find(gap_modes.begin(), gap_modes.end(), m) !=
                     gap_modes.end();
    svg.circle(xm(m), ye(spectrum.eigenvalues[m]), gap ? 5 : 3.5,
               gap ? "#d73027" : "#4575b4");
  }
  svg.line(ml, mt, ml, h - mb);
  svg.line(ml, h - mb, w - mr, h - mb);
  svg.text(w / 2, h - 12, "mode index", 13, "middle");
  svg.text(14, mt - 8, "E (1/mm)", 13);
  svg.text(w / 2, 18, "band diagram (gap modes highlighted)", 13, "middle");
  svg.text(ml - 6, ye(emax / 1.1) + 4, format_number(emax / 1.1), 10, "end");
  svg.text(ml - 6, ye(-emax / 1.1) + 4, format_number(-emax / 1.1), 10, "end");
  svg.text(ml - 6, ye(0) + 4, "0", 10, "end");

  write_text_file(path, svg.finalize(data.str()));
}

void svg_ldos(const std::string& path, const spectral::LdosProfile& profile) {
  const double w = 480, h = 300, ml = 60, mr = 20, mt = 30, mb = 45;
  SvgCanvas svg(w, h);
  const std::size_t n = profile.values.size();
  double vmax = 1e-300;
  for (double v : profile.values) vmax = std::max(vmax, v);

  std::ostringstream data;
  data << "site,ldos\n";
  for (std::size_t i = 0; i < n; ++i)
    data << (i + 1) << ',' << format_number(profile.values[i]) << '\n';

  const double bw = (w - ml - mr) / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = profile.values[i] / vmax;
    svg.rect(ml + bw * i + 1, mt + (h - mt - mb) * (1 - frac), bw - 2,
             (h - mt - mb) * frac, "#4575b4");
  }
  svg.line(ml, mt, ml, h - mb);
  svg.line(ml, h - mb, w - mr, h - mb);
  svg.text(w / 2, h - 12, "site", 13, "middle");
  svg.text(14, mt - 8, "LDOS at E=0", 13);
  for (std::size_t i = 0; i < n; i += (n > 24 ? 4 : 1))
    svg.text(ml + bw * i + bw / 2, h - mb + 14, std::to_string(i + 1), 9,
             "middle");

  write_text_file(path, svg.finalize(data.str()));
}

void svg_heatmap(const std::string& path, const propagation::IntensityMap& map) {
  const std::size_t sites = map.intensities.cols();
  const std::size_t rows_all = map.z_grid_mm.size();
  const std::size_t stride = std::max<std::size_t>(1, rows_all / 120);

  const double w = 520, h = 380, ml = 60, mr = 70, mt = 30, mb = 45;
  SvgCanvas svg(w, h);

  double vmax = 1e-300;
  for (std::size_t r = 0; r < rows_all; ++r)
    for (std::size_t i = 0; i < sites; ++i)
      vmax = std::max(vmax, map.intensities(r, i));

  std::ostringstream data;
  data << "z_mm,site,intensity (displayed rows; peak-normalized colors)\n";

  std::size_t shown = 0;
  for (std::size_t r = 0; r < rows_all; r += stride) ++shown;
  const double cw = (w - ml - mr) / sites;
  const double ch = (h - mt - mb) / shown;

  std::size_t row_idx = 0;
  for (std::size_t r = 0; r < rows_all; r += stride, ++row_idx) {
    for (std::size_t i = 0; i < sites; ++i) {
      const double v = map.intensities(r, i);
      svg.rect(ml + cw * i, mt + ch * row_idx, cw + 0.5, ch + 0.5,
               heat_color(v / vmax));
      data << format_number(map.z_grid_mm[r]) << ',' << (i + 1) << ','
           << format_number(v) << '\n';
    }
  }
  svg.text(w / 2, h - 12, "site", 13, "middle");
  svg.text(14, mt - 8, "z (mm, top to bottom)", 13);
  svg.text(w / 2, 18,
           "pump intensity, injection port " + std::to_string(map.input_site),
           13, "middle");
  // color bar
  for (int s = 0; s < 40; ++s) {
    svg.rect(w - mr + 20, mt + (h - mt - mb) * (1.0 - (s + 1) / 40.0),
             14, (h - mt - mb) / 40.0 + 0.5, heat_color((s + 0.5) / 40.0));
  }
  svg.text(w - mr + 38, mt + 10, format_number(vmax), 9);
  svg.text(w - mr + 38, h - mb, "0", 9);

  write_text_file(path, svg.finalize(data.str()));
}

void svg_metric_vs_z(const std::string& path, const std::string& metric_label,
                     const std::vector<CorrelationReport>& reports,
                     double CorrelationReport::*field, bool log_scale) {
  const double w = 520, h = 360, ml = 65, mr = 20, mt = 30, mb = 45;
  SvgCanvas svg(w, h);

  std::map<std::size_t, std::vector<const CorrelationReport*>> by_port;
  for (const auto& r : reports) by_port[r.port].push_back(&r);

  double zmin = 1e300, zmax = -1e300, vmin = 1e300, vmax = -1e300;
  for (const auto& r : reports) {
    zmin = std::min(zmin, r.z_mm);
    zmax = std::max(zmax, r.z_mm);
    const double v = r.*field;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (log_scale) vmin = std::max(vmin, 1e-12);
  if (vmax <= vmin) vmax = vmin + 1.0;

  auto xz = [&](double z) {
    return ml + (w - ml - mr) * (z - zmin) / (zmax - zmin);
  };
  auto yv = [&](double v) {
    if (log_scale)
      return mt + (h - mt - mb) *
                      (1.0 - (std::log(std::max(v, vmin)) - std::log(vmin)) /
                                 (std::log(vmax) - std::log(vmin)));
    return mt + (h - mt - mb) * (1.0 - (v - vmin) / (vmax - vmin));
  };

  std::ostringstream data;
  data << "port,z_mm," << metric_label << '\n';

  std::size_t color_idx = 0;
  for (const auto& [port, rows] : by_port) {
    const char* color = kSeriesColors[color_idx % kSeriesColors.size()];
    for (std::size_t k = 0; k + 1 < rows.size(); ++k)
      svg.line(xz(rows[k]->z_mm), yv(rows[k]->*field), xz(rows[k + 1]->z_mm),
               yv(rows[k + 1]->*field), color, 1.8);
    for (const auto* r : rows) {
      svg.circle(xz(r->z_mm), yv(r->*field), 3.5, color);
      data << port << ',' << format_number(r->z_mm) << ','
           << format_number(r->*field) << '\n';
    }
    svg.text(w - mr - 4, mt + 16.0 * (color_idx + 1),
             "port " + std::to_string(port), 12, "end");
    svg.rect(w - mr - 70, mt + 16.0 * (color_idx + 1) - 9, 10, 10, color);
    ++color_idx;
  }

  svg.line(ml, mt, ml, h - mb);
  svg.line(ml, h - mb, w - mr, h - mb);
  svg.text(w / 2, h - 12, "z (mm)", 13, "middle");
  svg.text(14, mt - 8, metric_label + (log_scale ? " (log)" : ""), 13);
  svg.text(ml - 6, yv(vmax) + 4, format_number(vmax), 10, "end");
  svg.text(ml - 6, yv(vmin) + 4, format_number(vmin), 10, "end");
  for (const auto& r : reports)
    if (&r == &reports.front())
      svg.text(xz(r.z_mm), h - mb + 14, format_number(r.z_mm), 10, "middle");
  svg.text(xz(zmax), h - mb + 14, format_number(zmax), 10, "middle");

  write_text_file(path, svg.finalize(data.str()));
}

}  // namespace sshlight::cli

#pragma once

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "torsionlab/error.hpp"
#include "torsionlab/homology.hpp"
#include "torsionlab/json_io.hpp"
#include "torsionlab/walks.hpp"

#ifndef TORSIONLAB_VERSION
#define TORSIONLAB_VERSION "0.1.0"
#endif

namespace torsionlab {

/// Shortest round-trip decimal form, independent of the global locale.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// CSV outputs

inline void write_scan_csv(std::ostream& os, const GrowthScan& scan) {
  os << "q,torsion_order,betti,log_torsion_over_q\n";
  for (const auto& r : scan.reports)
    os << r.q << ',' << to_decimal(r.torsion_order) << ',' << r.betti << ',' << format_real(r.log_torsion_over_q)
       << '\n';
}

inline std::string delta_label(double delta) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::scientific << std::setprecision(0) << delta;
  return s.str();
}

inline void write_series_csv(std::ostream& os, const WalkReport& r) {
  os << "n,frac_mahler_positive,frac_mahler_positive_stderr";
  for (const auto& s : r.series) {
    os << ",L_n_mean_q" << s.q << ",L_n_var_q" << s.q;
    for (double d : r.deltas) os << ",frac_below_" << delta_label(d) << "_q" << s.q;
  }
  os << '\n';
  for (std::size_t k = 0; k < r.schedule.size(); ++k) {
    os << r.schedule[k] << ',' << format_real(r.mahler[k].fraction_positive()) << ','
       << format_real(r.mahler[k].stderr_positive());
    for (const auto& s : r.series) {
      const auto& p = s.points[k];
      os << ',' << format_real(p.mean) << ',' << format_real(p.variance);
      for (double f : p.fraction_below) os << ',' << format_real(f);
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Plot data: tidy long format (series, x, y, stderr); stderr may be empty.

struct PlotRow {
  std::string series;
  double x = 0, y = 0;
  std::optional<double> stderr_value;
};

inline std::vector<PlotRow> plot_rows(const GrowthScan& scan) {
  std::vector<PlotRow> rows;
  for (const auto& r : scan.reports) rows.push_back({"log_torsion_over_q", static_cast<double>(r.q), r.log_torsion_over_q, {}});
  if (scan.mahler)
    for (const auto& r : scan.reports)
      rows.push_back({"mahler_measure", static_cast<double>(r.q), scan.mahler->log_measure, {}});
  return rows;
}

inline std::vector<PlotRow> plot_rows(const WalkReport& report) {
  std::vector<PlotRow> rows;
  for (std::size_t k = 0; k < report.schedule.size(); ++k) {
    const auto& b = report.mahler[k];
    rows.push_back({"frac_mahler_positive", static_cast<double>(report.schedule[k]), b.fraction_positive(),
                    b.stderr_positive()});
  }
  for (const auto& s : report.series) {
    const std::string tag = "_q" + std::to_string(s.q);
    for (const auto& p : s.points) {
      const double se = p.count ? std::sqrt(p.variance / static_cast<double>(p.count)) : 0.0;
      rows.push_back({"lyapunov" + tag, static_cast<double>(p.n), p.mean, se});
      for (std::size_t d = 0; d < report.deltas.size(); ++d) {
        const double f = p.fraction_below[d];
        const double fse = p.count ? std::sqrt(f * (1 - f) / static_cast<double>(p.count)) : 0.0;
        rows.push_back({"frac_below_" + delta_label(report.deltas[d]) + tag, static_cast<double>(p.n), f, fse});
      }
    }
  }
  return rows;
}

inline void emit_plot_data(std::ostream& os, const std::vector<PlotRow>& rows) {
  os << "series,x,y,stderr\n";
  for (const auto& r : rows) {
    os << r.series << ',' << format_real(r.x) << ',' << format_real(r.y) << ',';
    if (r.stderr_value) os << format_real(*r.stderr_value);
    os << '\n';
  }
}

template <class Report>
void emit_plot_data(std::ostream& os, const Report& report) {
  emit_plot_data(os, plot_rows(report));
}

// ---------------------------------------------------------------------------
// Manifests

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", digest[k]);
    hex += buf;
  }
  return hex;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidInput, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Everything needed to rerun a command and get byte-identical outputs.
struct ExperimentManifest {
  std::string subcommand;
  json_io::json parameters = json_io::json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  ///< path, sha256
  std::optional<std::uint64_t> master_seed;

  void add_input(const std::string& path, const std::string& contents) { inputs.emplace_back(path, sha256_hex(contents)); }

  json_io::json to_json() const {
    json_io::json in = json_io::json::array();
    for (const auto& [path, digest] : inputs) in.push_back({{"path", path}, {"sha256", digest}});
    json_io::json out = {{"schema", "torsionlab-manifest/1"},
                         {"tool", "torsionlab"},
                         {"tool_version", TORSIONLAB_VERSION},
                         {"subcommand", subcommand},
                         {"parameters", parameters},
                         {"inputs", in}};
    out["master_seed"] = master_seed ? json_io::json(*master_seed) : json_io::json(nullptr);
    return out;
  }
};

}  // namespace torsionlab

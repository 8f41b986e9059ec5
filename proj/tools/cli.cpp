#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "torsionlab/exterior.hpp"
#include "torsionlab/homology.hpp"
#include "torsionlab/json_io.hpp"
#include "torsionlab/mahler.hpp"
#include "torsionlab/report.hpp"
#include "torsionlab/walks.hpp"

namespace torsionlab::cli {
namespace {

using json_io::json;
namespace fs = std::filesystem;

/// Bad command lines and bad input files; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kFormats = R"(Input formats (schemas under docs/):
  polynomial   [[exponent, "coefficient"], ...]  or  {"poly": [...]}
  B_inf        {"rows": [[polynomial, ...], ...]}  (square, over Z[t, t^-1])
  form matrix  {"g": g, "ring": "laurent" | {"cyclic": q}, "rows": [[polynomial, ...], ...]}
  heegaard     {"matrix": [[integer, ...], ...]}  (2g x 2g, symplectic)
  walk config  see docs/walk_config.schema.json
)";

bool is_input_error(Errc e) {
  switch (e) {
    case Errc::RootRefinementFailed:
    case Errc::DegreeBoundViolated:
    case Errc::DegenerateNorm:
      return false;
    default:
      return true;
  }
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::string out;
};

class Runner {
 public:
  Runner(std::ostream& out, const Globals& globals) : out_(out), globals_(globals) {}

  json load(const std::string& path) {
    const std::string text = read_file(path);
    manifest_.add_input(path, text);
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
  }

  ExperimentManifest& manifest() { return manifest_; }

  /// JSON result to stdout, or to --out plus a sibling manifest.
  void emit(const json& result) {
    if (globals_.out.empty()) {
      out_ << result.dump(2) << '\n';
      return;
    }
    write_text(globals_.out, result.dump(2) + "\n");
    write_manifest(globals_.out + ".manifest.json");
  }

  void write_text(const std::string& path, const std::string& text) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
  }

  void write_manifest(const std::string& path) { write_text(path, manifest_.to_json().dump(2) + "\n"); }

 private:
  std::ostream& out_;
  const Globals& globals_;
  ExperimentManifest manifest_;
};

std::string csv_of(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  writer(s);
  return s.str();
}

}  // namespace

int dispatch(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  CLI::App app{"torsionlab: torsion growth in cyclic covers, Mahler measures and random walks", "torsionlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("torsionlab ") + TORSIONLAB_VERSION);

  Globals globals;
  app.add_option("--seed", globals.seed, "Master seed (overrides the walk config)");
  app.add_option("--threads", globals.threads, "Worker threads (0 = all; capped by TORSIONLAB_THREADS)");
  app.add_option("--out", globals.out, "Output file or directory");

  std::function<void(Runner&)> action;
  std::string subcommand;

  // mahler ------------------------------------------------------------------
  auto* mahler = app.add_subcommand("mahler", "Mahler measures and the Kronecker classification");
  mahler->require_subcommand(1);
  std::string poly_file;
  double tol = 1e-12;
  auto* m_eval = mahler->add_subcommand("eval", "Logarithmic Mahler measure of a polynomial");
  m_eval->add_option("--poly", poly_file, "Polynomial JSON")->required();
  m_eval->add_option("--tol", tol, "Relative root residual tolerance");
  m_eval->callback([&] {
    subcommand = "mahler eval";
    action = [&](Runner& r) {
      const auto p = json_io::laurent_from_json(r.load(poly_file));
      r.manifest().parameters = {{"poly", poly_file}, {"tol", tol}};
      r.emit(json_io::to_json(mahler_measure(p, tol)));
    };
  });
  auto* m_kron = mahler->add_subcommand("kronecker", "Is +-p a monomial times cyclotomic polynomials?");
  m_kron->add_option("--poly", poly_file, "Polynomial JSON")->required();
  m_kron->callback([&] {
    subcommand = "mahler kronecker";
    action = [&](Runner& r) {
      const auto p = json_io::laurent_from_json(r.load(poly_file));
      r.manifest().parameters = {{"poly", poly_file}};
      r.emit(json_io::to_json(kronecker_zero_test(p)));
    };
  });
  double alpha = 1.0;
  std::int64_t m_max = 200;
  auto* m_kalpha = mahler->add_subcommand("kalpha", "Exceptional cyclotomic indices K_alpha");
  m_kalpha->add_option("--alpha", alpha, "Threshold rate")->check(CLI::PositiveNumber);
  m_kalpha->add_option("--mmax", m_max, "Scan horizon")->check(CLI::PositiveNumber);
  m_kalpha->callback([&] {
    subcommand = "mahler kalpha";
    action = [&](Runner& r) {
      r.manifest().parameters = {{"alpha", alpha}, {"m_max", m_max}};
      r.emit(json_io::to_json(build_K_alpha(alpha, m_max)));
    };
  });
  std::int64_t walk_length = 1, d_mu = 1;
  int genus = 3;
  auto* m_constraint = mahler->add_subcommand("constraint", "Cyclotomic constraint dichotomy for det B of a word");
  m_constraint->add_option("--poly", poly_file, "Polynomial JSON")->required();
  m_constraint->add_option("--n", walk_length, "Word length")->check(CLI::PositiveNumber);
  m_constraint->add_option("--dmu", d_mu, "Generator degree bound")->check(CLI::PositiveNumber);
  m_constraint->add_option("--g", genus, "Genus")->check(CLI::Range(3, 64));
  m_constraint->add_option("--alpha", alpha, "Threshold rate")->check(CLI::PositiveNumber);
  m_constraint->add_option("--mmax", m_max, "K_alpha scan horizon")->check(CLI::PositiveNumber);
  m_constraint->callback([&] {
    subcommand = "mahler constraint";
    action = [&](Runner& r) {
      const auto p = json_io::laurent_from_json(r.load(poly_file));
      ConstraintParams params;
      params.alpha = alpha;
      params.K = build_K_alpha(alpha, m_max).list();
      params.n_scan_max = m_max;
      params.d_mu = d_mu;
      params.g = genus;
      r.manifest().parameters = {{"poly", poly_file}, {"n", walk_length}, {"d_mu", d_mu},
                                 {"g", genus},        {"alpha", alpha},     {"m_max", m_max}};
      r.emit(json_io::to_json(constraint_check(p, params, walk_length)));
    };
  });

  // rep ---------------------------------------------------------------------
  auto* rep = app.add_subcommand("rep", "Form-preserving matrices over Z[t, t^-1] and Z[Z/q]");
  rep->require_subcommand(1);
  std::string matrix_file;
  std::int64_t q = 0, root_index = 1;
  auto* r_check = rep->add_subcommand("check-form", "Does the matrix preserve the skew-Hermitian form?");
  r_check->add_option("file,--matrix", matrix_file, "Form matrix JSON")->required();
  r_check->callback([&] {
    subcommand = "rep check-form";
    action = [&](Runner& r) {
      const json j = r.load(matrix_file);
      const auto entries = json_io::laurent_matrix_from_json(j);
      const auto model = json_io::model_for(entries, j, 0);
      const LaurentFormMatrix m{model, LaurentRing{}, entries};
      const bool preserved = m.form_preserved();
      r.manifest().parameters = {{"matrix", matrix_file}};
      r.emit({{"g", model.g}, {"form_preserved", preserved}, {"torelli_like", preserved && is_torelli_like(m)}});
    };
  });
  auto* r_block = rep->add_subcommand("block", "Bottom-left block B and its determinant");
  r_block->add_option("file,--matrix", matrix_file, "Form matrix JSON")->required();
  r_block->callback([&] {
    subcommand = "rep block";
    action = [&](Runner& r) {
      const auto m = json_io::laurent_form_from_json(r.load(matrix_file));
      const auto b = bottom_left_block(m);
      const auto det = determinant(b);
      json result = {{"block", json_io::to_json(b)}, {"det", json_io::to_json(det)}};
      if (!det.is_zero()) result["mahler_measure"] = mahler_measure(det).log_measure;
      r.manifest().parameters = {{"matrix", matrix_file}};
      r.emit(result);
    };
  });
  auto* r_iota = rep->add_subcommand("iota", "Complex image at exp(2 pi i j / q)");
  r_iota->add_option("file,--matrix", matrix_file, "Form matrix JSON")->required();
  r_iota->add_option("--q", q, "Cover degree")->required()->check(CLI::PositiveNumber);
  r_iota->add_option("--root", root_index, "Root index j, gcd(j, q) = 1");
  r_iota->callback([&] {
    subcommand = "rep iota";
    action = [&](Runner& r) {
      const auto m = json_io::cyclic_form_from_json(r.load(matrix_file), q);
      const auto a = iota(m, root_index);
      const ExteriorMarking marking(m.model.g);
      r.manifest().parameters = {{"matrix", matrix_file}, {"q", q}, {"root", root_index}};
      r.emit({{"q", q},
              {"root_index", root_index},
              {"matrix", json_io::to_json(a)},
              {"unitary_residual", unitary_form_residual(m.model, a)},
              {"exterior_coefficient", json_io::complex_to_json(exterior_coefficient(a, marking))},
              {"iota_det_block", json_io::complex_to_json(iota(determinant(bottom_left_block(m)), root_index))}});
    };
  });

  // torsion -----------------------------------------------------------------
  auto* torsion = app.add_subcommand("torsion", "Torsion homology of cyclic covers");
  torsion->require_subcommand(1);
  std::string binf_file, plot_file;
  std::int64_t q_min = 1, q_max = 0, stride = 1;
  std::size_t window = 20;
  auto* t_scan = torsion->add_subcommand("scan", "Growth scan of log|H_1 torsion| / q");
  t_scan->add_option("--binf", binf_file, "B_inf JSON")->required();
  t_scan->add_option("--qmax", q_max, "Largest q")->required()->check(CLI::PositiveNumber);
  t_scan->add_option("--qmin", q_min, "Smallest q")->check(CLI::PositiveNumber);
  t_scan->add_option("--stride", stride, "Step between q values")->check(CLI::PositiveNumber);
  t_scan->add_option("--window", window, "Trailing window for deviation diagnostics")->check(CLI::PositiveNumber);
  t_scan->add_option("--plot", plot_file, "Also write long-format plot data to this CSV");
  t_scan->callback([&] {
    subcommand = "torsion scan";
    action = [&](Runner& r) {
      if (globals.out.empty()) throw UsageError("torsion scan needs --out CSV");
      const auto b = json_io::laurent_matrix_from_json(r.load(binf_file));
      GrowthScanOptions options;
      options.threads = globals.threads;
      options.window = window;
      const auto scan = growth_scan(b, q_range(q_min, q_max, stride), options);
      r.manifest().parameters = {{"binf", binf_file}, {"qmin", q_min}, {"qmax", q_max}, {"stride", stride},
                                 {"window", window},  {"plot", plot_file}};
      r.write_text(globals.out, csv_of([&](std::ostream& os) { write_scan_csv(os, scan); }));
      if (!plot_file.empty()) r.write_text(plot_file, csv_of([&](std::ostream& os) { emit_plot_data(os, scan); }));
      r.write_manifest(globals.out + ".manifest.json");
      json summary = json_io::to_json(scan, window);
      summary.erase("reports");
      out << summary.dump(2) << '\n';
    };
  });
  auto* t_cover = torsion->add_subcommand("cover", "Homology of a single q-fold cover");
  t_cover->add_option("--binf", binf_file, "B_inf JSON")->required();
  t_cover->add_option("--q", q, "Cover degree")->required()->check(CLI::PositiveNumber);
  t_cover->callback([&] {
    subcommand = "torsion cover";
    action = [&](Runner& r) {
      const auto b = json_io::laurent_matrix_from_json(r.load(binf_file));
      r.manifest().parameters = {{"binf", binf_file}, {"q", q}};
      r.emit(json_io::to_json(cover_homology(reduce_mod_q(b, q))));
    };
  });
  auto* t_betti = torsion->add_subcommand("betti", "Does the Betti number grow at a primitive character?");
  t_betti->add_option("--binf", binf_file, "B_inf JSON")->required();
  t_betti->add_option("--q", q, "Cover degree")->required()->check(CLI::PositiveNumber);
  t_betti->add_option("--root", root_index, "Root index j, gcd(j, q) = 1");
  t_betti->callback([&] {
    subcommand = "torsion betti";
    action = [&](Runner& r) {
      const auto b = json_io::laurent_matrix_from_json(r.load(binf_file));
      r.manifest().parameters = {{"binf", binf_file}, {"q", q}, {"root", root_index}};
      r.emit({{"q", q}, {"root_index", root_index}, {"betti_increases", betti_increase_check(reduce_mod_q(b, q), root_index)}});
    };
  });

  // heegaard ----------------------------------------------------------------
  auto* heegaard = app.add_subcommand("heegaard", "H_1 of the Heegaard manifold N_phi");
  heegaard->add_option("--matrix", matrix_file, "Symplectic matrix JSON")->required();
  heegaard->callback([&] {
    subcommand = "heegaard";
    action = [&](Runner& r) {
      const auto phi = json_io::integer_matrix_from_json(r.load(matrix_file));
      r.manifest().parameters = {{"matrix", matrix_file}};
      r.emit(json_io::to_json(heegaard_homology(phi)));
    };
  });

  // walk --------------------------------------------------------------------
  auto* walk = app.add_subcommand("walk", "Random-walk experiments");
  walk->require_subcommand(1);
  std::string config_file;
  auto load_config = [&](Runner& r) {
    const json j = r.load(config_file);
    auto c = json_io::walk_config_from_json(j);
    if (globals.seed) c.master_seed = *globals.seed;
    c.threads = globals.threads;
    r.manifest().master_seed = c.master_seed;
    r.manifest().parameters = {{"config", config_file}, {"seed", c.master_seed}};
    return c;
  };
  auto* w_run = walk->add_subcommand("run", "Run the walk and write report.json, series.csv, plot.csv");
  w_run->add_option("--config", config_file, "Walk config JSON")->required();
  w_run->callback([&] {
    subcommand = "walk run";
    action = [&](Runner& r) {
      if (globals.out.empty()) throw UsageError("walk run needs --out DIR");
      const auto c = load_config(r);
      const auto report = run_walk(c);
      const fs::path dir(globals.out);
      fs::create_directories(dir);
      r.write_text((dir / "report.json").string(), json_io::to_json(report).dump(2) + "\n");
      r.write_text((dir / "series.csv").string(), csv_of([&](std::ostream& os) { write_series_csv(os, report); }));
      r.write_text((dir / "plot.csv").string(), csv_of([&](std::ostream& os) { emit_plot_data(os, report); }));
      r.write_manifest((dir / "manifest.json").string());
    };
  });
  auto* w_probe = walk->add_subcommand("probe", "Search short words for a proximal element");
  w_probe->add_option("--config", config_file, "Walk config JSON")->required();
  w_probe->callback([&] {
    subcommand = "walk probe";
    action = [&](Runner& r) {
      const auto c = load_config(r);
      json results = json::array();
      for (const auto& p : proximality_probe(c)) {
        json entry = json_io::to_json(p.report);
        entry["q"] = p.q;
        results.push_back(entry);
      }
      r.emit({{"probes", results}});
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help() << '\n' << kFormats;
    return kUsageError;
  }

  Runner runner(out, globals);
  runner.manifest().subcommand = subcommand;
  try {
    action(runner);
    return kSuccess;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << kFormats;
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (is_input_error(e.code())) {
      err << '\n' << kFormats;
      return kUsageError;
    }
    return kInternalError;
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n\n" << kFormats;
    return kUsageError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace torsionlab::cli

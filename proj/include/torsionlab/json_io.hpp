#pragma once

#include <json.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "torsionlab/cyclic.hpp"
#include "torsionlab/error.hpp"
#include "torsionlab/form.hpp"
#include "torsionlab/homology.hpp"
#include "torsionlab/laurent.hpp"
#include "torsionlab/mahler.hpp"
#include "torsionlab/walks.hpp"

namespace torsionlab::json_io {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "torsionlab/1";

// ---------------------------------------------------------------------------
// Scalars

/// Integers are written as decimal strings; JSON numbers are accepted on input.
inline Integer integer_from_json(const json& j) {
  if (j.is_string()) return parse_integer(j.get<std::string>());
  if (j.is_number_integer()) return from_int(j.get<std::int64_t>());
  throw Error(Errc::InvalidInput, "expected an integer or a decimal string, got " + j.dump());
}

inline json integer_to_json(const Integer& v) { return to_decimal(v); }

/// Non-finite doubles have no JSON spelling and are written as null.
inline json real_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------
// Ring elements

/// [[exponent, "coefficient"], ...] sorted by exponent.
inline json to_json(const LaurentPoly& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) out.push_back(json::array({e, to_decimal(c)}));
  return out;
}

inline LaurentPoly laurent_from_json(const json& j) {
  if (j.is_object() && j.contains("poly")) return laurent_from_json(j.at("poly"));
  if (!j.is_array()) throw Error(Errc::InvalidInput, "a Laurent polynomial is an array of [exponent, coefficient] pairs");
  std::vector<LaurentPoly::Term> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer())
      throw Error(Errc::InvalidInput, "bad Laurent term " + t.dump());
    terms.emplace_back(t[0].get<std::int64_t>(), integer_from_json(t[1]));
  }
  return LaurentPoly::from_terms(std::move(terms));
}

inline json to_json(const CycElem& c) {
  json coeffs = json::array();
  for (const auto& x : c.coeffs()) coeffs.push_back(to_decimal(x));
  return {{"q", c.modulus()}, {"coeffs", coeffs}};
}

inline CycElem cyc_from_json(const json& j) {
  if (!j.is_object() || !j.contains("q") || !j.contains("coeffs"))
    throw Error(Errc::InvalidInput, "a Z[Z/q] element is {\"q\": q, \"coeffs\": [...]}");
  const auto q = j.at("q").get<std::int64_t>();
  if (q < 1) throw Error(Errc::InvalidModulus, "q must be positive");
  std::vector<Integer> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(integer_from_json(c));
  return CycElem(q, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Matrices

template <class T, class F>
json matrix_to_json(const Matrix<T>& m, F&& entry) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(entry(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T, class F>
Matrix<T> matrix_from_json(const json& rows, F&& entry, const T& fill) {
  if (!rows.is_array() || rows.empty()) throw Error(Errc::InvalidInput, "a matrix is a nonempty array of rows");
  const std::size_t n = rows.size();
  const std::size_t m = rows[0].is_array() ? rows[0].size() : 0;
  if (m == 0) throw Error(Errc::InvalidInput, "matrix rows must be nonempty arrays");
  Matrix<T> out(n, m, fill);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != m) throw Error(Errc::InvalidInput, "matrix rows have unequal lengths");
    for (std::size_t j = 0; j < m; ++j) out(i, j) = entry(rows[i][j]);
  }
  return out;
}

inline json to_json(const Matrix<LaurentPoly>& m) {
  return matrix_to_json(m, [](const LaurentPoly& p) { return to_json(p); });
}
inline json to_json(const Matrix<Integer>& m) {
  return matrix_to_json(m, [](const Integer& x) { return integer_to_json(x); });
}
inline json to_json(const Matrix<CycElem>& m) {
  return matrix_to_json(m, [](const CycElem& c) { return to_json(c); });
}

inline Matrix<LaurentPoly> laurent_matrix_from_json(const json& j) {
  const json& rows = j.is_object() ? j.at("rows") : j;
  return matrix_from_json(rows, [](const json& e) { return laurent_from_json(e); }, LaurentPoly{});
}

inline Matrix<Integer> integer_matrix_from_json(const json& j) {
  const json& rows = j.is_object() ? (j.contains("matrix") ? j.at("matrix") : j.at("rows")) : j;
  return matrix_from_json(rows, [](const json& e) { return integer_from_json(e); }, Integer(0));
}

inline json to_json(const LaurentFormMatrix& m) {
  return {{"g", m.model.g}, {"ring", "laurent"}, {"rows", to_json(m.entries)}};
}

inline json to_json(const CyclicFormMatrix& m) {
  return {{"g", m.model.g}, {"ring", {{"cyclic", m.ring.q}}}, {"rows", to_json(m.entries)}};
}

inline SurfaceModel model_for(const Matrix<LaurentPoly>& m, const json& j, int default_g) {
  int g = j.is_object() && j.contains("g") ? j.at("g").get<int>() : default_g;
  if (g == 0) g = static_cast<int>(m.rows() / 2) + 1;
  const SurfaceModel model(g);
  if (m.rows() != model.dim() || m.cols() != model.dim())
    throw Error(Errc::InvalidInput, "a genus-" + std::to_string(g) + " form matrix is " + std::to_string(model.dim()) +
                                        "x" + std::to_string(model.dim()));
  return model;
}

/// {"g": g, "ring": "laurent", "rows": [[poly, ...], ...]}. The matrix must
/// preserve the form. A cyclic ring is accepted by reducing Laurent entries.
inline LaurentFormMatrix laurent_form_from_json(const json& j, int default_g = 0) {
  auto entries = laurent_matrix_from_json(j);
  const auto model = model_for(entries, j, default_g);
  if (j.is_object() && j.contains("ring") && !(j.at("ring").is_string() && j.at("ring") == "laurent"))
    throw Error(Errc::InvalidInput, "expected a matrix over the Laurent ring");
  return LaurentFormMatrix::checked(model, LaurentRing{}, std::move(entries));
}

/// Accepts a Laurent form matrix with "ring": {"cyclic": q} (entries reduced
/// mod q) or explicit Z[Z/q] entries.
inline CyclicFormMatrix cyclic_form_from_json(const json& j, std::int64_t q_override = 0) {
  if (!j.is_object() || !j.contains("rows")) throw Error(Errc::InvalidInput, "a form matrix object needs \"rows\"");
  std::int64_t q = q_override;
  if (!q && j.contains("ring") && j.at("ring").is_object()) q = j.at("ring").at("cyclic").get<std::int64_t>();
  if (q < 1) throw Error(Errc::InvalidModulus, "cyclic form matrix needs q >= 1");
  const json& rows = j.at("rows");
  const bool explicit_cyc = rows.is_array() && !rows.empty() && rows[0].is_array() && !rows[0].empty() &&
                            rows[0][0].is_object();
  Matrix<CycElem> entries;
  if (explicit_cyc) {
    entries = matrix_from_json(rows, [](const json& e) { return cyc_from_json(e); }, CycElem::zero(q));
    for (const auto& e : entries.data())
      if (e.modulus() != q) throw Error(Errc::InvalidModulus, "entry modulus differs from the matrix ring");
  } else {
    entries = reduce_mod_q(laurent_matrix_from_json(rows), q);
  }
  const int g = j.contains("g") ? j.at("g").get<int>() : static_cast<int>(entries.rows() / 2) + 1;
  const SurfaceModel model(g);
  if (entries.rows() != model.dim() || entries.cols() != model.dim())
    throw Error(Errc::InvalidInput, "matrix size does not match the genus");
  return CyclicFormMatrix::checked(model, CyclicRing{q}, std::move(entries));
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({real_to_json(m(i, j).real()), real_to_json(m(i, j).imag())});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json complex_to_json(std::complex<double> z) { return {real_to_json(z.real()), real_to_json(z.imag())}; }

// ---------------------------------------------------------------------------
// Results

inline json to_json(const MahlerResult& r) {
  json roots = json::array();
  for (const auto& z : r.roots) roots.push_back(complex_to_json(z));
  return {{"log_measure", r.log_measure},
          {"measure", real_to_json(std::exp(r.log_measure))},
          {"method", to_string(r.method)},
          {"leading_coeff", integer_to_json(r.leading_coeff)},
          {"roots", roots}};
}

inline json to_json(const std::optional<KroneckerFactorization>& f) {
  if (!f) return {{"cyclotomic_product", false}};
  return {{"cyclotomic_product", true},
          {"k_exponent", f->k_exponent},
          {"sign", f->sign},
          {"cyclotomic_indices", f->cyclotomic_indices}};
}

inline std::string to_string(KAlphaReason r) {
  switch (r) {
    case KAlphaReason::forced: return "forced";
    case KAlphaReason::small_totient: return "small_totient";
    case KAlphaReason::large_coefficients: return "large_coefficients";
  }
  return "unknown";
}

inline json to_json(const KAlphaSet& k) {
  json members = json::array();
  for (const auto& [m, reason] : k.members) members.push_back({{"m", m}, {"reason", to_string(reason)}});
  return {{"alpha", k.alpha}, {"m_max", k.m_max}, {"members", members}, {"tail_assumed", k.tail_assumed}};
}

inline json to_json(const ConstraintVerdict& v) {
  json out = {{"verdict", to_string(v.kind)}};
  if (v.kind == VerdictKind::cyclotomic_hit) out["k"] = v.k;
  if (v.kind == VerdictKind::small_everywhere || v.kind == VerdictKind::bound_exceeded) {
    out["max_log_abs"] = real_to_json(v.max_log_abs);
    out["log_bound"] = real_to_json(v.log_bound);
  }
  return out;
}

inline json to_json(const TorsionReport& r) {
  json factors = json::array();
  for (const auto& d : r.torsion_factors) factors.push_back(to_decimal(d));
  return {{"q", r.q},
          {"torsion_order", to_decimal(r.torsion_order)},
          {"betti", r.betti},
          {"log_torsion_over_q", r.log_torsion_over_q},
          {"free_offset", r.free_offset},
          {"torsion_factors", factors}};
}

inline json to_json(const GrowthScan& s, std::size_t window = 20) {
  json out = {{"det", to_json(s.det)}, {"degenerate", s.degenerate}};
  if (s.mahler) {
    out["mahler_measure"] = s.mahler->log_measure;
    out["mahler_method"] = to_string(s.mahler->method);
    if (!s.reports.empty()) {
      out["last_deviation"] = real_to_json(s.deviations().back());
      out["window"] = window;
      out["last_window_mean_abs_deviation"] = real_to_json(s.window_deviation(s.reports.back().q, window));
      json cps = json::array();
      for (const auto& [q, d] : s.deviation_checkpoints(5, window)) cps.push_back({{"q", q}, {"mean_abs_deviation", real_to_json(d)}});
      out["deviation_checkpoints"] = cps;
    }
  } else {
    out["mahler_measure"] = nullptr;
  }
  json reports = json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  out["reports"] = reports;
  return out;
}

inline json to_json(const HeegaardHomology& h) {
  json factors = json::array();
  for (const auto& d : h.torsion_factors) factors.push_back(to_decimal(d));
  json out = {{"g", h.g},
              {"betti", h.betti},
              {"torsion", to_decimal(h.torsion_order)},
              {"factors", factors},
              {"det_b", to_decimal(h.det_b)}};
  out["det_agrees"] = h.det_agrees ? json(*h.det_agrees) : json(nullptr);
  return out;
}

inline json to_json(const WalkReport& r) {
  json mahler = json::array();
  for (std::size_t k = 0; k < r.schedule.size(); ++k) {
    const auto& b = r.mahler[k];
    mahler.push_back({{"n", r.schedule[k]},
                      {"fraction_mahler_positive", b.fraction_positive()},
                      {"stderr", b.stderr_positive()},
                      {"positive", b.positive},
                      {"zero_det", b.zero_det},
                      {"cyclotomic_hit", b.cyclotomic_hit},
                      {"small_everywhere", b.small_everywhere},
                      {"bound_exceeded", b.bound_exceeded},
                      {"total", b.total},
                      {"mean_det_span", b.mean_det_span},
                      {"max_det_span", b.max_det_span},
                      {"det_span_bound", b.det_span_bound}});
  }
  json series = json::array();
  for (const auto& s : r.series) {
    json points = json::array();
    for (const auto& p : s.points)
      points.push_back({{"n", p.n},
                        {"count", p.count},
                        {"mean", real_to_json(p.mean)},
                        {"variance", real_to_json(p.variance)},
                        {"fraction_below", p.fraction_below}});
    series.push_back({{"q", s.q},
                      {"root_index", s.root_index},
                      {"lambda_hat", real_to_json(s.lambda_hat)},
                      {"degenerate_trials", s.degenerate_trials},
                      {"exterior_path", s.wedge_path ? "wedge" : "frame"},
                      {"points", points}});
  }
  return {{"schema", kSchemaVersion},
          {"schedule", r.schedule},
          {"deltas", r.deltas},
          {"n_trials", r.n_trials},
          {"d_mu", r.d_mu},
          {"inverses_present", r.inverses_present},
          {"generators_without_inverse", r.generators_without_inverse},
          {"k_alpha", r.k_alpha},
          {"k_alpha_tail_assumed", r.k_alpha_tail_assumed},
          {"fraction_constraint_violations", r.fraction_constraint_violations()},
          {"mahler", mahler},
          {"lyapunov", series}};
}

inline json to_json(const ProximalityReport& p) {
  json out = {{"words_examined", p.words_examined}, {"budget_exhausted", p.budget_exhausted}, {"max_length", p.max_length}};
  if (p.witness)
    out["witness"] = {{"word", p.witness->word}, {"gap_ratio", real_to_json(p.witness->gap_ratio)}};
  else
    out["witness"] = nullptr;
  return out;
}

// ---------------------------------------------------------------------------
// Walk configuration

/// Parses a walk configuration. "generators" is either "torelli_like" (the
/// bundled set for g = 3 or 4) or a list of form matrices; probabilities are
/// rational strings such as "1/4" and default to uniform.
inline WalkConfig walk_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidInput, "walk config must be a JSON object");
  static const std::vector<std::string> known{"g",      "generators",    "probabilities", "n_steps",   "n_trials",
                                              "seed",   "q_list",        "root_index",    "alpha",     "k_alpha_m_max",
                                              "deltas", "trim_fraction", "probe_max_length", "probe_budget", "twist",
                                              "schema"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw Error(Errc::InvalidInput, "unknown walk config key '" + key + "'");
  const int g = j.value("g", 3);
  std::vector<LaurentFormMatrix> gens;
  const json& gj = j.contains("generators") ? j.at("generators") : json("torelli_like");
  if (gj.is_string()) {
    if (gj != "torelli_like") throw Error(Errc::InvalidInput, "unknown bundled generator set " + gj.dump());
    gens = torelli_like_generators(g);
  } else {
    for (const auto& m : gj) gens.push_back(laurent_form_from_json(m, g));
  }
  WalkConfig c = uniform_config(g, std::move(gens));
  if (j.contains("probabilities")) {
    c.probabilities.clear();
    for (const auto& p : j.at("probabilities")) {
      if (!p.is_string() && !p.is_number_integer())
        throw Error(Errc::InvalidInput, "probabilities are rational strings like \"1/3\"");
      mpq_class v;
      const std::string text = p.is_string() ? p.get<std::string>() : std::to_string(p.get<std::int64_t>());
      if (v.set_str(text, 10) != 0) throw Error(Errc::InvalidInput, "bad probability '" + text + "'");
      v.canonicalize();
      c.probabilities.push_back(v);
    }
  }
  c.n_steps = j.value("n_steps", c.n_steps);
  c.n_trials = j.value("n_trials", c.n_trials);
  c.master_seed = j.value("seed", c.master_seed);
  c.q_list = j.value("q_list", c.q_list);
  c.root_index = j.value("root_index", c.root_index);
  c.alpha = j.value("alpha", c.alpha);
  c.k_alpha_m_max = j.value("k_alpha_m_max", c.k_alpha_m_max);
  c.deltas = j.value("deltas", c.deltas);
  c.trim_fraction = j.value("trim_fraction", c.trim_fraction);
  c.probe_max_length = j.value("probe_max_length", c.probe_max_length);
  c.probe_budget = j.value("probe_budget", c.probe_budget);
  if (j.contains("twist") && !j.at("twist").is_null())
    c.twist = UnitTwist{j.at("twist").value("seed", std::uint64_t{0}), j.at("twist").value("max_abs", std::int64_t{3})};
  validate(c);
  return c;
}

}  // namespace torsionlab::json_io

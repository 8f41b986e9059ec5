#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torsionlab/error.hpp"
#include "torsionlab/exterior.hpp"
#include "torsionlab/form.hpp"
#include "torsionlab/mahler.hpp"
#include "torsionlab/parallel.hpp"
#include "torsionlab/rng.hpp"

namespace torsionlab {

/// Multiply each sampled letter by t^k, k uniform in [-max_abs, max_abs],
/// drawn from a stream of its own.
struct UnitTwist {
  std::uint64_t seed = 0;
  std::int64_t max_abs = 3;
};

struct WalkConfig {
  int g = 3;
  std::vector<LaurentFormMatrix> generators;
  std::vector<mpq_class> probabilities;
  std::int64_t n_steps = 64;
  std::int64_t n_trials = 1000;
  std::uint64_t master_seed = 1;
  std::vector<std::int64_t> q_list{3};
  std::int64_t root_index = 1;
  double alpha = 1.0;
  std::int64_t k_alpha_m_max = 200;
  std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double trim_fraction = 0.1;  ///< cut from each end for the trimmed-mean Lyapunov estimate
  int probe_max_length = 8;
  std::size_t probe_budget = 50000;  ///< words examined before the probe gives up
  std::size_t threads = 0;
  std::optional<UnitTwist> twist;

  SurfaceModel model() const { return SurfaceModel(g); }
};

inline WalkConfig uniform_config(int g, std::vector<LaurentFormMatrix> generators) {
  WalkConfig c;
  c.g = g;
  c.probabilities.assign(generators.size(), mpq_class(1, static_cast<unsigned long>(generators.size())));
  c.generators = std::move(generators);
  return c;
}

/// Rejects malformed configurations; probabilities must be positive and sum
/// to exactly 1 as rationals.
inline void validate(const WalkConfig& c) {
  const SurfaceModel model(c.g);
  if (c.generators.empty()) throw Error(Errc::EmptyGeneratorSet, "walk needs at least one generator");
  if (c.probabilities.size() != c.generators.size())
    throw Error(Errc::InvalidInput, "one probability per generator is required");
  mpq_class total(0);
  for (const auto& p : c.probabilities) {
    if (p <= 0) throw Error(Errc::InvalidInput, "probabilities must be positive");
    total += p;
  }
  if (total != 1) throw Error(Errc::InvalidInput, "probabilities must sum to 1, got " + total.get_str());
  for (const auto& gen : c.generators) {
    if (!(gen.model == model)) throw Error(Errc::InvalidInput, "generator genus differs from the config");
    if (!gen.form_preserved()) throw Error(Errc::InvalidInput, "generator does not preserve the form");
  }
  if (c.n_steps < 1 || c.n_trials < 1) throw Error(Errc::InvalidInput, "n_steps and n_trials must be positive");
  for (auto q : c.q_list) {
    if (q < 3) throw Error(Errc::InvalidModulus, "walk statistics need q >= 3");
    check_primitive(q, c.root_index);
  }
  if (c.twist && c.twist->max_abs < 0) throw Error(Errc::InvalidInput, "twist range must be nonnegative");
}

/// n in {2, 4, 8, ...} up to n_steps, with n_steps itself appended.
inline std::vector<std::int64_t> walk_schedule(std::int64_t n_steps) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 2; n <= n_steps; n *= 2) out.push_back(n);
  if (out.empty() || out.back() != n_steps) out.push_back(n_steps);
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

/// Letter distribution with exact rational weights.
class LetterSampler {
 public:
  explicit LetterSampler(const std::vector<mpq_class>& probabilities) {
    mpz_class denom(1);
    for (const auto& p : probabilities) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), p.get_den_mpz_t());
    if (!denom.fits_ulong_p()) throw Error(Errc::InvalidInput, "probability denominators are too large");
    denom_ = denom.get_ui();
    std::uint64_t acc = 0;
    for (const auto& p : probabilities) {
      const mpz_class num = p.get_num() * (denom / p.get_den());
      acc += num.get_ui();
      cumulative_.push_back(acc);
    }
  }

  std::size_t draw(TrialStream& s) const {
    const std::uint64_t x = s.below(denom_);
    return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), x) - cumulative_.begin());
  }

 private:
  std::uint64_t denom_ = 1;
  std::vector<std::uint64_t> cumulative_;
};

enum : std::uint32_t { kLetterStream = 0, kTwistStream = 1 };

/// Letter indices i_1, ..., i_n of trial `trial_index`; the word is b_n ... b_1.
inline std::vector<std::size_t> sample_letters(const WalkConfig& c, std::int64_t trial_index, std::int64_t n) {
  const LetterSampler sampler(c.probabilities);
  TrialStream s(c.master_seed, static_cast<std::uint64_t>(trial_index), kLetterStream);
  std::vector<std::size_t> out(static_cast<std::size_t>(n));
  for (auto& i : out) i = sampler.draw(s);
  return out;
}

/// Unit exponents attached to the letters (all zero without a twist).
inline std::vector<std::int64_t> sample_twists(const WalkConfig& c, std::int64_t trial_index, std::int64_t n) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(n), 0);
  if (!c.twist) return out;
  TrialStream s(c.twist->seed, static_cast<std::uint64_t>(trial_index), kTwistStream);
  for (auto& k : out) k = s.symmetric(c.twist->max_abs);
  return out;
}

/// g * w with shortcuts for zero and +-1 entries of g.
inline LaurentFormMatrix left_multiply(const LaurentFormMatrix& g, const LaurentFormMatrix& w) {
  const std::size_t n = g.model.dim();
  const LaurentPoly one = LaurentPoly::constant(1);
  const LaurentPoly minus_one = LaurentPoly::constant(-1);
  Matrix<LaurentPoly> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const LaurentPoly& gik = g(i, k);
      if (gik.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const LaurentPoly& wkj = w(k, j);
        if (wkj.is_zero()) continue;
        if (gik == one)
          out(i, j) += wkj;
        else if (gik == minus_one)
          out(i, j) -= wkj;
        else
          out(i, j) += gik * wkj;
      }
    }
  return {g.model, g.ring, std::move(out)};
}

/// b_n ... b_1 for trial `trial_index`, exactly, including unit twists.
inline LaurentFormMatrix sample_word(const WalkConfig& c, std::int64_t trial_index, std::int64_t n) {
  if (n > c.n_steps) throw Error(Errc::InvalidInput, "n exceeds n_steps");
  const auto letters = sample_letters(c, trial_index, n);
  const auto twists = sample_twists(c, trial_index, n);
  auto w = LaurentFormMatrix::identity(c.model(), LaurentRing{});
  std::int64_t unit = 0;
  for (std::size_t s = 0; s < letters.size(); ++s) {
    w = left_multiply(c.generators[letters[s]], w);
    unit += twists[s];
  }
  return unit == 0 ? w : w.times_unit(unit);
}

// ---------------------------------------------------------------------------
// Exterior-power propagation of e = a~_1 ^ ... ^ a~_{g-1}

inline constexpr std::size_t kMaxWedgeDimension = 70;

/// Propagates the exterior vector of the a-block under complex letters,
/// renormalizing at every step and accumulating the log norm separately.
/// Small genera use the full wedge^{g-1} matrices; larger ones propagate an
/// orthonormal (g-1)-frame and read norms off the R factors, which yields the
/// same quantities without forming the exterior power.
class ExteriorPropagator {
 public:
  ExteriorPropagator(const std::vector<Eigen::MatrixXcd>& letters, int g, bool force_frame = false)
      : marking_(g), letters_(letters) {
    use_wedge_ = !force_frame && marking_.dimension() <= kMaxWedgeDimension;
    if (use_wedge_)
      for (const auto& x : letters_) wedge_.push_back(exterior_power(x, marking_));
    reset();
  }

  bool uses_wedge() const { return use_wedge_; }

  void reset() {
    log_norm_ = 0;
    degenerate_ = false;
    const auto h = static_cast<Eigen::Index>(marking_.g - 1);
    if (use_wedge_)
      vec_ = marking_.e();
    else
      frame_ = Eigen::MatrixXcd::Identity(2 * h, h);
  }

  /// Applies letter i on the left; returns false once the vector degenerates.
  bool step(std::size_t i) {
    if (degenerate_) return false;
    if (use_wedge_) {
      vec_ = wedge_[i] * vec_;
      const double n = vec_.norm();
      if (!(n > 0) || !std::isfinite(n)) return fail();
      vec_ /= n;
      log_norm_ += std::log(n);
    } else {
      frame_ = letters_[i] * frame_;
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(frame_);
      const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
      const auto h = frame_.cols();
      double add = 0;
      for (Eigen::Index k = 0; k < h; ++k) {
        const double d = std::abs(r(k, k));
        if (!(d > 0) || !std::isfinite(d)) return fail();
        add += std::log(d);
      }
      frame_ = qr.householderQ() * Eigen::MatrixXcd::Identity(frame_.rows(), h);
      log_norm_ += add;
    }
    return true;
  }

  bool degenerate() const { return degenerate_; }
  /// log ||wedge(product) e||
  double log_norm() const { return log_norm_; }
  /// |(wedge(product) e, f)| / ||wedge(product) e||
  double f_ratio() const {
    if (use_wedge_) return std::abs(vec_(static_cast<Eigen::Index>(marking_.f_index)));
    const auto h = frame_.cols();
    return std::abs(frame_.bottomRows(h).determinant());
  }

 private:
  bool fail() {
    degenerate_ = true;
    return false;
  }

  ExteriorMarking marking_;
  std::vector<Eigen::MatrixXcd> letters_;
  std::vector<Eigen::MatrixXcd> wedge_;
  bool use_wedge_ = true;
  Eigen::VectorXcd vec_;
  Eigen::MatrixXcd frame_;
  double log_norm_ = 0;
  bool degenerate_ = false;
};

/// Complex letters iota(canonical lift of each generator) at level q. Unit
/// twists only multiply these by roots of unity, which no reported modulus
/// sees, so the propagation always runs on the canonical lifts.
inline std::vector<Eigen::MatrixXcd> complex_letters(const WalkConfig& c, std::int64_t q) {
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& gen : c.generators) out.push_back(iota(canonical_lift(gen).entries, q, c.root_index));
  return out;
}

// ---------------------------------------------------------------------------
// Report

struct MahlerBins {
  std::int64_t positive = 0;
  std::int64_t zero_det = 0;  ///< det B = 0: degenerate, never Mahler-positive
  std::int64_t cyclotomic_hit = 0;
  std::int64_t small_everywhere = 0;
  std::int64_t bound_exceeded = 0;
  std::int64_t total = 0;
  std::int64_t max_det_span = 0;
  double mean_det_span = 0;
  std::int64_t det_span_bound = 0;  ///< (g-1) d_mu n

  double fraction_positive() const { return total ? static_cast<double>(positive) / static_cast<double>(total) : 0; }
  double stderr_positive() const {
    if (!total) return 0;
    const double p = fraction_positive();
    return std::sqrt(p * (1 - p) / static_cast<double>(total));
  }
};

struct LyapunovPoint {
  std::int64_t n = 0;
  std::int64_t count = 0;
  double mean = 0;
  double variance = 0;  ///< unbiased trial variance of L_n
  std::vector<double> fraction_below;  ///< per delta, of |(w e, f)| / ||w e||
};

struct QSeries {
  std::int64_t q = 0;
  std::int64_t root_index = 1;
  std::vector<LyapunovPoint> points;
  double lambda_hat = 0;  ///< trimmed mean of L_{n_steps}
  std::int64_t degenerate_trials = 0;
  bool wedge_path = true;
};

struct WalkReport {
  std::vector<std::int64_t> schedule;
  std::vector<double> deltas;
  std::int64_t n_trials = 0;
  std::int64_t d_mu = 0;
  bool inverses_present = false;
  std::vector<std::size_t> generators_without_inverse;
  std::vector<std::int64_t> k_alpha;
  bool k_alpha_tail_assumed = true;
  std::vector<MahlerBins> mahler;  ///< per schedule entry
  std::vector<QSeries> series;     ///< per q in q_list

  /// bound_exceeded over all zero-measure determinants with det != 0.
  double fraction_constraint_violations() const {
    std::int64_t stragglers = 0, bad = 0;
    for (const auto& b : mahler) {
      stragglers += b.cyclotomic_hit + b.small_everywhere + b.bound_exceeded;
      bad += b.bound_exceeded;
    }
    return stragglers ? static_cast<double>(bad) / static_cast<double>(stragglers) : 0;
  }
};

/// Every generator has an inverse in the set up to a unit.
inline std::vector<std::size_t> generators_without_inverse(const std::vector<LaurentFormMatrix>& gens) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < gens.size() && !found; ++j) {
      const auto prod = canonical_lift(gens[i] * gens[j]);
      found = prod == LaurentFormMatrix::identity(prod.model, LaurentRing{});
    }
    if (!found) out.push_back(i);
  }
  return out;
}

namespace detail {

struct TrialMahler {
  enum Kind { positive, zero_det, cyclotomic_hit, small_everywhere, bound_exceeded } kind = positive;
  std::int64_t det_span = 0;
};

struct TrialResult {
  std::vector<TrialMahler> mahler;                  // per schedule entry
  std::vector<std::vector<double>> lyapunov;        // [q][schedule]
  std::vector<std::vector<double>> ratio;           // [q][schedule]
  std::vector<bool> degenerate;                     // per q
};

inline double trimmed_mean(std::vector<double> v, double trim) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const auto cut = static_cast<std::size_t>(std::floor(trim * static_cast<double>(v.size())));
  double sum = 0;
  std::size_t count = 0;
  for (std::size_t k = cut; k + cut < v.size(); ++k) {
    sum += v[k];
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0;
}

}  // namespace detail

/// Runs all trials. Each trial samples one letter sequence, multiplies it out
/// exactly for the determinant statistics, and propagates the exterior vector
/// at every q in q_list. Aggregation is in trial order, so the report does not
/// depend on the number of workers.
inline WalkReport run_walk(const WalkConfig& c) {
  validate(c);
  const SurfaceModel model = c.model();
  WalkReport report;
  report.schedule = walk_schedule(c.n_steps);
  report.deltas = c.deltas;
  report.n_trials = c.n_trials;

  std::vector<LaurentFormMatrix> lifted;
  for (const auto& gen : c.generators) lifted.push_back(canonical_lift(gen));
  report.d_mu = std::max<std::int64_t>(1, degree_bound(lifted));
  report.generators_without_inverse = generators_without_inverse(c.generators);
  report.inverses_present = report.generators_without_inverse.empty();

  const auto k_alpha = build_K_alpha(c.alpha, c.k_alpha_m_max);
  report.k_alpha = k_alpha.list();
  report.k_alpha_tail_assumed = k_alpha.tail_assumed;
  ConstraintParams params;
  params.alpha = c.alpha;
  params.K = report.k_alpha;
  params.n_scan_max = c.k_alpha_m_max;
  params.d_mu = report.d_mu;
  params.g = c.g;

  std::vector<std::vector<Eigen::MatrixXcd>> letters_by_q;
  for (auto q : c.q_list) letters_by_q.push_back(complex_letters(c, q));

  const std::size_t ns = report.schedule.size();
  const std::size_t nq = c.q_list.size();
  std::vector<detail::TrialResult> trials(static_cast<std::size_t>(c.n_trials));

  parallel_for(trials.size(), c.threads, [&](std::size_t trial) {
    const auto letters = sample_letters(c, static_cast<std::int64_t>(trial), c.n_steps);
    const auto twists = sample_twists(c, static_cast<std::int64_t>(trial), c.n_steps);
    auto& out = trials[trial];

    // exact determinant statistics on the lifted word
    auto w = LaurentFormMatrix::identity(model, LaurentRing{});
    std::int64_t unit = 0;
    std::size_t next = 0;
    for (std::int64_t s = 1; s <= c.n_steps; ++s) {
      const auto idx = static_cast<std::size_t>(s - 1);
      w = left_multiply(lifted[letters[idx]], w);
      unit += twists[idx];
      if (next >= ns || report.schedule[next] != s) continue;
      const LaurentPoly det = determinant(bottom_left_block(w)).shifted(unit * static_cast<std::int64_t>(model.half()));
      detail::TrialMahler tm;
      tm.det_span = det.span();
      if (det.span() > det_degree_bound(params, s))
        throw Error(Errc::DegreeBoundViolated, "det B of a sampled word exceeds (g-1) d_mu n");
      if (det.is_zero()) {
        tm.kind = detail::TrialMahler::zero_det;
      } else if (!kronecker_zero_test(det)) {
        tm.kind = detail::TrialMahler::positive;
      } else {
        const auto v = constraint_check(det, params, s);
        tm.kind = v.kind == VerdictKind::cyclotomic_hit     ? detail::TrialMahler::cyclotomic_hit
                  : v.kind == VerdictKind::small_everywhere ? detail::TrialMahler::small_everywhere
                                                            : detail::TrialMahler::bound_exceeded;
      }
      out.mahler.push_back(tm);
      ++next;
    }

    // complex propagation per q
    out.lyapunov.assign(nq, std::vector<double>(ns, 0));
    out.ratio.assign(nq, std::vector<double>(ns, 0));
    out.degenerate.assign(nq, false);
    for (std::size_t qi = 0; qi < nq; ++qi) {
      ExteriorPropagator prop(letters_by_q[qi], c.g);
      std::size_t k = 0;
      for (std::int64_t s = 1; s <= c.n_steps && k < ns; ++s) {
        if (!prop.step(letters[static_cast<std::size_t>(s - 1)])) break;
        if (report.schedule[k] != s) continue;
        out.lyapunov[qi][k] = prop.log_norm() / static_cast<double>(s);
        out.ratio[qi][k] = prop.f_ratio();
        ++k;
      }
      out.degenerate[qi] = prop.degenerate();
    }
  });

  report.mahler.resize(ns);
  for (std::size_t k = 0; k < ns; ++k) {
    auto& b = report.mahler[k];
    b.det_span_bound = det_degree_bound(params, report.schedule[k]);
    double span_sum = 0;
    for (const auto& t : trials) {
      const auto& tm = t.mahler[k];
      ++b.total;
      span_sum += static_cast<double>(tm.det_span);
      b.max_det_span = std::max(b.max_det_span, tm.det_span);
      switch (tm.kind) {
        case detail::TrialMahler::positive: ++b.positive; break;
        case detail::TrialMahler::zero_det: ++b.zero_det; break;
        case detail::TrialMahler::cyclotomic_hit: ++b.cyclotomic_hit; break;
        case detail::TrialMahler::small_everywhere: ++b.small_everywhere; break;
        case detail::TrialMahler::bound_exceeded: ++b.bound_exceeded; break;
      }
    }
    b.mean_det_span = span_sum / static_cast<double>(b.total);
  }

  for (std::size_t qi = 0; qi < nq; ++qi) {
    QSeries qs;
    qs.q = c.q_list[qi];
    qs.root_index = c.root_index;
    qs.wedge_path = ExteriorMarking(c.g).dimension() <= kMaxWedgeDimension;
    for (const auto& t : trials)
      if (t.degenerate[qi]) ++qs.degenerate_trials;
    for (std::size_t k = 0; k < ns; ++k) {
      LyapunovPoint p;
      p.n = report.schedule[k];
      std::vector<std::int64_t> below(c.deltas.size(), 0);
      double sum = 0;
      for (const auto& t : trials) {
        if (t.degenerate[qi]) continue;
        ++p.count;
        sum += t.lyapunov[qi][k];
        for (std::size_t d = 0; d < c.deltas.size(); ++d)
          if (t.ratio[qi][k] < c.deltas[d]) ++below[d];
      }
      if (p.count) p.mean = sum / static_cast<double>(p.count);
      double ss = 0;
      for (const auto& t : trials) {
        if (t.degenerate[qi]) continue;
        const double dv = t.lyapunov[qi][k] - p.mean;
        ss += dv * dv;
      }
      p.variance = p.count > 1 ? ss / static_cast<double>(p.count - 1) : 0;
      for (auto b : below) p.fraction_below.push_back(p.count ? static_cast<double>(b) / static_cast<double>(p.count) : 0);
      qs.points.push_back(std::move(p));
    }
    std::vector<double> last;
    for (const auto& t : trials)
      if (!t.degenerate[qi]) last.push_back(t.lyapunov[qi][ns - 1]);
    qs.lambda_hat = detail::trimmed_mean(std::move(last), c.trim_fraction);
    report.series.push_back(std::move(qs));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Proximality

struct ProximalityWitness {
  std::vector<std::size_t> word;  ///< letter indices, applied first to last
  double gap_ratio = 0;           ///< |lambda_1| / |lambda_2| on the exterior power
};

struct ProximalityReport {
  std::optional<ProximalityWitness> witness;
  std::size_t words_examined = 0;
  bool budget_exhausted = false;
  int max_length = 0;
};

/// Modulus ratio of the two largest eigenvalues; infinity for a 1x1 input.
inline double eigenvalue_gap(const Eigen::MatrixXcd& m) {
  if (m.rows() < 2) return INFINITY;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  std::vector<double> mods;
  for (Eigen::Index k = 0; k < m.rows(); ++k) mods.push_back(std::abs(solver.eigenvalues()(k)));
  std::sort(mods.rbegin(), mods.rend());
  if (mods[1] == 0) return mods[0] > 0 ? INFINITY : 1.0;
  return mods[0] / mods[1];
}

/// Breadth-first search over words of length <= max_length for one whose
/// exterior-power image has a dominant eigenvalue gap above `threshold`.
inline ProximalityReport proximality_probe(const std::vector<Eigen::MatrixXcd>& letters, int g, int max_length = 8,
                                           std::size_t budget = 50000, double threshold = 1 + 1e-3) {
  const ExteriorMarking marking(g);
  std::vector<Eigen::MatrixXcd> wedge;
  for (const auto& x : letters) wedge.push_back(exterior_power(x, marking));
  ProximalityReport out;
  out.max_length = max_length;
  const std::size_t k = wedge.size();
  if (k == 0) return out;
  std::vector<std::size_t> word;
  for (int len = 1; len <= max_length; ++len) {
    word.assign(static_cast<std::size_t>(len), 0);
    while (true) {
      if (out.words_examined >= budget) {
        out.budget_exhausted = true;
        return out;
      }
      ++out.words_examined;
      Eigen::MatrixXcd prod = wedge[word[0]];
      for (std::size_t s = 1; s < word.size(); ++s) prod = wedge[word[s]] * prod;
      const double gap = eigenvalue_gap(prod);
      if (gap > threshold) {
        out.witness = ProximalityWitness{word, gap};
        return out;
      }
      std::size_t pos = 0;
      while (pos < word.size() && ++word[pos] == k) word[pos++] = 0;
      if (pos == word.size()) break;
    }
  }
  return out;
}

struct ProbeResult {
  std::int64_t q = 0;
  ProximalityReport report;
};

inline std::vector<ProbeResult> proximality_probe(const WalkConfig& c) {
  validate(c);
  std::vector<ProbeResult> out;
  for (auto q : c.q_list)
    out.push_back({q, proximality_probe(complex_letters(c, q), c.g, c.probe_max_length, c.probe_budget)});
  return out;
}

// ---------------------------------------------------------------------------
// Bundled generator sets

/// Transvections T(x) = x + Phi(x, v) r v with r = t + t^-1 - 2 and their
/// inverses (r -> -r). r has augmentation 0, so every generator acts trivially
/// on the homology of the base surface.
inline std::vector<LaurentFormMatrix> torelli_like_generators(int g) {
  if (g != 3 && g != 4) throw Error(Errc::InvalidInput, "bundled generator sets exist for g = 3 and g = 4");
  const SurfaceModel model(g);
  const LaurentRing ring;
  const std::size_t h = model.half();
  const LaurentPoly r = LaurentPoly::from_coeffs({1, -2, 1}, -1);
  auto a = [&](std::size_t i) { return basis_vector(model, ring, model.a_index(i)); };
  auto b = [&](std::size_t i) { return basis_vector(model, ring, model.b_index(i)); };
  auto add = [](Vec<LaurentRing> x, const Vec<LaurentRing>& y, const LaurentPoly& c) {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += c * y[k];
    return x;
  };
  const LaurentPoly one = LaurentPoly::constant(1);
  const LaurentPoly t = LaurentPoly::t(1);

  std::vector<Vec<LaurentRing>> directions;
  for (std::size_t i = 0; i < h; ++i) {
    directions.push_back(a(i));
    directions.push_back(b(i));
  }
  for (std::size_t i = 0; i + 1 < h; ++i) {
    directions.push_back(add(a(i), a(i + 1), one));
    directions.push_back(add(b(i), b(i + 1), one));
    directions.push_back(add(a(i), b(i + 1), t));
  }
  directions.push_back(add(a(h - 1), b(0), t));

  std::vector<LaurentFormMatrix> out;
  for (const auto& v : directions) {
    out.push_back(transvection(model, ring, v, r, true));
    out.push_back(transvection(model, ring, v, -r, true));
  }
  return out;
}

inline WalkConfig bundled_config(int g) { return uniform_config(g, torelli_like_generators(g)); }

}  // namespace torsionlab

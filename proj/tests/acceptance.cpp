// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qkd/cli.hpp"
#include "qkd/mcharness.hpp"
#include "qkd/optimize.hpp"

using namespace qkd;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back((cond ? "  ok   " : "  FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// |freq - p| within 4 standard errors of a binomial proportion over n trials.
bool within_4se(double freq, double p, double n) { return std::abs(freq - p) <= 4.0 * std::sqrt(p * (1 - p) / n); }

std::string proportion_note(const char* name, double freq, double p, double n) {
  return fmt("%s: %.6f vs %.6f (4 SE = %.6f, n = %.0f)", name, freq, p, 4.0 * std::sqrt(p * (1 - p) / n), n);
}

SystemParams lossless_noiseless() {
  SystemParams p;
  p.length_km = 0.0;
  p.gamma_b = 1.0;
  p.eta = 1.0;
  p.p_d = 0.0;
  p.q_opt = 0.0;
  return p;
}

Check fig2_distances() {
  Check c;
  const auto t0 = Clock::now();
  const SystemParams base;  // alpha 0.2, gamma_b 0.5, eta 0.1, p_d 1e-5, q_opt 0.005
  const auto bb = secure_distance(Protocol::BB84, base);
  const auto qt = secure_distance(Protocol::Qutrit, base);
  const double dt = seconds_since(t0);
  c.expect(bb.status == DistanceStatus::Ok && std::abs(bb.km - 52.0) <= 3.0,
           fmt("bb84 secure distance %.2f km, target 52 +- 3", bb.km));
  c.expect(qt.status == DistanceStatus::Ok && std::abs(qt.km - 69.0) <= 3.0,
           fmt("qutrit secure distance %.2f km, target 69 +- 3", qt.km));
  c.expect(qt.km - bb.km >= 10.0, fmt("gap %.2f km, target >= 10", qt.km - bb.km));
  c.expect(dt < 60.0, fmt("runtime %.2f s", dt));

  // Informational only: the attenuation that best fits the reference figure.
  SystemParams low = base;
  low.alpha_db_per_km = 0.14;
  c.notes.push_back(fmt("  info alpha 0.14 dB/km: bb84 %.2f km, qutrit %.2f km",
                        secure_distance(Protocol::BB84, low).km, secure_distance(Protocol::Qutrit, low).km));
  return c;
}

Check crossover() {
  Check c;
  const auto t0 = Clock::now();
  const SystemParams base;
  const auto grid = length_grid(0.0, 80.0, 1.0);
  const auto bb = curve(Protocol::BB84, base, grid, 4);
  const auto qt = curve(Protocol::Qutrit, base, grid, 4);

  std::size_t first_cross = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (qt[i].k_opt >= bb[i].k_opt) {
      first_cross = i;
      break;
    }
  }
  bool dominates = first_cross < grid.size();
  for (std::size_t i = first_cross; i < grid.size(); ++i) dominates = dominates && qt[i].k_opt >= bb[i].k_opt;
  bool covers = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (bb[i].k_opt > 0.0 && !(qt[i].k_opt > 0.0)) covers = false;
  }
  c.expect(dominates, fmt("qutrit >= bb84 from the first crossing at %.0f km onward",
                          first_cross < grid.size() ? grid[first_cross] : -1.0));
  c.expect(covers, "qutrit positive wherever bb84 is positive");
  const double dt = seconds_since(t0);
  c.expect(dt < 60.0, fmt("runtime %.2f s", dt));
  return c;
}

Check encoding_oracle() {
  Check c;
  const auto t0 = Clock::now();
  double worst_overlap = 0.0;
  double worst_prob = 0.0;
  for (const auto& pp : PhasePair::all()) {
    const auto direct = encode_qutrit(pp);
    const auto projected = encode_via_projection(pp);
    worst_overlap = std::max(worst_overlap, std::abs(1.0 - std::abs(inner(direct, projected))));
    for (int s : {1, 2}) worst_prob = std::max(worst_prob, std::abs(decode_qubit(direct, s).success_prob - 2.0 / 3.0));
  }
  c.expect(worst_overlap <= 1e-12, fmt("max |1 - |<a|b>|| over 16 pairs = %.3g", worst_overlap));
  c.expect(worst_prob <= 1e-12, fmt("max |P_decode - 2/3| = %.3g", worst_prob));
  const double dt = seconds_since(t0);
  c.expect(dt < 1.0, fmt("runtime %.3f s", dt));
  return c;
}

McReport single_photon_run(Protocol protocol, StrategyKind strategy, std::uint64_t rounds, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.protocol = protocol;
  cfg.strategy = {strategy, 0.25};
  cfg.params = lossless_noiseless();
  cfg.source = SourceKind::SinglePhoton;
  cfg.rounds = rounds;
  cfg.seed = seed;
  cfg.workers = 4;
  return run_experiment(cfg);
}

Check probability_suite() {
  Check c;
  const auto t0 = Clock::now();

  const auto honest = single_photon_run(Protocol::Qutrit, StrategyKind::None, 600000, 101);
  const double n_det = static_cast<double>(honest.counts.detected);
  const double n_dec = static_cast<double>(honest.counts.decoded);
  c.expect(within_4se(honest.decode_rate.value, 2.0 / 3.0, n_det),
           proportion_note("honest decode", honest.decode_rate.value, 2.0 / 3.0, n_det));
  c.expect(within_4se(honest.sift_fraction.value, 0.5, n_dec),
           proportion_note("sift fraction", honest.sift_fraction.value, 0.5, n_dec));

  const auto ir = single_photon_run(Protocol::BB84, StrategyKind::InterceptResendBB84, 400000, 102);
  c.expect(within_4se(ir.qber.value, 0.25, static_cast<double>(ir.counts.sifted)),
           proportion_note("intercept-resend qber", ir.qber.value, 0.25, static_cast<double>(ir.counts.sifted)));

  const auto tf = single_photon_run(Protocol::Qutrit, StrategyKind::QutritForward, 800000, 103);
  c.expect(within_4se(tf.qber.value, 3.0 / 8.0, static_cast<double>(tf.counts.sifted)),
           proportion_note("qutrit-forward qber", tf.qber.value, 3.0 / 8.0, static_cast<double>(tf.counts.sifted)));

  const auto qf = single_photon_run(Protocol::Qutrit, StrategyKind::QubitForward, 600000, 104);
  c.expect(within_4se(qf.qber.value, 1.0 / 3.0, static_cast<double>(qf.counts.sifted)),
           proportion_note("qubit-forward qber", qf.qber.value, 1.0 / 3.0, static_cast<double>(qf.counts.sifted)));

  // PNS: pulses with 2 and 3 photons leave Eve 1 and 2 stored copies.
  for (int photons : {2, 3}) {
    const int n = 300000;
    int learned = 0;
    for (int i = 0; i < n; ++i) {
      auto rng = RandomStream::for_round(200 + photons, static_cast<std::uint64_t>(i));
      const auto a = alice_prepare(Protocol::Qutrit, rng);
      const int bob_subspace = rng.subspace();
      const auto o = attack_pns(a.choice, photons, bob_subspace, a.choice.basis_for(bob_subspace), rng);
      learned += o.eve_learns_bit;
    }
    const double expected = photons == 2 ? 2.0 / 3.0 : 8.0 / 9.0;
    const double freq = static_cast<double>(learned) / n;
    c.expect(within_4se(freq, expected, n),
             proportion_note(photons == 2 ? "pns one copy" : "pns two copies", freq, expected, n));
  }

  const double dt = seconds_since(t0);
  c.expect(dt < 120.0, fmt("runtime %.2f s", dt));
  return c;
}

Check analytic_agreement() {
  Check c;
  const auto t0 = Clock::now();
  std::uint64_t seed = 300;
  for (double mu : {0.05, 0.1, 0.3}) {
    for (double l : {0.0, 20.0}) {
      ExperimentConfig cfg;
      cfg.protocol = Protocol::Qutrit;
      cfg.params.mu = mu;
      cfg.params.length_km = l;
      cfg.rounds = 2000000;
      cfg.seed = seed++;
      cfg.workers = 4;
      const auto rep = run_experiment(cfg);
      const double n = static_cast<double>(rep.counts.rounds);
      const double ns = static_cast<double>(rep.counts.sifted);
      c.expect(within_4se(rep.detection_rate.value, rep.analytic.r_raw, n),
               fmt("mu %.2f l %2.0f: ", mu, l) +
                   proportion_note("detection", rep.detection_rate.value, rep.analytic.r_raw, n));
      c.expect(within_4se(rep.qber.value, rep.analytic.qber, ns),
               fmt("mu %.2f l %2.0f: ", mu, l) + proportion_note("qber", rep.qber.value, rep.analytic.qber, ns));
    }
  }
  c.notes.push_back(fmt("  info runtime %.2f s", seconds_since(t0)));
  return c;
}

Check formula_properties() {
  Check c;
  const SystemParams base;

  int identity_checks = 0;
  double worst_identity = 0.0;
  bool ie_in_range = true;
  bool monotone = true;
  for (auto protocol : {Protocol::BB84, Protocol::Qutrit}) {
    for (double mu : {0.005, 0.02, 0.05, 0.1, 0.3, 0.7}) {
      for (double q_opt : {0.005, 0.05, 0.2}) {
        double previous = INFINITY;
        for (int l = 0; l <= 120; ++l) {
          SystemParams p = base.with_length(l).with_mu(mu);
          p.q_opt = q_opt;
          const auto b = key_rate(protocol, p);
          ie_in_range = ie_in_range && b.i_e >= 0.0 && b.i_e <= 1.0;
          monotone = monotone && b.k <= previous;
          previous = b.k;
          if (!b.y1_collapsed && b.epsilon1 > 0.0 && b.epsilon1 < 0.5) {
            const double modeled =
                protocol == Protocol::BB84 ? b.y1 * b.epsilon1 : b.y1 * (2.0 * b.epsilon1 / 3.0 + 1.0 / 6.0);
            worst_identity = std::max(worst_identity, std::abs(modeled - b.q) / b.q);
            ++identity_checks;
          }
        }
      }
    }
  }
  c.expect(identity_checks > 0 && worst_identity <= 1e-12,
           fmt("eps1 identities on %d unclamped points, worst relative error %.3g", identity_checks, worst_identity));
  c.expect(ie_in_range, "I_E within [0, 1]");
  c.expect(monotone, "K non-increasing in distance at fixed mu");

  double worst_norm = 0.0;
  for (double mu : {1e-4, 0.01, 0.1, 0.5, 0.999}) {
    double total = 0.0;
    for (int n = 0; n <= 60; ++n) total += poisson_mass(n, mu);
    worst_norm = std::max(worst_norm, std::abs(total - 1.0));
  }
  c.expect(worst_norm <= 1e-12, fmt("Poisson normalisation error %.3g", worst_norm));

  double worst_loss = -INFINITY;
  for (auto protocol : {Protocol::BB84, Protocol::Qutrit}) {
    for (double l : {0.0, 10.0, 20.0, 30.0, 40.0, 50.0}) {
      double grid_best = 0.0;
      for (int i = 0; i < 2000; ++i) {
        const double mu = 1e-4 + (0.999 - 1e-4) * i / 1999.0;
        grid_best = std::max(grid_best, key_rate_or_zero(protocol, base.with_length(l).with_mu(mu)));
      }
      worst_loss = std::max(worst_loss, grid_best - optimize_mu(protocol, base, l).k_opt);
    }
  }
  c.expect(worst_loss <= 1e-12, fmt("optimizer shortfall versus 2000-point grid %.3g", worst_loss));
  return c;
}

Check determinism() {
  Check c;
  auto run = [](const char* workers) {
    std::ostringstream out, err;
    const int code = cli::run({"simulate", "--strategy", "pns", "--mu", "0.3", "--rounds", "300000", "--seed", "42",
                               "--workers", workers},
                              out, err);
    return std::make_pair(code, out.str());
  };
  const auto one = run("1");
  const auto eight = run("8");
  c.expect(one.first == 0 && eight.first == 0, "simulate exits 0");
  c.expect(one.second == eight.second && !one.second.empty(),
           fmt("--workers 1 and --workers 8 JSON identical (%zu bytes)", one.second.size()));
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
      {"1 distances at alpha 0.2 dB/km", fig2_distances},
      {"2 crossover on 0-80 km", crossover},
      {"3 encoding oracle", encoding_oracle},
      {"4 Monte Carlo probability suite", probability_suite},
      {"5 analytic vs Monte Carlo", analytic_agreement},
      {"6 formula properties", formula_properties},
      {"7 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %s\n", c.ok ? "PASS" : "FAIL", name);
    for (const auto& n : c.notes) std::printf("%s\n", n.c_str());
    std::fflush(stdout);
    failed += !c.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

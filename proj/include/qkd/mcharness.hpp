#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "qkd/adversary.hpp"
#include "qkd/rates.hpp"
#include "qkd/round.hpp"

namespace qkd {

struct ChannelModel {
  double gamma_q = 1.0;
  double gamma_b = 1.0;
  double eta = 1.0;
  double p_d = 0.0;

  static ChannelModel from(const SystemParams& p);
  void validate() const;
  /// Per-photon survival probability Gamma_q Gamma_b eta.
  double transmittance() const { return gamma_q * gamma_b * eta; }
};

enum class SourceKind { Poisson, SinglePhoton };

const char* to_string(SourceKind s);
SourceKind source_from_string(const std::string& s);

/// Poisson photon number by inversion of the CDF.
int sample_photon_number(double mu, RandomStream& rng);

struct Detection {
  int survivors = 0;
  bool click = false;
  bool dark_click = false;
};

/// Each photon survives with probability Gamma_q Gamma_b eta; an independent
/// dark click fires with probability 2 p_d, so P(click) = R_sig + 2 p_d (1 - R_sig).
Detection apply_loss_and_detect(int photon_n, const ChannelModel& channel, RandomStream& rng);

struct ExperimentConfig {
  Protocol protocol = Protocol::Qutrit;
  EveStrategy strategy;
  SystemParams params;
  SourceKind source = SourceKind::Poisson;
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  /// Throws InvalidParameter before any round runs.
  void validate() const;
};

/// Integer tallies; merging is associative and commutative.
struct McCounts {
  std::uint64_t rounds = 0;
  std::array<std::uint64_t, 4> photons{};  // n = 0, 1, 2, >= 3
  std::uint64_t detected = 0;
  std::uint64_t signal_clicks = 0;
  std::uint64_t dark_only_clicks = 0;
  std::uint64_t decoded = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  std::uint64_t dark_only_sifted = 0;
  std::uint64_t dark_only_errors = 0;
  std::uint64_t attacked = 0;
  std::uint64_t eve_decoded = 0;
  std::uint64_t multi_photon_sifted = 0;  // sifted rounds from n >= 2 pulses
  std::uint64_t eve_bit_known = 0;        // of those, Eve learned the bit (pns)
  std::uint64_t eve_bit_correct = 0;      // and her bit equals Alice's

  void add(const RoundRecord& r);
  McCounts& operator+=(const McCounts& o);
  bool operator==(const McCounts&) const = default;
};

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
};

/// Binomial proportion with its standard error sqrt(p (1 - p) / n).
Estimate proportion(std::uint64_t successes, std::uint64_t trials);

struct AnalyticPrediction {
  double r_sig = 0.0;
  double r_raw = 0.0;
  double qber = 0.0;  // dark-count term plus Q_opt
  std::optional<double> strategy_qber;
  double decode_probability = 1.0;
  double sift_probability = kSiftProbability;
};

struct McReport {
  ExperimentConfig config;
  McCounts counts;
  Estimate detection_rate;     // detected / rounds
  Estimate decode_rate;        // decoded / detected
  Estimate sift_fraction;      // sifted / decoded
  Estimate qber;               // errors / sifted
  Estimate dark_error_rate;    // dark_only_errors / dark_only_sifted
  Estimate pns_learn_fraction; // eve_bit_known / multi_photon_sifted
  AnalyticPrediction analytic;
};

/// Simulates one round end to end (source, Eve, channel, Bob, sifting).
RoundRecord simulate_round(const ExperimentConfig& cfg, const ChannelModel& channel, RandomStream& rng);

/// Runs `rounds` independent rounds. Round i draws from
/// RandomStream::for_round(seed, i), so the report does not depend on the
/// worker count.
McReport run_experiment(const ExperimentConfig& cfg);

AnalyticPrediction analytic_prediction(const ExperimentConfig& cfg);

}  // namespace qkd

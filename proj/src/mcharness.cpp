#include "qkd/mcharness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace qkd {

ChannelModel ChannelModel::from(const SystemParams& p) {
  return {qkd::transmittance(p.alpha_db_per_km, p.length_km), p.gamma_b, p.eta, p.p_d};
}

void ChannelModel::validate() const {
  if (!(gamma_q > 0.0 && gamma_q <= 1.0)) throw InvalidParameter("gamma_q", "must lie in (0, 1]");
  if (!(gamma_b > 0.0 && gamma_b <= 1.0)) throw InvalidParameter("gamma_b", "must lie in (0, 1]");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParameter("eta", "must lie in (0, 1]");
  if (!(p_d >= 0.0 && p_d < 0.5)) throw InvalidParameter("p_d", "must lie in [0, 0.5) for the 2 p_d click model");
}

const char* to_string(SourceKind s) { return s == SourceKind::Poisson ? "poisson" : "single_photon"; }

SourceKind source_from_string(const std::string& s) {
  if (s == "poisson") return SourceKind::Poisson;
  if (s == "single_photon") return SourceKind::SinglePhoton;
  throw std::invalid_argument("unknown source '" + s + "'");
}

int sample_photon_number(double mu, RandomStream& rng) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("sample_photon_number: mean must be >= 0");
  const double u = rng.uniform();
  double mass = std::exp(-mu);
  double cdf = mass;
  int n = 0;
  while (u >= cdf && n < 10000) {
    ++n;
    mass *= mu / n;
    if (mass == 0.0) break;
    cdf += mass;
  }
  return n;
}

Detection apply_loss_and_detect(int photon_n, const ChannelModel& channel, RandomStream& rng) {
  Detection d;
  const double t = channel.transmittance();
  for (int i = 0; i < photon_n; ++i) {
    if (rng.bernoulli(t)) ++d.survivors;
  }
  d.dark_click = rng.bernoulli(2.0 * channel.p_d);
  d.click = d.survivors > 0 || d.dark_click;
  return d;
}

void ExperimentConfig::validate() const {
  params.validate();
  ChannelModel::from(params).validate();
  if (!(strategy.epsilon1 >= 0.0 && strategy.epsilon1 <= 0.5)) {
    throw InvalidParameter("epsilon1", "must lie in [0, 0.5]");
  }
  if (!strategy.compatible_with(protocol)) {
    throw InvalidParameter("strategy", std::string(to_string(strategy.kind)) + " does not apply to protocol " +
                                           to_string(protocol));
  }
  if (rounds < 1) throw InvalidParameter("rounds", "must be >= 1");
  if (workers < 1) throw InvalidParameter("workers", "must be >= 1");
}

namespace {

/// Fraction of dark-only clicks that land on a decoded-qubit detector.
double dark_decode_probability(Protocol p) { return p == Protocol::BB84 ? kAcceptBB84 : kAcceptQutrit; }

}  // namespace

RoundRecord simulate_round(const ExperimentConfig& cfg, const ChannelModel& channel, RandomStream& rng) {
  RoundRecord r;
  const auto prep = alice_prepare(cfg.protocol, rng);
  r.alice = prep.choice;
  r.photon_n = cfg.source == SourceKind::SinglePhoton ? 1 : sample_photon_number(cfg.params.mu, rng);

  Signal signal = r.photon_n > 0 ? Signal(prep.state) : kVacuum;
  int photons_to_bob = r.photon_n;
  ChannelModel path = channel;

  if (cfg.strategy.attacks_single_photons() && r.photon_n == 1) {
    auto x = attack_single_photon(cfg.strategy, prep.state, rng);
    r.eve = std::move(x.ledger);
    signal = std::move(x.forwarded);
    photons_to_bob = signal ? 1 : 0;
  } else if (cfg.strategy.kind == StrategyKind::PNS && r.photon_n >= 2) {
    // Eve keeps n - 1 photons and sends one over her lossless line.
    r.eve.attacked = true;
    r.eve.stored_copies = r.photon_n - 1;
    r.eve.stored_qutrit = prep.state;
    photons_to_bob = 1;
    path.gamma_q = 1.0;
  }

  const auto det = apply_loss_and_detect(photons_to_bob, path, rng);
  r.signal_click = det.survivors > 0;
  r.dark_click = det.dark_click;
  r.detected = det.click;

  const auto bob = bob_receive(cfg.protocol, r.signal_click ? signal : kVacuum, rng);
  r.bob = bob.choice;
  if (r.detected) {
    if (r.signal_click) {
      r.decoded = bob.decoded;
      r.outcome_bit = bob.outcome;
      if (r.decoded && rng.bernoulli(cfg.params.q_opt)) r.outcome_bit = 1 - *r.outcome_bit;
      if (r.dark_click) {
        // Double click: squash to a uniformly random bit.
        if (!r.decoded) r.decoded = rng.bernoulli(dark_decode_probability(cfg.protocol));
        if (r.decoded) r.outcome_bit = rng.bit();
      }
    } else {
      r.decoded = rng.bernoulli(dark_decode_probability(cfg.protocol));
      if (r.decoded) r.outcome_bit = rng.bit();
    }
  }

  r = sift(std::move(r));

  if (cfg.strategy.kind == StrategyKind::PNS && r.photon_n >= 2 && r.sifted) {
    const auto pns = attack_pns(r.alice, r.photon_n, r.bob.subspace, r.bob.basis, rng);
    r.eve.eve_bit_known = pns.eve_learns_bit;
    r.eve.eve_bit = pns.bit;
  }
  return r;
}

void McCounts::add(const RoundRecord& r) {
  ++rounds;
  ++photons[static_cast<std::size_t>(std::min(r.photon_n, 3))];
  const bool dark_only = r.detected && !r.signal_click;
  detected += r.detected;
  signal_clicks += r.signal_click;
  dark_only_clicks += dark_only;
  decoded += r.decoded;
  sifted += r.sifted;
  errors += r.error;
  dark_only_sifted += dark_only && r.sifted;
  dark_only_errors += dark_only && r.error;
  attacked += r.eve.attacked;
  eve_decoded += r.eve.eve_decoded;
  if (r.sifted && r.photon_n >= 2) {
    ++multi_photon_sifted;
    if (r.eve.eve_bit_known) {
      ++eve_bit_known;
      eve_bit_correct += r.eve.eve_bit == r.alice.bit_for(r.bob.subspace);
    }
  }
}

McCounts& McCounts::operator+=(const McCounts& o) {
  rounds += o.rounds;
  for (std::size_t i = 0; i < photons.size(); ++i) photons[i] += o.photons[i];
  detected += o.detected;
  signal_clicks += o.signal_clicks;
  dark_only_clicks += o.dark_only_clicks;
  decoded += o.decoded;
  sifted += o.sifted;
  errors += o.errors;
  dark_only_sifted += o.dark_only_sifted;
  dark_only_errors += o.dark_only_errors;
  attacked += o.attacked;
  eve_decoded += o.eve_decoded;
  multi_photon_sifted += o.multi_photon_sifted;
  eve_bit_known += o.eve_bit_known;
  eve_bit_correct += o.eve_bit_correct;
  return *this;
}

Estimate proportion(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {};
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

AnalyticPrediction analytic_prediction(const ExperimentConfig& cfg) {
  AnalyticPrediction a;
  const auto& p = cfg.params;
  if (cfg.source == SourceKind::Poisson) {
    const auto r = raw_rates(p);
    a.r_sig = r.r_sig;
    a.r_raw = r.r_raw;
  } else {
    a.r_sig = ChannelModel::from(p).transmittance();
    a.r_raw = a.r_sig + 2.0 * p.p_d * (1.0 - a.r_sig);
  }
  a.qber = a.r_raw > 0.0 ? std::min(0.5, p.p_d * (1.0 - a.r_sig) / a.r_raw + p.q_opt) : 0.5;
  a.decode_probability = dark_decode_probability(cfg.protocol);

  const double e1 = cfg.strategy.epsilon1;
  switch (cfg.strategy.kind) {
    case StrategyKind::InterceptResendBB84:
      a.strategy_qber = e1;
      break;
    case StrategyKind::QutritForward:
      a.strategy_qber = qutrit_forward_error(e1);
      break;
    case StrategyKind::QubitForward:
      a.strategy_qber = qubit_forward_error(e1);
      break;
    default:
      break;
  }
  return a;
}

McReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto channel = ChannelModel::from(cfg.params);

  const std::uint64_t n = cfg.rounds;
  const std::uint64_t w = std::min<std::uint64_t>(cfg.workers, n);
  std::vector<McCounts> partial(w);
  auto work = [&](std::size_t t) {
    const std::uint64_t begin = t * n / w;
    const std::uint64_t end = (t + 1) * n / w;
    for (std::uint64_t i = begin; i < end; ++i) {
      auto rng = RandomStream::for_round(cfg.seed, i);
      partial[t].add(simulate_round(cfg, channel, rng));
    }
  };
  if (w == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < w; ++t) pool.emplace_back(work, t);
  }

  McReport rep;
  rep.config = cfg;
  for (const auto& c : partial) rep.counts += c;
  const auto& c = rep.counts;
  rep.detection_rate = proportion(c.detected, c.rounds);
  rep.decode_rate = proportion(c.decoded, c.detected);
  rep.sift_fraction = proportion(c.sifted, c.decoded);
  rep.qber = proportion(c.errors, c.sifted);
  rep.dark_error_rate = proportion(c.dark_only_errors, c.dark_only_sifted);
  rep.pns_learn_fraction = proportion(c.eve_bit_known, c.multi_photon_sifted);
  rep.analytic = analytic_prediction(cfg);
  return rep;
}

}  // namespace qkd

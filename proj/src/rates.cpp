#include "qkd/rates.hpp"

#include <algorithm>
#include <cmath>

namespace qkd {

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw InvalidParameter(field, message);
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(alpha_db_per_km) && alpha_db_per_km >= 0.0, "alpha_db_per_km", "must be >= 0");
  require(std::isfinite(length_km) && length_km >= 0.0, "length_km", "must be >= 0");
  require(gamma_b > 0.0 && gamma_b <= 1.0, "gamma_b", "must lie in (0, 1]");
  require(eta > 0.0 && eta <= 1.0, "eta", "must lie in (0, 1]");
  require(p_d >= 0.0 && p_d < 1.0, "p_d", "must lie in [0, 1)");
  require(q_opt >= 0.0 && q_opt < 0.5, "q_opt", "must lie in [0, 0.5)");
  require(mu > 0.0 && mu < 1.0, "mu", "must lie in (0, 1)");
}

SystemParams SystemParams::with_length(double km) const {
  auto p = *this;
  p.length_km = km;
  return p;
}

SystemParams SystemParams::with_mu(double m) const {
  auto p = *this;
  p.mu = m;
  return p;
}

double transmittance(double alpha_db_per_km, double length_km) {
  if (alpha_db_per_km < 0.0 || length_km < 0.0) throw DomainError("transmittance: negative alpha or length");
  return std::pow(10.0, -alpha_db_per_km * length_km / 10.0);
}

double poisson_mass(int n, double mu) {
  if (n < 0) throw DomainError("poisson_mass: negative photon number");
  if (!(mu >= 0.0)) throw DomainError("poisson_mass: negative mean");
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
}

double poisson_multi_photon(double mu) {
  if (!(mu >= 0.0)) throw DomainError("poisson_multi_photon: negative mean");
  if (mu > 0.1) return 1.0 - std::exp(-mu) * (1.0 + mu);
  // Tail series sum_{n>=2} mu^n e^-mu / n!; converges in a handful of terms.
  double term = std::exp(-mu) * mu * mu / 2.0;
  double sum = 0.0;
  for (int n = 2; n < 40 && term > 0.0; ++n) {
    sum += term;
    term *= mu / (n + 1);
  }
  return sum;
}

RawRates raw_rates(const SystemParams& p) {
  p.validate();
  const double gq = transmittance(p.alpha_db_per_km, p.length_km);
  const double r_sig = -std::expm1(-p.mu * gq * p.gamma_b * p.eta);
  const double r_raw = r_sig + 2.0 * p.p_d * (1.0 - r_sig);
  return {gq, r_sig, r_raw};
}

double qber(const SystemParams& p) {
  const auto r = raw_rates(p);
  if (r.r_raw <= 0.0) throw DegenerateChannel("no clicks: R_raw = 0");
  return std::min(0.5, p.p_d * (1.0 - r.r_sig) / r.r_raw + p.q_opt);
}

Yields yields(const SystemParams& p) {
  const auto r = raw_rates(p);
  if (r.r_raw <= 0.0) throw DegenerateChannel("no clicks: R_raw = 0");
  const double y_multi = kSiftProbability * poisson_multi_photon(p.mu) / r.r_raw;
  const double y1_raw = 1.0 - y_multi;
  const double y1 = std::clamp(y1_raw, 0.0, 1.0);
  const double y2 = std::min(kSiftProbability * poisson_mass(2, p.mu) / r.r_raw, 1.0 - y1);
  return {0.0, y1, y2, y1_raw <= 0.0};
}

namespace {

RateBreakdown common(Protocol protocol, const SystemParams& p) {
  RateBreakdown b;
  b.protocol = protocol;
  const auto r = raw_rates(p);
  b.gamma_q = r.gamma_q;
  b.r_sig = r.r_sig;
  b.r_raw = r.r_raw;
  b.q = qber(p);
  const auto y = yields(p);
  b.y0 = y.y0;
  b.y1 = y.y1;
  b.y2 = y.y2;
  b.y1_collapsed = y.y1_collapsed;
  return b;
}

}  // namespace

RateBreakdown key_rate_bb84(const SystemParams& p) {
  auto b = common(Protocol::BB84, p);
  if (b.y1_collapsed) {
    b.epsilon1 = 0.5;
    b.i_e = 1.0;
    b.k = 0.0;
    return b;
  }
  // Eve's single-photon disturbance must reproduce the observed QBER: Q = Y1 eps1.
  b.epsilon1 = std::clamp(b.q / b.y1, 0.0, 0.5);
  const double secret_fraction = b.y1 * (1.0 - binary_entropy(b.epsilon1));
  b.i_e = 1.0 - secret_fraction;
  b.k = std::max(0.0, kAcceptBB84 * kSiftProbability * b.r_raw * (secret_fraction - binary_entropy(b.q)));
  return b;
}

RateBreakdown key_rate_qutrit(const SystemParams& p) {
  auto b = common(Protocol::Qutrit, p);
  if (b.y1_collapsed) {
    b.epsilon1 = 0.5;
    b.i_e = 1.0 - b.y2 / 3.0;
    b.k = 0.0;
    return b;
  }
  // Qubit-forward attack: Q = Y1 (2 eps1 / 3 + 1/6).
  b.epsilon1 = std::clamp(1.5 * (b.q / b.y1 - 1.0 / 6.0), 0.0, 0.5);
  const double secret_fraction = b.y1 * (1.0 - 2.0 * binary_entropy(b.epsilon1) / 3.0) + b.y2 / 3.0;
  b.i_e = 1.0 - secret_fraction;
  b.k = std::max(0.0, kAcceptQutrit * kSiftProbability * b.r_raw * (secret_fraction - binary_entropy(b.q)));
  return b;
}

RateBreakdown key_rate(Protocol protocol, const SystemParams& p) {
  return protocol == Protocol::BB84 ? key_rate_bb84(p) : key_rate_qutrit(p);
}

}  // namespace qkd

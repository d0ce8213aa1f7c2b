#include "qkd/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qkd {

double key_rate_or_zero(Protocol protocol, const SystemParams& p) {
  try {
    return key_rate(protocol, p).k;
  } catch (const DegenerateChannel&) {
    return 0.0;
  }
}

namespace {

/// Golden-section maximisation of f on [lo, hi]; returns the best abscissa seen.
template <typename F>
double golden_maximize(F&& f, double lo, double hi, double rel_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (hi - lo) > rel_tol * 0.5 * (hi + lo); ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace

CurvePoint optimize_mu(Protocol protocol, const SystemParams& base, double length_km, const MuSearch& search) {
  const auto at_length = base.with_length(length_km);
  at_length.with_mu(search.mu_min).validate();
  if (search.grid_points < 3 || !(search.mu_min > 0.0 && search.mu_min < search.mu_max && search.mu_max < 1.0)) {
    throw std::invalid_argument("optimize_mu: invalid search settings");
  }

  auto rate = [&](double mu) { return key_rate_or_zero(protocol, at_length.with_mu(mu)); };

  const int n = search.grid_points;
  const double log_lo = std::log(search.mu_min);
  const double log_step = (std::log(search.mu_max) - log_lo) / (n - 1);
  auto grid_mu = [&](int i) { return i == n - 1 ? search.mu_max : std::exp(log_lo + log_step * i); };

  int best = 0;
  double best_k = -1.0;
  for (int i = 0; i < n; ++i) {
    const double k = rate(grid_mu(i));
    if (k > best_k) {
      best_k = k;
      best = i;
    }
  }

  double mu_opt = grid_mu(best);
  if (best_k > 0.0) {
    const double lo = grid_mu(std::max(best - 1, 0));
    const double hi = grid_mu(std::min(best + 1, n - 1));
    const double refined = golden_maximize(rate, lo, hi, search.rel_tolerance);
    if (rate(refined) > best_k) mu_opt = refined;
  }

  CurvePoint pt;
  pt.length_km = length_km;
  pt.mu_opt = mu_opt;
  const auto params = at_length.with_mu(mu_opt);
  try {
    pt.breakdown = key_rate(protocol, params);
  } catch (const DegenerateChannel&) {
    pt.breakdown.protocol = protocol;
  }
  pt.k_opt = pt.breakdown.k;
  pt.secure = pt.k_opt > 0.0;
  return pt;
}

const char* to_string(DistanceStatus s) {
  switch (s) {
    case DistanceStatus::Ok:
      return "ok";
    case DistanceStatus::InsecureAtZero:
      return "insecure_at_zero";
    case DistanceStatus::BracketExceeded:
      return "bracket_exceeded";
  }
  return "?";
}

SecureDistance secure_distance(Protocol protocol, const SystemParams& base, double bracket_km,
                               double resolution_km, const MuSearch& search) {
  auto secure_at = [&](double l) { return optimize_mu(protocol, base, l, search).k_opt > kSecureThreshold; };

  if (!secure_at(0.0)) return {0.0, DistanceStatus::InsecureAtZero};
  if (secure_at(bracket_km)) return {bracket_km, DistanceStatus::BracketExceeded};

  double lo = 0.0;
  double hi = bracket_km;
  while (hi - lo > resolution_km) {
    const double mid = 0.5 * (lo + hi);
    (secure_at(mid) ? lo : hi) = mid;
  }
  return {lo, DistanceStatus::Ok};
}

std::vector<CurvePoint> curve(Protocol protocol, const SystemParams& base, std::span<const double> lengths_km,
                              unsigned workers, const MuSearch& search) {
  if (!std::is_sorted(lengths_km.begin(), lengths_km.end())) {
    throw std::invalid_argument("curve: length grid must be sorted ascending");
  }
  // Surface configuration errors here rather than inside worker threads.
  for (double l : lengths_km) base.with_length(l).with_mu(search.mu_min).validate();

  std::vector<CurvePoint> out(lengths_km.size());
  const std::size_t n = lengths_km.size();
  const std::size_t w = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = optimize_mu(protocol, base, lengths_km[i], search);
  };
  if (w == 1) {
    run(0, n);
    return out;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < w; ++t) pool.emplace_back(run, t * n / w, (t + 1) * n / w);
  pool.clear();
  return out;
}

std::vector<double> length_grid(double from, double to, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("length grid step must be > 0");
  if (!(from >= 0.0) || !(to >= from)) throw std::invalid_argument("length grid needs 0 <= from <= to");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(from + static_cast<double>(i) * step);
  return out;
}

}  // namespace qkd

#include "qkd/serialize.hpp"

#include <charconv>
#include <system_error>

namespace qkd {

Json to_json(const SystemParams& p) {
  return Json{{"alpha_db_per_km", p.alpha_db_per_km},
              {"length_km", p.length_km},
              {"gamma_b", p.gamma_b},
              {"eta", p.eta},
              {"p_d", p.p_d},
              {"q_opt", p.q_opt},
              {"mu", p.mu}};
}

Json to_json(const RateBreakdown& b) {
  return Json{{"protocol", to_string(b.protocol)},
              {"gamma_q", b.gamma_q},
              {"r_sig", b.r_sig},
              {"r_raw", b.r_raw},
              {"q", b.q},
              {"y0", b.y0},
              {"y1", b.y1},
              {"y2", b.y2},
              {"epsilon1", b.epsilon1},
              {"i_e", b.i_e},
              {"k", b.k},
              {"y1_collapsed", b.y1_collapsed}};
}

Json to_json(const CurvePoint& pt) {
  return Json{{"length_km", pt.length_km},
              {"protocol", to_string(pt.breakdown.protocol)},
              {"mu_opt", pt.mu_opt},
              {"key_rate", pt.k_opt},
              {"secure", pt.secure},
              {"breakdown", to_json(pt.breakdown)}};
}

Json to_json(const McCounts& c) {
  return Json{{"rounds", c.rounds},
              {"photons_0", c.photons[0]},
              {"photons_1", c.photons[1]},
              {"photons_2", c.photons[2]},
              {"photons_3_plus", c.photons[3]},
              {"detected", c.detected},
              {"signal_clicks", c.signal_clicks},
              {"dark_only_clicks", c.dark_only_clicks},
              {"decoded", c.decoded},
              {"sifted", c.sifted},
              {"errors", c.errors},
              {"dark_only_sifted", c.dark_only_sifted},
              {"dark_only_errors", c.dark_only_errors},
              {"attacked", c.attacked},
              {"eve_decoded", c.eve_decoded},
              {"multi_photon_sifted", c.multi_photon_sifted},
              {"eve_bit_known", c.eve_bit_known},
              {"eve_bit_correct", c.eve_bit_correct}};
}

Json to_json(const McReport& r) {
  const auto& a = r.analytic;
  Json analytic{{"r_sig", a.r_sig},
                {"r_raw", a.r_raw},
                {"qber", a.qber},
                {"strategy_qber", a.strategy_qber ? Json(*a.strategy_qber) : Json(nullptr)},
                {"decode_probability", a.decode_probability},
                {"sift_probability", a.sift_probability}};
  return Json{{"protocol", to_string(r.config.protocol)},
              {"strategy", to_string(r.config.strategy.kind)},
              {"counts", to_json(r.counts)},
              {"rates",
               {{"detection_rate", r.detection_rate.value},
                {"decode_rate", r.decode_rate.value},
                {"sift_fraction", r.sift_fraction.value},
                {"qber", r.qber.value},
                {"dark_error_rate", r.dark_error_rate.value},
                {"pns_learn_fraction", r.pns_learn_fraction.value}}},
              {"standard_errors",
               {{"detection_rate", r.detection_rate.standard_error},
                {"decode_rate", r.decode_rate.standard_error},
                {"sift_fraction", r.sift_fraction.standard_error},
                {"qber", r.qber.standard_error},
                {"dark_error_rate", r.dark_error_rate.standard_error},
                {"pns_learn_fraction", r.pns_learn_fraction.standard_error}}},
              {"analytic", std::move(analytic)}};
}

std::string format_number(double value, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  if (res.ec != std::errc{}) return "nan";
  return {buf, res.ptr};
}

}  // namespace qkd

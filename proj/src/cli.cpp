#include "qkd/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace qkd::cli {

namespace {

/// Configuration is wrong; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Protocol> protocols_of(const RunConfig& cfg) {
  if (cfg.protocol == "both") return {Protocol::BB84, Protocol::Qutrit};
  return {protocol_from_string(cfg.protocol)};
}

void validate(const RunConfig& cfg) {
  cfg.params.validate();
  if (cfg.command == "curve") {
    if (!(cfg.l_step > 0.0)) throw InvalidParameter("l-step", "must be > 0");
    if (!(cfg.l_from >= 0.0)) throw InvalidParameter("l-from", "must be >= 0");
    if (!(cfg.l_to >= cfg.l_from)) throw InvalidParameter("l-to", "must be >= l-from");
  }
  if (cfg.command == "simulate") {
    if (!(cfg.epsilon1 >= 0.0 && cfg.epsilon1 <= 0.5)) throw InvalidParameter("epsilon1", "must lie in [0, 0.5]");
    if (cfg.rounds < 1) throw InvalidParameter("rounds", "must be >= 1");
  }
  if (cfg.workers < 1) throw InvalidParameter("workers", "must be >= 1");
  const bool csv_ok = cfg.command == "keyrate" || cfg.command == "curve";
  if (cfg.format == "csv" && !csv_ok) throw InvalidParameter("format", "csv is only available for keyrate and curve");
}

std::string default_format(const std::string& command) { return command == "curve" ? "csv" : "json"; }

void emit_json(const Json& j, std::ostream& out) { out << j.dump(2) << '\n'; }

void cmd_keyrate(const RunConfig& cfg, const std::string& format, std::ostream& out) {
  std::vector<RateBreakdown> rows;
  for (auto p : protocols_of(cfg)) rows.push_back(key_rate(p, cfg.params));

  if (format == "csv") {
    out << "protocol,gamma_q,r_sig,r_raw,q,y0,y1,y2,epsilon1,i_e,k\n";
    for (const auto& b : rows) {
      out << to_string(b.protocol);
      for (double v : {b.gamma_q, b.r_sig, b.r_raw, b.q, b.y0, b.y1, b.y2, b.epsilon1, b.i_e, b.k}) {
        out << ',' << format_number(v, 10);
      }
      out << '\n';
    }
    return;
  }
  Json results = Json::array();
  for (const auto& b : rows) results.push_back(to_json(b));
  emit_json(Json{{"config", echo(cfg)}, {"results", std::move(results)}}, out);
}

void cmd_curve(const RunConfig& cfg, const std::string& format, std::ostream& out) {
  const auto grid = length_grid(cfg.l_from, cfg.l_to, cfg.l_step);
  const auto protocols = protocols_of(cfg);
  std::vector<std::vector<CurvePoint>> series;
  for (auto p : protocols) series.push_back(curve(p, cfg.params, grid, cfg.workers));

  if (format == "csv") {
    out << "length_km,protocol,mu_opt,key_rate\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t s = 0; s < protocols.size(); ++s) {
        const auto& pt = series[s][i];
        out << format_number(pt.length_km, 10) << ',' << to_string(protocols[s]) << ','
            << format_number(pt.mu_opt, 10) << ',' << format_number(pt.k_opt, 10) << '\n';
      }
    }
    return;
  }
  Json points = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (const auto& s : series) points.push_back(to_json(s[i]));
  emit_json(Json{{"config", echo(cfg)}, {"points", std::move(points)}}, out);
}

Json distance_json(Protocol p, const SystemParams& params) {
  const auto sd = secure_distance(p, params);
  Json mu_before = nullptr;
  if (sd.status != DistanceStatus::InsecureAtZero) {
    mu_before = optimize_mu(p, params, std::max(0.0, sd.km - 1.0)).mu_opt;
  }
  return Json{{"protocol", to_string(p)},
              {"secure_distance_km", sd.km},
              {"mu_at_cutoff_minus_1km", mu_before},
              {"status", to_string(sd.status)}};
}

/// Single protocol: the result object itself plus "config"; both: a results array.
Json combine(const RunConfig& cfg, std::vector<Json> results) {
  if (results.size() == 1) {
    Json j = std::move(results.front());
    j["config"] = echo(cfg);
    return j;
  }
  return Json{{"config", echo(cfg)}, {"results", std::move(results)}};
}

void cmd_distance(const RunConfig& cfg, std::ostream& out) {
  std::vector<Json> results;
  for (auto p : protocols_of(cfg)) results.push_back(distance_json(p, cfg.params));
  emit_json(combine(cfg, std::move(results)), out);
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  std::vector<ExperimentConfig> runs;
  for (auto p : protocols_of(cfg)) {
    ExperimentConfig e;
    e.protocol = p;
    e.strategy = {strategy_from_string(cfg.strategy), cfg.epsilon1};
    e.params = cfg.params;
    e.source = source_from_string(cfg.source);
    e.rounds = cfg.rounds;
    e.seed = cfg.seed;
    e.workers = cfg.workers;
    e.validate();
    runs.push_back(e);
  }
  std::vector<Json> results;
  for (const auto& e : runs) results.push_back(to_json(run_experiment(e)));
  emit_json(combine(cfg, std::move(results)), out);
}

}  // namespace

Json echo(const RunConfig& cfg) {
  const auto& p = cfg.params;
  Json j{{"command", cfg.command},
         {"protocol", cfg.protocol},
         {"alpha-db-per-km", p.alpha_db_per_km},
         {"length-km", p.length_km},
         {"gamma-b", p.gamma_b},
         {"eta", p.eta},
         {"pd", p.p_d},
         {"q-opt", p.q_opt},
         {"mu", p.mu}};
  if (cfg.command == "curve") {
    j["l-from"] = cfg.l_from;
    j["l-to"] = cfg.l_to;
    j["l-step"] = cfg.l_step;
  }
  if (cfg.command == "simulate") {
    j["strategy"] = cfg.strategy;
    j["epsilon1"] = cfg.epsilon1;
    j["source"] = cfg.source;
    j["rounds"] = cfg.rounds;
    j["seed"] = cfg.seed;
  }
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Key rates, secure distances and Monte Carlo checks for BB84 and qutrit-encoded QKD", "qkdsim"};
  app.set_config("--config", "", "Flat key = value file; flags of the same name override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.get_formatter()->column_width(30);

  app.add_option("command", cfg.command, "keyrate | curve | distance | simulate")
      ->required()
      ->check(CLI::IsMember({"keyrate", "curve", "distance", "simulate"}));
  app.add_option("--protocol", cfg.protocol)->check(CLI::IsMember({"bb84", "qutrit", "both"}));
  app.add_option("--alpha-db-per-km", cfg.params.alpha_db_per_km, "Fibre attenuation (dB/km)");
  app.add_option("--length-km", cfg.params.length_km, "Channel length (km)");
  app.add_option("--gamma-b", cfg.params.gamma_b, "Transmittance of Bob's apparatus");
  app.add_option("--eta", cfg.params.eta, "Detector efficiency");
  app.add_option("--pd", cfg.params.p_d, "Dark-count probability per detector and gate");
  app.add_option("--q-opt", cfg.params.q_opt, "Optical misalignment error");
  app.add_option("--mu", cfg.params.mu, "Mean photon number per pulse");
  app.add_option("--l-from", cfg.l_from, "curve: first length (km)");
  app.add_option("--l-to", cfg.l_to, "curve: last length (km)");
  app.add_option("--l-step", cfg.l_step, "curve: length step (km)");
  app.add_option("--strategy", cfg.strategy, "simulate: Eve's strategy")
      ->check(CLI::IsMember({"none", "intercept_resend_bb84", "qutrit_forward", "qubit_forward", "pns"}));
  app.add_option("--epsilon1", cfg.epsilon1, "simulate: Eve's single-photon disturbance");
  app.add_option("--source", cfg.source, "simulate: photon source")
      ->check(CLI::IsMember({"poisson", "single_photon"}));
  app.add_option("--rounds", cfg.rounds, "simulate: number of rounds");
  app.add_option("--seed", cfg.seed, "simulate: master seed");
  app.add_option("--workers", cfg.workers, "Worker threads (does not change results)");
  app.add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "Output file (default: standard output)");

  std::vector<const char*> argv{"qkdsim"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  }

  try {
    validate(cfg);
    const std::string format = cfg.format.empty() ? default_format(cfg.command) : cfg.format;

    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ConfigError("cannot open output file " + cfg.out);
    }
    std::ostream& sink = cfg.out.empty() ? out : file;

    if (cfg.command == "keyrate") {
      cmd_keyrate(cfg, format, sink);
    } else if (cfg.command == "curve") {
      cmd_curve(cfg, format, sink);
    } else if (cfg.command == "distance") {
      cmd_distance(cfg, sink);
    } else {
      cmd_simulate(cfg, sink);
    }
    return 0;
  } catch (const InvalidParameter& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateChannel& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qkd::cli

// Copyright 2026 The Coalisure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coalisure/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "coalisure/compression.hpp"
#include "coalisure/errors.hpp"
#include "coalisure/scenario_core.hpp"
#include "coalisure/zeta_core.hpp"

namespace coalisure {
namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

const std::set<std::string>& top_level_keys() {
  static const std::set<std::string> keys = {
      "schema_version", "game",        "distribution", "samples_per_agent",
      "seed",           "beta",        "beta_split",   "beta_explicit",
      "methods",        "budget",      "compression",  "zeta",
      "validation",     "threads"};
  return keys;
}

template <typename T>
T get_as(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    config_error(what + " has the wrong type");
  }
}

double unit_interval(const Json& j, const std::string& what) {
  if (!j.is_number()) config_error(what + " must be a number");
  const double v = j.get<double>();
  if (!(v > 0.0 && v < 1.0)) config_error(what + " must be in (0,1)");
  return v;
}

CompressionOptions compression_from_json(const Json& j) {
  if (j.is_string()) {
    if (j == "default") return CompressionOptions{};
    if (j == "printed") return CompressionOptions::printed();
    config_error("compression must be \"default\", \"printed\" or an object");
  }
  if (!j.is_object()) config_error("compression must be a string or object");
  CompressionOptions opts;
  for (const auto& item : j.items()) {
    if (item.key() == "efficiency") {
      opts.efficiency = get_as<bool>(item.value(), "compression.efficiency");
    } else if (item.key() == "nonnegative") {
      opts.nonnegative = get_as<bool>(item.value(), "compression.nonnegative");
    } else {
      config_error("unknown key '" + item.key() + "' in compression");
    }
  }
  return opts;
}

ZetaOptions zeta_from_json(const Json& j) {
  if (!j.is_object()) config_error("zeta must be an object");
  ZetaOptions opts;
  for (const auto& item : j.items()) {
    if (item.key() == "slack_form") {
      const auto form = get_as<std::string>(item.value(), "zeta.slack_form");
      if (form == "per_sample") {
        opts.slack_form = SlackForm::kPerSample;
      } else if (form == "per_agent") {
        opts.slack_form = SlackForm::kPerAgent;
      } else {
        config_error("zeta.slack_form must be per_sample or per_agent");
      }
    } else if (item.key() == "complexity") {
      opts.complexity = parse_zeta_complexity(
          get_as<std::string>(item.value(), "zeta.complexity"));
    } else if (item.key() == "root_weight") {
      opts.root_weight = parse_root_weight(
          get_as<std::string>(item.value(), "zeta.root_weight"));
    } else if (item.key() == "threshold") {
      opts.positivity_threshold = get_as<double>(item.value(), "zeta.threshold");
      if (!(opts.positivity_threshold > 0.0)) {
        config_error("zeta.threshold must be positive");
      }
    } else {
      config_error("unknown key '" + item.key() + "' in zeta");
    }
  }
  return opts;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

PrivateSamples stage_samples(const ExperimentConfig& config,
                             const StageIo& io) {
  if (!io.samples_path) return draw_samples(config);
  std::ifstream in(*io.samples_path);
  if (!in) {
    throw std::runtime_error("cannot read " + io.samples_path->string());
  }
  PrivateSamples samples = read_samples_csv(in);
  check_samples(config, samples);
  // The CSV carries no seed; recover it when the file is the config's draw.
  const PrivateSamples drawn = draw_samples(config);
  bool same = true;
  for (int i = 0; i < samples.n_agents() && same; ++i) {
    same = samples.per_agent[i] == drawn.per_agent[i];
  }
  if (same) samples.master_seed = drawn.master_seed;
  return samples;
}

std::filesystem::path prepare(const StageIo& io) {
  std::filesystem::create_directories(io.out_dir);
  return io.out_dir;
}

CoverageConfig with_method(const ExperimentConfig& config,
                           CertificateMethod m) {
  CoverageConfig c = config.settings;
  c.method = m;
  return c;
}

Json versioned(Json body) {
  body["schema_version"] = kSchemaVersion;
  return body;
}

}  // namespace

std::vector<CertificateMethod> parse_method_list(const std::string& list) {
  std::vector<CertificateMethod> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_method(item));
  }
  if (out.empty()) config_error("method list is empty");
  return out;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) config_error("top level must be an object");
  for (const auto& item : j.items()) {
    if (!top_level_keys().count(item.key())) {
      config_error("unknown key '" + item.key() + "'");
    }
  }
  auto need = [&](const char* key) -> const Json& {
    auto it = j.find(key);
    if (it == j.end()) config_error(std::string("missing '") + key + "'");
    return *it;
  };
  if (get_as<int>(need("schema_version"), "schema_version") != kSchemaVersion) {
    config_error("unsupported schema_version");
  }

  ExperimentConfig config;
  CoverageConfig& s = config.settings;
  s.game = game_from_json(need("game"));
  s.dist = distribution_from_json(need("distribution"));
  if (s.dist.dim() != s.game.uncertainty_dim) {
    config_error("distribution dimension differs from game.uncertainty_dim");
  }

  const Json& counts = need("samples_per_agent");
  const int n = s.game.n_agents;
  if (counts.is_number_integer()) {
    s.counts.assign(n, get_as<int>(counts, "samples_per_agent"));
  } else {
    s.counts = get_as<std::vector<int>>(counts, "samples_per_agent");
  }
  if (static_cast<int>(s.counts.size()) != n) {
    config_error("samples_per_agent must have one entry per agent");
  }
  for (int k : s.counts) {
    if (k < 1) config_error("samples_per_agent entries must be >= 1");
  }

  s.seed = get_as<std::uint64_t>(need("seed"), "seed");
  s.beta = unit_interval(need("beta"), "beta");

  if (auto it = j.find("beta_split"); it != j.end()) {
    s.split_strategy =
        parse_beta_strategy(get_as<std::string>(*it, "beta_split"));
  }
  if (auto it = j.find("beta_explicit"); it != j.end()) {
    s.explicit_split = get_as<std::vector<double>>(*it, "beta_explicit");
  }
  if (s.split_strategy == BetaStrategy::kExplicit) {
    if (static_cast<int>(s.explicit_split.size()) != n) {
      config_error("beta_explicit must have one entry per agent");
    }
    double total = 0.0;
    for (double b : s.explicit_split) total += b;
    if (std::abs(total - s.beta) > 1e-12) {
      config_error("beta_explicit must sum to beta");
    }
  }

  if (auto it = j.find("methods"); it != j.end()) {
    if (!it->is_array() || it->empty()) {
      config_error("methods must be a nonempty array");
    }
    for (const Json& m : *it) {
      config.methods.push_back(parse_method(get_as<std::string>(m, "method")));
    }
  } else {
    config.methods = all_methods();
  }

  if (auto it = j.find("budget"); it != j.end()) {
    const auto b = get_as<std::int64_t>(*it, "budget");
    if (b < 0) config_error("budget must be >= 0");
    s.budget = b;
  }
  if (auto it = j.find("compression"); it != j.end()) {
    s.compression = compression_from_json(*it);
  }
  if (auto it = j.find("zeta"); it != j.end()) s.zeta = zeta_from_json(*it);
  if (auto it = j.find("validation"); it != j.end()) {
    if (!it->is_object()) config_error("validation must be an object");
    for (const auto& item : it->items()) {
      if (item.key() == "trials") {
        s.trials = get_as<int>(item.value(), "validation.trials");
        if (s.trials < 1) config_error("validation.trials must be >= 1");
      } else if (item.key() == "n_fresh") {
        s.n_fresh = get_as<long>(item.value(), "validation.n_fresh");
        if (s.n_fresh < 1) config_error("validation.n_fresh must be >= 1");
      } else if (item.key() == "support_rank_epsilon") {
        s.support_rank_epsilon = unit_interval(
            item.value(), "validation.support_rank_epsilon");
      } else {
        config_error("unknown key '" + item.key() + "' in validation");
      }
    }
  }
  if (auto it = j.find("threads"); it != j.end()) {
    s.threads = get_as<int>(*it, "threads");
    if (s.threads < 0) config_error("threads must be >= 0");
  }
  validate(make_split(s));
  return config;
}

Json to_json(const ExperimentConfig& config) {
  const CoverageConfig& s = config.settings;
  Json methods = Json::array();
  for (CertificateMethod m : config.methods) methods.push_back(to_string(m));
  Json j = {
      {"schema_version", kSchemaVersion},
      {"game", to_json(s.game)},
      {"distribution", to_json(s.dist)},
      {"samples_per_agent", s.counts},
      {"seed", s.seed},
      {"beta", s.beta},
      {"beta_split", to_string(s.split_strategy)},
      {"methods", methods},
      {"compression",
       {{"efficiency", s.compression.efficiency},
        {"nonnegative", s.compression.nonnegative}}},
      {"zeta",
       {{"slack_form", s.zeta.slack_form == SlackForm::kPerSample
                           ? "per_sample"
                           : "per_agent"},
        {"threshold", s.zeta.positivity_threshold},
        {"complexity", to_string(s.zeta.complexity)},
        {"root_weight", to_string(s.zeta.root_weight)}}},
      {"validation", {{"trials", s.trials}, {"n_fresh", s.n_fresh}}}};
  if (s.split_strategy == BetaStrategy::kExplicit) {
    j["beta_explicit"] = s.explicit_split;
  }
  if (s.budget) j["budget"] = *s.budget;
  if (s.support_rank_epsilon) {
    j["validation"]["support_rank_epsilon"] = *s.support_rank_epsilon;
  }
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

void check_samples(const ExperimentConfig& config,
                   const PrivateSamples& samples) {
  if (samples.counts() != config.settings.counts) {
    throw std::invalid_argument("samples do not match samples_per_agent");
  }
  if (samples.dim() != config.settings.game.uncertainty_dim) {
    throw std::invalid_argument("samples do not match uncertainty_dim");
  }
}

PrivateSamples draw_samples(const ExperimentConfig& config) {
  return draw_private(config.settings.dist, config.settings.counts,
                      config.settings.seed);
}

Json core_report(const ExperimentConfig& config,
                 const PrivateSamples& samples) {
  const GameSpec& spec = config.settings.game;
  const ScenarioCoreDesc core = build_core(spec, tighten(spec, samples));
  Json j = {{"core", to_json(core)}};
  const bool empty = is_empty(core);
  j["empty"] = empty;
  if (!empty) {
    Json mins = Json::array();
    for (Coalition s : enumerate_subcoalitions(spec)) {
      const double m = coalition_min(core, s);
      mins.push_back({{"coalition", coalition_to_json(s)},
                      {"value", std::isfinite(m) ? Json(m) : Json()}});
    }
    j["coalition_min"] = mins;
    const Allocation x = lexmin_allocation(core);
    j["lexmin_allocation"] = std::vector<double>(x.data(), x.data() + x.size());
    if (spec.n_agents <= kMaxVertexAgents) {
      Json verts = Json::array();
      for (const Allocation& v : vertices(core)) {
        verts.push_back(std::vector<double>(v.data(), v.data() + v.size()));
      }
      j["vertices"] = verts;
    }
  }
  return versioned(std::move(j));
}

Json compression_report(const ExperimentConfig& config,
                        const PrivateSamples& samples) {
  const GameSpec& spec = config.settings.game;
  const CompressionSet set =
      compress_all(spec, samples, config.settings.compression);
  Json j = {{"compression", to_json(set)}};
  const ScenarioCoreDesc full = build_core(spec, tighten(spec, samples));
  const bool empty = is_empty(full);
  j["full_core_empty"] = empty;
  if (!empty) {
    j["rebuilt_core_equal"] =
        same_core(full, rebuild_core(spec, samples, set));
  }
  return versioned(std::move(j));
}

Json certify_report(const ExperimentConfig& config,
                    const PrivateSamples* samples) {
  Json certs = Json::array();
  Json failures = Json::array();
  for (CertificateMethod m : config.methods) {
    try {
      const CertifiedArtifact art = certify(with_method(config, m), samples);
      Json c = to_json(art.certificate);
      if (art.compression) c["compression_variant"] = art.compression->options.label();
      if (art.allocation) {
        c["allocation"] = std::vector<double>(
            art.allocation->data(),
            art.allocation->data() + art.allocation->size());
      }
      certs.push_back(std::move(c));
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      failures.push_back({{"method", to_string(m)}, {"error", e.what()}});
    }
  }
  return versioned({{"certificates", certs}, {"failures", failures}});
}

Json zeta_report(const ExperimentConfig& config,
                 const PrivateSamples& samples) {
  const CertifiedArtifact art =
      certify(with_method(config, CertificateMethod::kThm5), &samples);
  return versioned(
      {{"solution", to_json(*art.zeta)}, {"certificate", to_json(art.certificate)}});
}

std::vector<CoverageReport> validate_methods(const ExperimentConfig& config) {
  std::vector<CoverageReport> out;
  for (CertificateMethod m : config.methods) {
    out.push_back(coverage_experiment(with_method(config, m)));
  }
  return out;
}

void cmd_generate(const ExperimentConfig& config, const StageIo& io) {
  const auto dir = prepare(io);
  std::ostringstream csv;
  write_samples_csv(csv, draw_samples(config));
  write_text(dir / "samples.csv", csv.str());
}

void cmd_core(const ExperimentConfig& config, const StageIo& io) {
  const auto dir = prepare(io);
  write_text(dir / "core.json", dump(core_report(config, stage_samples(config, io))));
}

void cmd_compress(const ExperimentConfig& config, const StageIo& io) {
  const auto dir = prepare(io);
  write_text(dir / "compression.json",
             dump(compression_report(config, stage_samples(config, io))));
}

void cmd_certify(const ExperimentConfig& config, const StageIo& io) {
  const auto dir = prepare(io);
  const PrivateSamples samples = stage_samples(config, io);
  write_text(dir / "certificates.json", dump(certify_report(config, &samples)));
}

void cmd_zeta(const ExperimentConfig& config, const StageIo& io) {
  const auto dir = prepare(io);
  write_text(dir / "zeta.json", dump(zeta_report(config, stage_samples(config, io))));
}

void cmd_validate(const ExperimentConfig& config, const StageIo& io) {
  const auto dir = prepare(io);
  for (const CoverageReport& report : validate_methods(config)) {
    const std::string stem = std::string("coverage_") + to_string(report.method);
    write_text(dir / (stem + ".json"), dump(versioned(to_json(report))));
    std::ostringstream csv;
    write_coverage_csv(csv, report);
    write_text(dir / (stem + ".csv"), csv.str());
  }
}

void cmd_run_all(const ExperimentConfig& config, const StageIo& io) {
  const auto dir = prepare(io);
  write_text(dir / "config.json", dump(to_json(config)));
  cmd_generate(config, io);
  StageIo chained = io;
  chained.samples_path = dir / "samples.csv";
  cmd_core(config, chained);
  cmd_compress(config, chained);
  cmd_certify(config, chained);
  cmd_zeta(config, chained);
  cmd_validate(config, chained);
}

}  // namespace coalisure

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

#include "coalisure/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

namespace coalisure {
namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw std::invalid_argument("schema: " + what);
}

void check_object(const Json& j, const std::string& ctx,
                  std::initializer_list<const char*> known) {
  if (!j.is_object()) schema_error(ctx + " must be an object");
  const std::set<std::string> names(known.begin(), known.end());
  for (const auto& item : j.items()) {
    if (!names.count(item.key())) {
      schema_error("unknown key '" + item.key() + "' in " + ctx);
    }
  }
}

const Json& require(const Json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(ctx + " is missing '" + key + "'");
  return *it;
}

double as_double(const Json& j, const std::string& ctx) {
  if (!j.is_number()) schema_error(ctx + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(ctx + " must be finite");
  return v;
}

int as_int(const Json& j, const std::string& ctx) {
  if (!j.is_number_integer()) schema_error(ctx + " must be an integer");
  return j.get<int>();
}

Vector as_vector(const Json& j, const std::string& ctx) {
  if (!j.is_array()) schema_error(ctx + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) =
        as_double(j[k], ctx + "[" + std::to_string(k) + "]");
  }
  return v;
}

Matrix as_matrix(const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) schema_error(ctx + " must be a matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = as_vector(j[r], ctx);
    if (r == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) schema_error(ctx + " has ragged rows");
    m.row(r) = row.transpose();
  }
  return m;
}

Json vector_json(const Vector& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(vector_json(m.row(r).transpose()));
  }
  return out;
}

// Non-finite values have no JSON literal; they are written as null.
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(); }

AffinePiece piece_from_json(const Json& j, int dim, const std::string& ctx) {
  check_object(j, ctx, {"intercept", "slope"});
  AffinePiece p;
  p.intercept = as_double(require(j, "intercept", ctx), ctx + ".intercept");
  p.slope = as_vector(require(j, "slope", ctx), ctx + ".slope");
  if (p.slope.size() != dim) {
    schema_error(ctx + ".slope must have uncertainty_dim entries");
  }
  return p;
}

DistributionComponent component_from_json(const Json& j,
                                           const std::string& ctx) {
  check_object(j, ctx, {"type", "lo", "hi", "mean", "cov"});
  const Json& type = require(j, "type", ctx);
  if (!type.is_string()) schema_error(ctx + ".type must be a string");
  DistributionComponent c;
  const std::string t = type.get<std::string>();
  if (t == "uniform_box") {
    c.kind = ComponentKind::kUniformBox;
    c.lo = as_vector(require(j, "lo", ctx), ctx + ".lo");
    c.hi = as_vector(require(j, "hi", ctx), ctx + ".hi");
  } else if (t == "gaussian") {
    c.kind = ComponentKind::kGaussian;
    c.mean = as_vector(require(j, "mean", ctx), ctx + ".mean");
    c.cov = as_matrix(require(j, "cov", ctx), ctx + ".cov");
  } else {
    schema_error(ctx + ".type must be uniform_box or gaussian");
  }
  return c;
}

Json component_json(const DistributionComponent& c) {
  if (c.kind == ComponentKind::kUniformBox) {
    return {{"type", "uniform_box"},
            {"lo", vector_json(c.lo)},
            {"hi", vector_json(c.hi)}};
  }
  return {{"type", "gaussian"},
          {"mean", vector_json(c.mean)},
          {"cov", matrix_json(c.cov)}};
}

Json certificate_agent_json(const AgentRisk& a) {
  Json j = {{"samples", a.samples},
            {"beta", a.beta},
            {"epsilon", number_or_null(a.epsilon)},
            {"complexity", a.complexity}};
  if (a.conventional_beta) j["conventional_beta"] = *a.conventional_beta;
  return j;
}

}  // namespace

Json coalition_to_json(Coalition s) {
  Json out = Json::array();
  for (int i : s.members()) out.push_back(i + 1);
  return out;
}

Coalition coalition_from_json(const Json& j, int n_agents) {
  if (!j.is_array() || j.empty()) {
    schema_error("coalition must be a nonempty list of agent ids");
  }
  std::vector<int> members;
  for (const Json& m : j) {
    const int id = as_int(m, "agent id");
    if (id < 1 || id > n_agents) {
      schema_error("agent id " + std::to_string(id) + " out of range");
    }
    members.push_back(id - 1);
  }
  const Coalition s = Coalition::from_members(members);
  if (s.size() != static_cast<int>(members.size())) {
    schema_error("coalition lists an agent twice");
  }
  return s;
}

Json to_json(const GameSpec& spec) {
  std::set<Coalition> all;
  for (const auto& list : spec.allowed) all.insert(list.begin(), list.end());
  Json allowed = Json::array();
  for (Coalition s : all) allowed.push_back(coalition_to_json(s));
  Json values = Json::array();
  for (const auto& [mask, pieces] : spec.value_model.forms()) {
    Json ps = Json::array();
    for (const AffinePiece& p : pieces) {
      ps.push_back({{"intercept", p.intercept}, {"slope", vector_json(p.slope)}});
    }
    values.push_back(
        {{"coalition", coalition_to_json(Coalition(mask))}, {"pieces", ps}});
  }
  return {{"n_agents", spec.n_agents},
          {"grand_value", spec.grand_value},
          {"uncertainty_dim", spec.uncertainty_dim},
          {"allowed", allowed},
          {"values", values}};
}

GameSpec game_from_json(const Json& j) {
  const std::string ctx = "game";
  check_object(j, ctx,
               {"n_agents", "grand_value", "uncertainty_dim", "allowed",
                "values"});
  GameSpec spec;
  spec.n_agents = as_int(require(j, "n_agents", ctx), "game.n_agents");
  if (spec.n_agents < 2 || spec.n_agents > kMaxAgents) {
    schema_error("game.n_agents must be in [2, " + std::to_string(kMaxAgents) +
                 "]");
  }
  spec.grand_value =
      as_double(require(j, "grand_value", ctx), "game.grand_value");
  spec.uncertainty_dim =
      as_int(require(j, "uncertainty_dim", ctx), "game.uncertainty_dim");
  if (spec.uncertainty_dim < 1) schema_error("game.uncertainty_dim must be >= 1");
  spec.value_model = ValueModel(spec.uncertainty_dim);

  auto it = j.find("allowed");
  if (it == j.end() || (it->is_string() && *it == "all")) {
    spec.allowed = default_allowed(spec.n_agents);
  } else if (it->is_array()) {
    std::vector<Coalition> list;
    for (const Json& c : *it) list.push_back(coalition_from_json(c, spec.n_agents));
    spec.allowed = allowed_from_coalitions(spec.n_agents, list);
  } else {
    schema_error("game.allowed must be \"all\" or a list of coalitions");
  }

  const Json& values = require(j, "values", ctx);
  if (!values.is_array()) schema_error("game.values must be an array");
  for (std::size_t k = 0; k < values.size(); ++k) {
    const std::string vctx = "game.values[" + std::to_string(k) + "]";
    const Json& v = values[k];
    check_object(v, vctx, {"coalition", "intercept", "slope", "pieces"});
    const Coalition s =
        coalition_from_json(require(v, "coalition", vctx), spec.n_agents);
    if (spec.value_model.has(s)) {
      schema_error(vctx + " repeats coalition " + s.to_string());
    }
    if (v.contains("pieces")) {
      if (v.contains("intercept") || v.contains("slope")) {
        schema_error(vctx + " mixes pieces with intercept/slope");
      }
      const Json& ps = v["pieces"];
      if (!ps.is_array() || ps.empty()) {
        schema_error(vctx + ".pieces must be a nonempty array");
      }
      std::vector<AffinePiece> pieces;
      for (std::size_t q = 0; q < ps.size(); ++q) {
        pieces.push_back(piece_from_json(
            ps[q], spec.uncertainty_dim,
            vctx + ".pieces[" + std::to_string(q) + "]"));
      }
      spec.value_model.set_max_affine(s, std::move(pieces));
    } else {
      Json piece = {{"intercept", require(v, "intercept", vctx)},
                    {"slope", require(v, "slope", vctx)}};
      const AffinePiece p = piece_from_json(piece, spec.uncertainty_dim, vctx);
      spec.value_model.set_affine(s, p.intercept, p.slope);
    }
  }
  validate(spec);
  return spec;
}

Json to_json(const DistributionSpec& dist) {
  if (dist.components.size() == 1) return component_json(dist.components[0]);
  Json parts = Json::array();
  for (const auto& c : dist.components) parts.push_back(component_json(c));
  return {{"type", "mixture"}, {"components", parts}, {"weights", dist.weights}};
}

DistributionSpec distribution_from_json(const Json& j) {
  const std::string ctx = "distribution";
  if (!j.is_object()) schema_error("distribution must be an object");
  const Json& type = require(j, "type", ctx);
  DistributionSpec dist;
  if (type == "mixture") {
    check_object(j, ctx, {"type", "components", "weights"});
    const Json& parts = require(j, "components", ctx);
    if (!parts.is_array() || parts.empty()) {
      schema_error("distribution.components must be a nonempty array");
    }
    std::vector<DistributionComponent> comps;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      comps.push_back(component_from_json(
          parts[k], ctx + ".components[" + std::to_string(k) + "]"));
    }
    const Vector w = as_vector(require(j, "weights", ctx), ctx + ".weights");
    dist = DistributionSpec::mixture(
        std::move(comps), std::vector<double>(w.data(), w.data() + w.size()));
  } else {
    dist.components.push_back(component_from_json(j, ctx));
    dist.weights = {1.0};
  }
  validate(dist);
  return dist;
}

Json to_json(const ScenarioCoreDesc& core) {
  Json bounds = Json::array();
  for (const BoundEntry& e : core.bounds.entries) {
    Json b = {{"coalition", coalition_to_json(e.coalition)},
              {"mask", e.coalition.mask()},
              {"value", number_or_null(e.value)}};
    if (e.witness) {
      b["witness"] = {{"agent", e.witness->agent + 1},
                      {"sample", e.witness->sample + 1}};
    } else {
      b["witness"] = nullptr;
    }
    bounds.push_back(std::move(b));
  }
  return {{"n_agents", core.n_agents},
          {"grand_value", core.grand_value},
          {"bounds", bounds}};
}

Json to_json(const CompressionSet& set) {
  Json agents = Json::array();
  for (const AgentCompression& a : set.per_agent) {
    Json recruits = Json::array();
    for (const Recruit& r : a.recruits) {
      recruits.push_back({{"sample", r.sample + 1},
                          {"coalition", coalition_to_json(r.coalition)}});
    }
    std::vector<int> ids;
    for (int k : a.samples) ids.push_back(k + 1);
    agents.push_back({{"agent", a.agent + 1},
                      {"samples", ids},
                      {"cardinality", a.cardinality()},
                      {"recruits", recruits}});
  }
  return {{"variant", set.options.label()},
          {"efficiency", set.options.efficiency},
          {"nonnegative", set.options.nonnegative},
          {"total", set.total()},
          {"agents", agents}};
}

Json to_json(const RiskCertificate& cert) {
  Json agents = Json::array();
  for (const AgentRisk& a : cert.agents) agents.push_back(certificate_agent_json(a));
  Json j = {{"method", to_string(cert.method)},
            {"epsilon", number_or_null(cert.epsilon)},
            {"beta", cert.beta},
            {"confidence", cert.confidence},
            {"complexity_kind", cert.complexity_kind},
            {"split_strategy", cert.split_strategy},
            {"agents", agents},
            {"warnings", cert.warnings}};
  j["budget"] = cert.budget ? Json(*cert.budget) : Json();
  j["seed"] = cert.seed ? Json(*cert.seed) : Json();
  if (cert.root_weight) j["root_weight"] = *cert.root_weight;
  return j;
}

Json to_json(const ZetaSolution& sol) {
  Json zeta = Json::array();
  for (const Vector& z : sol.zeta) zeta.push_back(vector_json(z));
  return {{"x_star", vector_json(sol.x_star)},
          {"zeta", zeta},
          {"s_star", sol.s_star},
          {"s_star_sensitivity", sol.s_star_sensitivity},
          {"s_support", sol.s_support},
          {"zeta_bar", sol.zeta_bar},
          {"objective", sol.objective},
          {"threshold", sol.threshold},
          {"sensitivity_threshold", sol.threshold / 10.0},
          {"slack_form", sol.slack_form == SlackForm::kPerSample
                             ? "per_sample"
                             : "per_agent"}};
}

Json to_json(const ViolationEstimate& est) {
  return {{"p_hat", est.p_hat},
          {"n_samples", est.n_samples},
          {"violations", est.violations},
          {"lo", est.lo},
          {"hi", est.hi},
          {"level", est.level},
          {"seed", est.seed}};
}

Json to_json(const CoverageReport& report) {
  Json trials = Json::array();
  for (const TrialRecord& t : report.trials) {
    Json row = {{"trial", t.trial},
                {"seed", t.seed},
                {"ok", t.ok},
                {"complexity", t.complexity}};
    if (t.ok) {
      row["epsilon"] = t.epsilon;
      row["p_hat"] = t.p_hat;
      row["cp_lo"] = t.cp_lo;
      row["cp_hi"] = t.cp_hi;
      row["exceeded"] = t.exceeded;
    } else {
      row["error"] = t.error;
    }
    trials.push_back(std::move(row));
  }
  return {{"method", to_string(report.method)},
          {"beta", report.beta},
          {"n_trials", report.n_trials},
          {"n_valid", report.n_valid},
          {"n_exceeded", report.n_exceeded},
          {"exceedance_frequency", report.exceedance_frequency},
          {"frequency_limit", report.frequency_limit},
          {"n_fresh", report.n_fresh},
          {"seed", report.seed},
          {"allocation_rule", report.allocation_rule},
          {"compression_variant", report.compression_variant},
          {"trials", trials}};
}

void write_coverage_csv(std::ostream& out, const CoverageReport& report) {
  out << "trial,seed,ok,epsilon,p_hat,cp_lo,cp_hi,exceeded,complexity,error\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const TrialRecord& t : report.trials) {
    std::string complexity;
    for (std::size_t i = 0; i < t.complexity.size(); ++i) {
      if (i) complexity += ';';
      complexity += std::to_string(t.complexity[i]);
    }
    std::string error = t.error;
    for (char& c : error) {
      if (c == ',' || c == '\n' || c == '"') c = ' ';
    }
    out << t.trial << ',' << t.seed << ',' << (t.ok ? 1 : 0) << ',';
    if (t.ok) {
      out << num(t.epsilon) << ',' << num(t.p_hat) << ',' << num(t.cp_lo)
          << ',' << num(t.cp_hi) << ',' << (t.exceeded ? 1 : 0);
    } else {
      out << ",,,,";
    }
    out << ',' << complexity << ',' << error << '\n';
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace coalisure

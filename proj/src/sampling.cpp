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

#include "coalisure/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace coalisure {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ tag);
  h = mix64(h ^ stream);
  return mix64(h ^ index);
}

int DistributionSpec::dim() const {
  if (components.empty()) return 0;
  const auto& c = components.front();
  return static_cast<int>(c.kind == ComponentKind::kUniformBox ? c.lo.size()
                                                               : c.mean.size());
}

DistributionSpec DistributionSpec::uniform_box(Vector lo, Vector hi) {
  DistributionComponent c;
  c.kind = ComponentKind::kUniformBox;
  c.lo = std::move(lo);
  c.hi = std::move(hi);
  DistributionSpec d{{std::move(c)}, {1.0}};
  validate(d);
  return d;
}

DistributionSpec DistributionSpec::gaussian(Vector mean, Matrix cov) {
  DistributionComponent c;
  c.kind = ComponentKind::kGaussian;
  c.mean = std::move(mean);
  c.cov = std::move(cov);
  DistributionSpec d{{std::move(c)}, {1.0}};
  validate(d);
  return d;
}

DistributionSpec DistributionSpec::mixture(
    std::vector<DistributionComponent> parts, std::vector<double> weights) {
  DistributionSpec d{std::move(parts), std::move(weights)};
  validate(d);
  return d;
}

namespace {

bool component_has_atoms(const DistributionComponent& c) {
  if (c.kind == ComponentKind::kUniformBox) {
    return ((c.hi - c.lo).array() <= 0.0).any();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c.cov, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, c.cov.cwiseAbs().maxCoeff());
  return eig.eigenvalues().minCoeff() <= 1e-12 * scale;
}

}  // namespace

void validate(DistributionSpec& dist) {
  if (dist.components.empty()) {
    throw std::invalid_argument("distribution has no components");
  }
  if (dist.weights.size() != dist.components.size()) {
    throw std::invalid_argument("mixture weights and components differ in size");
  }
  double total = 0.0;
  for (double w : dist.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("mixture weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
  const int d = dist.dim();
  if (d < 1) throw std::invalid_argument("distribution dimension must be >= 1");
  for (auto& c : dist.components) {
    if (c.kind == ComponentKind::kUniformBox) {
      if (c.lo.size() != d || c.hi.size() != d) {
        throw std::invalid_argument("box bounds have inconsistent dimension");
      }
      if (!c.lo.allFinite() || !c.hi.allFinite() ||
          ((c.hi - c.lo).array() < 0.0).any()) {
        throw std::invalid_argument("box bounds must satisfy lo <= hi");
      }
    } else {
      if (c.mean.size() != d || c.cov.rows() != d || c.cov.cols() != d) {
        throw std::invalid_argument("gaussian parameters have wrong dimension");
      }
      if (!c.mean.allFinite() || !c.cov.allFinite()) {
        throw std::invalid_argument("gaussian parameters must be finite");
      }
      const double scale = std::max(1.0, c.cov.cwiseAbs().maxCoeff());
      if ((c.cov - c.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("covariance must be symmetric");
      }
      Eigen::SelfAdjointEigenSolver<Matrix> eig(c.cov);
      if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
        throw std::invalid_argument("covariance must be positive semidefinite");
      }
      const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      c.factor = eig.eigenvectors() * root.asDiagonal();
    }
  }
}

bool may_have_atoms(const DistributionSpec& dist) {
  for (std::size_t c = 0; c < dist.components.size(); ++c) {
    if (dist.weights[c] > 0.0 && component_has_atoms(dist.components[c])) {
      return true;
    }
  }
  return false;
}

Vector sample_with_key(const DistributionSpec& dist, std::uint64_t key) {
  CounterEngine engine(key);
  std::size_t pick = 0;
  if (dist.components.size() > 1) {
    const double u = std::generate_canonical<double, 64>(engine);
    double acc = 0.0;
    pick = dist.components.size() - 1;
    for (std::size_t c = 0; c < dist.components.size(); ++c) {
      acc += dist.weights[c];
      if (u < acc) {
        pick = c;
        break;
      }
    }
  }
  const auto& c = dist.components[pick];
  const int d = dist.dim();
  Vector xi(d);
  if (c.kind == ComponentKind::kUniformBox) {
    for (int j = 0; j < d; ++j) {
      std::uniform_real_distribution<double> u(c.lo[j], c.hi[j]);
      xi[j] = u(engine);
    }
  } else {
    std::normal_distribution<double> normal;
    Vector z(d);
    for (int j = 0; j < d; ++j) z[j] = normal(engine);
    xi = c.mean + c.factor * z;
  }
  return xi;
}

std::vector<int> PrivateSamples::counts() const {
  std::vector<int> out;
  for (const auto& m : per_agent) out.push_back(static_cast<int>(m.rows()));
  return out;
}

int PrivateSamples::total() const {
  int total = 0;
  for (const auto& m : per_agent) total += static_cast<int>(m.rows());
  return total;
}

int PrivateSamples::dim() const {
  return per_agent.empty() ? 0 : static_cast<int>(per_agent.front().cols());
}

PrivateSamples draw_private(const DistributionSpec& dist,
                            const std::vector<int>& counts,
                            std::uint64_t master_seed) {
  if (counts.empty()) throw std::invalid_argument("no agents to sample for");
  PrivateSamples out;
  out.master_seed = master_seed;
  const int d = dist.dim();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1) {
      throw std::invalid_argument("every agent needs at least one sample");
    }
    Matrix m(counts[i], d);
    for (int k = 0; k < counts[i]; ++k) {
      m.row(k) =
          sample_with_key(dist, derive_key(master_seed, kPrivateTag, i, k))
              .transpose();
    }
    out.per_agent.push_back(std::move(m));
  }
  return out;
}

Vector fresh_sample(const DistributionSpec& dist, std::uint64_t seed,
                    std::uint64_t r) {
  return sample_with_key(dist, derive_key(seed, kFreshTag, 0, r));
}

Matrix draw_fresh(const DistributionSpec& dist, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("fresh sample count must be >= 1");
  Matrix out(n, dist.dim());
  for (int r = 0; r < n; ++r) out.row(r) = fresh_sample(dist, seed, r).transpose();
  return out;
}

void write_samples_csv(std::ostream& out, const PrivateSamples& samples) {
  const int d = samples.dim();
  out << "agent_id,sample_index";
  for (int j = 0; j < d; ++j) out << ",xi_" << j + 1;
  out << '\n';
  char buf[32];
  for (int i = 0; i < samples.n_agents(); ++i) {
    for (int k = 0; k < samples.count(i); ++k) {
      out << i + 1 << ',' << k + 1;
      for (int j = 0; j < d; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", samples.per_agent[i](k, j));
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

PrivateSamples read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("samples CSV is empty");
  }
  int d = 0;
  {
    std::istringstream header(line);
    std::string field;
    int col = 0;
    while (std::getline(header, field, ',')) {
      if (col == 0 && field != "agent_id") {
        throw std::invalid_argument("samples CSV header must start with agent_id");
      }
      if (col >= 2) ++d;
      ++col;
    }
  }
  if (d < 1) throw std::invalid_argument("samples CSV has no xi columns");
  std::vector<std::vector<std::vector<double>>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> fields;
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) {
        throw std::invalid_argument("malformed samples CSV at line " +
                                    std::to_string(line_no));
      }
      fields.push_back(v);
      if (*end == '\0') break;
      if (*end != ',') {
        throw std::invalid_argument("malformed samples CSV at line " +
                                    std::to_string(line_no));
      }
      p = end + 1;
    }
    if (static_cast<int>(fields.size()) != d + 2) {
      throw std::invalid_argument("wrong column count at line " +
                                  std::to_string(line_no));
    }
    const int agent = static_cast<int>(fields[0]);
    const int index = static_cast<int>(fields[1]);
    if (agent < 1 || agent > static_cast<int>(rows.size()) + 1) {
      throw std::invalid_argument("agent ids must be contiguous from 1");
    }
    if (agent == static_cast<int>(rows.size()) + 1) rows.emplace_back();
    auto& list = rows[agent - 1];
    if (index != static_cast<int>(list.size()) + 1) {
      throw std::invalid_argument("sample indices must be contiguous from 1");
    }
    list.emplace_back(fields.begin() + 2, fields.end());
  }
  PrivateSamples out;
  for (const auto& list : rows) {
    Matrix m(static_cast<int>(list.size()), d);
    for (std::size_t k = 0; k < list.size(); ++k) {
      for (int j = 0; j < d; ++j) m(static_cast<int>(k), j) = list[k][j];
    }
    out.per_agent.push_back(std::move(m));
  }
  if (out.per_agent.empty()) throw std::invalid_argument("samples CSV has no rows");
  return out;
}

}  // namespace coalisure

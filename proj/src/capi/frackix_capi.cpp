// Copyright 2026 The frackix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "frackix/frackix.h"

#include "frackix/boundary_layer.hpp"
#include "frackix/cli_io.hpp"
#include "frackix/error.hpp"
#include "frackix/kinetic_core.hpp"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

struct frackix_config {
  frackix::io::RunConfig cfg;
};

struct frackix_result {
  frackix::io::RunResult result;
  std::string report;
};

struct frackix_milne {
  frackix::layer::TransportOperator op;
  frackix::layer::AlbedoData albedo;
};

namespace {

thread_local std::string last_error;

template <class F>
frackix_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FRACKIX_OK;
  } catch (const frackix::Error& e) {
    last_error = e.what();
    return static_cast<frackix_status>(static_cast<int>(e.category()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return FRACKIX_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  frackix::require(p != nullptr, frackix::ErrorCategory::Argument,
                   std::string(what) + " must not be NULL");
}

void copy_out(const std::string& text, char* buf, size_t cap, size_t* len) {
  need(len, "len");
  *len = text.size() + 1;
  if (!buf) return;
  frackix::require(cap >= *len, frackix::ErrorCategory::Argument,
                   "buffer too small: need " + std::to_string(*len) + " bytes");
  std::memcpy(buf, text.c_str(), *len);
}

frackix::kinetic::TurnKernel kernel_by_name(const char* name, double kappa, int n) {
  need(name, "kernel");
  const std::string k(name);
  if (k == "uniform") return frackix::kinetic::TurnKernel::uniform(n);
  if (k == "cosine") return frackix::kinetic::TurnKernel::cosine(n);
  if (k == "vonmises") return frackix::kinetic::TurnKernel::von_mises(n, kappa);
  frackix::fail(frackix::ErrorCategory::Configuration, "unknown kernel '" + k + "'");
}

} // namespace

extern "C" {

const char* frackix_version(void) { return frackix::io::kVersion; }

const char* frackix_status_name(frackix_status status) {
  if (status == FRACKIX_OK) return "ok";
  if (status < FRACKIX_ERR_CONFIGURATION || status > FRACKIX_ERR_INTERNAL) return "unknown";
  return frackix::category_name(static_cast<frackix::ErrorCategory>(status)).data();
}

const char* frackix_last_error(void) { return last_error.c_str(); }

frackix_status frackix_config_parse(const char* json, frackix_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    auto* c = new frackix_config{frackix::io::parse_config(json)};
    *out = c;
  });
}

frackix_status frackix_config_load(const char* path, frackix_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new frackix_config{frackix::io::load_config(path)};
  });
}

void frackix_config_free(frackix_config* cfg) { delete cfg; }

frackix_status frackix_config_set_seed(frackix_config* cfg, uint64_t seed) {
  return guarded([&] {
    need(cfg, "cfg");
    cfg->cfg.seed = seed;
  });
}

frackix_status frackix_config_set_output_dir(frackix_config* cfg, const char* dir) {
  return guarded([&] {
    need(cfg, "cfg");
    need(dir, "dir");
    frackix::require(*dir != '\0', frackix::ErrorCategory::Argument,
                     "output directory must not be empty");
    cfg->cfg.output_dir = dir;
  });
}

frackix_status frackix_config_set_flags(frackix_config* cfg, int timing, int dump_operator) {
  return guarded([&] {
    need(cfg, "cfg");
    cfg->cfg.timing = timing != 0;
    cfg->cfg.dump_operator = dump_operator != 0;
  });
}

frackix_status frackix_config_to_json(const frackix_config* cfg, char* buf, size_t cap,
                                      size_t* len) {
  return guarded([&] {
    need(cfg, "cfg");
    copy_out(frackix::io::config_to_json(cfg->cfg).dump(2), buf, cap, len);
  });
}

frackix_status frackix_run(const frackix_config* cfg, const char* subcommand,
                           frackix_result** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(subcommand, "subcommand");
    need(out, "out");
    *out = nullptr;
    auto run_cfg = cfg->cfg;
    run_cfg.subcommand = subcommand;
    auto r = frackix::io::run(run_cfg);
    std::string report = r.report.dump(2);
    *out = new frackix_result{std::move(r), std::move(report)};
  });
}

size_t frackix_result_file_count(const frackix_result* result) {
  return result ? result->result.files.size() : 0;
}

const char* frackix_result_file(const frackix_result* result, size_t index) {
  if (!result || index >= result->result.files.size()) return nullptr;
  return result->result.files[index].c_str();
}

frackix_status frackix_result_report(const frackix_result* result, char* buf, size_t cap,
                                     size_t* len) {
  return guarded([&] {
    need(result, "result");
    copy_out(result->report, buf, cap, len);
  });
}

void frackix_result_free(frackix_result* result) { delete result; }

frackix_status frackix_kernel_nu1(const char* kernel, double kappa, int n, double* nu1) {
  return guarded([&] {
    need(nu1, "nu1");
    *nu1 = frackix::kinetic::eigenvalue_nu1(kernel_by_name(kernel, kappa, n));
  });
}

frackix_status frackix_scaling_exponents(double alpha, double* mu, double* varrho) {
  return guarded([&] {
    need(mu, "mu");
    need(varrho, "varrho");
    const auto e = frackix::kinetic::scaling_exponents(alpha);
    *mu = e.mu;
    *varrho = e.varrho;
  });
}

frackix_status frackix_gamma_reflection(double alpha, double* value) {
  return guarded([&] {
    need(value, "value");
    *value = frackix::kinetic::gamma_reflection(alpha);
  });
}

frackix_status frackix_macro_constants(double alpha, double tau0, double tau1, double c0,
                                       double nu1, int n, double* C_alpha, double* chi) {
  return guarded([&] {
    need(C_alpha, "C_alpha");
    need(chi, "chi");
    const auto p = frackix::kinetic::ModelParams::make(alpha, tau0, tau1, c0);
    const auto k = frackix::kinetic::macro_constants(p, nu1, n);
    *C_alpha = k.C_alpha;
    *chi = k.chi;
  });
}

frackix_status frackix_milne_create(double alpha, double tau0, double c0, const char* kernel,
                                    double kappa, int ordinates, double r_max,
                                    double layer_coefficient, frackix_milne** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    frackix::layer::LayerParams p;
    p.alpha = alpha;
    p.tau0 = tau0;
    p.c0 = c0;
    p.kernel = kernel_by_name(kernel, kappa, 2);
    if (!std::isnan(layer_coefficient)) p.fractional_coefficient = layer_coefficient;
    frackix::require(alpha > 1.0 && c0 > 0.0 && tau0 > 0.0, frackix::ErrorCategory::Domain,
                     "layer needs alpha > 1, c0 > 0 and tau0 > 0");
    auto op = frackix::layer::build_transport_operator(
        p, frackix::layer::OrdinateSet::half_range_gauss(ordinates),
        frackix::layer::HalfSpaceGrid::graded(c0 * tau0 / (alpha - 1.0), r_max));
    auto albedo = frackix::layer::extract_albedo(op);
    *out = new frackix_milne{std::move(op), std::move(albedo)};
  });
}

void frackix_milne_free(frackix_milne* milne) { delete milne; }

size_t frackix_milne_incoming(const frackix_milne* milne) {
  return milne ? milne->op.ordinates.incoming.size() : 0;
}

frackix_status frackix_milne_albedo(const frackix_milne* milne, double* mu, double* weight,
                                    double* W) {
  return guarded([&] {
    need(milne, "milne");
    const auto& o = milne->op.ordinates;
    for (size_t b = 0; b < o.incoming.size(); ++b) {
      const int k = o.incoming[b];
      if (mu) mu[b] = o.mu[k];
      if (weight) weight[b] = o.weights[k];
      if (W) W[b] = milne->albedo.W[b];
    }
  });
}

frackix_status frackix_milne_reflect(const frackix_milne* milne, const double* inflow,
                                     double* outgoing) {
  return guarded([&] {
    need(milne, "milne");
    need(inflow, "inflow");
    need(outgoing, "outgoing");
    const auto& o = milne->op.ordinates;
    const auto r = frackix::layer::reflection_R(
        milne->albedo, o, std::span<const double>(inflow, o.incoming.size()));
    std::copy(r.begin(), r.end(), outgoing);
  });
}

frackix_status frackix_milne_theta(const frackix_milne* milne, frackix_prompt prompt,
                                   double* theta, double* residual) {
  return guarded([&] {
    need(milne, "milne");
    need(theta, "theta");
    frackix::require(prompt == FRACKIX_PROMPT_SPECULAR || prompt == FRACKIX_PROMPT_DIFFUSE,
                     frackix::ErrorCategory::Argument, "unknown prompt reflection kind");
    const auto& o = milne->op.ordinates;
    const auto P = frackix::layer::prompt_matrix(
        o, prompt == FRACKIX_PROMPT_DIFFUSE ? frackix::layer::PromptKind::Diffuse
                                            : frackix::layer::PromptKind::Specular);
    const auto t = frackix::layer::theta_nullspace(milne->albedo, P, o);
    std::copy(t.theta.begin(), t.theta.end(), theta);
    if (residual) *residual = t.residual;
  });
}

} // extern "C"

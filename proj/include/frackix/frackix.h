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

#ifndef FRACKIX_FRACKIX_H
#define FRACKIX_FRACKIX_H

// C interface to the frackix library. Every fallible call returns a
// frackix_status; on failure frackix_last_error() holds a message for the
// calling thread. Handles are opaque and released with their _free call.
//
// Buffer outputs follow one convention: *len receives the size needed
// including the terminating NUL; the text is copied when buf is non-NULL and
// cap >= *len, and FRACKIX_ERR_ARGUMENT is returned if cap is too small.

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FRACKIX_API __declspec(dllexport)
#else
#define FRACKIX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum frackix_status {
  FRACKIX_OK = 0,
  FRACKIX_ERR_CONFIGURATION = 1,
  FRACKIX_ERR_PARSE = 2,
  FRACKIX_ERR_VALIDATION = 3,
  FRACKIX_ERR_DOMAIN = 4,
  FRACKIX_ERR_ARGUMENT = 5,
  FRACKIX_ERR_NUMERICAL = 6,
  FRACKIX_ERR_STABILITY = 7,
  FRACKIX_ERR_DEGENERACY = 8,
  FRACKIX_ERR_GEOMETRY = 9,
  FRACKIX_ERR_RUNAWAY = 10,
  FRACKIX_ERR_SAMPLER = 11,
  FRACKIX_ERR_IO = 12,
  FRACKIX_ERR_INTERNAL = 13
} frackix_status;

typedef enum frackix_prompt {
  FRACKIX_PROMPT_SPECULAR = 0,
  FRACKIX_PROMPT_DIFFUSE = 1
} frackix_prompt;

typedef struct frackix_config frackix_config;
typedef struct frackix_result frackix_result;
typedef struct frackix_milne frackix_milne;

FRACKIX_API const char* frackix_version(void);
/// Lowercase category name ("validation", ...); "ok" for FRACKIX_OK.
FRACKIX_API const char* frackix_status_name(frackix_status status);
/// Message of the last failure on this thread ("" if none).
FRACKIX_API const char* frackix_last_error(void);

// Configuration

FRACKIX_API frackix_status frackix_config_parse(const char* json,
                                                frackix_config** out);
FRACKIX_API frackix_status frackix_config_load(const char* path,
                                               frackix_config** out);
FRACKIX_API void frackix_config_free(frackix_config* cfg);
FRACKIX_API frackix_status frackix_config_set_seed(frackix_config* cfg,
                                                   uint64_t seed);
FRACKIX_API frackix_status frackix_config_set_output_dir(frackix_config* cfg,
                                                         const char* dir);
/// timing: also write timing.json; dump_operator: macro writes its matrices.
FRACKIX_API frackix_status frackix_config_set_flags(frackix_config* cfg,
                                                    int timing,
                                                    int dump_operator);
/// Normalized JSON echo with defaults filled.
FRACKIX_API frackix_status frackix_config_to_json(const frackix_config* cfg,
                                                  char* buf, size_t cap,
                                                  size_t* len);

// Pipelines: spectra | mc | macro | milne | match | curved

FRACKIX_API frackix_status frackix_run(const frackix_config* cfg,
                                       const char* subcommand,
                                       frackix_result** out);
FRACKIX_API size_t frackix_result_file_count(const frackix_result* result);
/// File name (relative to the output directory); NULL if out of range.
FRACKIX_API const char* frackix_result_file(const frackix_result* result,
                                            size_t index);
FRACKIX_API frackix_status frackix_result_report(const frackix_result* result,
                                                 char* buf, size_t cap,
                                                 size_t* len);
FRACKIX_API void frackix_result_free(frackix_result* result);

// Model numerics

/// kernel: "uniform", "cosine" or "vonmises"; n in {1, 2}.
FRACKIX_API frackix_status frackix_kernel_nu1(const char* kernel, double kappa,
                                              int n, double* nu1);
FRACKIX_API frackix_status frackix_scaling_exponents(double alpha, double* mu,
                                                     double* varrho);
/// Gamma(1 - alpha) through the reflection formula, 1 < alpha < 2.
FRACKIX_API frackix_status frackix_gamma_reflection(double alpha, double* value);
FRACKIX_API frackix_status frackix_macro_constants(double alpha, double tau0,
                                                   double tau1, double c0,
                                                   double nu1, int n,
                                                   double* C_alpha, double* chi);

// Half-space layer on the circle with inner normal (1, 0)

/// layer_coefficient: NaN derives kappa from alpha and tau0 (required finite
/// at alpha = 2). r_max in layer scales c0 tau0 / (alpha - 1).
FRACKIX_API frackix_status frackix_milne_create(double alpha, double tau0,
                                                double c0, const char* kernel,
                                                double kappa, int ordinates,
                                                double r_max,
                                                double layer_coefficient,
                                                frackix_milne** out);
FRACKIX_API void frackix_milne_free(frackix_milne* milne);
/// Number of incoming (and of outgoing) ordinates.
FRACKIX_API size_t frackix_milne_incoming(const frackix_milne* milne);
/// Per incoming ordinate: cosine with the normal, weight and W. Any output
/// pointer may be NULL.
FRACKIX_API frackix_status frackix_milne_albedo(const frackix_milne* milne,
                                                double* mu, double* weight,
                                                double* W);
/// Outgoing distribution R(inflow), outgoing ordinates in node order.
FRACKIX_API frackix_status frackix_milne_reflect(const frackix_milne* milne,
                                                 const double* inflow,
                                                 double* outgoing);
FRACKIX_API frackix_status frackix_milne_theta(const frackix_milne* milne,
                                               frackix_prompt prompt,
                                               double* theta, double* residual);

#ifdef __cplusplus
}
#endif

#endif // FRACKIX_FRACKIX_H

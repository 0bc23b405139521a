// Copyright 2026 The Sg2 Authors
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

#ifndef SG2_H
#define SG2_H

#include <stddef.h>
#include <stdint.h>

#if defined(SG2_BUILDING_LIBRARY)
#define SG2_API __attribute__((visibility("default")))
#else
#define SG2_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum {
    SG2_OK = 0,
    SG2_ERR_VALIDATION = 2,
    SG2_ERR_IO = 3,
    SG2_ERR_NUMERICAL = 4,
    SG2_ERR_INTERNAL = 5
} sg2_status;

typedef struct sg2_config sg2_config;
typedef struct sg2_stream sg2_stream;
typedef struct sg2_report sg2_report;

/* Message of the most recent failure on the calling thread; "" if none. */
SG2_API const char* sg2_last_error(void);
SG2_API const char* sg2_version(void);

SG2_API sg2_status sg2_config_load(const char* path, sg2_config** out);
SG2_API sg2_status sg2_config_parse(const char* text, sg2_config** out);
SG2_API void sg2_config_free(sg2_config* config);
SG2_API sg2_status sg2_config_set_seed(sg2_config* config, uint64_t seed);
SG2_API sg2_status sg2_config_set_pulses(sg2_config* config, uint64_t n_pulses);
/* "sg2", "hbt", "hom-hwp-co" or "hom-hwp-cross". */
SG2_API sg2_status sg2_config_set_mode(sg2_config* config, const char* mode);
SG2_API const char* sg2_config_mode(const sg2_config* config);
SG2_API int sg2_config_max_lag(const sg2_config* config);
/* 64 hex digits plus terminator. */
SG2_API sg2_status sg2_config_hash(const sg2_config* config, char out[65]);

typedef struct {
    uint64_t emitted_photons;
    uint64_t surviving_photons;
    uint64_t multiphoton_slots;
    double singles[4];
} sg2_sim_summary;

/* threads = 0 uses every available core. summary may be NULL. */
SG2_API sg2_status sg2_simulate(const sg2_config* config, unsigned threads, sg2_stream** out, sg2_sim_summary* summary);
/* ".csv" selects the text format, anything else the binary one. */
SG2_API sg2_status sg2_stream_load(const char* path, sg2_stream** out);
SG2_API sg2_status sg2_stream_save(const sg2_stream* stream, const char* path);
SG2_API void sg2_stream_free(sg2_stream* stream);
SG2_API uint64_t sg2_stream_pulses(const sg2_stream* stream);
SG2_API uint64_t sg2_stream_records(const sg2_stream* stream);

typedef struct {
    int max_lag;    /* 0: take it from the config */
    double alpha;   /* p3 confidence; 0 means 0.05 */
    unsigned threads;
} sg2_analysis_options;

typedef struct {
    double g2_hbt0, g2_hbt0_sigma;
    double coalescence, coalescence_sigma; /* NaN in HBT mode */
    double visibility, visibility_sigma;
    double g2_merged0, g2_merged0_sigma;
    double zeta0, tau1, zeta0_sigma, tau1_sigma;
    double p[4];
    int p3_is_upper_bound;
    double p3_upper_limit;
    uint64_t triples, quadruples;
    int has_boson_fit;
    double fit_g2, fit_coalescence, fit_g2_sigma, fit_coalescence_sigma, fit_chi2;
    size_t n_warnings;
} sg2_report_summary;

SG2_API sg2_status sg2_analyze(const sg2_stream* stream, const sg2_config* config, const sg2_analysis_options* options,
                               sg2_report** out);
SG2_API void sg2_report_free(sg2_report* report);
SG2_API sg2_status sg2_report_summarize(const sg2_report* report, sg2_report_summary* out);
SG2_API const char* sg2_report_warning(const sg2_report* report, size_t index);
SG2_API sg2_status sg2_report_save_json(const sg2_report* report, const char* path);
SG2_API sg2_status sg2_report_save_histogram(const sg2_report* report, const char* path);

typedef struct {
    double g2, coalescence;
    double g2_sigma, coalescence_sigma;
    double chi2;
    int dof;
    int at_boundary;
} sg2_fit_result;

/* Reads a report (or any JSON with correlation_matrix, zeta, circuit), fits (g2, C)
   and writes the result to out_path unless it is NULL. */
SG2_API sg2_status sg2_fit_file(const char* in_path, const char* out_path, sg2_fit_result* out);

typedef struct {
    double p1;
    uint64_t n_pulses;
    int replications;
    int jackknife_blocks;
    double split;
    uint64_t seed;
    int resolution;
} sg2_efficiency_options;

typedef struct {
    double analytic_g2, analytic_coalescence, analytic_value;
    double scoring_g2, scoring_coalescence, scoring_value, scoring_sigma;
    double fraction_at_least_one;
} sg2_map_summary;

SG2_API void sg2_efficiency_defaults(sg2_efficiency_options* out);
SG2_API sg2_status sg2_efficiency_load(const char* path, sg2_efficiency_options* out);
/* Writes out_path (CSV) and its ".json" sibling. summary may be NULL. */
SG2_API sg2_status sg2_efficiency_map(const sg2_efficiency_options* options, unsigned threads, const char* out_path,
                                      sg2_map_summary* summary);
SG2_API sg2_status sg2_variance_ratio_c(double g2, double coalescence, double* out);

/* Quick internal consistency checks. Each check reports one line through emit. */
typedef void (*sg2_line_callback)(const char* line, void* user);
SG2_API sg2_status sg2_selftest(sg2_line_callback emit, void* user);

#ifdef __cplusplus
}
#endif

#endif /* SG2_H */

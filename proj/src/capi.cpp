// Copyright 2026 The occulab Authors
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

#include "occulab/occulab.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "checks.hpp"
#include "constants.hpp"
#include "error.hpp"
#include "fbm.hpp"
#include "functions.hpp"
#include "limitlab.hpp"
#include "occupation.hpp"

struct occ_function {
  occulab::functions::TestFunction impl;
};

struct occ_path {
  occulab::fbm::FbmPath impl;
};

struct occ_fdd {
  occulab::limitlab::FddResult impl;
};

namespace {

thread_local std::string last_error;

template <typename Body>
occ_status guarded(Body&& body) noexcept {
  try {
    body();
    last_error.clear();
    return OCC_OK;
  } catch (const occulab::Error& e) {
    last_error = e.what();
    return static_cast<occ_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return OCC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return OCC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return OCC_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  occulab::require(p != nullptr, occulab::ErrorCode::kInvalidArgument,
                   std::string(what) + " must not be null");
}

occulab::occupation::OccupationConfig to_config(const occ_occupation_config* c) {
  need(c, "config");
  occulab::occupation::OccupationConfig config;
  config.n = c->n;
  config.t = c->t;
  if (c->spacing > 0.0) config.spacing = c->spacing;
  if (c->grid_cap > 0) config.grid_cap = c->grid_cap;
  config.far_field_skip = c->far_field_skip != 0;
  return config;
}

void copy_summary(const occulab::limitlab::MomentSummary& s, occ_moment_summary* out) {
  for (int k = 0; k < OCC_MAX_ORDER; ++k) {
    out->estimate[k] = s.estimate[k];
    out->se[k] = s.se[k];
    out->target[k] = s.target[k];
  }
  out->mean = {s.mean.value, s.mean.se};
  out->variance = {s.variance.value, s.variance.se};
  out->kurtosis = {s.kurtosis.value, s.kurtosis.se};
  out->ks_distance = s.ks_distance;
  out->ks_se = s.ks_se;
  out->replicas = s.replicas;
}

void copy_report(const occulab::checks::CheckReport& r, occ_check_report* out) {
  std::memset(out, 0, sizeof *out);
  std::strncpy(out->check_name, r.check_name.c_str(), sizeof out->check_name - 1);
  out->trials = r.trials;
  out->violations = r.violations;
  out->worst_margin = r.worst_margin;
  out->parameter_count = std::min<std::size_t>(r.parameters.size(), OCC_MAX_PARAMETERS);
  for (std::size_t i = 0; i < out->parameter_count; ++i) {
    std::strncpy(out->parameter_names[i], r.parameters[i].first.c_str(),
                 sizeof out->parameter_names[i] - 1);
    out->parameter_values[i] = r.parameters[i].second;
  }
}

}  // namespace

extern "C" {

const char* occ_status_name(occ_status status) {
  switch (status) {
    case OCC_OK: return "ok";
    case OCC_ERR_DOMAIN: return "domain error";
    case OCC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case OCC_ERR_EMBEDDING_NOT_PSD: return "circulant embedding not PSD";
    case OCC_ERR_NOT_POSITIVE_DEFINITE: return "covariance not positive definite";
    case OCC_ERR_DIVERGENT_INTEGRAL: return "divergent integral";
    case OCC_ERR_UNSUPPORTED_DIMENSION: return "unsupported dimension";
    case OCC_ERR_GRID_TOO_LARGE: return "grid too large";
    case OCC_ERR_HORIZON_EXHAUSTED: return "walk horizon exhausted";
    case OCC_ERR_IO: return "i/o error";
    case OCC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* occ_last_error(void) { return last_error.c_str(); }

const char* occ_version(void) { return "0.1.0"; }

occ_status occ_function_parse(const char* spec, int dim, occ_function** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new occ_function{occulab::functions::TestFunction::parse(spec, dim)};
  });
}

void occ_function_destroy(occ_function* f) { delete f; }

int occ_function_dim(const occ_function* f) { return f != nullptr ? f->impl.dim() : 0; }

occ_status occ_function_eval(const occ_function* f, const double* x, double* out) {
  return guarded([&] {
    need(f, "function");
    need(x, "x");
    need(out, "out");
    *out = f->impl.eval({x, static_cast<std::size_t>(f->impl.dim())});
  });
}

occ_status occ_function_fourier(const occ_function* f, const double* xi, double* out) {
  return guarded([&] {
    need(f, "function");
    need(xi, "xi");
    need(out, "out");
    *out = f->impl.fourier({xi, static_cast<std::size_t>(f->impl.dim())});
  });
}

occ_status occ_function_describe(const occ_function* f, char* buffer, size_t capacity) {
  return guarded([&] {
    need(f, "function");
    need(buffer, "buffer");
    occulab::require(capacity > 0, occulab::ErrorCode::kInvalidArgument, "empty buffer");
    const std::string text = f->impl.describe();
    const std::size_t len = std::min(text.size(), capacity - 1);
    std::memcpy(buffer, text.data(), len);
    buffer[len] = '\0';
  });
}

occ_status occ_covariance(double s, double t, double hurst, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = occulab::fbm::covariance(s, t, hurst);
  });
}

occ_status occ_fgn_autocovariance(int64_t lag, double hurst, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = occulab::fbm::fgn_autocovariance(lag, hurst);
  });
}

occ_status occ_fbm_sample(const occ_fbm_spec* spec, occ_sampler sampler, uint64_t seed,
                          uint64_t replica, occ_path** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    const occulab::fbm::FbmSpec s{spec->hurst, spec->dim, spec->step, spec->n_steps,
                                  spec->critical != 0};
    if (sampler == OCC_SAMPLER_CHOLESKY) {
      *out = new occ_path{occulab::fbm::sample_cholesky(s, seed, replica)};
    } else {
      *out = new occ_path{occulab::fbm::sample_circulant(s, seed, replica)};
    }
  });
}

void occ_path_destroy(occ_path* path) { delete path; }

size_t occ_path_points(const occ_path* path) {
  return path != nullptr ? path->impl.times.size() : 0;
}

int occ_path_dim(const occ_path* path) { return path != nullptr ? path->impl.spec.dim : 0; }

const double* occ_path_times(const occ_path* path) {
  return path != nullptr ? path->impl.times.data() : nullptr;
}

const double* occ_path_values(const occ_path* path) {
  return path != nullptr ? path->impl.values.data() : nullptr;
}

occ_status occ_path_write_csv(const occ_path* path, const char* filename) {
  return guarded([&] {
    need(path, "path");
    need(filename, "filename");
    std::ofstream file(filename);
    occulab::require(static_cast<bool>(file), occulab::ErrorCode::kIo,
                     std::string("cannot open ") + filename);
    occulab::fbm::write_csv(path->impl, file);
    occulab::require(static_cast<bool>(file), occulab::ErrorCode::kIo,
                     std::string("write failed: ") + filename);
  });
}

occ_status occ_c_fd(const occ_function* f, occ_limit_constant* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    const auto c = occulab::constants::c_fd(f->impl);
    *out = {c.c_fd, c.c_fd_squared, c.quadrature_error_estimate};
  });
}

occ_status occ_bracket(const occ_function* f, double* value, double* error_estimate) {
  return guarded([&] {
    need(f, "function");
    need(value, "value");
    const auto b = occulab::constants::bracket(f->impl);
    *value = b.value;
    if (error_estimate != nullptr) *error_estimate = b.quadrature_error_estimate;
  });
}

occ_status occ_norm1_residual(const occ_function* f, double* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = occulab::constants::norm1_residual(f->impl);
  });
}

occ_status occ_gamma_identity_check(int dim, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = occulab::constants::gamma_identity_check(dim);
  });
}

void occ_occupation_config_default(occ_occupation_config* config) {
  if (config == nullptr) return;
  const occulab::occupation::OccupationConfig d;
  *config = {d.n, d.t, d.spacing, d.grid_cap, d.far_field_skip ? 1 : 0};
}

occ_status occ_occupation_realize(const occ_function* f, const occ_occupation_config* config,
                                  uint64_t seed, uint64_t replica, double* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = occulab::occupation::realize(f->impl, to_config(config), seed, replica).value;
  });
}

occ_status occ_occupation_realize_multi(const occ_function* f, const occ_occupation_config* config,
                                        const double* t_list, size_t count, uint64_t seed,
                                        uint64_t replica, double* out) {
  return guarded([&] {
    need(f, "function");
    need(t_list, "t_list");
    need(out, "out");
    const auto samples = occulab::occupation::realize_multi(
        f->impl, to_config(config), {t_list, count}, seed, replica);
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].value;
  });
}

occ_status occ_target_moment(int m, double t, double c, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = occulab::limitlab::target_moment(m, t, c);
  });
}

occ_status occ_run_second_order(const occ_function* f, const occ_occupation_config* config,
                                int64_t replicas, uint64_t seed, int workers,
                                occ_second_order* out, double* samples) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    const auto r = occulab::limitlab::run_second_order(f->impl, to_config(config), replicas,
                                                       seed, workers);
    out->c_fd = r.target.c_fd;
    out->laplace_scale = r.target.laplace_scale;
    copy_summary(r.summary, &out->summary);
    if (samples != nullptr) std::copy(r.samples.begin(), r.samples.end(), samples);
  });
}

occ_status occ_run_first_order(const occ_function* f, const occ_occupation_config* config,
                               int64_t replicas, uint64_t seed, int workers,
                               occ_first_order* out, double* samples) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    const auto r = occulab::limitlab::run_first_order(f->impl, to_config(config), replicas,
                                                      seed, workers);
    out->target_mean = r.target_mean;
    copy_summary(r.summary, &out->summary);
    if (samples != nullptr) std::copy(r.samples.begin(), r.samples.end(), samples);
  });
}

occ_status occ_simulate_z(double t, int64_t walk_steps, uint64_t seed, uint64_t replica,
                          occ_z_mode mode, occ_z_sample* out) {
  return guarded([&] {
    need(out, "out");
    const auto z = occulab::limitlab::simulate_z(
        t, walk_steps, seed, replica,
        mode == OCC_Z_WALK ? occulab::limitlab::ZMode::kWalk
                           : occulab::limitlab::ZMode::kExcursion);
    *out = {z.t, z.value, z.walk_steps, z.visits, z.steps_taken};
  });
}

occ_status occ_run_zprocess(double t, int64_t walk_steps, int64_t replicas, uint64_t seed,
                            int workers, occ_zprocess* out, double* samples) {
  return guarded([&] {
    need(out, "out");
    const auto r = occulab::limitlab::run_zprocess(t, walk_steps, replicas, seed, workers);
    *out = {r.t, {r.mean.value, r.mean.se}, r.ks_distance};
    if (samples != nullptr) std::copy(r.samples.begin(), r.samples.end(), samples);
  });
}

occ_status occ_run_fdd(const occ_function* f, const occ_occupation_config* config,
                       const double* intervals, size_t count, int64_t replicas, uint64_t seed,
                       int workers, occ_fdd** out) {
  return guarded([&] {
    need(f, "function");
    need(intervals, "intervals");
    need(out, "out");
    std::vector<occulab::limitlab::Interval> list;
    for (std::size_t i = 0; i < count; ++i) list.emplace_back(intervals[2 * i], intervals[2 * i + 1]);
    *out = new occ_fdd{
        occulab::limitlab::run_fdd(f->impl, to_config(config), list, replicas, seed, workers)};
  });
}

void occ_fdd_destroy(occ_fdd* fdd) { delete fdd; }

size_t occ_fdd_intervals(const occ_fdd* fdd) {
  return fdd != nullptr ? fdd->impl.intervals.size() : 0;
}

double occ_fdd_c_fd(const occ_fdd* fdd) { return fdd != nullptr ? fdd->impl.target.c_fd : 0.0; }

occ_status occ_fdd_summary(const occ_fdd* fdd, size_t i, occ_moment_summary* out) {
  return guarded([&] {
    need(fdd, "fdd");
    need(out, "out");
    occulab::require(i < fdd->impl.per_interval.size(), occulab::ErrorCode::kInvalidArgument,
                     "interval index out of range");
    copy_summary(fdd->impl.per_interval[i], out);
  });
}

occ_status occ_fdd_covariance(const occ_fdd* fdd, size_t i, size_t j, occ_estimate* out) {
  return guarded([&] {
    need(fdd, "fdd");
    need(out, "out");
    const auto m = fdd->impl.covariance.size();
    occulab::require(i < m && j < m, occulab::ErrorCode::kInvalidArgument,
                     "interval index out of range");
    *out = {fdd->impl.covariance[i][j].value, fdd->impl.covariance[i][j].se};
  });
}

occ_status occ_fdd_skew(const occ_fdd* fdd, size_t i, size_t j, occ_estimate* out) {
  return guarded([&] {
    need(fdd, "fdd");
    need(out, "out");
    const auto m = fdd->impl.skew.size();
    occulab::require(i < m && j < m, occulab::ErrorCode::kInvalidArgument,
                     "interval index out of range");
    *out = {fdd->impl.skew[i][j].value, fdd->impl.skew[i][j].se};
  });
}

const double* occ_fdd_increments(const occ_fdd* fdd, size_t i) {
  if (fdd == nullptr || i >= fdd->impl.increments.size()) return nullptr;
  return fdd->impl.increments[i].data();
}

occ_status occ_check_cov_bounds(int64_t trials, uint64_t seed, occ_check_report* out) {
  return guarded([&] {
    need(out, "out");
    copy_report(occulab::checks::check_cov_bounds(trials, seed), out);
  });
}

occ_status occ_check_taylor_bound(int u_points, int v_points, int h_points,
                                  occ_check_report* out) {
  return guarded([&] {
    need(out, "out");
    copy_report(occulab::checks::check_taylor_bound(u_points, v_points, h_points), out);
  });
}

occ_status occ_check_lnd(int n_points, int64_t trials, uint64_t seed, double hurst, int dim,
                         occ_check_report* out) {
  return guarded([&] {
    need(out, "out");
    copy_report(occulab::checks::check_lnd(n_points, trials, seed, hurst, dim), out);
  });
}

occ_status occ_check_lower_inequality(int u_points, int v_points, int x_points,
                                      occ_check_report* out) {
  return guarded([&] {
    need(out, "out");
    copy_report(occulab::checks::check_lower_inequality(u_points, v_points, x_points), out);
  });
}

}  // extern "C"

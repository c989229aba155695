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

// occulab command-line driver. Talks to the library only through the C API.

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "occulab/occulab.h"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitBand = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StatusError : std::runtime_error {
  occ_status status;
  explicit StatusError(occ_status s)
      : std::runtime_error(std::string(occ_status_name(s)) + ": " + occ_last_error()),
        status(s) {}
};

void check(occ_status status) {
  if (status != OCC_OK) throw StatusError(status);
}

bool is_input_status(occ_status s) {
  switch (s) {
    case OCC_ERR_DOMAIN:
    case OCC_ERR_INVALID_ARGUMENT:
    case OCC_ERR_UNSUPPORTED_DIMENSION:
    case OCC_ERR_GRID_TOO_LARGE:
    case OCC_ERR_DIVERGENT_INTEGRAL:
      return true;
    default:
      return false;
  }
}

struct Options {
  std::string command;
  int dim = 2;
  std::optional<double> hurst;
  bool critical = false;
  std::string function;
  std::vector<double> n_list;
  std::vector<double> t_list;
  std::int64_t replicas = 0;
  double spacing = 0.5;
  std::uint64_t seed = 1;
  std::string output_dir = "occulab-out";
  int workers = 1;
  std::string check = "all";
  std::int64_t steps = 1024;
  double step = 1.0;
  std::string sampler = "circulant";
  std::int64_t walk_steps = 1000000;
  std::int64_t trials = 0;
  bool no_skip = false;
};

struct Row {
  std::string experiment;
  int d = 0;
  double hurst = kNaN;
  double n = kNaN;
  double t = kNaN;
  std::string order;
  double estimate = kNaN;
  double se = kNaN;
  double target = kNaN;
  double ratio = kNaN;
};

Row make_row(std::string experiment, int d, double hurst = kNaN, double n = kNaN,
             double t = kNaN, std::string order = {}) {
  Row r;
  r.experiment = std::move(experiment);
  r.d = d;
  r.hurst = hurst;
  r.n = n;
  r.t = t;
  r.order = std::move(order);
  return r;
}

struct Band {
  std::string name;
  double value = kNaN;
  double lo = kNaN;
  double hi = kNaN;
  bool pass = false;
};

struct Outcome {
  std::vector<Row> rows;
  std::vector<Band> bands;
  json extra = json::object();
};

std::string number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double ratio_of(double estimate, double target) {
  return (std::isfinite(target) && target != 0.0) ? estimate / target : kNaN;
}

Band band(std::string name, double value, double lo, double hi) {
  const bool pass = std::isfinite(value) && value >= lo && value <= hi;
  return {std::move(name), value, lo, hi, pass};
}

// Function handle with RAII.
struct FunctionDeleter {
  void operator()(occ_function* f) const { occ_function_destroy(f); }
};
using FunctionPtr = std::unique_ptr<occ_function, FunctionDeleter>;

FunctionPtr parse_function(const std::string& spec, int dim) {
  occ_function* raw = nullptr;
  check(occ_function_parse(spec.c_str(), dim, &raw));
  return FunctionPtr(raw);
}

double critical_hurst(const Options& o) { return 1.0 / o.dim; }

void validate(Options& o) {
  if (o.dim < 1) throw InputError("--dim must be a positive integer");
  if (o.workers < 1) throw InputError("--workers must be at least 1");
  if (o.replicas < 0) throw InputError("--replicas must be nonnegative");
  const bool limit_command =
      o.command == "limit-law" || o.command == "first-order" || o.command == "fdd";
  if (o.critical || limit_command) {
    if (o.hurst && std::fabs(*o.hurst * o.dim - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << "critical case requires hurst * dim == 1; got hurst " << *o.hurst << " with dim "
          << o.dim << " (use --hurst " << 1.0 / o.dim << " or drop --hurst)";
      throw InputError(msg.str());
    }
    if (!o.hurst) o.hurst = critical_hurst(o);
  }
  if (limit_command && o.dim == 1)
    throw InputError("critical case in dim 1 needs hurst 1, which is not an fBm index");
  if (o.hurst && !(*o.hurst > 0.0 && *o.hurst < 1.0))
    throw InputError("--hurst must lie in (0, 1)");
  for (double n : o.n_list)
    if (!(n > 0.0)) throw InputError("--n values must be positive");
  for (double t : o.t_list)
    if (!(t > 0.0)) throw InputError("--t values must be positive");
  if (!(o.spacing > 0.0)) throw InputError("--spacing must be positive");
  if (o.command == "fdd" && !std::is_sorted(o.t_list.begin(), o.t_list.end()))
    throw InputError("fdd interval endpoints (--t) must be ascending");
  if (o.sampler != "circulant" && o.sampler != "cholesky")
    throw InputError("--sampler must be 'circulant' or 'cholesky'");
}

std::int64_t replicas_or(const Options& o, std::int64_t fallback) {
  return o.replicas > 0 ? o.replicas : fallback;
}

occ_occupation_config occupation_config(const Options& o, double n, double t) {
  occ_occupation_config c;
  occ_occupation_config_default(&c);
  c.n = n;
  c.t = t;
  c.spacing = o.spacing;
  c.far_field_skip = o.no_skip ? 0 : 1;
  return c;
}

void moment_rows(Outcome& out, const Row& base, const occ_moment_summary& s) {
  for (int k = 0; k < OCC_MAX_ORDER; ++k) {
    Row r = base;
    r.order = "m" + std::to_string(k + 1);
    r.estimate = s.estimate[k];
    r.se = s.se[k];
    r.target = s.target[k];
    r.ratio = ratio_of(r.estimate, r.target);
    out.rows.push_back(r);
  }
}

// ---------------------------------------------------------------- commands

Outcome run_simulate_fbm(const Options& o) {
  if (!o.hurst) throw InputError("simulate-fbm needs --hurst (or --critical)");
  occ_fbm_spec spec{*o.hurst, o.dim, o.step, o.steps, o.critical ? 1 : 0};
  const occ_sampler sampler =
      o.sampler == "cholesky" ? OCC_SAMPLER_CHOLESKY : OCC_SAMPLER_CIRCULANT;
  const std::int64_t replicas = replicas_or(o, 100);
  const double horizon = o.step * static_cast<double>(o.steps);

  double sum = 0.0, sum_sq = 0.0;
  std::int64_t count = 0;
  for (std::int64_t r = 0; r < replicas; ++r) {
    occ_path* path = nullptr;
    check(occ_fbm_sample(&spec, sampler, o.seed, static_cast<std::uint64_t>(r), &path));
    std::unique_ptr<occ_path, void (*)(occ_path*)> guard(path, occ_path_destroy);
    if (r == 0) {
      const fs::path file = fs::path(o.output_dir) / "path.csv";
      check(occ_path_write_csv(path, file.string().c_str()));
    }
    const double* values = occ_path_values(path);
    const std::size_t last = occ_path_points(path) - 1;
    for (int c = 0; c < o.dim; ++c) {
      const double v = values[last * o.dim + c];
      sum += v * v;
      sum_sq += v * v * v * v;
      ++count;
    }
  }
  Outcome out;
  Row row = make_row("simulate-fbm", o.dim, *o.hurst, kNaN, horizon, "end_second_moment");
  row.estimate = sum / count;
  row.se = count > 1 ? std::sqrt((sum_sq / count - row.estimate * row.estimate) / (count - 1))
                     : kNaN;
  row.target = std::pow(horizon, 2.0 * *o.hurst);
  row.ratio = ratio_of(row.estimate, row.target);
  out.rows.push_back(row);
  if (std::isfinite(row.se))
    out.bands.push_back(band("end_second_moment_within_4se", row.estimate,
                             row.target - 4.0 * row.se, row.target + 4.0 * row.se));
  out.extra["path_csv"] = "path.csv";
  return out;
}

Outcome run_constants(const Options& o) {
  const std::string spec = o.function.empty() ? "gaussdiff:sigma=2" : o.function;
  auto f = parse_function(spec, o.dim);
  Outcome out;
  json doc;

  occ_limit_constant c{};
  check(occ_c_fd(f.get(), &c));
  doc["c_fd"] = c.c_fd;
  doc["c_fd_squared"] = c.c_fd_squared;
  doc["quadrature_error_estimate"] = c.quadrature_error_estimate;
  const double h = 1.0 / o.dim;
  Row base = make_row("constants", o.dim, h);
  Row r = base;
  r.order = "c_fd_squared";
  r.estimate = c.c_fd_squared;
  r.se = c.quadrature_error_estimate;
  out.rows.push_back(r);

  doc["bracket"] = nullptr;
  doc["norm1_residual"] = nullptr;
  if (o.dim == 2) {
    double value = 0.0, err = 0.0;
    check(occ_bracket(f.get(), &value, &err));
    double residual = 0.0;
    check(occ_norm1_residual(f.get(), &residual));
    doc["bracket"] = value;
    doc["norm1_residual"] = residual;
    Row b = base;
    b.order = "bracket";
    b.estimate = value;
    b.se = err;
    b.target = c.c_fd_squared;
    b.ratio = ratio_of(value, c.c_fd_squared);
    out.rows.push_back(b);
    Row n1 = base;
    n1.order = "norm1_residual";
    n1.estimate = residual;
    n1.target = 0.0;
    out.rows.push_back(n1);
    out.bands.push_back(band("norm1_residual", residual, 0.0, 1e-3));
  }

  json gamma = json::object();
  for (int d = 1; d <= 6; ++d) {
    double residual = 0.0;
    check(occ_gamma_identity_check(d, &residual));
    gamma[std::to_string(d)] = residual;
    Row g = make_row("constants", d, 1.0 / d);
    g.order = "gamma_residual";
    g.estimate = residual;
    g.target = 0.0;
    out.rows.push_back(g);
    out.bands.push_back(band("gamma_residual_d" + std::to_string(d), residual, 0.0, 1e-10));
  }
  doc["gamma_residuals"] = gamma;
  std::cout << doc.dump(2) << '\n';
  out.extra["constants"] = doc;
  return out;
}

void report_rows(Outcome& out, const occ_check_report& rep, int dim) {
  Row base = make_row("verify", dim);
  Row v = base;
  v.order = std::string(rep.check_name) + ".violations";
  v.estimate = static_cast<double>(rep.violations);
  v.target = 0.0;
  out.rows.push_back(v);
  Row t = base;
  t.order = std::string(rep.check_name) + ".trials";
  t.estimate = static_cast<double>(rep.trials);
  out.rows.push_back(t);
  Row m = base;
  m.order = std::string(rep.check_name) + ".worst_margin";
  m.estimate = rep.worst_margin;
  out.rows.push_back(m);
  for (std::size_t i = 0; i < rep.parameter_count; ++i) {
    Row p = base;
    p.order = std::string(rep.check_name) + "." + rep.parameter_names[i];
    p.estimate = rep.parameter_values[i];
    out.rows.push_back(p);
  }
  out.bands.push_back(band(std::string(rep.check_name) + "_violations",
                           static_cast<double>(rep.violations), 0.0, 0.0));
}

Outcome run_verify(const Options& o) {
  static const std::vector<std::string> kChecks = {"cov", "taylor", "lnd", "lower"};
  if (o.check != "all" && std::find(kChecks.begin(), kChecks.end(), o.check) == kChecks.end())
    throw InputError("--check must be one of all, cov, taylor, lnd, lower");
  auto wanted = [&](const std::string& name) { return o.check == "all" || o.check == name; };
  Outcome out;
  occ_check_report rep{};
  if (wanted("cov")) {
    check(occ_check_cov_bounds(o.trials > 0 ? o.trials : 1000000, o.seed, &rep));
    report_rows(out, rep, o.dim);
  }
  if (wanted("taylor")) {
    check(occ_check_taylor_bound(200, 200, 50, &rep));
    report_rows(out, rep, o.dim);
  }
  if (wanted("lnd")) {
    const double hurst = o.hurst.value_or(critical_hurst(o) < 1.0 ? critical_hurst(o) : 0.5);
    for (int k = 1; k <= 4; ++k) {
      check(occ_check_lnd(k, o.trials > 0 ? o.trials : 100000, o.seed, hurst, o.dim, &rep));
      report_rows(out, rep, o.dim);
      out.rows.back().hurst = hurst;
    }
  }
  if (wanted("lower")) {
    check(occ_check_lower_inequality(100, 81, 51, &rep));
    report_rows(out, rep, o.dim);
  }
  for (const Band& b : out.bands)
    std::cout << b.name << ": " << (b.pass ? "ok" : "VIOLATED") << " (" << b.value << ")\n";
  return out;
}

Outcome run_limit_law(const Options& o) {
  const std::string spec = o.function.empty() ? "gaussdiff:sigma=2" : o.function;
  auto f = parse_function(spec, o.dim);
  const std::vector<double> ns = o.n_list.empty() ? std::vector<double>{8.0} : o.n_list;
  const std::vector<double> ts = o.t_list.empty() ? std::vector<double>{1.0} : o.t_list;
  const std::int64_t replicas = replicas_or(o, 1000);
  const double var_lo = o.dim == 2 ? 0.6 : 0.5;
  const double var_hi = o.dim == 2 ? 1.4 : 1.5;

  Outcome out;
  for (double t : ts) {
    double prev_ks = kNaN, prev_ks_se = kNaN;
    for (double n : ns) {
      const occ_occupation_config cfg = occupation_config(o, n, t);
      occ_second_order res{};
      check(occ_run_second_order(f.get(), &cfg, replicas, o.seed, o.workers, &res, nullptr));
      const occ_moment_summary& s = res.summary;
      Row base = make_row("limit-law", o.dim, *o.hurst, n, t);
      moment_rows(out, base, s);

      Row var = base;
      var.order = "variance";
      var.estimate = s.variance.value;
      var.se = s.variance.se;
      var.target = t;
      var.ratio = ratio_of(var.estimate, t);
      out.rows.push_back(var);
      Row kurt = base;
      kurt.order = "excess_kurtosis";
      kurt.estimate = s.kurtosis.value;
      kurt.se = s.kurtosis.se;
      kurt.target = 3.0;
      kurt.ratio = ratio_of(kurt.estimate, 3.0);
      out.rows.push_back(kurt);
      Row ks = base;
      ks.order = "ks_laplace";
      ks.estimate = s.ks_distance;
      ks.se = s.ks_se;
      ks.target = 0.0;
      out.rows.push_back(ks);
      Row cf = base;
      cf.order = "c_fd";
      cf.estimate = res.c_fd;
      out.rows.push_back(cf);

      std::ostringstream tag;
      tag << "n=" << n << ",t=" << t;
      out.bands.push_back(band("variance_ratio[" + tag.str() + "]", var.ratio, var_lo, var_hi));
      out.bands.push_back(band("m1_within_3se[" + tag.str() + "]", s.estimate[0],
                               -3.0 * s.se[0], 3.0 * s.se[0]));
      out.bands.push_back(band("m3_within_3se[" + tag.str() + "]", s.estimate[2],
                               -3.0 * s.se[2], 3.0 * s.se[2]));
      if (o.dim == 2)
        out.bands.push_back(band("kurtosis_above_1_by_2se[" + tag.str() + "]",
                                 s.kurtosis.value - 2.0 * s.kurtosis.se, 1.0,
                                 std::numeric_limits<double>::infinity()));
      if (std::isfinite(prev_ks)) {
        const double slack = 2.0 * std::hypot(prev_ks_se, s.ks_se);
        out.bands.push_back(band("ks_non_increasing[" + tag.str() + "]", s.ks_distance, 0.0,
                                 prev_ks + slack));
      }
      prev_ks = s.ks_distance;
      prev_ks_se = s.ks_se;
    }
  }
  return out;
}

Outcome run_first_order(const Options& o) {
  const std::string spec = o.function.empty() ? "gauss" : o.function;
  auto f = parse_function(spec, o.dim);
  const std::vector<double> ns = o.n_list.empty() ? std::vector<double>{6.0, 12.0} : o.n_list;
  const std::vector<double> ts = o.t_list.empty() ? std::vector<double>{1.0, 2.0} : o.t_list;
  const std::int64_t replicas = replicas_or(o, 1000);

  Outcome out;
  for (double t : ts) {
    double first_ks = kNaN;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double n = ns[i];
      const occ_occupation_config cfg = occupation_config(o, n, t);
      occ_first_order res{};
      check(occ_run_first_order(f.get(), &cfg, replicas, o.seed, o.workers, &res, nullptr));
      const occ_moment_summary& s = res.summary;
      Row base = make_row("first-order", o.dim, *o.hurst, n, t);
      moment_rows(out, base, s);
      Row ks = base;
      ks.order = "ks_exponential";
      ks.estimate = s.ks_distance;
      ks.se = s.ks_se;
      ks.target = 0.0;
      out.rows.push_back(ks);

      std::ostringstream tag;
      tag << "n=" << n << ",t=" << t;
      const double mean_ratio = ratio_of(s.mean.value, res.target_mean);
      if (i + 1 == ns.size()) {
        out.bands.push_back(band("mean_within_15pct[" + tag.str() + "]", mean_ratio, 0.85, 1.15));
        if (ns.size() > 1)
          out.bands.push_back(band("ks_below_smallest_n[" + tag.str() + "]", s.ks_distance, 0.0,
                                   first_ks));
      }
      if (i == 0) first_ks = s.ks_distance;
    }
  }
  return out;
}

Outcome run_fdd(const Options& o) {
  const std::string spec = o.function.empty() ? "gaussdiff:sigma=2" : o.function;
  auto f = parse_function(spec, o.dim);
  const double n = o.n_list.empty() ? 8.0 : o.n_list.front();
  const std::vector<double> ends = o.t_list.empty() ? std::vector<double>{1.0, 2.0} : o.t_list;
  const std::int64_t replicas = replicas_or(o, 1000);

  std::vector<double> intervals;
  double a = 0.0;
  for (double b : ends) {
    intervals.push_back(a);
    intervals.push_back(b);
    a = b;
  }
  const occ_occupation_config cfg = occupation_config(o, n, ends.back());
  occ_fdd* raw = nullptr;
  check(occ_run_fdd(f.get(), &cfg, intervals.data(), ends.size(), replicas, o.seed, o.workers,
                    &raw));
  std::unique_ptr<occ_fdd, void (*)(occ_fdd*)> fdd(raw, occ_fdd_destroy);

  Outcome out;
  const std::size_t k = occ_fdd_intervals(fdd.get());
  std::vector<double> variance(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double lo = intervals[2 * i], hi = intervals[2 * i + 1];
    occ_moment_summary s{};
    check(occ_fdd_summary(fdd.get(), i, &s));
    Row base = make_row("fdd", o.dim, *o.hurst, n, hi);
    const std::string prefix = "inc" + std::to_string(i + 1) + ".";
    for (int m = 0; m < OCC_MAX_ORDER; ++m) {
      Row r = base;
      r.order = prefix + "m" + std::to_string(m + 1);
      r.estimate = s.estimate[m];
      r.se = s.se[m];
      r.target = s.target[m];
      r.ratio = ratio_of(r.estimate, r.target);
      out.rows.push_back(r);
    }
    Row len = base;
    len.order = prefix + "length";
    len.estimate = hi - lo;
    out.rows.push_back(len);
    variance[i] = s.variance.value / (hi - lo);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      occ_estimate cov{}, skew{};
      check(occ_fdd_covariance(fdd.get(), i, j, &cov));
      check(occ_fdd_skew(fdd.get(), i, j, &skew));
      Row r = make_row("fdd", o.dim, *o.hurst, n, intervals[2 * j + 1]);
      r.order = "cov" + std::to_string(i + 1) + std::to_string(j + 1);
      r.estimate = cov.value;
      r.se = cov.se;
      if (i != j) r.target = 0.0;
      out.rows.push_back(r);
      Row sk = r;
      sk.order = "skew" + std::to_string(i + 1) + std::to_string(j + 1);
      sk.estimate = skew.value;
      sk.se = skew.se;
      sk.target = kNaN;
      out.rows.push_back(sk);
      if (i != j)
        out.bands.push_back(band("cross_cov_within_4se[" + std::to_string(i + 1) +
                                     std::to_string(j + 1) + "]",
                                 cov.value, -4.0 * cov.se, 4.0 * cov.se));
    }
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double ratio = variance[i] / variance[0];
    Row r = make_row("fdd", o.dim, *o.hurst, n, intervals[2 * i + 1]);
    r.order = "variance_ratio" + std::to_string(i + 1) + "1";
    r.estimate = ratio;
    r.target = 1.0;
    r.ratio = ratio;
    out.rows.push_back(r);
    out.bands.push_back(band("variance_ratio[" + std::to_string(i + 1) + "/1]", ratio, 0.6, 1.4));
  }
  return out;
}

Outcome run_zprocess(const Options& o) {
  const std::vector<double> ts =
      o.t_list.empty() ? std::vector<double>{0.5, 1.0, 2.0} : o.t_list;
  const std::int64_t replicas = replicas_or(o, 2000);
  Outcome out;
  for (double t : ts) {
    occ_zprocess z{};
    check(occ_run_zprocess(t, o.walk_steps, replicas, o.seed, o.workers, &z, nullptr));
    Row base = make_row("zprocess", 1, 0.5, kNaN, t);
    Row mean = base;
    mean.order = "mean";
    mean.estimate = z.mean.value;
    mean.se = z.mean.se;
    mean.target = t;
    mean.ratio = ratio_of(z.mean.value, t);
    out.rows.push_back(mean);
    Row ks = base;
    ks.order = "ks_exponential";
    ks.estimate = z.ks_distance;
    ks.target = 0.0;
    out.rows.push_back(ks);
    std::ostringstream tag;
    tag << "t=" << t;
    out.bands.push_back(band("mean_within_5pct[" + tag.str() + "]", mean.ratio, 0.95, 1.05));
    out.bands.push_back(band("ks_below_0.05[" + tag.str() + "]", z.ks_distance, 0.0, 0.05));
  }
  return out;
}

// ---------------------------------------------------------------- output

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

void write_atomic(const fs::path& file, const std::string& contents) {
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, file);
}

std::string render_csv(const std::vector<Row>& rows) {
  std::string csv = "experiment,d,H,n,t,order,estimate,se,target,ratio\n";
  for (const Row& r : rows) {
    csv += r.experiment + ',' + std::to_string(r.d) + ',' + number(r.hurst) + ',' +
           number(r.n) + ',' + number(r.t) + ',' + r.order + ',' + number(r.estimate) + ',' +
           number(r.se) + ',' + number(r.target) + ',' + number(r.ratio) + '\n';
  }
  return csv;
}

json config_json(const Options& o) {
  json c;
  c["command"] = o.command;
  c["dim"] = o.dim;
  c["hurst"] = o.hurst ? json(*o.hurst) : json(nullptr);
  c["critical"] = o.critical;
  c["function"] = o.function;
  c["n"] = o.n_list;
  c["t"] = o.t_list;
  c["replicas"] = o.replicas;
  c["spacing"] = o.spacing;
  c["seed"] = o.seed;
  c["check"] = o.check;
  c["steps"] = o.steps;
  c["step"] = o.step;
  c["sampler"] = o.sampler;
  c["walk_steps"] = o.walk_steps;
  c["trials"] = o.trials;
  c["far_field_skip"] = !o.no_skip;
  return c;
}

std::string render_summary(const Options& o, const Outcome& out, bool pass) {
  json doc;
  doc["experiment"] = o.command;
  doc["config"] = config_json(o);
  doc["pass"] = pass;
  json bands = json::array();
  for (const Band& b : out.bands) {
    bands.push_back({{"name", b.name},
                     {"value", json_number(b.value)},
                     {"lo", json_number(b.lo)},
                     {"hi", json_number(b.hi)},
                     {"pass", b.pass}});
  }
  doc["bands"] = bands;
  json rows = json::array();
  for (const Row& r : out.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"d", r.d},
                    {"H", json_number(r.hurst)},
                    {"n", json_number(r.n)},
                    {"t", json_number(r.t)},
                    {"order", r.order},
                    {"estimate", json_number(r.estimate)},
                    {"se", json_number(r.se)},
                    {"target", json_number(r.target)},
                    {"ratio", json_number(r.ratio)}});
  }
  doc["rows"] = rows;
  if (!out.extra.empty()) doc["extra"] = out.extra;
  return doc.dump(2) + "\n";
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int dispatch(Options& o, const std::vector<std::string>& argv) {
  validate(o);
  fs::create_directories(o.output_dir);
  const std::string started = utc_now();

  Outcome out;
  if (o.command == "simulate-fbm") out = run_simulate_fbm(o);
  else if (o.command == "constants") out = run_constants(o);
  else if (o.command == "verify") out = run_verify(o);
  else if (o.command == "limit-law") out = run_limit_law(o);
  else if (o.command == "first-order") out = run_first_order(o);
  else if (o.command == "fdd") out = run_fdd(o);
  else if (o.command == "zprocess") out = run_zprocess(o);
  else throw InputError("unknown command " + o.command);

  const bool pass =
      std::all_of(out.bands.begin(), out.bands.end(), [](const Band& b) { return b.pass; });
  const fs::path dir(o.output_dir);
  const std::string csv = render_csv(out.rows);
  const std::string summary = render_summary(o, out, pass);
  write_atomic(dir / "results.csv", csv);
  write_atomic(dir / "summary.json", summary);

  json manifest;
  manifest["version"] = occ_version();
  manifest["argv"] = argv;
  manifest["config"] = config_json(o);
  manifest["workers"] = o.workers;
  manifest["started_utc"] = started;
  manifest["finished_utc"] = utc_now();
  manifest["files"] = {
      {"results.csv", {{"bytes", csv.size()}, {"sha256", sha256_hex(csv)}}},
      {"summary.json", {{"bytes", summary.size()}, {"sha256", sha256_hex(summary)}}}};
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  for (const Band& b : out.bands)
    if (!b.pass) std::cerr << "band failed: " << b.name << " value " << number(b.value) << '\n';
  return pass ? kExitOk : kExitBand;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occulab: occupation-time limit laws for critical fractional Brownian motion"};
  app.set_version_flag("--version", std::string(occ_version()));
  app.set_config("--config", "", "read options from a flat key = value file");
  app.require_subcommand(1);

  Options o;
  app.add_option("--dim", o.dim, "spatial dimension d")->capture_default_str();
  app.add_option("--hurst", o.hurst, "Hurst index H (defaults to 1/d in the critical case)");
  app.add_flag("--critical", o.critical, "require H * d == 1");
  app.add_option("--function", o.function,
                 "test function, e.g. gaussdiff:sigma=2, gauss, zero, const:value=1");
  app.add_option("--n", o.n_list, "scaling parameter(s) n")->delimiter(',');
  app.add_option("--t", o.t_list, "time exponent(s) t")->delimiter(',');
  app.add_option("--replicas", o.replicas, "Monte Carlo replicas (command default when 0)");
  app.add_option("--spacing", o.spacing, "grid spacing h")->capture_default_str();
  app.add_option("--seed", o.seed, "64-bit seed")->envname("OCCULAB_SEED")->capture_default_str();
  app.add_option("--output-dir", o.output_dir, "directory for results")->capture_default_str();
  app.add_option("--workers", o.workers, "worker threads")->capture_default_str();
  app.add_option("--check", o.check, "verify: all|cov|taylor|lnd|lower")->capture_default_str();
  app.add_option("--trials", o.trials, "verify: random trials (check default when 0)");
  app.add_option("--steps", o.steps, "simulate-fbm: number of increments")->capture_default_str();
  app.add_option("--step", o.step, "simulate-fbm: time step")->capture_default_str();
  app.add_option("--sampler", o.sampler, "simulate-fbm: circulant|cholesky")
      ->capture_default_str();
  app.add_option("--walk-steps", o.walk_steps, "zprocess: walk length N")
      ->capture_default_str();
  app.add_flag("--no-skip", o.no_skip, "disable far-field block skipping (d = 2)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate-fbm", "sample fBm paths and write path.csv"},
      {"constants", "evaluate C_{f,d}, the log-energy bracket and the Gamma identity"},
      {"verify", "run the covariance and inequality sweeps"},
      {"limit-law", "second-order law of the normalized occupation functional"},
      {"first-order", "first-order (exponential) law for positive f"},
      {"fdd", "joint law of increments over consecutive intervals"},
      {"zprocess", "simulate Z(t), local time at the inverse running maximum"}};
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  o.command = app.get_subcommands().front()->get_name();

  std::vector<std::string> args(argv, argv + argc);
  try {
    return dispatch(o, args);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const StatusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_input_status(e.status) ? kExitInput : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

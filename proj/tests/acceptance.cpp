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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "constants.hpp"
#include "fbm.hpp"
#include "functions.hpp"
#include "limitlab.hpp"
#include "occupation.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace {

using namespace occulab;
namespace fs = std::filesystem;

int workers = 1;

class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failed_.push_back(what);
    }
  }
  void note(const std::string& text) { notes_.push_back(text); }
  bool pass() const { return pass_; }

  std::string text() const {
    std::string out;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    if (!failed_.empty()) {
      out += "; failed:";
      for (const auto& f : failed_) out += " [" + f + "]";
    }
    return out;
  }

 private:
  bool pass_ = true;
  std::vector<std::string> notes_;
  std::vector<std::string> failed_;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Mean {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t count = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double value() const { return sum / static_cast<double>(count); }
  double se() const {
    const double m = value();
    const double var = (sum_sq / static_cast<double>(count) - m * m) *
                       static_cast<double>(count) / static_cast<double>(count - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
  }
};

// Autocovariance at lags 0..8 plus endpoint moments of the summed path.
struct SeriesStats {
  std::vector<Mean> lag = std::vector<Mean>(9);
  Mean end2;
  Mean end4;

  void add(const std::vector<double>& x) {
    const std::size_t n = x.size();
    for (std::size_t k = 0; k < lag.size(); ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i + k < n; ++i) s += x[i] * x[i + k];
      lag[k].add(s / static_cast<double>(n - k));
    }
    double total = 0.0;
    for (double v : x) total += v;
    end2.add(total * total);
    end4.add(total * total * total * total);
  }
};

bool within(double a, double sa, double b, double sb, double k) {
  return std::abs(a - b) <= k * std::hypot(sa, sb);
}

bool criterion_sampler() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  constexpr std::uint64_t seed = 101;
  for (double hurst : {0.25, 1.0 / 3.0, 0.5}) {
    constexpr std::int64_t n = 1024;
    constexpr std::int64_t replicas = 5000;
    const fbm::CirculantSampler sampler(hurst, n);
    SeriesStats st;
    std::vector<double> a(n), b(n);
    for (std::int64_t r = 0; r < replicas / 2; ++r) {
      NormalStream rng(seed, static_cast<std::uint64_t>(r), 0);
      sampler.sample_pair(rng, a, b);
      st.add(a);
      st.add(b);
    }
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k) {
      const double z = (st.lag[k].value() - fbm::fgn_autocovariance(k, hurst)) / st.lag[k].se();
      worst = std::max(worst, std::abs(z));
    }
    v.require(worst <= 4.0, fmt("autocov H=%.4f max|z|=%.2f", hurst, worst));
    v.note(fmt("H=%.3f autocov max|z|=%.2f", hurst, worst));
  }
  for (double hurst : {0.25, 1.0 / 3.0, 0.5}) {
    constexpr std::int64_t n = 256;
    constexpr std::int64_t replicas = 5000;
    const fbm::CirculantSampler circ(hurst, n);
    const fbm::CholeskySampler chol(hurst, n);
    SeriesStats sc, sk;
    std::vector<double> a(n), b(n);
    for (std::int64_t r = 0; r < replicas / 2; ++r) {
      NormalStream rng(seed + 1, static_cast<std::uint64_t>(r), 0);
      circ.sample_pair(rng, a, b);
      sc.add(a);
      sc.add(b);
    }
    for (std::int64_t r = 0; r < replicas; ++r) {
      NormalStream rng(seed + 2, static_cast<std::uint64_t>(r), 0);
      chol.sample(rng, a);
      sk.add(a);
    }
    bool ok = within(sc.end2.value(), sc.end2.se(), sk.end2.value(), sk.end2.se(), 4.0) &&
              within(sc.end4.value(), sc.end4.se(), sk.end4.value(), sk.end4.se(), 4.0);
    for (int k = 0; k <= 8; ++k)
      ok = ok && within(sc.lag[k].value(), sc.lag[k].se(), sk.lag[k].value(), sk.lag[k].se(), 4.0);
    v.require(ok, fmt("circulant vs cholesky H=%.4f", hurst));
    v.note(fmt("H=%.3f E[B(N)^2] circ=%.2f chol=%.2f exact=%.2f", hurst, sc.end2.value(),
               sk.end2.value(), std::pow(256.0, 2.0 * hurst)));
  }
  const double elapsed = seconds_since(start);
  v.require(elapsed < 60.0, "runtime < 60 s");
  v.note(fmt("%.1f s", elapsed));
  std::printf("criterion 1 (sampler): %s %s\n", v.pass() ? "PASS" : "FAIL", v.text().c_str());
  return v.pass();
}

bool criterion_constants() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  for (double sigma : {1.5, 2.0, 4.0}) {
    const auto f = functions::TestFunction::gaussian_difference(2, sigma);
    const double closed = 4.0 * std::log((1.0 + sigma * sigma) / (2.0 * sigma));
    const double rel = std::abs(constants::c_fd(f).c_fd_squared - closed) / closed;
    v.require(rel <= 1e-6, fmt("c_fd sigma=%g rel=%.2e", sigma, rel));
    v.note(fmt("sigma=%g rel err %.1e", sigma, rel));
  }
  double worst_gamma = 0.0;
  for (int d = 1; d <= 6; ++d) worst_gamma = std::max(worst_gamma, constants::gamma_identity_check(d));
  v.require(worst_gamma <= 1e-10, fmt("gamma %.2e", worst_gamma));
  v.note(fmt("gamma max %.1e", worst_gamma));
  for (double sigma : {2.0, 4.0}) {
    const auto f = functions::TestFunction::gaussian_difference(2, sigma);
    const double residual = constants::norm1_residual(f);
    v.require(residual <= 1e-3, fmt("norm1 sigma=%g residual=%.4f", sigma, residual));
    v.note(fmt("sigma=%g norm1 residual %.4f", sigma, residual));
  }
  const double elapsed = seconds_since(start);
  v.require(elapsed < 30.0, "runtime seconds");
  v.note(fmt("%.1f s", elapsed));
  std::printf("criterion 2 (constants): %s %s\n", v.pass() ? "PASS" : "FAIL", v.text().c_str());
  return v.pass();
}

bool criterion_checks() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  const auto cov = checks::check_cov_bounds(1000000, 303);
  v.require(cov.violations == 0, fmt("cov violations %lld", static_cast<long long>(cov.violations)));
  const auto taylor = checks::check_taylor_bound(200, 200, 50);
  v.require(taylor.violations == 0,
            fmt("taylor violations %lld", static_cast<long long>(taylor.violations)));
  double min_ratio = 1e300;
  for (int points = 1; points <= 4; ++points) {
    for (double hurst : {0.1, 0.25, 1.0 / 3.0, 0.5}) {
      const auto lnd = checks::check_lnd(points, 100000, 404 + points, hurst);
      const double lo = lnd.parameter("min_ratio");
      const double hi = lnd.parameter("max_ratio");
      min_ratio = std::min(min_ratio, lo);
      v.require(lnd.violations == 0 && lo > 0.0 && hi <= points + 1e-12,
                fmt("lnd n=%d H=%.3f min=%.3g max=%.6g", points, hurst, lo, hi));
    }
  }
  const auto lower = checks::check_lower_inequality();
  v.require(lower.violations == 0,
            fmt("lower violations %lld", static_cast<long long>(lower.violations)));
  const double elapsed = seconds_since(start);
  v.require(elapsed < 120.0, "runtime < 2 min");
  v.note(fmt("cov %lld trials, taylor %lld points, lnd min ratio %.3g, lower %lld points, 0 violations; "
             "%.1f s",
             static_cast<long long>(cov.trials), static_cast<long long>(taylor.trials), min_ratio,
             static_cast<long long>(lower.trials), elapsed));
  std::printf("criterion 3 (inequalities): %s %s\n", v.pass() ? "PASS" : "FAIL", v.text().c_str());
  return v.pass();
}

void odd_moments(Verdict& v, const limitlab::MomentSummary& s, const char* label) {
  for (int order : {1, 3}) {
    const double z = s.estimate[order - 1] / s.se[order - 1];
    v.require(std::abs(z) <= 3.0, fmt("%s m%d z=%.2f", label, order, z));
    v.note(fmt("%s m%d=%.3f(%.3f)", label, order, s.estimate[order - 1], s.se[order - 1]));
  }
}

bool criterion_second_order_d2() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  const auto f = functions::TestFunction::gaussian_difference(2, 2.0);
  std::vector<double> ks, ks_se;
  limitlab::MomentSummary last;
  for (double n : {6.0, 9.0, 12.0}) {
    occupation::OccupationConfig cfg;
    cfg.n = n;
    cfg.t = 1.0;
    const auto r = limitlab::run_second_order(f, cfg, 4000, 505, workers);
    ks.push_back(r.summary.ks_distance);
    ks_se.push_back(r.summary.ks_se);
    v.note(fmt("n=%g KS=%.4f(%.4f)", n, r.summary.ks_distance, r.summary.ks_se));
    last = r.summary;
  }
  for (std::size_t i = 0; i + 1 < ks.size(); ++i)
    v.require(ks[i + 1] <= ks[i] + 2.0 * std::hypot(ks_se[i], ks_se[i + 1]),
              fmt("KS increase at step %zu", i));
  odd_moments(v, last, "n=12");
  const double ratio = last.variance.value;
  v.require(ratio >= 0.6 && ratio <= 1.4, fmt("var ratio %.3f", ratio));
  v.note(fmt("var/C^2t=%.3f", ratio));
  v.require(last.kurtosis.value - 2.0 * last.kurtosis.se > 1.0,
            fmt("kurtosis %.2f(%.2f)", last.kurtosis.value, last.kurtosis.se));
  v.note(fmt("excess kurtosis %.2f(%.2f)", last.kurtosis.value, last.kurtosis.se));
  const double elapsed = seconds_since(start);
  v.require(elapsed < 600.0, "runtime < 10 min");
  v.note(fmt("%.1f s", elapsed));
  std::printf("criterion 4 (second order, d=2): %s %s\n", v.pass() ? "PASS" : "FAIL",
              v.text().c_str());
  return v.pass();
}

bool criterion_second_order_d3() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  const auto f = functions::TestFunction::gaussian_difference(3, 2.0);
  occupation::OccupationConfig cfg;
  cfg.n = 10.0;
  cfg.t = 1.0;
  const auto r = limitlab::run_second_order(f, cfg, 4000, 606, workers);
  const double ratio = r.summary.variance.value;
  v.require(ratio >= 0.5 && ratio <= 1.5, fmt("var ratio %.3f", ratio));
  v.note(fmt("var/C^2t=%.3f", ratio));
  odd_moments(v, r.summary, "n=10");
  const double elapsed = seconds_since(start);
  v.require(elapsed < 600.0, "runtime < 10 min");
  v.note(fmt("%.1f s", elapsed));
  std::printf("criterion 5 (second order, d=3): %s %s\n", v.pass() ? "PASS" : "FAIL",
              v.text().c_str());
  return v.pass();
}

bool criterion_first_order() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  const auto f = functions::TestFunction::plain_gaussian(2);
  for (double t : {1.0, 2.0}) {
    double ks_small = 0.0;
    for (double n : {6.0, 12.0}) {
      occupation::OccupationConfig cfg;
      cfg.n = n;
      cfg.t = t;
      const auto r = limitlab::run_first_order(f, cfg, 4000, 707, workers);
      if (n == 6.0) {
        ks_small = r.summary.ks_distance;
        continue;
      }
      const double rel = std::abs(r.summary.mean.value - r.target_mean) / r.target_mean;
      v.require(rel <= 0.15, fmt("t=%g mean rel %.3f", t, rel));
      v.require(r.summary.ks_distance < ks_small,
                fmt("t=%g KS %.4f !< %.4f", t, r.summary.ks_distance, ks_small));
      v.note(fmt("t=%g mean=%.3f target=%.3f KS n=6 %.4f n=12 %.4f", t, r.summary.mean.value,
                 r.target_mean, ks_small, r.summary.ks_distance));
    }
  }
  const double elapsed = seconds_since(start);
  v.require(elapsed < 300.0, "runtime < 5 min");
  v.note(fmt("%.1f s", elapsed));
  std::printf("criterion 6 (first order): %s %s\n", v.pass() ? "PASS" : "FAIL", v.text().c_str());
  return v.pass();
}

bool criterion_zprocess() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  for (double t : {0.5, 1.0, 2.0}) {
    const auto z = limitlab::run_zprocess(t, 1000000, 2000, 808, workers);
    const double rel = std::abs(z.mean.value - t) / t;
    v.require(rel <= 0.05, fmt("t=%g mean rel %.3f", t, rel));
    v.require(z.ks_distance < 0.05, fmt("t=%g KS %.4f", t, z.ks_distance));
    v.note(fmt("t=%g mean=%.4f KS=%.4f", t, z.mean.value, z.ks_distance));
  }
  const double elapsed = seconds_since(start);
  v.require(elapsed < 120.0, "runtime < 2 min");
  v.note(fmt("%.1f s", elapsed));
  std::printf("criterion 7 (limit process): %s %s\n", v.pass() ? "PASS" : "FAIL",
              v.text().c_str());
  return v.pass();
}

bool criterion_fdd() {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  const auto f = functions::TestFunction::gaussian_difference(2, 2.0);
  occupation::OccupationConfig cfg;
  cfg.n = 8.0;
  const auto r = limitlab::run_fdd(f, cfg, {{0.0, 1.0}, {1.0, 2.0}}, 4000, 909, workers);
  const auto& c = r.covariance;
  const double z = c[0][1].value / c[0][1].se;
  v.require(std::abs(z) <= 4.0, fmt("cross-cov z=%.2f", z));
  const double ratio = c[1][1].value / c[0][0].value;
  v.require(ratio >= 0.6 && ratio <= 1.4, fmt("var ratio %.3f", ratio));
  const double elapsed = seconds_since(start);
  v.require(elapsed < 600.0, "runtime < 10 min");
  v.note(fmt("cross-cov %.4f(%.4f) var ratio %.3f; %.1f s", c[0][1].value, c[0][1].se, ratio,
             elapsed));
  std::printf("criterion 8 (fdd): %s %s\n", v.pass() ? "PASS" : "FAIL", v.text().c_str());
  return v.pass();
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" + std::string(OCCULAB_CLI) + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool criterion_reproducibility() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "occulab_acceptance_repro";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"limit-law", "limit-law --n 5,6 --t 1 --replicas 400 --seed 9"},
      {"first-order", "first-order --n 5 --t 1,2 --replicas 400 --seed 9"},
      {"fdd", "fdd --n 5 --replicas 300 --seed 9"},
      {"zprocess", "zprocess --t 0.5,1 --walk-steps 100000 --replicas 400 --seed 9"},
  };
  for (const auto& [name, args] : experiments) {
    std::vector<std::string> bodies;
    for (const char* tag : {"w1", "w8", "w1b"}) {
      const fs::path dir = root / name / tag;
      const int w = std::string(tag) == "w8" ? 8 : 1;
      const int code = run_cli(args + " --workers " + std::to_string(w) + " --output-dir " +
                               dir.string());
      v.require(code == 0 || code == 1, fmt("%s exit %d", name.c_str(), code));
      bodies.push_back(slurp(dir / "results.csv"));
    }
    const bool same = !bodies[0].empty() && bodies[0] == bodies[1] && bodies[0] == bodies[2];
    v.require(same, name + " results.csv differs");
    v.note(fmt("%s %zu bytes identical=%s", name.c_str(), bodies[0].size(), same ? "yes" : "no"));
  }
  std::printf("criterion 9 (reproducibility): %s %s\n", v.pass() ? "PASS" : "FAIL",
              v.text().c_str());
  return v.pass();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--workers=", 0) == 0)
      workers = std::max(1, std::atoi(arg.c_str() + 10));
    else
      selected.push_back(std::atoi(arg.c_str()));
  }
  const std::vector<std::function<bool()>> criteria = {
      criterion_sampler,      criterion_constants,        criterion_checks,
      criterion_second_order_d2, criterion_second_order_d3, criterion_first_order,
      criterion_zprocess,     criterion_fdd,              criterion_reproducibility,
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end())
      continue;
    bool ok = false;
    try {
      ok = criteria[i]();
    } catch (const std::exception& e) {
      std::printf("criterion %d: FAIL exception: %s\n", id, e.what());
    }
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("acceptance: %d failed\n", failures);
  return failures == 0 ? 0 : 1;
}

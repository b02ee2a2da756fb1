#include "teletraffic/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>

#include "teletraffic/errors.hpp"

namespace teletraffic {

std::vector<double> poisson_arrivals(double lambda, double horizon, RngStream& stream) {
  if (!(lambda > 0.0)) throw ParameterError("Poisson rate must be positive");
  if (!(horizon >= 0.0)) throw ParameterError("horizon must be nonnegative");
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(lambda * horizon * 1.1) + 16);
  for (double x = exp_deviate(stream, lambda); x <= horizon; x += exp_deviate(stream, lambda)) t.push_back(x);
  return t;
}

std::vector<double> superpose(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
  return out;
}

std::pair<std::vector<double>, std::vector<double>> split(const std::vector<double>& times, double p, RngStream& stream) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("split probability must be in [0,1]");
  std::pair<std::vector<double>, std::vector<double>> out;
  for (double t : times) (uniform01(stream) <= p ? out.first : out.second).push_back(t);
  return out;
}

std::vector<double> window_counts(const std::vector<double>& times, double width, double horizon) {
  if (!(width > 0.0) || !(horizon >= width)) throw ParameterError("need 0 < width <= horizon");
  const auto n = static_cast<std::size_t>(std::floor(horizon / width));
  std::vector<double> c(n, 0.0);
  for (double t : times) {
    if (t <= 0.0) continue;
    const auto i = static_cast<std::size_t>(std::ceil(t / width)) - 1;
    if (i < n) c[i] += 1.0;
  }
  return c;
}

void Mmpp2Params::validate() const {
  if (!(lambda0 >= 0.0) || !(lambda1 >= 0.0) || !(lambda0 + lambda1 > 0.0)) throw ParameterError("MMPP rates must be nonnegative and not both zero");
  if (!(delta0 > 0.0) || !(delta1 > 0.0)) throw ParameterError("MMPP mode parameters must be positive");
  if (!(psi > 0.0)) throw ParameterError("MMPP scaling factor must be positive");
}

double Mmpp2Params::mode_prob(int m) const { return (m == 0 ? delta1 : delta0) / (delta0 + delta1); }

double Mmpp2Params::lambda_av() const { return lambda0 * mode_prob(0) + lambda1 * mode_prob(1); }

namespace {

struct Mmpp2State {
  Mmpp2Params p;
  bool started = false;
  int mode = 0;
  double mode_left = 0.0;  // time until the next switch

  void start(RngStream& s) {
    mode = uniform01(s) <= p.mode_prob(0) ? 0 : 1;
    mode_left = exp_deviate(s, p.psi * (mode == 0 ? p.delta0 : p.delta1));
    started = true;
  }

  // Time to the next arrival; switches mode as needed.
  double next(RngStream& s, std::vector<double>* switches, double now) {
    if (!started) start(s);
    double elapsed = 0.0;
    while (true) {
      const double rate = mode == 0 ? p.lambda0 : p.lambda1;
      const double gap = rate > 0.0 ? exp_deviate(s, rate) : std::numeric_limits<double>::infinity();
      if (gap < mode_left) {
        mode_left -= gap;
        return elapsed + gap;
      }
      elapsed += mode_left;
      if (switches) switches->push_back(now + elapsed);
      mode = 1 - mode;
      mode_left = exp_deviate(s, p.psi * (mode == 0 ? p.delta0 : p.delta1));
    }
  }
};

}  // namespace

Mmpp2Trace mmpp2_arrivals(const Mmpp2Params& p, double horizon, RngStream& stream) {
  p.validate();
  if (!(horizon >= 0.0)) throw ParameterError("horizon must be nonnegative");
  Mmpp2State st{p};
  st.start(stream);
  Mmpp2Trace tr;
  tr.initial_mode = st.mode;
  double t = 0.0;
  while (true) {
    t += st.next(stream, &tr.switch_times, t);
    if (t > horizon) break;
    tr.times.push_back(t);
    tr.modes.push_back(st.mode);
  }
  while (!tr.switch_times.empty() && tr.switch_times.back() > horizon) tr.switch_times.pop_back();
  return tr;
}

Deviate mmpp2_source(const Mmpp2Params& p) {
  p.validate();
  auto st = std::make_shared<Mmpp2State>(Mmpp2State{p});
  return [st](RngStream& s) { return st->next(s, nullptr, 0.0); };
}

Ar1Params ar1_fit(double mean, double variance, double autocov_sum) {
  if (!(variance > 0.0)) throw ParameterError("AR(1) fit needs a positive variance");
  if (!(autocov_sum >= 0.0)) throw ParameterError("AR(1) fit needs a nonnegative autocovariance sum");
  if (!(autocov_sum + variance > 0.0)) throw ParameterError("degenerate AR(1) moments");
  Ar1Params p;
  p.a = autocov_sum / (autocov_sum + variance);
  p.b = std::sqrt(variance * (1.0 - p.a * p.a));
  p.eta = (1.0 - p.a) * mean / p.b;
  return p;
}

std::vector<double> ar1_generate(const Ar1Params& p, std::size_t n, RngStream& stream) {
  if (!(std::abs(p.a) < 1.0)) throw ParameterError("AR(1) needs |a| < 1");
  if (!(p.b >= 0.0)) throw ParameterError("AR(1) needs b >= 0");
  const auto warm = static_cast<std::size_t>(10.0 * std::ceil(1.0 / (1.0 - p.a)));
  std::vector<double> x;
  x.reserve(n);
  double prev = p.mean();
  for (std::size_t i = 0; i < warm + n; ++i) {
    prev = p.a * prev + p.b * gaussian_deviate(stream, p.eta, 1.0);
    if (i >= warm) x.push_back(prev);
  }
  return x;
}

namespace {

struct Ear1State {
  double lambda, a;
  bool started = false;
  double prev = 0.0;

  double next(RngStream& s) {
    if (!started) {
      started = true;
      prev = exp_deviate(s, lambda);
      return prev;
    }
    const bool innovate = uniform01(s) <= 1.0 - a;
    prev = a * prev + (innovate ? exp_deviate(s, lambda) : 0.0);
    return prev;
  }
};

void check_ear1(double lambda, double a) {
  if (!(lambda > 0.0)) throw ParameterError("EAR(1) rate must be positive");
  if (!(a >= 0.0 && a < 1.0)) throw ParameterError("EAR(1) needs 0 <= a < 1");
}

}  // namespace

std::vector<double> ear1_interarrivals(double lambda, double a, std::size_t n, RngStream& stream) {
  check_ear1(lambda, a);
  Ear1State st{lambda, a};
  std::vector<double> d(n);
  for (double& v : d) v = st.next(stream);
  return d;
}

Deviate ear1_source(double lambda, double a) {
  check_ear1(lambda, a);
  auto st = std::make_shared<Ear1State>(Ear1State{lambda, a});
  return [st](RngStream& s) { return st->next(s); };
}

PpbpParams PpbpParams::from_hurst(double lambda, double r, double H) {
  PpbpParams p;
  p.lambda = lambda;
  p.r = r;
  p.gamma = 3.0 - 2.0 * H;
  p.delta = 1.0 / p.gamma;
  p.validate();
  return p;
}

void PpbpParams::validate() const {
  if (!(gamma > 1.0)) throw ParameterError("PPBP shape must exceed 1; the burst mean is infinite otherwise");
  if (!(lambda > 0.0) || !(r > 0.0) || !(delta > 0.0)) throw ParameterError("PPBP rates and scale must be positive");
}

std::vector<double> ppbp_workload(const PpbpParams& p, std::size_t n, RngStream& stream, std::size_t warmup_slots) {
  p.validate();
  const double W = static_cast<double>(warmup_slots > 0 ? warmup_slots : 10 * n);
  const double end = static_cast<double>(n);
  std::vector<double> x(n, 0.0);
  std::vector<double> full(n + 1, 0.0);  // difference array of whole-slot coverage
  for (double s = -W + exp_deviate(stream, p.lambda); s < end; s += exp_deviate(stream, p.lambda)) {
    const double e = s + pareto_deviate(stream, p.gamma, p.delta);
    if (e <= 0.0) continue;
    const double a = std::max(s, 0.0), b = std::min(e, end);
    const auto fa = static_cast<std::size_t>(std::floor(a));
    const auto fb = static_cast<std::size_t>(std::floor(b));
    if (fa == fb) {
      if (fa < n) x[fa] += p.r * (b - a);
      continue;
    }
    x[fa] += p.r * (static_cast<double>(fa + 1) - a);
    full[fa + 1] += p.r;
    full[fb] -= p.r;
    if (fb < n) x[fb] += p.r * (b - static_cast<double>(fb));
  }
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run += full[i];
    x[i] += run;
  }
  return x;
}

std::vector<double> slotted_queue(const std::vector<double>& work, double c) {
  if (!(c > 0.0)) throw ParameterError("service capacity per slot must be positive");
  std::vector<double> q(work.size());
  double level = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    level = std::max(0.0, level + work[i] - c);
    q[i] = level;
  }
  return q;
}

void write_trace(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open trace file for writing: " + path);
  out << std::setprecision(17);
  for (double v : values) out << v << '\n';
  if (!out) throw ParameterError("failed writing trace file: " + path);
}

std::vector<double> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open trace file: " + path);
  std::vector<double> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double x;
    std::string rest;
    if (!(ls >> x) || (ls >> rest)) throw ParameterError(path + ":" + std::to_string(lineno) + ": expected one number per line");
    v.push_back(x);
  }
  return v;
}

}  // namespace teletraffic

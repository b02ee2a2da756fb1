#include "teletraffic/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "teletraffic/chain.hpp"
#include "teletraffic/config.hpp"
#include "teletraffic/delay.hpp"
#include "teletraffic/deterministic.hpp"
#include "teletraffic/dimension.hpp"
#include "teletraffic/errors.hpp"
#include "teletraffic/loss.hpp"
#include "teletraffic/multiservice.hpp"
#include "teletraffic/network.hpp"
#include "teletraffic/sim.hpp"
#include "teletraffic/traffic.hpp"

namespace teletraffic {

std::string format_cell(const Cell& c, int digits) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return fmt::format("{:.{}g}", *d, digits);
  }
  if (const auto* i = std::get_if<long long>(&c)) return fmt::format("{}", *i);
  return std::get<std::string>(c);
}

void write_table(const Table& t, std::ostream& out, int digits) {
  std::vector<std::size_t> width(t.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = t.columns[j].size();
  for (const auto& row : t.rows) {
    cells.emplace_back();
    for (std::size_t j = 0; j < row.size(); ++j) {
      cells.back().push_back(format_cell(row[j], digits));
      width[j] = std::max(width[j], cells.back().back().size());
    }
  }
  auto line = [&](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j) s += "  ";
      s += fmt::format("{:<{}}", v[j], width[j]);
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << '\n';
  };
  line(t.columns);
  for (const auto& r : cells) line(r);
}

void write_csv(const Table& t, std::ostream& out, int digits) {
  for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_cell(row[j], digits);
    out << '\n';
  }
}

Table read_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> v;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ',')) v.push_back(cur);
    if (!s.empty() && s.back() == ',') v.emplace_back();
    return v;
  };
  if (!std::getline(in, line)) return t;
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& f : split(line)) {
      char* end = nullptr;
      const long long iv = std::strtoll(f.c_str(), &end, 10);
      if (!f.empty() && end == f.c_str() + f.size()) {
        row.emplace_back(iv);
        continue;
      }
      const double dv = std::strtod(f.c_str(), &end);
      if (!f.empty() && end == f.c_str() + f.size())
        row.emplace_back(dv);
      else
        row.emplace_back(f);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

struct RunOptions {
  std::uint64_t seed = 1;
  std::optional<int> replications;
  std::optional<double> confidence;
  double tol = 1e-10;
  std::string format = "table";
  std::string output;
  int digits = 10;
  unsigned threads = 0;
};

// Model parameters shared by all subcommands; each subcommand binds the ones it needs.
struct Params {
  double A = 0, lambda = 0, mu = 0, M = 0, V = 0, mean = 0, var = 0, x = 0;
  double rho_hat = 0, offered = 0, pb = 0, target = 0, t = 0, alpha = 0.0015;
  double R = 1, p = 0, r = 0, b = 0, c = 0, U = 0, H = 0, a = 0, S = 0, delay = 0;
  double lambda0 = 0, lambda1 = 0, delta0 = 0, delta1 = 0, psi = 1, horizon = 0, zeta = 0;
  int k = 0, N = 0, k2 = 0, m = 1, Mi = 0;
  long long n = 0;
  bool conservative = false, exact = false;
  std::string kind, config;
  std::optional<double> opt_rho_hat, opt_offered, opt_lambda, opt_mu, opt_x;
};

Table record(const std::vector<std::pair<std::string, Cell>>& kv) {
  Table t;
  t.columns = {"metric", "value"};
  for (const auto& [k, v] : kv) t.rows.push_back({k, v});
  return t;
}

void queue_rows(std::vector<std::pair<std::string, Cell>>& kv, const QueueMetrics& q) {
  kv.emplace_back("arrival_rate", q.arrival_rate);
  if (q.blocking) kv.emplace_back("blocking", *q.blocking);
  kv.emplace_back("mean_queue", q.mean_queue);
  kv.emplace_back("mean_waiting", q.mean_waiting);
  kv.emplace_back("mean_in_service", q.mean_in_service);
  kv.emplace_back("mean_delay", q.mean_delay);
  kv.emplace_back("mean_wait", q.mean_wait);
  kv.emplace_back("utilization", q.utilization);
  kv.emplace_back("delay_prob", q.delay_prob);
  if (q.delayed_mean_delay) kv.emplace_back("delayed_mean_delay", *q.delayed_mean_delay);
  if (q.delayed_mean_wait) kv.emplace_back("delayed_mean_wait", *q.delayed_mean_wait);
  if (q.busy_period) kv.emplace_back("busy_period", *q.busy_period);
}

Table queue_record(const QueueMetrics& q) {
  std::vector<std::pair<std::string, Cell>> kv;
  queue_rows(kv, q);
  return record(kv);
}

std::string rational_text(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator()) : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Table deterministic_record(const DeterministicResult& d) {
  std::vector<std::pair<std::string, Cell>> kv;
  kv.emplace_back("infinite_queue", std::string(d.infinite_queue ? "yes" : "no"));
  kv.emplace_back("utilization", to_double(d.utilization));
  kv.emplace_back("utilization_exact", rational_text(d.utilization));
  if (!d.infinite_queue) {
    kv.emplace_back("blocking", to_double(d.blocking));
    kv.emplace_back("blocking_exact", rational_text(d.blocking));
    kv.emplace_back("mean_queue", to_double(d.mean_queue));
    kv.emplace_back("mean_queue_exact", rational_text(d.mean_queue));
    kv.emplace_back("cycle_length", to_double(d.cycle_length));
    for (const auto& [n, f] : d.state_fractions) kv.emplace_back(fmt::format("P({})", n), rational_text(f));
  }
  return record(kv);
}

// "exp:1", "det:1", "uniform:0,2", "pareto:1.5,1", "ear1:1,0.5",
// "mmpp2:l0,l1,d0,d1,psi". Rates for exp, means for the rest.
Deviate parse_source(const std::string& spec, const std::string& key) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("'" + key + "' expects kind:params, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  std::vector<double> v;
  std::istringstream ss(spec.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    const double d = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size()) throw ConfigError("'" + key + "' has a non-numeric parameter '" + tok + "'");
    v.push_back(d);
  }
  auto need = [&](std::size_t n) {
    if (v.size() != n) throw ConfigError("'" + key + "' of kind " + kind + " needs " + std::to_string(n) + " parameters");
  };
  if (kind == "exp") return need(1), exponential_source(v[0]);
  if (kind == "det") return need(1), deterministic_source(v[0]);
  if (kind == "uniform") return need(2), uniform_source(v[0], v[1]);
  if (kind == "pareto") return need(2), pareto_source(v[0], v[1]);
  if (kind == "ear1") return need(2), ear1_source(v[0], v[1]);
  if (kind == "mmpp2") return need(5), mmpp2_source(Mmpp2Params{v[0], v[1], v[2], v[3], v[4]});
  throw ConfigError("'" + key + "' has unknown source kind '" + kind + "'");
}

struct SimPlan {
  std::vector<std::string> metrics;
  std::function<std::vector<double>(RngStream&)> run;
};

SimPlan plan_simulation(const Config& cfg) {
  const std::string model = cfg.text("model");
  const std::set<std::string> run_keys = {"model", "seed", "replications", "confidence"};
  auto allow = [&](std::set<std::string> keys, std::set<std::string> lists = {}) {
    keys.insert(run_keys.begin(), run_keys.end());
    cfg.allow_only(keys, lists);
  };
  SimPlan plan;
  if (model == "des") {
    allow({"servers", "capacity", "discipline", "arrival", "service", "horizon", "warmup", "inspector"});
    DesConfig d;
    d.servers = cfg.integer_or("servers", 1);
    if (cfg.has("capacity")) d.capacity = cfg.integer("capacity");
    const std::string disc = cfg.text_or("discipline", "fifo");
    if (disc == "fifo")
      d.discipline = Discipline::fifo;
    else if (disc == "lifo")
      d.discipline = Discipline::lifo_preemptive;
    else
      throw ConfigError(cfg.where("discipline") + "'discipline' must be fifo or lifo");
    const int horizon = cfg.integer("horizon");
    if (horizon < 1) throw ConfigError(cfg.where("horizon") + "'horizon' must be positive");
    d.horizon = static_cast<std::size_t>(horizon);
    d.warmup_fraction = cfg.number_or("warmup", 0.1);
    d.inspector_rate = cfg.number_or("inspector", 0.0);
    d.keep_ledger = false;
    const std::string arr = cfg.text("arrival"), svc = cfg.text("service");
    parse_source(arr, "arrival");
    parse_source(svc, "service");
    plan.metrics = {"blocking", "mean_delay", "mean_wait", "mean_queue_pasta", "mean_queue_time", "utilization"};
    if (d.inspector_rate > 0.0) plan.metrics.push_back("mean_queue_inspector");
    plan.run = [d, arr, svc](RngStream& s) {
      // Fresh sources per replication; stateful sources must not be shared.
      const DesResult r = des_single_server(parse_source(arr, "arrival"), parse_source(svc, "service"), d, s);
      std::vector<double> v{r.blocking, r.mean_delay, r.mean_wait, r.mean_queue_pasta, r.mean_queue_time, r.utilization};
      if (r.mean_queue_inspector) v.push_back(*r.mean_queue_inspector);
      return v;
    };
  } else if (model == "mc-mm1") {
    allow({"lambda", "mu", "measurements"});
    const double lambda = cfg.number("lambda"), mu = cfg.number("mu");
    const auto n = static_cast<std::size_t>(cfg.integer("measurements"));
    plan.metrics = {"mean_queue"};
    plan.run = [=](RngStream& s) { return std::vector<double>{mc_mm1(lambda, mu, n, s)}; };
  } else if (model == "mc-mmkk") {
    allow({"lambda", "mu", "k", "arrivals"});
    const double lambda = cfg.number("lambda"), mu = cfg.number("mu");
    const int k = cfg.integer("k");
    const auto n = static_cast<std::size_t>(cfg.integer("arrivals"));
    plan.metrics = {"blocking"};
    plan.run = [=](RngStream& s) { return std::vector<double>{mc_mmkk(lambda, mu, k, n, s).blocking}; };
  } else if (model == "cellular") {
    allow({"channels", "mu", "arrivals"}, {"cells", "routing"});
    const CellularSpec spec = cellular_from_config(cfg);
    const auto n = static_cast<std::size_t>(cfg.integer("arrivals"));
    plan.metrics = {"blocking"};
    for (int i = 0; i < spec.cells; ++i) plan.metrics.push_back(fmt::format("cell{}_blocking", i + 1));
    plan.run = [spec, n](RngStream& s) {
      const CellularResult r = cellular_sim(spec, n, s);
      std::vector<double> v{r.blocking};
      v.insert(v.end(), r.cell_blocking.begin(), r.cell_blocking.end());
      return v;
    };
  } else if (model == "loss-network") {
    allow({"arrivals"}, {"links", "routes"});
    const CircuitNetworkSpec spec = circuit_network_from_config(cfg);
    const auto n = static_cast<std::size_t>(cfg.integer("arrivals"));
    for (std::size_t i = 0; i < spec.routes.size(); ++i) plan.metrics.push_back(fmt::format("route{}_blocking", i + 1));
    plan.run = [spec, n](RngStream& s) { return loss_network_sim(spec, n, s).route_blocking; };
  } else if (model == "inspector") {
    allow({"lambda", "horizon", "picks"});
    const double lambda = cfg.number("lambda"), T = cfg.number("horizon");
    const auto picks = static_cast<std::size_t>(cfg.integer("picks"));
    plan.metrics = {"straddling_mean", "interval_mean"};
    plan.run = [=](RngStream& s) {
      const InspectorDemo d = poisson_inspector_paradox_demo(lambda, T, picks, s);
      return std::vector<double>{d.straddling_mean, d.interval_mean};
    };
  } else {
    throw ConfigError(cfg.where("model") + "unknown model '" + model + "'");
  }
  return plan;
}

struct SelfCheck {
  std::string name;
  double value;
  double expected;
  double tol;
};

std::vector<SelfCheck> selfcheck_suite() {
  std::vector<SelfCheck> s;
  s.push_back({"erlang_b(20,30)", erlang_b(20, 30), 0.0085, 0.00005});
  s.push_back({"erlang_b(100,117)", erlang_b(100, 117), 0.0098, 0.00005});
  s.push_back({"dim_erlang_b(100,1%)", static_cast<double>(dim_erlang_b(100, 0.01).k), 117, 0});
  s.push_back({"dim_erlang_b(10000,1%)", static_cast<double>(dim_erlang_b(10000, 0.01).k), 9970, 0});
  s.push_back({"hayward(21,31.5,24)", hayward_blocking(21, 31.5, 24), 0.1145, 0.00005});
  s.push_back({"erm(21,31.5,24)", erm_blocking(21, 31.5, 24, NeqRounding::conservative), 0.1194, 0.0001});
  s.push_back({"mm1 E[Q]", mm1_metrics(2e6, 2.1e6).mean_queue, 20, 1e-9});
  s.push_back({"mg1 E[Q]", mg1_metrics(1.5, ServiceSpec::from_variance(0.4, 0.2)).mean_queue, 1.6125, 1e-9});
  s.push_back({"ps E[D|x]", ps_conditional_delay(0.8 / 4e-6, 4e-6, 16e-6), 80e-6, 1e-15});
  s.push_back({"link 64.67186", dim_link_heterogeneous({SourceClass::on_off(20, 10, 0.1), SourceClass::on_off(80, 1, 0.05)}).capacity,
               64.67186, 1e-4});
  const AccessRates ar = tdma_fmux_rates(1000, 0.05, 100);
  s.push_back({"tdma per user", ar.per_user, 1020, 1e-9});
  s.push_back({"fmux total", ar.fmux_total, 100020, 1e-6});
  s.push_back({"mm1n rho=N=1000", *mm1n_metrics(1000, 1, 1000).blocking, 0.999, 0.001});
  const auto ms = ms_blocking({{1, 0.3, 3.0}, {2, 0.2, 5.0}}, 2);
  s.push_back({"multiservice k=2 voice", ms[0], 281.0 / 661.0, 1e-12});
  s.push_back({"multiservice k=2 video", ms[1], 461.0 / 661.0, 1e-12});
  return s;
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Teletraffic models, dimensioning and simulation", "ttk"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", o_.seed, "RNG seed");
    app.add_option("--replications", o_.replications, "independent replications")->check(CLI::Range(2, 1000000));
    app.add_option("--confidence", o_.confidence, "confidence level")->check(CLI::Range(0.5, 0.999999));
    app.add_option("--tol", o_.tol, "solver tolerance")->check(CLI::PositiveNumber);
    app.add_option("--format", o_.format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
    app.add_option("--output", o_.output, "write output to a file");
    app.add_option("--digits", o_.digits, "significant digits")->check(CLI::Range(1, 17));
    app.add_option("--threads", o_.threads, "worker threads for replications (0 = hardware)");

    setup_compute(app);
    setup_dimension(app);
    setup_simulate(app);
    setup_network(app);
    setup_traffic(app);
    auto* self = app.add_subcommand("selfcheck", "run the golden-value suite");
    self->callback([this] { action_ = [this] { return selfcheck(); }; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
      app.parse(rev);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << '\n';
      return static_cast<int>(ExitCode::validation);
    }
    try {
      return action_();
    } catch (const Error& e) {
      err_ << "error: " << e.what() << '\n';
      return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return static_cast<int>(ExitCode::validation);
    }
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  RunOptions o_;
  Params p_;
  std::function<int()> action_ = [] { return 0; };

  int emit(const Table& t) {
    std::ofstream file;
    std::ostream* os = &out_;
    if (!o_.output.empty()) {
      file.open(o_.output);
      if (!file) throw ParameterError("cannot open output file: " + o_.output);
      os = &file;
    }
    if (o_.format == "csv")
      write_csv(t, *os, o_.digits);
    else
      write_table(t, *os, o_.digits);
    return 0;
  }

  CLI::Option* opt(CLI::App* s, const std::string& name, double& v, const std::string& help, bool required = true) {
    auto* o = s->add_option(name, v, help);
    if (required) o->required();
    return o;
  }
  CLI::Option* opt(CLI::App* s, const std::string& name, int& v, const std::string& help, bool required = true) {
    auto* o = s->add_option(name, v, help);
    if (required) o->required();
    return o;
  }

  void on(CLI::App* s, std::function<Table()> f) {
    s->callback([this, f] { action_ = [this, f] { return emit(f()); }; });
  }

  void setup_compute(CLI::App& app) {
    auto* c = app.add_subcommand("compute", "evaluate an analytic model")->require_subcommand(1);
    c->fallthrough();
    Params& p = p_;

    auto* s = c->add_subcommand("erlang-b", "M/M/k/k blocking");
    opt(s, "--A", p.A, "offered load (erlangs)");
    opt(s, "--k", p.k, "servers");
    on(s, [&p] {
      const LossResult r = mmkk_stats(p.A, p.k);
      return record({{"offered", r.offered}, {"blocking", r.blocking}, {"carried", r.carried}, {"overflow", r.overflow}, {"utilization", r.utilization}});
    });

    s = c->add_subcommand("erlang-c", "M/M/k delay probability");
    opt(s, "--A", p.A, "offered load (erlangs)");
    opt(s, "--k", p.k, "servers");
    on(s, [&p] { return record({{"delay_probability", erlang_c(p.A, p.k)}, {"delay_factor", mmk_delay_factor(p.A, p.k)}}); });

    s = c->add_subcommand("engset", "finite-source loss system");
    opt(s, "--M", p.Mi, "sources");
    opt(s, "--k", p.k, "servers");
    s->add_option("--rho-hat", p.opt_rho_hat, "idle-source intensity");
    s->add_option("--offered", p.opt_offered, "offered load T_o");
    on(s, [&p] {
      if (p.opt_rho_hat.has_value() == p.opt_offered.has_value()) throw ParameterError("give exactly one of --rho-hat or --offered");
      if (p.opt_offered) return record({{"blocking", engset_from_offered(p.Mi, p.k, *p.opt_offered)}});
      const EngsetLoads e = engset_loads(p.Mi, p.k, *p.opt_rho_hat);
      return record({{"blocking", e.blocking}, {"intended", e.intended}, {"offered", e.offered}, {"carried", e.carried}});
    });

    s = c->add_subcommand("overflow", "Hayward and equivalent random blocking of overflow traffic");
    opt(s, "--M", p.M, "overflow mean");
    opt(s, "--V", p.V, "overflow variance");
    opt(s, "--k2", p.k2, "secondary servers");
    s->add_flag("--conservative", p.conservative, "round N_eq down");
    on(s, [&p] {
      const auto rounding = p.conservative ? NeqRounding::conservative : NeqRounding::nearest;
      const ErmEquivalent eq = erm_equivalent(p.M, p.V, rounding);
      return record({{"hayward", hayward_blocking(p.M, p.V, p.k2)},
                     {"erm", erm_blocking(p.M, p.V, p.k2, rounding)},
                     {"a_eq", eq.a_eq},
                     {"n_eq_exact", eq.n_eq_exact},
                     {"n_eq", static_cast<long long>(eq.n_eq)}});
    });

    s = c->add_subcommand("mm1", "M/M/1 queue");
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mu", p.mu, "service rate");
    on(s, [&p] { return queue_record(mm1_metrics(p.lambda, p.mu)); });

    s = c->add_subcommand("mmk", "M/M/k queue");
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mu", p.mu, "service rate");
    opt(s, "--k", p.k, "servers");
    on(s, [&p] { return queue_record(mmk_metrics(p.lambda, p.mu, p.k)); });

    s = c->add_subcommand("mm1n", "M/M/1/N queue");
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mu", p.mu, "service rate");
    opt(s, "--N", p.N, "system capacity");
    on(s, [&p] { return queue_record(mm1n_metrics(p.lambda, p.mu, p.N)); });

    s = c->add_subcommand("mmkn", "M/M/k/N queue");
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mu", p.mu, "service rate");
    opt(s, "--k", p.k, "servers");
    opt(s, "--N", p.N, "system capacity");
    on(s, [&p] { return queue_record(mmkn_metrics(p.lambda, p.mu, p.k, p.N)); });

    s = c->add_subcommand("mminf", "M/M/infinity system");
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mu", p.mu, "service rate");
    on(s, [&p] {
      const MmInfMetrics m = mminf_metrics(p.lambda, p.mu);
      return record({{"offered", m.offered}, {"mean_queue", m.mean_queue}, {"no_collision", mminf_no_collision_probability(p.lambda, p.mu)}});
    });

    s = c->add_subcommand("mg1", "M/G/1 queue (Pollaczek-Khinchine)");
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mean", p.mean, "mean service time");
    opt(s, "--var", p.var, "service time variance");
    on(s, [&p] {
      const Mg1Metrics m = mg1_metrics(p.lambda, ServiceSpec::from_variance(p.mean, p.var));
      return record({{"rho", m.rho}, {"mean_residual", m.mean_residual}, {"mean_wait", m.mean_wait}, {"mean_delay", m.mean_delay},
                     {"mean_queue", m.mean_queue}, {"mean_waiting", m.mean_waiting}, {"busy_period", m.busy_period}});
    });

    s = c->add_subcommand("ps", "M/G/1 processor sharing");
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mean", p.mean, "mean service requirement");
    s->add_option("--x", p.opt_x, "service requirement for the conditional delay");
    on(s, [&p] {
      const PsMetrics m = ps_metrics(p.lambda, p.mean);
      std::vector<std::pair<std::string, Cell>> kv{{"rho", m.rho}, {"mean_queue", m.mean_queue}, {"mean_delay", m.mean_delay}};
      if (p.opt_x) kv.emplace_back("conditional_delay", ps_conditional_delay(p.lambda, p.mean, *p.opt_x));
      return record(kv);
    });

    s = c->add_subcommand("deterministic", "D/D/1, D/D/k, D/D/k/k and D/D/1/N");
    s->add_option("--kind", p.kind, "dd1, ddk, ddkk or dd1n")->required()->check(CLI::IsMember({"dd1", "ddk", "ddkk", "dd1n"}));
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mu", p.mu, "service rate");
    opt(s, "--k", p.k, "servers", false);
    opt(s, "--N", p.N, "capacity", false);
    on(s, [&p] {
      if (p.kind == "dd1") return deterministic_record(dd1(p.lambda, p.mu));
      if (p.kind == "ddk") return deterministic_record(ddk(p.lambda, p.mu, p.k));
      if (p.kind == "ddkk") return deterministic_record(ddkk(p.lambda, p.mu, p.k));
      return deterministic_record(dd1n(p.lambda, p.mu, p.N));
    });

    s = c->add_subcommand("multiservice", "multi-rate loss system");
    s->add_option("--config", p.config, "config with k and a [classes] section (slots, lambda, holding)")->required();
    on(s, [&p] {
      const Config cfg = Config::load(p.config);
      cfg.allow_only({"k"}, {"classes"});
      std::vector<ServiceClass> classes;
      for (const auto& item : cfg.list("classes")) {
        item.allow_only({"slots", "lambda", "holding"});
        classes.push_back({item.integer("slots"), item.number("lambda"), item.number_or("holding", 1.0)});
      }
      const int k = cfg.integer("k");
      const auto B = ms_blocking(classes, k);
      std::vector<std::pair<std::string, Cell>> kv;
      for (std::size_t i = 0; i < B.size(); ++i) kv.emplace_back(fmt::format("class{}_blocking", i + 1), B[i]);
      return record(kv);
    });

    s = c->add_subcommand("mmpp2", "MMPP(2)/M/1/N queue");
    opt(s, "--lambda0", p.lambda0, "arrival rate in mode 0");
    opt(s, "--lambda1", p.lambda1, "arrival rate in mode 1");
    opt(s, "--delta0", p.delta0, "rate of leaving mode 0");
    opt(s, "--delta1", p.delta1, "rate of leaving mode 1");
    opt(s, "--mu", p.mu, "service rate");
    opt(s, "--N", p.N, "capacity");
    opt(s, "--psi", p.psi, "mode duration scaling", false);
    on(s, [&p] {
      const Mmpp2Chain ch = mmpp2_m1n_build(p.lambda0, p.lambda1, p.psi * p.delta0, p.psi * p.delta1, p.mu, p.N);
      const Mmpp2Metrics m = mmpp2_m1n_metrics(ch, mmpp2_m1n_level_reduction(ch));
      return record({{"blocking", m.blocking}, {"lambda_av", m.lambda_av}, {"mode0_prob", m.mode_probs[0]}, {"mode1_prob", m.mode_probs[1]},
                     {"mean_queue", m.mean_queue}, {"utilization", m.utilization}});
    });

    s = c->add_subcommand("mem1n", "M/Em/1/N queue");
    opt(s, "--lambda", p.lambda, "arrival rate");
    opt(s, "--mu", p.mu, "service rate");
    opt(s, "--m", p.m, "Erlang phases");
    opt(s, "--N", p.N, "capacity");
    on(s, [&p] {
      const Mem1nResult r = mem1n_solve(p.lambda, p.mu, p.m, p.N);
      return record({{"blocking", r.blocking}, {"mean_queue", r.mean_queue}, {"mean_delay", r.mean_delay}});
    });
  }

  void setup_dimension(CLI::App& app) {
    auto* d = app.add_subcommand("dimension", "size a system for a QoS target")->require_subcommand(1);
    d->fallthrough();
    Params& p = p_;

    auto* s = d->add_subcommand("erlang-b", "servers for a blocking target");
    opt(s, "--A", p.A, "offered load");
    opt(s, "--pb", p.pb, "blocking target");
    on(s, [&p] {
      const ServerCount k = dim_erlang_b(p.A, p.pb);
      return record({{"servers", static_cast<long long>(k.k)}, {"blocking", k.achieved}});
    });

    s = d->add_subcommand("erlang-c", "servers for a delay target");
    opt(s, "--A", p.A, "offered load");
    s->add_option("--kind", p.kind, "probability, delay or factor")->required()->check(CLI::IsMember({"probability", "delay", "factor"}));
    opt(s, "--target", p.target, "target value");
    p.mu = 1.0;
    opt(s, "--mu", p.mu, "service rate (delay targets)", false);
    on(s, [&p] {
      const ErlangCTarget kind = p.kind == "probability" ? ErlangCTarget::delay_probability
                                 : p.kind == "delay"     ? ErlangCTarget::mean_delay
                                                         : ErlangCTarget::delay_factor;
      const ServerCount k = dim_erlang_c(p.A, kind, p.target, p.mu);
      return record({{"servers", static_cast<long long>(k.k)}, {"achieved", k.achieved}});
    });

    s = d->add_subcommand("link", "link capacity for on-off sources");
    s->add_option("--config", p.config, "config with alpha and a [classes] section");
    opt(s, "--N", p.N, "homogeneous sources", false);
    opt(s, "--p", p.p, "activity probability", false);
    opt(s, "--R", p.R, "peak rate", false);
    opt(s, "--alpha", p.alpha, "overflow probability", false);
    s->add_flag("--exact", p.exact, "exact binomial search");
    on(s, [&p] {
      if (!p.config.empty()) {
        const Config cfg = Config::load(p.config);
        cfg.allow_only({"alpha"}, {"classes"});
        const LinkDimension ld = dim_link_heterogeneous(source_classes_from_config(cfg), cfg.number_or("alpha", 0.0015));
        return record({{"capacity", ld.capacity}, {"mean", ld.mean}, {"variance", ld.variance}, {"peak_sum", ld.peak_sum}});
      }
      if (p.N < 1) throw ParameterError("give --config or --N/--p/--R");
      return record({{"capacity", dim_link_binomial(p.N, p.p, p.R, p.alpha, p.exact ? BinomialMode::exact : BinomialMode::gaussian)}});
    });

    s = d->add_subcommand("overflow", "secondary servers for overflow traffic");
    opt(s, "--M", p.M, "overflow mean");
    opt(s, "--V", p.V, "overflow variance");
    opt(s, "--pb", p.pb, "blocking target");
    s->add_flag("--conservative", p.conservative, "round N_eq down");
    on(s, [&p] {
      const OverflowDimension h = hayward_dimension(p.M, p.V, p.pb);
      const OverflowDimension e = erm_dimension(p.M, p.V, p.pb, p.conservative ? NeqRounding::conservative : NeqRounding::nearest);
      return record({{"hayward_servers", static_cast<long long>(h.servers)},
                     {"hayward_equivalent_k", static_cast<long long>(h.equivalent_k)},
                     {"erm_servers", static_cast<long long>(e.servers)},
                     {"erm_n_eq", static_cast<long long>(e.equivalent_k)},
                     {"erm_blocking", e.achieved}});
    });

    s = d->add_subcommand("percentile", "M/M/1 rate for a delay percentile");
    s->add_option("--lambda", p.opt_lambda, "arrival rate (solve for mu*)");
    s->add_option("--mu", p.opt_mu, "service rate (solve for lambda*)");
    opt(s, "--t", p.t, "delay threshold");
    opt(s, "--alpha", p.alpha, "exceedance probability");
    on(s, [&p] {
      if (p.opt_lambda.has_value() == p.opt_mu.has_value()) throw ParameterError("give exactly one of --lambda or --mu");
      if (p.opt_lambda) return record({{"mu_star", dim_service_rate_percentile(*p.opt_lambda, p.t, p.alpha)}});
      const PercentileDimension r = dim_arrival_rate_percentile(*p.opt_mu, p.t, p.alpha);
      if (!r.feasible) throw InfeasibleError("service rate too low: the delay percentile cannot be met at any arrival rate");
      return record({{"lambda_star", r.value}});
    });

    s = d->add_subcommand("multiplexing", "multiplexing gain of N M/M/1 streams");
    opt(s, "--lambda", p.lambda, "arrival rate per stream");
    opt(s, "--mu", p.mu, "service rate per stream");
    opt(s, "--N", p.N, "streams");
    on(s, [&p] {
      const MultiplexingGain g = multiplexing_gain(p.lambda, p.mu, p.N);
      return record({{"mu_star", g.mu_star}, {"gain", g.gain}});
    });

    s = d->add_subcommand("tdma", "TDMA versus full multiplexing for a mean delay");
    opt(s, "--lambda", p.lambda, "packet rate per user");
    opt(s, "--delay", p.delay, "mean delay target");
    opt(s, "--N", p.N, "users");
    on(s, [&p] {
      const AccessRates a = tdma_fmux_rates(p.lambda, p.delay, p.N);
      return record({{"per_user", a.per_user}, {"tdma_total", a.tdma_total}, {"fmux_total", a.fmux_total}});
    });
  }

  void setup_simulate(CLI::App& app) {
    auto* s = app.add_subcommand("simulate", "run a simulation scenario");
    s->fallthrough();
    s->add_option("scenario", p_.config, "scenario config file")->required();
    s->callback([this] { action_ = [this] { return simulate(); }; });
  }

  int simulate() {
    const Config cfg = Config::load(p_.config);
    const SimPlan plan = plan_simulation(cfg);
    const std::uint64_t seed = cfg.has("seed") && o_.seed == 1 ? static_cast<std::uint64_t>(cfg.integer("seed")) : o_.seed;
    const int reps = o_.replications.value_or(cfg.integer_or("replications", 10));
    const double conf = o_.confidence.value_or(cfg.number_or("confidence", 0.95));
    if (reps < 2) throw ParameterError("need at least two replications");
    const unsigned threads = o_.threads > 0 ? o_.threads : std::max(1u, std::thread::hardware_concurrency());
    const MultiReplicationSummary sum = run_replications_multi(static_cast<std::size_t>(reps), RngStream(seed), plan.run, conf, threads);
    Table t;
    t.columns.push_back("replication");
    for (const auto& m : plan.metrics) t.columns.push_back(m);
    for (std::size_t i = 0; i < sum.observations.size(); ++i) {
      std::vector<Cell> row{static_cast<long long>(i + 1)};
      for (double v : sum.observations[i]) row.emplace_back(v);
      t.rows.push_back(std::move(row));
    }
    std::vector<Cell> mean{std::string("mean")}, hw{std::string("half_width")};
    for (const auto& ci : sum.ci) {
      mean.emplace_back(ci.mean);
      hw.emplace_back(ci.half_width);
    }
    t.rows.push_back(mean);
    t.rows.push_back(hw);
    return emit(t);
  }

  void setup_network(CLI::App& app) {
    auto* n = app.add_subcommand("network", "network solvers")->require_subcommand(1);
    n->fallthrough();
    Params& p = p_;

    auto* s = n->add_subcommand("jackson", "open Jackson network");
    s->add_option("--config", p.config, "config with [queues] and [routing]")->required();
    on(s, [&p] {
      const Config cfg = Config::load(p.config);
      cfg.allow_only({}, {"queues", "routing"});
      const JacksonResult r = jackson_solve(jackson_from_config(cfg));
      Table t;
      t.columns = {"queue", "arrival_rate", "utilization", "mean_queue", "mean_delay"};
      for (std::size_t j = 0; j < r.arrival_rates.size(); ++j)
        t.rows.push_back({static_cast<long long>(j + 1), r.arrival_rates[j], r.utilization[j], r.queues[j].mean_queue, r.queues[j].mean_delay});
      t.rows.push_back({std::string("network"), std::string(""), std::string(""), r.mean_population, r.network_mean_delay});
      t.rows.push_back({std::string("p_all_empty"), r.prob_all_empty, std::string(""), std::string(""), std::string("")});
      return t;
    });

    s = n->add_subcommand("efpa", "Erlang fixed-point approximation");
    s->add_option("--config", p.config, "config with [links] and [routes]")->required();
    on(s, [this, &p] {
      const Config cfg = Config::load(p.config);
      cfg.allow_only({"damping", "max_iter"}, {"links", "routes"});
      const CircuitNetworkSpec spec = circuit_network_from_config(cfg);
      EfpaOptions eo;
      eo.tol = o_.tol;
      eo.damping = cfg.number_or("damping", 1.0);
      eo.max_iter = cfg.integer_or("max_iter", 10000);
      const EfpaResult r = efpa_solve(spec, eo);
      Table t;
      t.columns = {"kind", "id", "blocking", "reduced_load"};
      for (std::size_t j = 0; j < spec.links.size(); ++j) t.rows.push_back({std::string("link"), spec.links[j].id, r.link_blocking[j], r.link_offered[j]});
      for (std::size_t i = 0; i < spec.routes.size(); ++i)
        t.rows.push_back({std::string("route"), static_cast<long long>(i + 1), r.route_blocking[i], std::string("")});
      return t;
    });

    s = n->add_subcommand("convert", "optical burst parameters to traffic parameters");
    opt(s, "--r", p.r, "mean rate");
    opt(s, "--b", p.b, "mean burst size");
    opt(s, "--c", p.c, "wavelength capacity");
    opt(s, "--U", p.U, "utilisation");
    on(s, [&p] {
      const OpticalParams o = convert_params(p.r, p.b, p.c, p.U);
      return record({{"lambda", o.lambda}, {"holding", o.holding}, {"offered", o.offered}});
    });
  }

  void setup_traffic(CLI::App& app) {
    auto* tr = app.add_subcommand("traffic", "generate traces, one value per line")->require_subcommand(1);
    tr->fallthrough();
    Params& p = p_;

    auto* s = tr->add_subcommand("poisson", "event times");
    opt(s, "--lambda", p.lambda, "rate");
    opt(s, "--horizon", p.horizon, "time horizon");
    trace(s, [this, &p] {
      RngStream rs(o_.seed);
      return poisson_arrivals(p.lambda, p.horizon, rs);
    });

    s = tr->add_subcommand("mmpp2", "event times");
    opt(s, "--lambda0", p.lambda0, "rate in mode 0");
    opt(s, "--lambda1", p.lambda1, "rate in mode 1");
    opt(s, "--delta0", p.delta0, "rate of leaving mode 0");
    opt(s, "--delta1", p.delta1, "rate of leaving mode 1");
    opt(s, "--psi", p.psi, "mode duration scaling", false);
    opt(s, "--horizon", p.horizon, "time horizon");
    trace(s, [this, &p] {
      RngStream rs(o_.seed);
      return mmpp2_arrivals(Mmpp2Params{p.lambda0, p.lambda1, p.delta0, p.delta1, p.psi}, p.horizon, rs).times;
    });

    s = tr->add_subcommand("ar1", "per-slot workload fitted to mean, variance and autocovariance sum");
    opt(s, "--mean", p.mean, "mean");
    opt(s, "--var", p.var, "variance");
    opt(s, "--S", p.S, "autocovariance sum");
    s->add_option("--n", p.n, "slots")->required();
    trace(s, [this, &p] {
      RngStream rs(o_.seed);
      return ar1_generate(ar1_fit(p.mean, p.var, p.S), static_cast<std::size_t>(p.n), rs);
    });

    s = tr->add_subcommand("ear1", "inter-arrival times");
    opt(s, "--lambda", p.lambda, "rate");
    opt(s, "--a", p.a, "correlation parameter");
    s->add_option("--n", p.n, "values")->required();
    trace(s, [this, &p] {
      RngStream rs(o_.seed);
      return ear1_interarrivals(p.lambda, p.a, static_cast<std::size_t>(p.n), rs);
    });

    s = tr->add_subcommand("ppbp", "per-slot workload");
    opt(s, "--lambda", p.lambda, "burst starts per slot");
    opt(s, "--r", p.r, "rate per burst");
    opt(s, "--H", p.H, "Hurst parameter");
    s->add_option("--n", p.n, "slots")->required();
    trace(s, [this, &p] {
      RngStream rs(o_.seed);
      return ppbp_workload(PpbpParams::from_hurst(p.lambda, p.r, p.H), static_cast<std::size_t>(p.n), rs);
    });
  }

  void trace(CLI::App* s, std::function<std::vector<double>()> f) {
    s->callback([this, f] {
      action_ = [this, f] {
        const std::vector<double> v = f();
        if (!o_.output.empty()) {
          write_trace(o_.output, v);
        } else {
          for (double x : v) out_ << fmt::format("{:.17g}\n", x);
        }
        return 0;
      };
    });
  }

  int selfcheck() {
    Table t;
    t.columns = {"check", "value", "expected", "status"};
    bool ok = true;
    for (const auto& c : selfcheck_suite()) {
      const bool pass = std::abs(c.value - c.expected) <= c.tol;
      ok = ok && pass;
      t.rows.push_back({c.name, c.value, c.expected, std::string(pass ? "PASS" : "FAIL")});
    }
    emit(t);
    return ok ? 0 : 1;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(args);
}

}  // namespace teletraffic

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "vortex/vortex.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kUsage = 1;
constexpr int kNumeric = 2;

struct TableDeleter {
  void operator()(vx_table* t) const { vx_table_free(t); }
};
using Table = std::unique_ptr<vx_table, TableDeleter>;

struct Config {
  std::string out;
  std::string format = "csv";
  std::vector<double> gammas;
  std::string positions;
  double gamma = 1.0;
  std::string rho;
  double theta = 0.0;
  double L = 100.0;
  double d = 1.0;
  double t_start = 0.0;
  double t_end = 0.0;
  double t_max = 1e5;
  double rtol = 1e-10;
  double atol = 1e-12;
  int jobs = 1;
  std::size_t samples = 1001;
  double x0 = 0.0, y0 = 0.0;
  bool lower = false;
  std::size_t levels = 0;
  std::string gamma_range = "0.5:1.5";
  int steps = 101;
  std::string gamma_list;
  std::string discontinuities;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_csv(std::ostream& os, const vx_table* t) {
  const std::size_t nc = vx_table_cols(t), nr = vx_table_rows(t);
  for (std::size_t j = 0; j < nc; ++j) os << (j ? "," : "") << csv_field(vx_table_column(t, j));
  os << "\r\n";
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      if (j) os << ',';
      os << (vx_table_is_text(t, i, j) ? csv_field(vx_table_text(t, i, j)) : num(vx_table_number(t, i, j)));
    }
    os << "\r\n";
  }
}

json table_json(const vx_table* t) {
  json cols = json::array(), rows = json::array();
  const std::size_t nc = vx_table_cols(t), nr = vx_table_rows(t);
  for (std::size_t j = 0; j < nc; ++j) cols.push_back(vx_table_column(t, j));
  for (std::size_t i = 0; i < nr; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < nc; ++j) {
      if (vx_table_is_text(t, i, j)) row.push_back(vx_table_text(t, i, j));
      else {
        const double v = vx_table_number(t, i, j);
        if (std::isfinite(v)) row.push_back(v);
        else row.push_back(nullptr);
      }
    }
    rows.push_back(std::move(row));
  }
  return {{"columns", cols}, {"rows", rows}};
}

void emit(const Config& c, const json& config, const vx_table* t, const vx_table* extra = nullptr,
          const char* extra_name = nullptr) {
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary);
    if (!file) throw UsageError("cannot open " + c.out);
  }
  std::ostream& os = c.out.empty() ? std::cout : file;
  if (c.format == "json") {
    json doc;
    doc["config"] = config;
    const auto body = table_json(t);
    doc["columns"] = body["columns"];
    doc["rows"] = body["rows"];
    if (extra) doc[extra_name] = table_json(extra);
    os << doc.dump(1) << "\n";
  } else {
    write_csv(os, t);
  }
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  for (double v : out)
    if (!std::isfinite(v)) throw UsageError(std::string(what) + " must be finite");
  return out;
}

// "a", "a:b" (step 1) or "a:b:step" into an inclusive grid.
std::vector<double> parse_range(const std::string& s, const char* what) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_list(item, what).at(0));
  if (parts.size() == 1) return parts;
  if (parts.size() > 3) throw UsageError(std::string(what) + ": expected start:stop[:step]");
  const double a = parts[0], b = parts[1], h = parts.size() == 3 ? parts[2] : 1.0;
  if (!(h > 0.0) || b < a) throw UsageError(std::string(what) + ": need stop >= start and step > 0");
  const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
  if (n > 10'000'000) throw UsageError(std::string(what) + ": grid too large");
  std::vector<double> out(n);
  for (long i = 0; i < n; ++i) out[i] = a + h * static_cast<double>(i);
  return out;
}

vx_options options(const Config& c) {
  vx_options o;
  vx_options_default(&o);
  o.rtol = c.rtol;
  o.atol = c.atol;
  o.t_max = c.t_max;
  o.jobs = c.jobs;
  o.samples = c.samples;
  return o;
}

void check(int status) {
  if (status != VX_OK) {
    std::cerr << "error: " << vx_status_name(status) << ": " << vx_last_error() << "\n";
    throw std::runtime_error("numerical failure");
  }
}

std::vector<double> triple(const Config& c, bool from_gamma) {
  if (!c.gammas.empty()) {
    if (c.gammas.size() != 3) throw UsageError("--gammas needs three values");
    return c.gammas;
  }
  if (from_gamma) return {1.0, c.gamma, -1.0};
  return {1.0, 1.0, -1.0};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three point vortices: simulation, reduction, equilibria and dipole scattering"};
  app.require_subcommand(1);
  Config c;
  std::string gammas_text;

  auto positive = CLI::PositiveNumber;
  auto add_output = [&](CLI::App* s) {
    s->add_option("--out", c.out, "Output file (stdout when omitted)");
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_tol = [&](CLI::App* s) {
    s->add_option("--rtol", c.rtol, "Relative tolerance")->check(positive);
    s->add_option("--atol", c.atol, "Absolute tolerance")->check(positive);
  };
  auto add_setup = [&](CLI::App* s) {
    s->add_option("--L", c.L, "Launch distance")->check(positive);
    s->add_option("--d", c.d, "Dipole scale")->check(positive);
  };

  auto* sim = app.add_subcommand("simulate", "Integrate the full system");
  sim->add_option("--gammas", gammas_text, "Circulations a,b,c,...");
  sim->add_option("--positions", c.positions, "x1,y1,x2,y2,...");
  sim->add_option("--rho", c.rho, "Impact offset of the scattering setup");
  sim->add_option("--gamma", c.gamma, "Target circulation of the scattering setup")->check(positive);
  sim->add_option("--t-start", c.t_start, "Start time");
  sim->add_option("--t-end", c.t_end, "End time (default 2L + 100)");
  sim->add_option("--samples", c.samples, "Uniform output samples (0 keeps every step)");
  add_setup(sim);
  add_tol(sim);
  add_output(sim);

  auto* red = app.add_subcommand("reduced", "Integrate the reduced system or sample its energy");
  red->add_option("--gammas", gammas_text, "Circulations a,b,c");
  red->add_option("--gamma", c.gamma, "Use circulations (1, gamma, -1)")->check(positive);
  red->add_option("--theta", c.theta, "Angular impulse");
  red->add_option("--x0", c.x0, "Initial X");
  red->add_option("--y0", c.y0, "Initial Y");
  red->add_flag("--lower", c.lower, "Start on the lower half of the sphere");
  red->add_option("--rho", c.rho, "Start from the reduced image of the scattering setup");
  red->add_option("--t-end", c.t_end, "End time")->check(CLI::Range(0.0, 1e12));
  red->add_option("--samples", c.samples, "Uniform output samples (0 keeps every step)");
  red->add_option("--levels", c.levels, "Emit an N x N energy grid and the critical levels instead");
  add_setup(red);
  add_tol(red);
  add_output(red);

  auto* sw = app.add_subcommand("sweep", "Scattering angle and outcome over a range of offsets");
  sw->add_option("--gamma", c.gamma, "Target circulation")->check(positive);
  sw->add_option("--rho", c.rho, "start:stop:step")->required();
  sw->add_option("--t-max", c.t_max, "Time budget per run")->check(positive);
  sw->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  sw->add_option("--discontinuities", c.discontinuities, "Write the discontinuity table to this CSV file");
  add_setup(sw);
  add_tol(sw);
  add_output(sw);

  auto* crit = app.add_subcommand("critical", "Critical impact offsets");
  crit->add_option("--gamma", c.gamma_list, "Target circulation(s), comma separated")->required();
  add_output(crit);

  auto* eq = app.add_subcommand("equilibria", "Equilibria and singular points of the reduced system");
  eq->add_option("--gammas", gammas_text, "1,1,1 or 1,gamma,-1");
  eq->add_option("--gamma", c.gamma, "Use circulations (1, gamma, -1)")->check(positive);
  eq->add_option("--theta", c.theta, "Angular impulse")->required();
  add_output(eq);

  auto* bif = app.add_subcommand("bifurcation", "Equilibrium branches over a range of gamma");
  bif->add_option("--theta", c.theta, "Angular impulse")->required();
  bif->add_option("--gamma-range", c.gamma_range, "min:max");
  bif->add_option("--steps", c.steps, "Number of gamma samples")->check(CLI::Range(1, 10'000'000));
  add_output(bif);

  auto* cf = app.add_subcommand("closed-form", "Closed-form and quadrature scattering angle, unit target");
  cf->add_option("--rho", c.rho, "start:stop:step")->required();
  add_output(cf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  json config;
  auto* sub = app.get_subcommands().front();
  config["command"] = sub->get_name();
  for (const auto* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->count() == 0) continue;
    const auto res = opt->results();
    config[opt->get_name().substr(2)] = res.size() == 1 ? json(res[0]) : json(res);
  }

  try {
    if (!gammas_text.empty()) c.gammas = parse_list(gammas_text, "--gammas");
    const auto o = options(c);
    const std::string name = sub->get_name();
    vx_table* raw = nullptr;

    if (name == "simulate") {
      std::vector<double> g, xy;
      if (!c.rho.empty()) {
        if (!c.positions.empty() || !c.gammas.empty())
          throw UsageError("--rho excludes --positions and --gammas");
        const double rho = parse_list(c.rho, "--rho").at(0);
        xy.resize(6);
        check(vx_scattering_state(rho, c.gamma, c.L, c.d, xy.data()));
        g = {1.0, c.gamma, -1.0};
      } else {
        if (c.positions.empty() || c.gammas.empty()) throw UsageError("need --gammas and --positions, or --rho");
        g = c.gammas;
        xy = parse_list(c.positions, "--positions");
        if (xy.size() != 2 * g.size()) throw UsageError("--positions needs two values per vortex");
      }
      const double t_end = sim->count("--t-end") ? c.t_end : c.t_start + 2.0 * c.L + 100.0;
      check(vx_simulate(g.data(), xy.data(), g.size(), c.t_start, t_end, &o, &raw));
      Table t(raw);
      emit(c, config, t.get());
    } else if (name == "reduced") {
      const auto g = triple(c, red->count("--gamma") > 0);
      if (c.levels > 0) {
        if (!red->count("--theta")) throw UsageError("--levels needs --theta");
        check(vx_reduced_levels(g.data(), c.theta, c.levels, &raw));
      } else {
        if (!red->count("--t-end")) throw UsageError("--t-end is required");
        if (!c.rho.empty()) {
          if (g[0] != 1.0 || g[2] != -1.0) throw UsageError("--rho needs circulations (1, gamma, -1)");
          std::vector<double> xy(6);
          check(vx_scattering_state(parse_list(c.rho, "--rho").at(0), g[1], c.L, c.d, xy.data()));
          check(vx_reduced(g.data(), xy.data(), 0, 0, 0, 1, c.t_end, &o, &raw));
        } else {
          if (!red->count("--theta")) throw UsageError("need --theta or --rho");
          check(vx_reduced(g.data(), nullptr, c.x0, c.y0, c.theta, c.lower ? 0 : 1, c.t_end, &o, &raw));
        }
      }
      Table t(raw);
      emit(c, config, t.get());
    } else if (name == "sweep") {
      const auto rhos = parse_range(c.rho, "--rho");
      vx_table* disc_raw = nullptr;
      check(vx_sweep(rhos.data(), rhos.size(), c.gamma, c.L, c.d, &o, &raw, &disc_raw));
      Table t(raw), disc(disc_raw);
      emit(c, config, t.get(), disc.get(), "discontinuities");
      for (std::size_t i = 0; i < vx_table_rows(disc.get()); ++i)
        std::cerr << vx_table_text(disc.get(), i, 3) << " between rho = " << num(vx_table_number(disc.get(), i, 0))
                  << " and " << num(vx_table_number(disc.get(), i, 1)) << "\n";
      if (!c.discontinuities.empty()) {
        std::ofstream f(c.discontinuities, std::ios::binary);
        if (!f) throw UsageError("cannot open " + c.discontinuities);
        write_csv(f, disc.get());
      }
      std::size_t failed = 0;
      for (std::size_t i = 0; i < vx_table_rows(t.get()); ++i)
        if (std::string(vx_table_text(t.get(), i, vx_table_cols(t.get()) - 1)).size()) ++failed;
      if (failed == vx_table_rows(t.get())) {
        std::cerr << "error: every row failed\n";
        return kNumeric;
      }
    } else if (name == "critical") {
      const auto gs = parse_list(c.gamma_list, "--gamma");
      for (double g : gs)
        if (!(g > 0.0)) throw UsageError("--gamma must be positive");
      check(vx_critical(gs.data(), gs.size(), &raw));
      Table t(raw);
      emit(c, config, t.get());
    } else if (name == "equilibria") {
      int family = 1;
      double g = c.gamma;
      if (!c.gammas.empty()) {
        const auto& v = c.gammas;
        if (v.size() == 3 && v[0] == 1.0 && v[1] == 1.0 && v[2] == 1.0) family = 0;
        else if (v.size() == 3 && v[0] == 1.0 && v[2] == -1.0 && v[1] > 0.0) g = v[1];
        else throw UsageError("--gammas must be 1,1,1 or 1,gamma,-1");
      }
      check(vx_equilibria(family, g, c.theta, &raw));
      Table t(raw);
      emit(c, config, t.get());
    } else if (name == "bifurcation") {
      const auto r = parse_list([&] {
        std::string s = c.gamma_range;
        for (auto& ch : s)
          if (ch == ':') ch = ',';
        return s;
      }(), "--gamma-range");
      if (r.size() != 2) throw UsageError("--gamma-range needs min:max");
      check(vx_bifurcation(c.theta, r[0], r[1], c.steps, &raw));
      Table t(raw);
      emit(c, config, t.get());
    } else if (name == "closed-form") {
      const auto rhos = parse_range(c.rho, "--rho");
      check(vx_closed_form(rhos.data(), rhos.size(), &raw));
      Table t(raw);
      emit(c, config, t.get());
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception&) {
    return kNumeric;
  }
  return 0;
}

#include "mll/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mll/snapshot.hpp"

namespace mll {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in '" + where + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

PressureLaw LawConfig::build() const {
  if (kind == "linear_acoustics") return PressureLaw::linear_acoustics();
  if (kind == "ideal_gas") return PressureLaw::ideal_gas(gamma, k, pbar, radius, order);
  if (kind == "series") return PressureLaw::from_series(a, r, radius, "series");
  throw ConfigError("unknown pressure law kind '" + kind + "'");
}

void ExperimentConfig::validate() const {
  try {
    TorusGrid grid(dim, n);
    (void)grid;
    norm.validate();
    solver.validate();
    (void)law.build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (eps.empty()) throw ConfigError("eps list is empty");
  std::set<double> seen;
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps values must be positive");
    if (!seen.insert(e).second) throw ConfigError("eps values must be distinct");
  }
  if (solver.end_time > norm.horizon * (1.0 + 1e-12)) throw ConfigError("solver end_time exceeds the norm horizon");
  if (!(delta > 0.0) || delta > norm.tau0) throw ConfigError("delta must lie in (0, tau0]");
  if (initial.kind != "general" && initial.kind != "well_prepared" && initial.kind != "file") {
    throw ConfigError("unknown initial data recipe '" + initial.kind + "'");
  }
  if (initial.kind == "file" && initial.file.empty()) throw ConfigError("file recipe needs 'file'");
  if (!(initial.m0 > 0.0)) throw ConfigError("m0 must be positive");
  if (initial.amplitude && !(*initial.amplitude > 0.0)) throw ConfigError("amplitude must be positive");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(root, "config", {"grid", "law", "eps", "initial_data", "norm", "solver", "output", "seed", "jobs"});

  ExperimentConfig c;
  if (root.contains("grid")) {
    const auto& g = root["grid"];
    require_keys(g, "grid", {"dim", "n"});
    read(g, "dim", c.dim);
    read(g, "n", c.n);
  }
  if (root.contains("law")) {
    const auto& l = root["law"];
    require_keys(l, "law", {"kind", "gamma", "K", "pbar", "radius", "order", "a", "r"});
    read(l, "kind", c.law.kind);
    read(l, "gamma", c.law.gamma);
    read(l, "K", c.law.k);
    read(l, "pbar", c.law.pbar);
    read(l, "radius", c.law.radius);
    read(l, "order", c.law.order);
    read(l, "a", c.law.a);
    read(l, "r", c.law.r);
  }
  read(root, "eps", c.eps);
  if (root.contains("initial_data")) {
    const auto& d = root["initial_data"];
    require_keys(d, "initial_data", {"recipe", "m0", "amplitude", "file"});
    read(d, "recipe", c.initial.kind);
    read(d, "m0", c.initial.m0);
    if (d.contains("amplitude")) {
      double amplitude = 0.0;
      read(d, "amplitude", amplitude);
      c.initial.amplitude = amplitude;
    }
    read(d, "file", c.initial.file);
  }
  bool horizon_given = false;
  bool delta_given = false;
  if (root.contains("norm")) {
    const auto& nrm = root["norm"];
    require_keys(nrm, "norm", {"tau0", "K", "sigma", "mmax", "horizon", "delta"});
    read(nrm, "tau0", c.norm.tau0);
    read(nrm, "K", c.norm.decay_rate);
    read(nrm, "sigma", c.norm.sigma);
    read(nrm, "mmax", c.norm.max_order);
    horizon_given = nrm.contains("horizon");
    read(nrm, "horizon", c.norm.horizon);
    delta_given = nrm.contains("delta");
    read(nrm, "delta", c.delta);
  }
  if (!horizon_given) c.norm.horizon = c.norm.tau0 / (2.0 * c.norm.decay_rate);
  if (!delta_given) c.delta = c.norm.tau0 / 4.0;

  bool end_given = false;
  if (root.contains("solver")) {
    const auto& s = root["solver"];
    require_keys(s, "solver", {"end_time", "c_adv", "c_ac", "dt", "dealias", "advection", "diag_interval"});
    end_given = s.contains("end_time");
    read(s, "end_time", c.solver.end_time);
    read(s, "c_adv", c.solver.c_adv);
    read(s, "c_ac", c.solver.c_ac);
    if (s.contains("dt") && !s["dt"].is_null()) {
      double dt = 0.0;
      read(s, "dt", dt);
      c.solver.fixed_dt = dt;
    }
    read(s, "dealias", c.solver.dealias);
    read(s, "advection", c.solver.advection);
    read(s, "diag_interval", c.solver.diag_interval);
  }
  if (!end_given) c.solver.end_time = c.norm.horizon;

  if (root.contains("output")) {
    const auto& o = root["output"];
    require_keys(o, "output", {"dir", "snapshots", "snapshot_every"});
    read(o, "dir", c.output_dir);
    read(o, "snapshots", c.snapshots);
    read(o, "snapshot_every", c.snapshot_every);
  }
  read(root, "seed", c.seed);
  read(root, "jobs", c.jobs);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

namespace {

SpectralField random_field(const TorusGrid& grid, std::mt19937_64& rng, double tau0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> c(grid.size());
  for (std::size_t idx = 1; idx < grid.size(); ++idx) {
    if (!grid.retained(idx)) continue;
    const auto k = grid.wavevector(idx);
    double k2 = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis) k2 += static_cast<double>(k[axis]) * k[axis];
    const double re = normal(rng);
    const double im = normal(rng);
    c[idx] = std::exp(-2.0 * tau0 * std::sqrt(k2)) * Complex(re, im);
  }
  return enforce_hermitian(SpectralField(grid, std::move(c)));
}

StateU scaled(const StateU& u, double s) {
  return StateU{u.p * s, s * u.v, u.eps, u.t};
}

}  // namespace

StateU generate_initial_data(const InitialDataRecipe& recipe, const TorusGrid& grid, std::uint64_t seed, double tau0,
                             int max_order) {
  const double target = 0.9 * recipe.m0;
  StateU u{SpectralField(grid), {}, 1.0, 0.0};

  if (recipe.kind == "file") {
    Snapshot snap = read_snapshot(recipe.file);
    if (!(snap.grid == grid)) throw InitialDataError("snapshot grid does not match the configured grid");
    u = state_from_snapshot(snap);
  } else if (recipe.kind == "general" || recipe.kind == "well_prepared") {
    std::mt19937_64 rng(seed);
    u.p = random_field(grid, rng, tau0);
    for (int i = 0; i < grid.dim(); ++i) u.v.push_back(random_field(grid, rng, tau0));
    if (recipe.kind == "well_prepared") {
      u.p = SpectralField(grid);
      u.v = leray_project(u.v);
      for (auto& c : u.v) c = enforce_hermitian(c);
    }
    const auto report = analytic_norm(u, tau0, 1.0, max_order);
    if (!std::isfinite(report.value) || report.value <= 0.0 || !std::isfinite(report.tail_bound)) {
      throw InitialDataError("random initial data has no finite A(tau0) norm at this resolution");
    }
    u = scaled(u, recipe.amplitude ? *recipe.amplitude : target / report.value);
  } else {
    throw InitialDataError("unknown initial data recipe '" + recipe.kind + "'");
  }

  auto check = initial_data_check(u, tau0, target, max_order);
  if (!check.passed && !recipe.amplitude && recipe.kind != "file") {
    // Rescaling can land a few ulps above the target.
    u = scaled(u, target / check.report.value * (1.0 - 1e-12));
    check = initial_data_check(u, tau0, target, max_order);
  }
  if (!check.passed) {
    std::ostringstream msg;
    msg << "initial data has A(tau0) = " << format_double(check.report.value) << " > 0.9*M0 = " << format_double(target)
        << "; use a smaller amplitude or a larger m0";
    throw InitialDataError(msg.str());
  }
  return u;
}

bool SweepResult::all_ok() const {
  return std::all_of(records.begin(), records.end(), [](const SweepRecord& r) { return r.ok; });
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.16e", value);
  return buffer;
}

std::string diagnostics_header() {
  return "t,tau,a_tau,m_eps,a_delta_vel_err,a_delta_p,a_delta_err,l2_p,l2_v,l2_vel_err,l2_proj_vel_err,energy,"
         "inc_energy,l2time_a_delta_vel_err,l2time_a_delta_err,steps";
}

std::string diagnostics_csv_row(const DiagnosticRow& r) {
  std::string s;
  for (double v : {r.t, r.tau, r.a_tau, r.m_eps, r.a_delta_vel_err, r.a_delta_p, r.a_delta_err, r.l2_p, r.l2_v,
                   r.l2_vel_err, r.l2_proj_vel_err, r.energy, r.inc_energy, r.l2time_a_delta_vel_err,
                   r.l2time_a_delta_err}) {
    s += format_double(v);
    s += ',';
  }
  return s + std::to_string(r.steps);
}

std::string summary_header() {
  return "run,eps,status,steps,sup_m_eps,sup_l2_p,final_a_tau,final_a_delta_vel_err,l2time_a_delta_vel_err,"
         "l2time_a_delta_err,final_l2_vel_err,final_l2_proj_vel_err,energy_drift,message";
}

namespace {

std::string csv_quote(const std::string& text) {
  std::string s = "\"";
  for (char ch : text) {
    if (ch == '"') s += '"';
    s += (ch == '\n' ? ' ' : ch);
  }
  return s + "\"";
}

std::string summary_row(std::size_t index, const SweepRecord& rec) {
  std::string s = std::to_string(index) + "," + format_double(rec.eps) + "," + (rec.ok ? "ok" : "aborted") + ",";
  if (rec.ok) {
    const auto& m = rec.summary;
    s += std::to_string(m.steps);
    for (double v : {m.sup_m_eps, m.sup_l2_p, m.final.a_tau, m.final.a_delta_vel_err, m.final.l2time_a_delta_vel_err,
                     m.final.l2time_a_delta_err, m.final.l2_vel_err, m.final.l2_proj_vel_err, m.energy_drift}) {
      s += "," + format_double(v);
    }
  } else {
    const double nan = std::nan("");
    s += rec.last_row ? std::to_string(rec.last_row->steps) : "0";
    s += "," + format_double(rec.last_row ? rec.last_row->m_eps : nan);
    for (int i = 0; i < 8; ++i) s += "," + format_double(nan);
  }
  return s + "," + csv_quote(rec.message);
}

std::string snapshot_name(const char* prefix, std::size_t row) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%s_%04zu.mlsf", prefix, row);
  return buffer;
}

SweepRecord execute_run(const ExperimentConfig& config, const StateU& data, const PressureLaw& law, double eps,
                        const std::filesystem::path& run_dir) {
  SweepRecord rec;
  rec.eps = eps;
  const auto start = std::chrono::steady_clock::now();
  try {
    std::filesystem::create_directories(run_dir);
    std::ofstream csv(run_dir / "diagnostics.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + (run_dir / "diagnostics.csv").string());
    csv << kCsvSchemaLine << '\n' << diagnostics_header() << '\n';

    StateU u0 = data;
    u0.eps = eps;
    std::size_t row_index = 0;
    const auto n_rows_hint = config.solver.diag_interval > 0.0
                                 ? static_cast<std::size_t>(std::ceil(config.solver.end_time / config.solver.diag_interval))
                                 : std::size_t{1};
    auto observer = [&](const DiagnosticRow& row, const StateU& u, const VectorField& vinc) {
      csv << diagnostics_csv_row(row) << '\n';
      csv.flush();
      rec.last_row = row;
      const bool last = row.t >= config.solver.end_time;
      const bool periodic = config.snapshot_every > 0 && row_index % static_cast<std::size_t>(config.snapshot_every) == 0;
      if (config.snapshots && (row_index == 0 || last || periodic || row_index >= n_rows_hint)) {
        write_snapshot(run_dir / snapshot_name("u", row_index), snapshot_of(u));
        Snapshot inc{u.grid(), {}};
        for (std::size_t i = 0; i < vinc.size(); ++i) inc.fields.push_back({"w" + std::to_string(i + 1), vinc[i]});
        write_snapshot(run_dir / snapshot_name("inc", row_index), inc);
      }
      ++row_index;
    };
    const auto record = run_pair(u0, law, config.solver, config.norm, config.delta, observer);
    rec.summary = record.summary;
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.message = e.what();
    std::ofstream err(run_dir / "error.txt", std::ios::trunc);
    err << e.what() << '\n';
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  const TorusGrid grid(config.dim, config.n);
  const PressureLaw law = config.law.build();
  const StateU data = generate_initial_data(config.initial, grid, config.seed, config.norm.tau0, config.norm.max_order);

  std::filesystem::create_directories(out_dir);
  write_snapshot(out_dir / "initial_data.mlsf", snapshot_of(data));

  SweepResult result;
  result.records.resize(config.eps.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.eps.size(); i = next++) {
      result.records[i] = execute_run(config, data, law, config.eps[i], out_dir / ("run_" + std::to_string(i)));
    }
  };
  const auto workers = static_cast<std::size_t>(std::min<int>(config.jobs, static_cast<int>(config.eps.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ofstream summary(out_dir / "summary.csv", std::ios::trunc);
  summary << kCsvSchemaLine << '\n' << summary_header() << '\n';
  std::ofstream timing(out_dir / "timing.csv", std::ios::trunc);
  timing << kCsvSchemaLine << '\n' << "run,eps,wall_seconds\n";
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    summary << summary_row(i, result.records[i]) << '\n';
    timing << i << ',' << format_double(result.records[i].eps) << ',' << format_double(result.records[i].wall_seconds)
           << '\n';
  }
  return result;
}

}  // namespace mll

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mll/faadibruno.hpp"
#include "mll/harness.hpp"
#include "mll/multiindex.hpp"
#include "mll/norms.hpp"
#include "mll/snapshot.hpp"

namespace mll {

namespace {

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<double> eps;
  std::optional<int> jobs;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory (overrides MLL_OUT and the config)");
  cmd->add_option("--seed", o.seed, "Random seed for generated initial data");
  cmd->add_option("--eps", o.eps, "Comma-separated Mach numbers, replaces the config list")->delimiter(',');
  cmd->add_option("--jobs", o.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const RunOptions& o, std::filesystem::path& out_dir) {
  ExperimentConfig config = load_config(o.config);
  if (o.seed) config.seed = *o.seed;
  if (!o.eps.empty()) config.eps = o.eps;
  if (o.jobs) config.jobs = *o.jobs;
  config.validate();
  if (!o.out.empty()) {
    out_dir = o.out;
  } else if (const char* env = std::getenv("MLL_OUT"); env != nullptr && *env != '\0') {
    out_dir = env;
  } else {
    out_dir = config.output_dir;
  }
  return config;
}

int report_sweep(const SweepResult& result, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err) {
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& rec = result.records[i];
    if (rec.ok) {
      out << "run " << i << " eps=" << format_double(rec.eps) << " ok steps=" << rec.summary.steps
          << " sup_M=" << format_double(rec.summary.sup_m_eps) << '\n';
    } else {
      err << "run " << i << " eps=" << format_double(rec.eps) << " aborted: " << rec.message << '\n';
    }
  }
  out << "wrote " << (out_dir / "summary.csv").string() << '\n';
  return result.all_ok() ? 0 : 1;
}

Rational rational_of(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0) throw ConfigError("bad rational '" + j.get<std::string>() + "'");
    q.canonicalize();
    return q;
  }
  throw ConfigError("coefficients must be integers or rational strings such as \"1/3\"");
}

int fdb_compose(const std::string& path, std::optional<unsigned> order_flag, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("compose input is not valid JSON: ") + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "dim" && key != "order" && key != "phi" && key != "psi") throw ConfigError("unknown key '" + key + "'");
  }
  if (!j.contains("phi") || !j["phi"].is_array() || j["phi"].empty()) throw ConfigError("'phi' must be a non-empty array");
  if (!j.contains("psi") || !j["psi"].is_object()) throw ConfigError("'psi' must be an object keyed by multi-index");

  std::vector<Rational> a;
  for (const auto& c : j["phi"]) a.push_back(rational_of(c));
  const PowerSeries1 phi(std::move(a));
  const auto dim = j.value("dim", std::size_t{3});
  const unsigned order = order_flag ? *order_flag : j.value("order", phi.order());

  PowerSeries3 psi(dim, order);
  for (const auto& [key, value] : j["psi"].items()) {
    MultiIndex beta;
    try {
      beta = MultiIndex::parse(key);
    } catch (const std::exception& e) {
      throw ConfigError("bad multi-index '" + key + "': " + e.what());
    }
    if (beta.dim() != dim) throw ConfigError("multi-index '" + key + "' does not have dimension " + std::to_string(dim));
    if (beta.order() <= order) psi.set(beta, rational_of(value));
  }

  const auto c = series_compose(phi, psi, order);
  out << kCsvSchemaLine << '\n';
  for (std::size_t i = 0; i < dim; ++i) out << "beta" << i + 1 << ',';
  out << "c\n";
  for (const auto& beta : indices_up_to(dim, order)) {
    for (auto b : beta.components()) out << b << ',';
    out << c.coefficient(beta).get_str() << '\n';
  }
  return 0;
}

int norm_command(const std::string& path, double t, double tau, double sigma, int mmax, std::ostream& out) {
  const Snapshot snap = read_snapshot(path);
  std::vector<SpectralField> fields;
  for (const auto& f : snap.fields) fields.push_back(f.field);
  const auto report = analytic_norm(std::span<const SpectralField>(fields), tau, sigma, mmax);
  out << kCsvSchemaLine << '\n' << "t,tau,value,tail_bound";
  for (int m = 0; m <= mmax; ++m) out << ",m" << m;
  out << '\n' << format_double(t) << ',' << format_double(tau) << ',' << format_double(report.value) << ','
      << format_double(report.tail_bound);
  for (double v : report.per_m) out << ',' << format_double(v);
  out << '\n';
  return 0;
}

int inspect_command(const std::string& path, std::ostream& out) {
  const Snapshot snap = read_snapshot(path);
  out << "dim=" << snap.grid.dim() << " n=" << snap.grid.n() << " fields=" << snap.fields.size() << '\n';
  out << "name,l2,mean_re,hermitian_defect\n";
  for (const auto& f : snap.fields) {
    out << f.name << ',' << format_double(l2_norm(f.field)) << ',' << format_double(f.field.mean().real()) << ','
        << format_double(hermitian_defect(f.field)) << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-Mach isentropic Euler laboratory"};
  app.name("mll");
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run one eps from a config");
  add_run_options(run, run_opts);

  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Run every eps of a config");
  add_run_options(sweep, sweep_opts);

  std::string norm_file;
  double norm_t = 0.0;
  double norm_tau = 0.0;
  double norm_sigma = 1.0;
  int norm_mmax = 30;
  auto* norm = app.add_subcommand("norm", "Analytic norm of a snapshot, as one CSV row");
  norm->add_option("--snapshot", norm_file, "Snapshot file")->required()->check(CLI::ExistingFile);
  norm->add_option("--tau", norm_tau, "Radius tau")->required()->check(CLI::PositiveNumber);
  norm->add_option("--sigma", norm_sigma, "Gevrey exponent")->capture_default_str();
  norm->add_option("--mmax", norm_mmax, "Highest derivative order")->capture_default_str()->check(CLI::Range(4, 200));
  norm->add_option("--t", norm_t, "Time stamp written to the t column")->capture_default_str();

  auto* fdb = app.add_subcommand("fdb", "Faa di Bruno utilities");
  fdb->require_subcommand(1);
  unsigned part_i = 1;
  std::string part_beta;
  auto* partitions = fdb->add_subcommand("partitions", "List the partition tuples P_s(i, beta)");
  partitions->add_option("--i", part_i, "Number of factors i")->required()->check(CLI::PositiveNumber);
  partitions->add_option("--beta", part_beta, "Multi-index, e.g. 2,1,0")->required();
  std::string compose_file;
  std::optional<unsigned> compose_order;
  auto* compose = fdb->add_subcommand("compose", "Coefficients of phi(psi(x)) as CSV");
  compose->add_option("--input", compose_file, "JSON file with phi, psi, dim, order")->required()->check(CLI::ExistingFile);
  compose->add_option("--order", compose_order, "Truncation order (default: from the file)");

  auto* snapshot = app.add_subcommand("snapshot", "Snapshot utilities");
  snapshot->require_subcommand(1);
  std::string inspect_file;
  auto* inspect = snapshot->add_subcommand("inspect", "Print the grid and per-field summaries");
  inspect->add_option("file", inspect_file, "Snapshot file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      if (app.get_subcommands().empty()) {
        out << app.help("", CLI::AppFormatMode::All);
      } else {
        app.exit(e, out, err);
      }
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (run->parsed() || sweep->parsed()) {
      const bool single = run->parsed();
      std::filesystem::path out_dir;
      const auto config = resolve(single ? run_opts : sweep_opts, out_dir);
      if (single && config.eps.size() != 1) throw ConfigError("'run' needs exactly one eps; use 'sweep' for several");
      return report_sweep(run_sweep(config, out_dir), out_dir, out, err);
    }
    if (norm->parsed()) return norm_command(norm_file, norm_t, norm_tau, norm_sigma, norm_mmax, out);
    if (partitions->parsed()) {
      MultiIndex beta;
      try {
        beta = MultiIndex::parse(part_beta);
      } catch (const std::exception& e) {
        throw ConfigError("bad --beta '" + part_beta + "': " + e.what());
      }
      if (beta.is_zero()) throw ConfigError("--beta must be nonzero");
      const auto groups = enumerate_partitions(part_i, beta);
      for (const auto& group : groups) {
        for (const auto& tuple : group) out << tuple.to_string() << '\n';
      }
      return 0;
    }
    if (compose->parsed()) return fdb_compose(compose_file, compose_order, out);
    if (inspect->parsed()) return inspect_command(inspect_file, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace mll

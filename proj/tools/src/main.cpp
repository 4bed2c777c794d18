#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace dobrushin;

namespace {

struct Job {
  fs::path config;
  fs::path out;
};

bool read_file(const fs::path& p, std::string& text) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return false;
  std::ostringstream os;
  os << f.rdbuf();
  text = os.str();
  return true;
}

int severity(int code) { return code == 1 ? 2 : code == 2 ? 1 : 0; }

int run_jobs(const std::vector<Job>& jobs, const cli::RunOptions& options, int workers) {
  std::mutex io;
  std::atomic<std::size_t> next{0};
  std::vector<int> codes(jobs.size(), 0);
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      std::string text;
      cli::Artifacts a;
      if (!read_file(job.config, text)) {
        a.exit_code = 1;
        a.message = "cannot read " + job.config.string();
      } else {
        a = cli::run_scenario(text, options);
        if (a.exit_code != 1) {
          try {
            cli::write_artifacts(a, job.out);
          } catch (const std::exception& e) {
            a.exit_code = 1;
            a.message = e.what();
          }
        }
      }
      codes[i] = a.exit_code;
      std::lock_guard lock(io);
      if (a.exit_code == 1) {
        std::cerr << job.config.string() << ": " << a.message << "\n";
      } else {
        std::cout << job.config.string() << ": " << a.report.value("status", "ok") << " -> "
                  << (job.out / "report.json").string() << "\n";
        if (a.exit_code == 2) std::cout << "  no certificate: " << a.message << "\n";
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  int worst = 0;
  for (int c : codes) {
    if (severity(c) > severity(worst)) worst = c;
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Dobrushin coefficients, ergodicity certificates and Phillips "
               "perturbations for finite Markov semigroups"};
  app.set_version_flag("--version", std::string(DOBRUSHIN_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  std::string out = "out";
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  bool oracle = false;
  int jobs = 1;
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized searches (default: params.seed or 1)");
  auto* tol_opt = app.add_option("--tol", tol, "validation tolerance (default: params.tol or 1e-9)")
                      ->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_flag("--oracle", oracle, "add an independent cross-check to delta reports");
  app.add_option("--jobs", jobs, "parallel workers when several configs are given")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<std::string> configs;
  auto* run = app.add_subcommand("run", "run the analysis named in each config");
  run->add_option("configs", configs, "scenario files (JSON)")->required()->check(CLI::ExistingFile);
  app.add_subcommand("list", "list the available analyses");

  std::string single;
  std::vector<CLI::App*> per_analysis;
  for (const cli::AnalysisInfo& info : cli::analyses()) {
    auto* sub = app.add_subcommand(info.name, info.description);
    auto* opt = sub->add_option("config", single, "scenario file (JSON)")->check(CLI::ExistingFile);
    if (info.name != "qubit_example") opt->required();
    per_analysis.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors are input errors; help and version requests exit 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (app.got_subcommand("list")) {
    std::cout << cli::list_analyses();
    return 0;
  }

  cli::RunOptions options;
  if (seed_opt->count() > 0) options.seed = seed;
  if (tol_opt->count() > 0) options.tol = tol;
  options.oracle = oracle;

  std::vector<Job> work;
  if (app.got_subcommand("run")) {
    for (const std::string& c : configs) {
      const fs::path p(c);
      work.push_back({p, configs.size() == 1 ? fs::path(out) : fs::path(out) / p.stem()});
    }
  } else {
    for (CLI::App* sub : per_analysis) {
      if (!sub->parsed()) continue;
      options.analysis_override = sub->get_name();
      if (single.empty()) {
        // qubit_example without a config file.
        cli::Artifacts a = cli::run_scenario("{\"analysis\": \"qubit_example\"}", options);
        if (a.exit_code == 1) {
          std::cerr << a.message << "\n";
          return 1;
        }
        cli::write_artifacts(a, out);
        std::cout << "qubit_example: " << a.report.value("status", "ok") << " -> "
                  << (fs::path(out) / "report.json").string() << "\n";
        return a.exit_code;
      }
      work.push_back({fs::path(single), fs::path(out)});
    }
  }
  return run_jobs(work, options, jobs);
}

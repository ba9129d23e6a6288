// Command-line front end: interactive tutoring, scripted runs, GA-vs-control
// comparison and population bitstream export.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "kinetutor/error.hpp"
#include "kinetutor/experiment.hpp"
#include "kinetutor/metrics.hpp"
#include "kinetutor/terminal_io.hpp"

namespace fs = std::filesystem;
using namespace kinetutor;

namespace {

enum Exit { kSuccess = 0, kUsage = 1, kIoOrParse = 2, kExhausted = 3, kAborted = 4 };

struct CommonFlags {
  SessionOptions options;
  std::string mode = "ga";
  std::string domain_file;
};

void add_ga_flags(CLI::App& cmd, CommonFlags& flags) {
  GaConfig& c = flags.options.config;
  cmd.add_option("--seed", flags.options.seed, "RNG seed")->envname("KINETUTOR_SEED")->capture_default_str();
  cmd.add_option("--mode", flags.mode, "ga or random-control")
      ->check(CLI::IsMember({"ga", "random-control"}))
      ->capture_default_str();
  cmd.add_option("--population-size", c.population_size, "chromosomes per generation")->capture_default_str();
  cmd.add_option("--chromosome-bits", c.chromosome_bits, "bits per chromosome, a multiple of 12")
      ->capture_default_str();
  cmd.add_option("--crossover-probability", c.crossover_probability)->capture_default_str();
  cmd.add_option("--mutation-probability", c.mutation_probability_per_bit, "per-bit flip probability")
      ->capture_default_str();
  cmd.add_option("--max-generations", c.max_generations)->capture_default_str();
  cmd.add_option("--domain", flags.domain_file, "equation domain JSON (default: bundled kinematics)")
      ->check(CLI::ExistingFile);
}

const Domain& resolve_domain(const CommonFlags& flags, std::optional<Domain>& storage) {
  if (flags.domain_file.empty()) return Domain::kinematics();
  storage.emplace(Domain::load(flags.domain_file));
  return *storage;
}

SessionOptions finish(CommonFlags& flags) {
  flags.options.config.mode = ga_mode_from_string(flags.mode);
  flags.options.config.validate();
  return flags.options;
}

int status_exit(SessionStatus status) {
  switch (status) {
    case SessionStatus::solved: return kSuccess;
    case SessionStatus::exhausted: return kExhausted;
    case SessionStatus::aborted:
    case SessionStatus::running: return kAborted;
  }
  return kAborted;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
}

void write_metrics(const fs::path& dir, const std::vector<SessionEvent>& events, const Domain& domain) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot create " + dir.string() + ": " + ec.message());
  std::ostringstream csv, timeline, log;
  write_jsonl(events, domain, log);
  if (!events.empty()) {
    const RunMetrics metrics = compute(events);
    write_csv(metrics, csv);
    write_timeline_jsonl(metrics, domain, timeline);
  } else {
    write_csv(RunMetrics{}, csv);
  }
  write_file(dir / "metrics.csv", csv.str());
  write_file(dir / "knowns.jsonl", timeline.str());
  write_file(dir / "events.jsonl", log.str());
}

int cmd_tutor(CommonFlags& flags, bool no_target) {
  std::optional<Domain> storage;
  const Domain& domain = resolve_domain(flags, storage);
  SessionOptions options = finish(flags);
  options.capture_target = !no_target;
  TutorSession session(domain, options);
  TerminalIo io(std::cin, std::cout);
  const SessionStatus status = run_session(session, io);
  switch (status) {
    case SessionStatus::solved:
      std::cout << "\nSolved in generation " << *session.solved_at() << ". What is known:\n";
      print_knowns_table(compute(session.events()), domain, std::cout);
      break;
    case SessionStatus::exhausted:
      std::cout << "Stopped: the generation limit was reached without finding the answer.\n";
      break;
    default:
      std::cout << "\nSession ended before the problem was solved.\n";
      break;
  }
  return status_exit(status);
}

int cmd_run(CommonFlags& flags, const std::string& problem, const std::string& metrics_out,
            const std::string& snapshot_out, bool quiet) {
  std::optional<Domain> storage;
  const Domain& domain = resolve_domain(flags, storage);
  const SessionOptions options = finish(flags);
  const ProblemScript script = load_script(problem, domain);
  const ScriptedRun run = run_scripted(domain, script, options);
  if (!metrics_out.empty()) write_metrics(metrics_out, run.events, domain);
  if (!snapshot_out.empty()) save_snapshot(run.snapshot, snapshot_out);
  if (!quiet) {
    std::cout << "status: " << to_string(run.status);
    if (run.solved_at) std::cout << " at generation " << *run.solved_at;
    std::cout << " (mode " << flags.mode << ", seed " << options.seed << ")\n";
  }
  return status_exit(run.status);
}

int cmd_compare(CommonFlags& flags, const std::string& problem, int seeds, int threads, const std::string& out_file) {
  std::optional<Domain> storage;
  const Domain& domain = resolve_domain(flags, storage);
  const SessionOptions base = finish(flags);
  const ProblemScript script = load_script(problem, domain);

  struct Job {
    GaMode mode;
    std::uint64_t seed;
    std::optional<int> solved_at;
  };
  std::vector<Job> jobs;
  for (GaMode mode : {GaMode::ga, GaMode::random_control}) {
    for (int s = 1; s <= seeds; ++s) jobs.push_back({mode, static_cast<std::uint64_t>(s), std::nullopt});
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        SessionOptions options = base;
        options.seed = jobs[i].seed;
        options.config.mode = jobs[i].mode;
        jobs[i].solved_at = run_scripted(domain, script, options).solved_at;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, threads); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<RunMetrics> ga, control;
  for (const auto& job : jobs) {
    RunMetrics m;
    m.solved_at = job.solved_at;
    (job.mode == GaMode::ga ? ga : control).push_back(std::move(m));
    std::cout << to_string(job.mode) << " seed " << job.seed << ": "
              << (job.solved_at ? "solved at " + std::to_string(*job.solved_at) : std::string("unsolved")) << '\n';
  }
  const Comparison summary = compare(ga, control);
  const std::string json = to_json(summary).dump(2);
  std::cout << json << '\n';
  if (!out_file.empty()) write_file(out_file, json + "\n");
  return kSuccess;
}

int cmd_export_bits(const std::string& in, const std::string& out) {
  const SessionSnapshot snap = load_snapshot(in);
  const std::size_t bytes = export_bitstream(snap.population, fs::path(out));
  std::cout << "wrote " << bytes << " bytes to " << out << '\n';
  return kSuccess;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_config: return kUsage;
    case ErrorCode::unsolved_run_present: return kExhausted;
    default: return kIoOrParse;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Socratic kinematics tutor driven by a genetic algorithm"};
  app.set_config("--config", "", "read flags from an INI/TOML file");
  app.require_subcommand(1);

  CommonFlags flags;

  auto* tutor = app.add_subcommand("tutor", "interactive tutoring session on this terminal");
  bool no_target = false;
  add_ga_flags(*tutor, flags);
  tutor->add_flag("--no-target", no_target, "skip the target question (the session then never ends solved)");

  auto* run = app.add_subcommand("run", "unattended session answered from a problem script");
  std::string problem, metrics_out, snapshot_out;
  bool quiet = false;
  add_ga_flags(*run, flags);
  run->add_option("--problem", problem, "problem script JSON")->required();
  run->add_option("--metrics-out", metrics_out, "directory for metrics.csv, knowns.jsonl and events.jsonl");
  run->add_option("--snapshot-out", snapshot_out, "write the final session snapshot here");
  run->add_flag("--quiet", quiet);

  auto* cmp = app.add_subcommand("compare", "GA against random control over seeds 1..N");
  int seeds = 20;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string compare_out;
  add_ga_flags(*cmp, flags);
  cmp->add_option("--problem", problem, "problem script JSON")->required();
  cmp->add_option("--seeds", seeds, "number of seeds")->check(CLI::PositiveNumber)->capture_default_str();
  cmp->add_option("--threads", threads)->check(CLI::PositiveNumber);
  cmp->add_option("--out", compare_out, "also write the summary JSON here");

  auto* bits = app.add_subcommand("export-bits", "pack a snapshot's population into a raw bitstream");
  std::string bits_in, bits_out;
  bits->add_option("--in", bits_in, "session snapshot JSON")->required();
  bits->add_option("--out", bits_out, "output file")->required();

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

  try {
    if (*tutor) return cmd_tutor(flags, no_target);
    if (*run) return cmd_run(flags, problem, metrics_out, snapshot_out, quiet);
    if (*cmp) return cmd_compare(flags, problem, seeds, threads, compare_out);
    if (*bits) return cmd_export_bits(bits_in, bits_out);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoOrParse;
  }
  return kUsage;
}

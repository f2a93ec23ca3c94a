#include "camplan/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "camplan/catalog.hpp"
#include "camplan/error.hpp"
#include "camplan/model.hpp"
#include "camplan/profiles.hpp"
#include "camplan/simulator.hpp"
#include "camplan/solver.hpp"
#include "json_util.hpp"

namespace camplan::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string catalog;
  std::string profiles;
  std::string workload;
  std::string strategy = "st3";
  double headroom = kDefaultHeadroom;
  std::string plan;
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t max_nodes = SolverLimits{}.max_nodes;
  double time_budget = SolverLimits{}.time_budget_s;
  bool trace = false;

  // profile-fit
  std::vector<std::string> samples;
  std::string program;
  std::string device;
  std::string frame_size;
  std::string reference_machine;
  std::optional<double> max_rate;

  // synth-run
  double rate = 0.0;
  std::size_t count = 10;
  double noise = 0.0;
  double duration = 60.0;

  SolverLimits limits() const {
    SolverLimits l;
    l.max_nodes = max_nodes;
    l.time_budget_s = time_budget;
    return l;
  }
};

// Routes the structured document to --out (or stdout) and the human view to
// whichever stream is left.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out, std::ostream& err)
      : human_(path.empty() ? err : out), doc_(&out) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError(path + ": cannot open for writing");
      doc_ = &file_;
    }
  }

  void document(const json& j) { *doc_ << j.dump(2) << '\n'; }
  std::ostream& human() { return human_; }

 private:
  std::ostream& human_;
  std::ostream* doc_;
  std::ofstream file_;
};

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required option ") + flag);
}

struct Inputs {
  Catalog catalog;
  ProfileStore profiles;
  Workload workload;
};

Inputs load_inputs(const Options& o) {
  require(o.catalog, "--catalog");
  require(o.profiles, "--profiles");
  require(o.workload, "--workload");
  return {load_catalog_file(o.catalog), load_profiles_file(o.profiles), load_workload_file(o.workload)};
}

std::string describe_instances(const Plan& plan) {
  std::map<std::string, int> counts;
  for (const auto& pi : plan.instances) ++counts[pi.type];
  std::string out;
  for (const auto& [type, n] : counts) out += (out.empty() ? "" : ", ") + std::to_string(n) + " x " + type;
  return out.empty() ? "no instances" : out;
}

int cmd_plan(const Options& o, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o);
  const Strategy strategy = parse_strategy(o.strategy);
  Sink sink(o.out, out, err);
  try {
    const PackingInstance inst = build_instance(in.workload, in.catalog, in.profiles, strategy, o.headroom);
    SolverStats stats;
    const Solution sol = solve_exact(inst, o.limits(), &stats, o.trace ? &err : nullptr);
    const Plan plan = solution_to_plan(inst, sol);
    sink.document(plan_to_json(plan));
    sink.human() << to_string(strategy) << ": " << describe_instances(plan) << "\n"
                 << "hourly cost: $" << plan.hourly_cost.str()
                 << (plan.optimal ? "" : " (not proven optimal)") << "\n";
    return kOk;
  } catch (const InfeasibleError& e) {
    sink.document({{"status", "infeasible"},
                   {"strategy", to_string(strategy)},
                   {"stream", e.subject()},
                   {"reason", e.reason()}});
    sink.human() << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  }
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o);
  const auto rows = compare_strategies(in.workload, in.catalog, in.profiles, o.headroom, o.limits());
  Sink sink(o.out, out, err);
  sink.document(comparison_to_json(rows, in.catalog));
  auto& h = sink.human();
  h << std::left << std::setw(10) << "strategy" << std::setw(9) << "non-GPU" << std::setw(6) << "GPU"
    << std::setw(10) << "cost/h" << "savings\n";
  for (const auto& row : rows) {
    h << std::setw(10) << to_string(row.strategy);
    if (!row.plan) {
      h << std::setw(9) << "FAIL" << std::setw(6) << "FAIL" << std::setw(10) << "FAIL" << "FAIL  ("
        << row.failure << ")\n";
      continue;
    }
    h << std::setw(9) << (row.non_gpu_instances ? std::to_string(row.non_gpu_instances) : "-")
      << std::setw(6) << (row.gpu_instances ? std::to_string(row.gpu_instances) : "-")
      << std::setw(10) << ("$" + row.plan->hourly_cost.str()) << *row.savings_percent << "%\n";
  }
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o);
  require(o.plan, "--plan");
  const Plan plan = plan_from_json(detail::read_json_file(o.plan));
  const SimulationReport report = simulate(plan, in.workload, in.profiles, in.catalog);
  const auto violations = check_plan(plan, in.workload, in.profiles, in.catalog, o.headroom);
  Sink sink(o.out, out, err);
  sink.document(report_to_json(report));
  auto& h = sink.human();
  for (const auto& u : report.per_instance) {
    h << "instance " << u.ordinal << " (" << u.type << "):";
    for (std::size_t d = 0; d < u.utilization.size(); ++d) {
      h << " " << dimension_name(d) << "=" << fixed(100.0 * u.utilization[d], 1) << "%";
    }
    h << "\n";
  }
  for (const auto& v : violations) h << "violation: " << v.message << "\n";
  h << "overall performance: " << fixed(100.0 * report.overall_performance, 1) << "%\n";
  return report.overall_performance >= 0.9 ? kOk : kPerformanceViolation;
}

int cmd_profile_fit(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.samples.empty()) throw UsageError("missing required option --samples");
  ProfileStore known;
  if (!o.profiles.empty()) known = load_profiles_file(o.profiles);

  Sink sink(o.out, out, err);
  auto& h = sink.human();
  ProfileStore fitted;
  for (const auto& path : o.samples) {
    TestRunFile run = load_test_run_file(path);
    const std::string program = !o.program.empty() ? o.program : run.program.value_or("");
    if (program.empty()) throw UsageError(path + ": no program name (use --program)");
    const Device device = !o.device.empty() ? parse_device(o.device)
                          : run.device ? *run.device
                                       : throw UsageError(path + ": no device (use --device)");
    const FrameSize frame = !o.frame_size.empty() ? parse_frame_size(o.frame_size)
                            : run.frame_size ? *run.frame_size
                                             : throw UsageError(path + ": no frame size (use --frame-size)");
    const ReferenceMachine machine =
        !o.reference_machine.empty() ? parse_reference_machine(o.reference_machine)
        : run.reference_machine      ? *run.reference_machine
                                     : throw UsageError(path + ": no reference machine (use --reference-machine)");

    Profile p = fit_profile(run.samples, device, frame, machine);
    p.program = program;
    p.max_rate = o.max_rate ? o.max_rate : run.max_rate;

    h << p.program << " " << to_string(p.frame_size) << " " << to_string(p.device) << ":";
    for (std::size_t k = 0; k < kResourceKinds; ++k) {
      const double u = p.reference_utilization[k];
      if (p.scaling[k] == Scaling::linear) {
        h << " " << to_string(static_cast<ResourceKind>(k)) << " slope " << fixed(u / p.reference_rate, 6) << "/FPS";
      } else {
        h << " " << to_string(static_cast<ResourceKind>(k)) << " " << fixed(u, 6);
      }
    }
    if (p.max_rate) h << " max " << fixed(*p.max_rate, 2) << " FPS";
    h << "\n";
    bool all_zero = true;
    for (double u : p.reference_utilization) all_zero = all_zero && u == 0.0;
    if (all_zero) err << "warning: " << path << ": all samples report zero utilization\n";
    fitted.add(std::move(p));
  }

  std::set<std::pair<std::string, FrameSize>> reported;
  for (const auto& p : fitted.all()) {
    if (!reported.emplace(p.program, p.frame_size).second) continue;
    auto lookup = [&](Device d) {
      const Profile* q = fitted.find(p.program, p.frame_size, d);
      return q ? q : known.find(p.program, p.frame_size, d);
    };
    const Profile* cpu = lookup(Device::cpu_only);
    const Profile* gpu = lookup(Device::gpu_assisted);
    if (cpu && gpu && cpu->max_rate && gpu->max_rate) {
      h << "speedup " << p.program << " " << to_string(p.frame_size) << ": "
        << fixed(speedup(*cpu, *gpu), 2) << "\n";
    }
  }
  sink.document(profiles_to_json(fitted));
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  (void)err;
  int checked = 0;
  if (!o.catalog.empty()) {
    auto c = load_catalog_file(o.catalog);
    out << o.catalog << ": catalog ok (" << c.types().size() << " instance types, n_max " << c.n_max() << ")\n";
    ++checked;
  }
  if (!o.profiles.empty()) {
    auto p = load_profiles_file(o.profiles);
    out << o.profiles << ": profiles ok (" << p.size() << " profiles)\n";
    ++checked;
  }
  if (!o.workload.empty()) {
    auto w = load_workload_file(o.workload);
    out << o.workload << ": workload ok (" << expand_workload(w).size() << " streams)\n";
    ++checked;
  }
  if (!o.plan.empty()) {
    auto p = plan_from_json(detail::read_json_file(o.plan));
    out << o.plan << ": plan ok (" << p.instances.size() << " instances)\n";
    ++checked;
  }
  for (const auto& path : o.samples) {
    auto run = load_test_run_file(path);
    out << path << ": test run ok (" << run.samples.size() << " samples)\n";
    ++checked;
  }
  if (checked == 0) throw UsageError("nothing to validate; pass --catalog, --profiles, --workload, --plan or --samples");
  return kOk;
}

int cmd_synth_run(const Options& o, std::ostream& out, std::ostream& err) {
  require(o.profiles, "--profiles");
  require(o.program, "--program");
  require(o.device, "--device");
  require(o.frame_size, "--frame-size");
  const ProfileStore store = load_profiles_file(o.profiles);
  const Profile* truth = store.find(o.program, parse_frame_size(o.frame_size), parse_device(o.device));
  if (!truth) throw UsageError("no profile for " + o.program + " " + o.frame_size + " " + o.device);
  const double rate = o.rate > 0.0 ? o.rate : truth->reference_rate;

  TestRunFile run;
  run.program = truth->program;
  run.device = truth->device;
  run.frame_size = truth->frame_size;
  run.reference_machine = truth->reference_machine;
  run.max_rate = truth->max_rate;
  run.samples = generate_test_run(*truth, rate, o.count, o.noise, o.seed, o.duration);
  Sink sink(o.out, out, err);
  sink.document(test_run_to_json(run));
  sink.human() << run.samples.size() << " samples at " << fixed(rate, 2) << " FPS (seed " << o.seed << ")\n";
  return kOk;
}

void add_inputs(CLI::App* cmd, Options& o) {
  cmd->add_option("--catalog", o.catalog, "Instance catalog (JSON)");
  cmd->add_option("--profiles", o.profiles, "Profile store (JSON)");
  cmd->add_option("--workload", o.workload, "Workload (JSON)");
  cmd->add_option("--headroom", o.headroom, "Usable fraction of every resource")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--out", o.out, "Write the structured output here instead of stdout");
}

void add_limits(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-nodes", o.max_nodes, "Branch-and-bound node budget")->check(CLI::PositiveNumber);
  cmd->add_option("--time-budget", o.time_budget, "Solver time budget in seconds")->check(CLI::PositiveNumber);
  cmd->add_flag("--trace", o.trace, "Print solver progress to stderr");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cost-minimizing CPU/GPU instance planner for camera stream analysis", "camplan"};
  app.require_subcommand(1);

  auto* plan = app.add_subcommand("plan", "Compute a minimum-cost plan for one strategy");
  add_inputs(plan, o);
  add_limits(plan, o);
  plan->add_option("--strategy", o.strategy, "st1 (no GPUs), st2 (GPUs only) or st3 (all)")
      ->check(CLI::IsMember({"st1", "st2", "st3", "ST1", "ST2", "ST3"}));

  auto* compare = app.add_subcommand("compare", "Plan under every strategy and compare costs");
  add_inputs(compare, o);
  add_limits(compare, o);

  auto* simulate_cmd = app.add_subcommand("simulate", "Evaluate utilization and performance of a plan");
  add_inputs(simulate_cmd, o);
  simulate_cmd->add_option("--plan", o.plan, "Plan document (JSON)");

  auto* fit = app.add_subcommand("profile-fit", "Fit profiles from test-run samples");
  fit->add_option("--samples", o.samples, "Test-run sample file (repeatable)");
  fit->add_option("--profiles", o.profiles, "Existing profiles used to pair cpu/gpu speedups");
  fit->add_option("--program", o.program, "Program name");
  fit->add_option("--device", o.device, "cpu-only or gpu-assisted");
  fit->add_option("--frame-size", o.frame_size, "Frame size, e.g. 640x480");
  fit->add_option("--reference-machine", o.reference_machine, "cores,memory_gb,gpu_cores,gpu_memory_gb");
  fit->add_option("--max-rate", o.max_rate, "Measured max achievable rate (FPS)");
  fit->add_option("--out", o.out, "Write fitted profiles here instead of stdout");

  auto* validate = app.add_subcommand("validate", "Schema-check input documents");
  validate->add_option("--catalog", o.catalog);
  validate->add_option("--profiles", o.profiles);
  validate->add_option("--workload", o.workload);
  validate->add_option("--plan", o.plan);
  validate->add_option("--samples", o.samples);

  auto* synth = app.add_subcommand("synth-run", "Generate a synthetic test run from a profile");
  synth->add_option("--profiles", o.profiles, "Profile store holding the ground truth");
  synth->add_option("--program", o.program);
  synth->add_option("--device", o.device);
  synth->add_option("--frame-size", o.frame_size);
  synth->add_option("--rate", o.rate, "Frame rate of the run (default: reference rate)");
  synth->add_option("--count", o.count, "Number of samples");
  synth->add_option("--noise", o.noise, "Gaussian noise standard deviation")->check(CLI::NonNegativeNumber);
  synth->add_option("--duration", o.duration, "Seconds per sample");
  synth->add_option("--seed", o.seed, "RNG seed");
  synth->add_option("--out", o.out);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }

  try {
    if (*plan) return cmd_plan(o, out, err);
    if (*compare) return cmd_compare(o, out, err);
    if (*simulate_cmd) return cmd_simulate(o, out, err);
    if (*fit) return cmd_profile_fit(o, out, err);
    if (*validate) return cmd_validate(o, out, err);
    if (*synth) return cmd_synth_run(o, out, err);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace camplan::cli

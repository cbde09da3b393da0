#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "emw/error.hpp"
#include "emw/harness/beam_profile.hpp"
#include "emw/harness/config.hpp"
#include "emw/harness/output.hpp"
#include "emw/harness/sampling.hpp"
#include "emw/harness/validation.hpp"
#include "emw/kernels.hpp"

namespace fs = std::filesystem;
using namespace emw;
using namespace emw::harness;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  unsigned threads = 1;
  std::uint64_t seed = ValidationOptions{}.seed;
  double tol_scale = 1.0;
  std::string isa = "auto";
  bool break_branch = false;
};

void report_error(const std::string& code, const std::string& message) {
  nlohmann::json j{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
}

RunConfig load(const Flags& f) {
  RunConfig cfg = f.config.empty() ? default_config() : load_config(f.config);
  validate_config(cfg);
  return cfg;
}

SampleOptions sample_options(const Flags& f) {
  SampleOptions o;
  o.threads = f.threads;
  if (f.isa == "scalar") o.isa = kernels::Isa::Scalar;
  else if (f.isa == "avx2") {
    if (!kernels::avx2_supported()) throw Error(ErrorCode::ConfigError, "--isa avx2 requested but not available");
    o.isa = kernels::Isa::Avx2;
  }
  return o;
}

void emit(const Flags& f, const std::string& stem, const Table& table, nlohmann::json meta) {
  fs::create_directories(f.out);
  write_dataset(f.out, stem, table, std::move(meta));
  std::printf("wrote %s (%zu rows)\n", (fs::path(f.out) / (stem + ".csv")).c_str(), table.rows());
}

int run_sample(const Flags& f, const std::string& stem, Table (*fn)(const RunConfig&, const SampleOptions&)) {
  const RunConfig cfg = load(f);
  const Table t = fn(cfg, sample_options(f));
  emit(f, stem, t, config_metadata(cfg));
  return 0;
}

int run_beam(const Flags& f) {
  const RunConfig cfg = load(f);
  const BeamProfile bp = beam_profile(cfg.source(), cfg.beam, f.threads);
  nlohmann::json meta = config_metadata(cfg);
  emit(f, "beam_profile", bp.angles, meta);
  emit(f, "beam_summary", bp.orders, meta);
  return 0;
}

int run_validate(const Flags& f) {
  const RunConfig cfg = load(f);
  ValidationOptions opts;
  opts.seed = f.seed;
  opts.tol_scale = f.tol_scale;
  opts.threads = f.threads;
  opts.break_branch = f.break_branch;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SuiteResult> results = run_validation(cfg, opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << format_report(results);
  std::printf("elapsed %.2f s\n", secs);

  bool ok = true;
  nlohmann::json arr = nlohmann::json::array();
  for (const SuiteResult& r : results) {
    ok = ok && r.passed;
    arr.push_back({{"name", r.name}, {"passed", r.passed}, {"measured", r.measured}, {"threshold", r.threshold},
                   {"relation", r.relation}, {"detail", r.detail}});
  }
  if (!f.out.empty() && f.out != ".") {
    fs::create_directories(f.out);
    nlohmann::json doc{{"suites", arr}, {"passed", ok}, {"seed", f.seed}, {"tol_scale", f.tol_scale},
                       {"seconds", secs}};
    write_atomic(fs::path(f.out) / "validation.json", doc.dump(2) + "\n");
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electromagnetic wavelet sampler and validation runner"};
  app.require_subcommand(1);
  Flags f;
  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "INI config file (built-in defaults when omitted)")->envname("EMW_CONFIG");
    sub->add_option("--out", f.out, "output directory")->envname("EMW_OUT");
    sub->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 1024u))->envname("EMW_THREADS");
    sub->add_option("--seed", f.seed, "seed for random test points")->envname("EMW_SEED");
    sub->add_option("--tol-scale", f.tol_scale, "multiplier on validation tolerances")
        ->check(CLI::PositiveNumber)
        ->envname("EMW_TOL_SCALE");
    sub->add_option("--isa", f.isa, "kernel variant: auto, scalar, avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
        ->envname("EMW_ISA");
  };
  std::string cmd;
  for (auto [name, help] : {std::pair{"sample-field", "Psi or F over the grid"},
                            std::pair{"sample-sources", "surface charge and current sweep on S_alpha"},
                            std::pair{"impulse-response", "closed-form impulse sources"},
                            std::pair{"beam-profile", "predicted vs measured beam diagnostics"},
                            std::pair{"validate", "run every validation suite"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (std::string(name) == "validate") {
      // negative control: evaluates the LMN coefficients on the wrong branch
      sub->add_flag("--break-branch", f.break_branch)->group("");
    }
    sub->callback([&cmd, name] { cmd = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd == "sample-field") return run_sample(f, "field", sample_field);
    if (cmd == "sample-sources") return run_sample(f, "sources", sample_sources);
    if (cmd == "impulse-response") return run_sample(f, "impulse", impulse_response);
    if (cmd == "beam-profile") return run_beam(f);
    return run_validate(f);
  } catch (const Error& e) {
    const std::string code(to_string(e.code()));
    std::string msg = e.what();
    if (msg.rfind(code + ": ", 0) == 0) msg.erase(0, code.size() + 2);
    report_error(code, msg);
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    report_error("Internal", e.what());
    return 1;
  }
}

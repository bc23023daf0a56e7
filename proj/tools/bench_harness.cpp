// Compares the serial reference harness path (jobs=1) against the
// OpenMP-parallel path on the same soundness sweep and checks that the
// merged reports agree.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "pa/config.hpp"
#include "pa/harness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace pa;

namespace {

double run_once(System sys, EquivalenceKind kind, const SemanticsConfig& cfg,
                HarnessOptions opts, SoundnessReport& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = check_soundness(sys, kind, cfg, opts);
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel harness benchmark"};
  std::string config_path, system_s = "pa1", rel_s = "s";
  int size = 3, jobs = 0;
  app.add_option("--config", config_path)->required();
  app.add_option("--system", system_s)->check(CLI::IsMember({"pa1", "pa2"}));
  app.add_option("--rel", rel_s)->check(CLI::IsMember({"s", "p", "hp", "hhp"}));
  app.add_option("--size", size);
  app.add_option("--jobs", jobs, "parallel worker count (0 = hardware)");
  CLI11_PARSE(app, argc, argv);

  SemanticsConfig cfg = load_config_file(config_path);
  System sys = system_s == "pa2" ? System::PA2 : System::PA1;
  EquivalenceKind kind = *kind_from_name(rel_s);

  if (jobs <= 0) {
#ifdef _OPENMP
    jobs = omp_get_max_threads();
#else
    jobs = 1;
#endif
  }

  HarnessOptions opts;
  opts.size_bound = size;

  SoundnessReport serial, parallel;
  opts.jobs = 1;
  double ts = run_once(sys, kind, cfg, opts, serial);
  opts.jobs = jobs;
  double tp = run_once(sys, kind, cfg, opts, parallel);

  bool agree = serial.instances == parallel.instances &&
               serial.skipped == parallel.skipped &&
               serial.failures.size() == parallel.failures.size();
  for (size_t i = 0; agree && i < serial.failures.size(); ++i)
    agree = serial.failures[i].schema == parallel.failures[i].schema &&
            serial.failures[i].lhs == parallel.failures[i].lhs &&
            serial.failures[i].rhs == parallel.failures[i].rhs;

  std::cout << "instances: " << serial.instances << " (+" << serial.skipped
            << " skipped)\n";
  std::cout << "serial   (jobs=1):  " << ts << " s\n";
  std::cout << "parallel (jobs=" << jobs << "): " << tp << " s\n";
  std::cout << "speedup: " << (tp > 0 ? ts / tp : 0.0) << "x\n";
  std::cout << "reports agree: " << (agree ? "yes" : "NO") << "\n";
  return agree ? 0 : 1;
}

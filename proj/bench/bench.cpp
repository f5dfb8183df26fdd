// Wall-clock comparison of sequential and OpenMP-parallel runs, and a check
// that both produce the same report.
//
// usage: g2frames_bench [probes] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "g2frames/runner.hpp"

using namespace g2frames;

namespace {

double seconds(const RunConfig& c, Execution mode, int repeats, std::string& dump) {
  double best = 1e300;
  for (int k = 0; k < repeats; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    dump = run(c, mode).toJson().dump();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int probes = argc > 1 ? std::atoi(argv[1]) : 200;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  struct Case {
    const char* name;
    RunConfig config;
  };
  RunConfig x;
  x.model = "fubiniStudy";
  x.space = "X";
  x.branch = Branch::Minus;
  x.profile.kind = "bs";
  x.profile.s = 1.0;
  x.profile.c0 = 1.0;
  x.profile.c1 = 1.0;
  x.probes = probes;
  x.suites = {"frame-calculus", "torsion-X-closed-vs-numeric", "second-derivative"};
  RunConfig p;
  p.model = "complexHyperbolic";
  p.space = "P";
  p.profile.kind = "constant";
  p.profile.lambda = 1.0;
  p.profile.mu = 1.3;
  p.probes = probes;
  p.suites = {"identities-P", "torsion-P-closed", "second-derivative"};

  std::printf("threads: %d, probes: %d, best of %d\n", omp_get_max_threads(), probes, repeats);
  std::printf("%-22s %12s %12s %9s %s\n", "case", "sequential", "parallel", "speedup", "identical");
  int status = 0;
  for (const Case& c : {Case{"X fubiniStudy bs", x}, Case{"P complexHyperbolic", p}}) {
    std::string a, b;
    const double ts = seconds(c.config, Execution::Sequential, repeats, a);
    const double tp = seconds(c.config, Execution::Parallel, repeats, b);
    std::printf("%-22s %11.3fs %11.3fs %8.2fx %s\n", c.name, ts, tp, ts / tp, a == b ? "yes" : "NO");
    if (a != b) status = 1;
  }
  return status;
}

// pescheck: check PES files, generate benchmarks, run the verdict-table suite.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pes/pes.h"

namespace {

constexpr int exit_valid = 0;
constexpr int exit_invalid = 1;
constexpr int exit_error = 2;

struct ParamList {
  std::vector<std::string> names;
  std::vector<pes_param> items;
};

bool parse_params(const std::vector<std::string>& raw, ParamList& out) {
  out.names.clear();
  out.items.clear();
  for (const auto& r : raw) {
    auto eq = r.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --param expects NAME=INT, got '" << r << "'\n";
      return false;
    }
    try {
      std::size_t used = 0;
      long v = std::stol(r.substr(eq + 1), &used);
      if (used != r.size() - eq - 1 || v < INT32_MIN || v > INT32_MAX)
        throw std::out_of_range("value");
      out.names.push_back(r.substr(0, eq));
      out.items.push_back({nullptr, static_cast<int32_t>(v)});
    } catch (const std::exception&) {
      std::cerr << "error: --param expects NAME=INT, got '" << r << "'\n";
      return false;
    }
  }
  for (std::size_t k = 0; k < out.items.size(); ++k)
    out.items[k].name = out.names[k].c_str();
  return true;
}

int report_error(pes_status s) {
  std::cerr << "error: " << pes_status_name(s) << ": " << pes_last_error() << "\n";
  return exit_error;
}

std::string stats_line(const std::string& label, const char* verdict, const pes_stats& st) {
  std::ostringstream os;
  os << "file=" << label << " verdict=" << verdict << " nodes=" << st.nodes_expanded
     << " zones=" << st.zones_created << " peak_zones=" << st.peak_zones
     << " universe_zones=" << st.universe_zones << " locations=" << st.locations
     << " iterations=" << st.iterations << " ms=" << st.milliseconds;
  return os.str();
}

struct CheckFlags {
  bool stats = false;
  bool oracle = false;
  std::size_t max_zones = 0;
};

// Returns exit code; prints the verdict line for a source text.
int run_check(const std::string& label, const std::string& source, const ParamList& params,
              const CheckFlags& flags) {
  pes_file* file = nullptr;
  pes_status s = pes_parse(source.c_str(), params.items.data(), params.items.size(), &file);
  if (s != PES_OK)
    return report_error(s);
  pes_check_options opts{flags.max_zones};
  pes_stats st{};
  int sat = 0;
  s = pes_check(file, &opts, &sat, &st);
  if (s != PES_OK) {
    pes_file_destroy(file);
    return report_error(s);
  }
  const char* verdict = sat ? "valid" : "invalid";
  if (flags.oracle) {
    int osat = 0;
    pes_stats ost{};
    s = pes_oracle_check(file, &osat, &ost);
    if (s != PES_OK) {
      pes_file_destroy(file);
      return report_error(s);
    }
    if (osat != sat) {
      pes_file_destroy(file);
      std::cout << verdict << "\n";
      std::cerr << "error: region oracle disagrees (oracle says " << (osat ? "valid" : "invalid")
                << ")\n";
      return exit_error;
    }
  }
  pes_file_destroy(file);
  std::cout << verdict << "\n";
  if (flags.stats)
    std::cout << stats_line(label, verdict, st) << "\n";
  return sat ? exit_valid : exit_invalid;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return false;
  std::ostringstream os;
  os << in.rdbuf();
  out = os.str();
  return true;
}

struct SuiteJob {
  std::string family;
  int n;
  std::string category;
  int expected;
};

struct SuiteResult {
  std::string verdict; // valid / invalid / error
  std::string detail;
  double ms = 0;
};

SuiteResult run_job(const SuiteJob& job, std::size_t max_zones) {
  SuiteResult r;
  char* text = nullptr;
  pes_status s = pes_generate(job.family.c_str(), job.n, job.category.c_str(), nullptr, 0, &text);
  if (s != PES_OK)
    return {"error", pes_last_error()};
  pes_file* file = nullptr;
  s = pes_parse(text, nullptr, 0, &file);
  pes_string_free(text);
  if (s != PES_OK)
    return {"error", pes_last_error()};
  pes_check_options opts{max_zones};
  pes_stats st{};
  int sat = 0;
  s = pes_check(file, &opts, &sat, &st);
  pes_file_destroy(file);
  if (s != PES_OK)
    return {"error", std::string(pes_status_name(s)) + ": " + pes_last_error()};
  r.verdict = sat ? "valid" : "invalid";
  r.ms = st.milliseconds;
  return r;
}

const char* const families[] = {"csma", "fischer", "grc", "leader"};
const char* const category_names[] = {"as", "bs", "al", "bl", "m1", "m2", "m3", "m4", "m4ap"};

int run_suite(int min_n, int max_n, unsigned jobs, std::size_t max_zones) {
  std::vector<SuiteJob> work;
  for (const char* f : families)
    for (int n = min_n; n <= max_n; ++n)
      for (const char* c : category_names) {
        int known = 0, valid = 0;
        if (pes_expected_verdict(f, n, c, &known, &valid) != PES_OK || !known)
          continue;
        work.push_back({f, n, c, valid});
      }
  std::vector<SuiteResult> results(work.size());
  std::atomic<std::size_t> next{0};
  std::mutex print;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < work.size();)
      results[k] = run_job(work[k], max_zones);
  };
  if (jobs == 0)
    jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < std::min<std::size_t>(jobs, work.size()); ++k)
    pool.emplace_back(worker);
  for (auto& t : pool)
    t.join();

  int failures = 0;
  std::printf("%-8s %3s %-5s %-8s %-8s %-4s %10s\n", "family", "n", "cat", "expected", "got",
              "ok", "ms");
  for (std::size_t k = 0; k < work.size(); ++k) {
    const auto& j = work[k];
    const auto& r = results[k];
    const char* expected = j.expected ? "valid" : "invalid";
    bool ok = r.verdict == expected;
    failures += ok ? 0 : 1;
    std::printf("%-8s %3d %-5s %-8s %-8s %-4s %10.1f\n", j.family.c_str(), j.n,
                j.category.c_str(), expected, r.verdict.c_str(), ok ? "pass" : "FAIL", r.ms);
    if (!r.detail.empty())
      std::printf("    %s\n", r.detail.c_str());
  }
  std::printf("%zu cells, %d mismatches\n", work.size(), failures);
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timed model checker for predicate equation systems"};
  app.require_subcommand(1);

  std::string path;
  std::vector<std::string> raw_params;
  CheckFlags flags;
  auto* check = app.add_subcommand("check", "Check a PES file; exit 0 valid, 1 invalid, 2 error");
  check->add_option("file", path, "PES source file")->required();
  check->add_flag("--stats", flags.stats, "Print a single-line key=value report");
  check->add_flag("--oracle", flags.oracle, "Also run the region-graph oracle and compare");
  check->add_option("--max-zones", flags.max_zones, "Zone cap (resource error when exceeded)");
  check->add_option("--param", raw_params, "Override a #define: NAME=INT");

  std::string family, category, out_path;
  int n = 2;
  auto* gen = app.add_subcommand("gen", "Generate a benchmark PES file");
  gen->add_option("family", family, "csma | fischer | grc | leader")->required();
  gen->add_option("n", n, "Process or train count")->required();
  gen->add_option("category", category, "as bs al bl m1 m2 m3 m4 m4ap")->required();
  gen->add_option("--param", raw_params, "Override a #define: NAME=INT");
  gen->add_option("-o,--output", out_path, "Output file (default: standard output)");

  int min_n = 2, max_n = 3;
  unsigned jobs = 0;
  std::size_t suite_zones = 0;
  auto* suite = app.add_subcommand("suite", "Run the verdict table; exit 0 iff all cells pass");
  suite->add_option("--min-n", min_n, "Smallest process count");
  suite->add_option("--max-n", max_n, "Largest process count");
  suite->add_option("--jobs", jobs, "Worker threads (default: hardware concurrency)");
  suite->add_option("--max-zones", suite_zones, "Zone cap per run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_error;
  }

  ParamList params;
  if (!parse_params(raw_params, params))
    return exit_error;

  if (*check) {
    std::string source;
    if (!read_file(path, source)) {
      std::cerr << "error: cannot read '" << path << "'\n";
      return exit_error;
    }
    return run_check(path, source, params, flags);
  }
  if (*gen) {
    char* text = nullptr;
    pes_status s = pes_generate(family.c_str(), n, category.c_str(), params.items.data(),
                                params.items.size(), &text);
    if (s != PES_OK)
      return report_error(s);
    std::string body = text;
    pes_string_free(text);
    if (out_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      out << body;
      if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return exit_error;
      }
    }
    return 0;
  }
  return run_suite(min_n, max_n, jobs, suite_zones);
}

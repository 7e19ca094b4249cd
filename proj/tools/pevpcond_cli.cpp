// pevpcond command-line front end. Talks to the library through the C API only.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pevpcond/pevpcond.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitMismatch = 3;

struct FamilyFlags {
  std::string problem;
  int n = 1;
  int d = 1;
  int big_n = 0;
  std::vector<int> indices;
  std::string masks;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& f) {
  cmd->add_option("--problem", f.problem,
                  "dense_poly | lacunary_poly | gevp | pevp | masked_pevp | sparse_qep | quadric")
      ->required();
  cmd->add_option("--n", f.n, "matrix size");
  cmd->add_option("--d", f.d, "matrix polynomial degree");
  cmd->add_option("--N", f.big_n, "scalar polynomial degree");
  cmd->add_option("--indices", f.indices, "lacunary exponents, e.g. 0,3,7")->delimiter(',');
  cmd->add_option("--masks", f.masks, "comma separated masks A_0..A_d (full, diag, upper, lower)");
}

bool is_scalar_family(const std::string& name) {
  return name == "dense_poly" || name == "dense" || name == "lacunary_poly" || name == "lacunary";
}

pc_descriptor descriptor_of_flags(const FamilyFlags& f) {
  pc_descriptor desc{};
  desc.family = f.problem.c_str();
  desc.n = f.n;
  desc.degree = is_scalar_family(f.problem) ? f.big_n : f.d;
  desc.indices = f.indices.empty() ? nullptr : f.indices.data();
  desc.index_count = f.indices.size();
  desc.masks = f.masks.empty() ? nullptr : f.masks.c_str();
  return desc;
}

int report_failure(const char* what, pc_status status) {
  std::cerr << "pevpcond: " << what << ": " << pc_status_string(status);
  const char* msg = pc_last_error_message();
  if (msg && *msg) std::cerr << " (" << msg << ")";
  std::cerr << "\n";
  switch (status) {
    case PC_INVALID_ARGUMENT:
    case PC_PARSE_ERROR:
    case PC_IO_ERROR: return kExitUsage;
    default: return kExitNumerical;
  }
}

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

int cmd_solve(const std::string& in_path, const std::string& out_path) {
  pc_problem* problem = nullptr;
  if (pc_status st = pc_problem_load(in_path.c_str(), &problem); st != PC_OK) return report_failure("load", st);
  pc_theory theory{};
  pc_problem_theory(problem, &theory);
  pc_solution* solution = nullptr;
  pc_status st = pc_solve(problem, &solution);
  pc_problem_destroy(problem);
  if (st != PC_OK) return report_failure("solve", st);

  json records = json::array();
  for (size_t i = 0; i < pc_solution_size(solution); ++i) {
    pc_record r{};
    pc_solution_record(solution, i, &r);
    json coords = json::array();
    for (int k = 0; k < r.coord_count; ++k) coords.push_back({r.coord_re[k], r.coord_im[k]});
    json rec;
    rec["coords"] = coords;
    rec["lambda"] = r.has_affine ? json{r.lambda_re, r.lambda_im} : json(nullptr);
    rec["mu"] = number_or_inf(r.mu);
    rec["mu_st_sq"] = number_or_inf(r.mu_st_sq);
    rec["residual_right"] = r.residual_right;
    rec["residual_left"] = r.residual_left;
    rec["trusted"] = r.trusted != 0;
    records.push_back(rec);
  }
  pc_solution_summary summary{};
  pc_solution_summary_get(solution, &summary);
  pc_solution_destroy(solution);

  json doc;
  doc["problem"] = theory.label;
  doc["records"] = records;
  doc["mean_mu_sq"] = number_or_inf(summary.mean_mu_sq);
  doc["mu_max"] = number_or_inf(summary.mu_max);
  doc["expected_count"] = summary.expected_count;
  doc["count_mismatch"] = summary.count_mismatch != 0;

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "pevpcond: cannot open " << out_path << " for writing\n";
    return kExitUsage;
  }
  out << doc.dump(2) << "\n";
  if (summary.count_mismatch) std::cerr << "pevpcond: warning: solution count differs from the expected count\n";
  return kExitOk;
}

int cmd_expect(const FamilyFlags& flags) {
  const pc_descriptor desc = descriptor_of_flags(flags);
  pc_theory t{};
  if (pc_status st = pc_theory_for_descriptor(&desc, &t); st != PC_OK) return report_failure("expect", st);
  std::printf("problem %s\n", t.label);
  std::printf("m %zu\nr %d\ns %d\nd_O %d\n", t.m, t.r, t.s, t.d_o);
  std::printf("solutions %zu\n", t.solution_count);
  std::printf("theory %.17g\n", t.theory);
  if (t.has_printed_value)
    std::printf("printed %.17g DISCREPANCY: literature prints %.17g, (m-1)r/s gives %.17g\n", t.printed_value,
                t.printed_value, t.theory);
  return kExitOk;
}

struct McFlags {
  std::size_t samples = 20000;
  std::uint64_t seed = 42;
  std::size_t blocks = 16;
  std::size_t max_resamples = 100;
  std::size_t workers = 0;
  std::string out;
};

std::size_t resolve_workers(std::size_t flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PEVPCOND_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 1;
}

int cmd_mc(const FamilyFlags& flags, const McFlags& mc) {
  const pc_descriptor desc = descriptor_of_flags(flags);
  pc_theory t{};
  if (pc_status st = pc_theory_for_descriptor(&desc, &t); st != PC_OK) return report_failure("mc", st);

  pc_experiment_config cfg{};
  pc_experiment_config_default(&cfg);
  cfg.samples = mc.samples;
  cfg.seed = mc.seed;
  cfg.blocks = mc.blocks;
  cfg.max_resamples = mc.max_resamples;
  cfg.workers = resolve_workers(mc.workers);

  const auto start = std::chrono::steady_clock::now();
  pc_experiment_result r{};
  if (pc_status st = pc_run_experiment(&desc, &cfg, &r); st != PC_OK) return report_failure("mc", st);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // s = d n on the projective line and s = n for the conic problem.
  const int degree = is_scalar_family(flags.problem) ? flags.big_n : t.s / flags.n;
  const std::vector<std::string> row = {csv_field(t.label),
                                        std::to_string(flags.n),
                                        std::to_string(degree),
                                        std::to_string(t.m),
                                        std::to_string(t.r),
                                        std::to_string(t.s),
                                        std::to_string(t.d_o),
                                        std::to_string(r.samples),
                                        std::to_string(r.seed),
                                        std::to_string(r.blocks),
                                        g17(r.mom_estimate),
                                        g17(r.naive_mean),
                                        g17(r.naive_stderr),
                                        g17(r.theory),
                                        g17(r.rel_err),
                                        std::to_string(r.resample_count),
                                        g17(wall),
                                        std::to_string(cfg.workers)};
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) line += (i ? "," : "") + row[i];
  const char* header =
      "problem,n,d,m,r,s,d_O,samples,seed,blocks,mom_estimate,naive_mean,naive_stderr,theory,rel_err,resamples,"
      "wall_clock_s,workers";

  if (mc.out.empty()) {
    std::cout << header << "\n" << line << "\n";
  } else {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(mc.out, ec) || std::filesystem::file_size(mc.out, ec) == 0;
    std::ofstream out(mc.out, std::ios::app);
    if (!out) {
      std::cerr << "pevpcond: cannot open " << mc.out << " for appending\n";
      return kExitUsage;
    }
    if (fresh) out << header << "\n";
    out << line << "\n";
  }

  if (r.count_mismatches * 1000 > r.samples) {
    std::cerr << "pevpcond: solution count mismatch in " << r.count_mismatches << " of " << r.samples
              << " samples\n";
    return kExitMismatch;
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite) {
  pc_verify_report* report = nullptr;
  if (pc_status st = pc_verify(suite.c_str(), &report); st != PC_OK) return report_failure("verify", st);
  bool all = true;
  for (size_t i = 0; i < pc_verify_size(report); ++i) {
    const char* name = nullptr;
    double measured = 0, expected = 0, tol = 0;
    int passed = 0;
    pc_verify_check(report, i, &name, &measured, &expected, &tol, &passed);
    std::printf("%s %s measured=%.10g expected=%.10g tol=%g\n", passed ? "PASS" : "FAIL", name, measured, expected,
                tol);
    all = all && passed;
  }
  pc_verify_destroy(report);
  return all ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Condition numbers of polynomial eigenvalue problems"};
  app.require_subcommand(1);

  std::string in_path, out_path;
  auto* solve = app.add_subcommand("solve", "solve a problem file and write per-eigenvalue records");
  solve->add_option("input", in_path, "problem JSON")->required();
  solve->add_option("output", out_path, "result JSON")->required();

  FamilyFlags expect_flags;
  auto* expect = app.add_subcommand("expect", "print the expected mean squared condition number");
  add_family_flags(expect, expect_flags);

  FamilyFlags mc_family;
  McFlags mc_flags;
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the mean squared condition number");
  add_family_flags(mc, mc_family);
  mc->add_option("--samples", mc_flags.samples);
  mc->add_option("--seed", mc_flags.seed);
  mc->add_option("--blocks", mc_flags.blocks);
  mc->add_option("--max-resamples", mc_flags.max_resamples);
  mc->add_option("--workers", mc_flags.workers, "worker threads (default $PEVPCOND_WORKERS or 1)");
  mc->add_option("--out", mc_flags.out, "CSV file to append to (stdout if omitted)");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "lemma | stochastic | oracle")
      ->required()
      ->check(CLI::IsMember({"lemma", "stochastic", "oracle"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (solve->parsed()) return cmd_solve(in_path, out_path);
  if (expect->parsed()) return cmd_expect(expect_flags);
  if (mc->parsed()) return cmd_mc(mc_family, mc_flags);
  if (verify->parsed()) return cmd_verify(suite);
  return kExitUsage;
}

// pyrsts: construct and verify pyramidal Steiner triple systems over
// abelian groups, plus the supporting machinery (difference families,
// difference matrices, Langford sequences, a generic DF search oracle).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pyrsts/json_io.hpp"
#include "pyrsts/pyramidal.hpp"

namespace {

using namespace pyrsts;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;      // inadmissible / verification FAIL / proven absent
constexpr int kExitUsage = 2;     // bad arguments or unparseable input
constexpr int kExitInternal = 3;  // internal verification failure or budget exhausted

struct RunConfig {
  std::int64_t f = -1;
  std::int64_t v = -1;
  std::string group;
  std::string spread_type;
  std::uint64_t budget = 0;  // 0 = default
  std::string out;
  std::string format = "text";
  bool deterministic = false;  // outputs are always deterministic; flag kept for scripts
  std::string cache_dir;
  bool no_cache = false;
  std::int64_t max_v = 0;
  bool build = false;
  int jobs = 1;
  std::string input_path;
};

DiskCache make_cache(const RunConfig& cfg) {
  if (cfg.no_cache) return DiskCache();
  if (!cfg.cache_dir.empty()) return DiskCache(cfg.cache_dir);
  if (const char* env = std::getenv("PYRSTS_CACHE")) return DiskCache(env);
  if (const char* home = std::getenv("HOME")) {
    return DiskCache(std::filesystem::path(home) / ".cache" / "pyrsts");
  }
  return DiskCache();
}

Workspace make_workspace(const RunConfig& cfg) {
  BuildOptions opts;
  if (cfg.budget) {
    opts.solver_budget = cfg.budget;
    opts.langford_budget = cfg.budget;
    opts.dm_budget = cfg.budget;
  }
  return Workspace(opts, make_cache(cfg));
}

void write_output(const RunConfig& cfg, const std::string& payload) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw Error("cannot write " + cfg.out);
  out << payload;
}

int cmd_check(const RunConfig& cfg) {
  AdmissibleResult res = admissible(cfg.f, cfg.v);
  if (cfg.format == "json") {
    ordered_json j;
    j["f"] = cfg.f;
    j["v"] = cfg.v;
    j["admissible"] = res.ok;
    j["reason"] = res.reason;
    std::cout << dump_json(j);
  } else {
    std::cout << res.reason << "\n";
  }
  return res.ok ? kExitOk : kExitFail;
}

int cmd_construct(const RunConfig& cfg) {
  Workspace ws = make_workspace(cfg);
  Constructed c = construct(ws, cfg.f, cfg.v);
  std::ostringstream summary;
  summary << "v=" << c.cert.v << " f=" << c.cert.f << " group=" << c.group_descriptor
          << " case=" << c.case_name << " e=" << c.e << " blocks=" << c.block_count
          << " verified=PASS\n";
  if (cfg.format == "json") {
    write_output(cfg, dump_json(sts_to_json(c.system)));
    std::cerr << summary.str();
  } else {
    write_output(cfg, summary.str());
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  std::ifstream in(cfg.input_path);
  if (!in) {
    std::cerr << "cannot read " << cfg.input_path << "\n";
    return kExitUsage;
  }
  ordered_json j = ordered_json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    std::cerr << "not a JSON object: " << cfg.input_path << "\n";
    return kExitUsage;
  }
  if (j.contains("base_blocks")) {
    DifferenceFamily df = df_from_json(j);
    DfCheck check = verify_relative_df(df);
    SpreadType type = spread_type(df.spread);
    std::cout << "difference family over " << df.group.descriptor() << " rel " << type.to_string()
              << ", " << df.base_blocks.size() << " blocks: " << check.summary() << "\n";
    return check.pass ? kExitOk : kExitFail;
  }
  if (j.contains("blocks")) {
    TripleSystem sys = sts_from_json(j);
    PyramidalReport rep = verify_pyramidal(sys);
    std::cout << "STS(" << sys.v << ") with f=" << sys.f << " over " << sys.group.descriptor()
              << ": " << rep.summary() << "\n";
    return rep.cert.pass() ? kExitOk : kExitFail;
  }
  std::cerr << "file is neither a difference family nor a triple system\n";
  return kExitUsage;
}

std::vector<std::int64_t> admissible_f_values(std::int64_t max_v) {
  std::vector<std::int64_t> fs{0, 1, 3};
  for (std::int64_t m = 3; (std::int64_t(1) << m) - 1 < max_v; ++m) {
    fs.push_back((std::int64_t(1) << m) - 1);
  }
  return fs;
}

int cmd_enumerate(const RunConfig& cfg) {
  struct Row {
    std::int64_t f, v;
    std::string reason;
    std::string build_info;
    bool build_ok = true;
  };
  std::vector<Row> rows;
  std::vector<std::int64_t> fs =
      cfg.f >= 0 ? std::vector<std::int64_t>{cfg.f} : admissible_f_values(cfg.max_v);
  for (std::int64_t f : fs) {
    for (std::int64_t v = 1; v <= cfg.max_v; ++v) {
      AdmissibleResult res = admissible(f, v);
      if (res.ok) rows.push_back(Row{f, v, res.reason, "", true});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.v, a.f) < std::tie(b.v, b.f);
  });

  std::atomic<bool> any_internal_failure{false};
  if (cfg.build) {
    Workspace ws = make_workspace(cfg);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= rows.size()) return;
        Row& row = rows[i];
        auto t0 = std::chrono::steady_clock::now();
        try {
          Constructed c = construct(ws, row.f, row.v);
          auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                        .count();
          std::ostringstream os;
          os << " group=" << c.group_descriptor << " case=" << c.case_name << " e=" << c.e
             << " blocks=" << c.block_count << " ms=" << static_cast<std::int64_t>(ms)
             << " verified=PASS";
          row.build_info = os.str();
        } catch (const std::exception& e) {
          row.build_ok = false;
          row.build_info = std::string(" build-failed: ") + e.what();
          if (row.f >= 7) any_internal_failure = true;
        }
      }
    };
    int jobs = std::max(1, cfg.jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  if (cfg.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json j;
      j["f"] = row.f;
      j["v"] = row.v;
      j["reason"] = row.reason;
      if (cfg.build) {
        j["build"] = row.build_info;
        j["ok"] = row.build_ok;
      }
      arr.push_back(std::move(j));
    }
    std::cout << dump_json(arr);
  } else {
    for (const auto& row : rows) {
      std::cout << "f=" << row.f << " v=" << row.v;
      if (cfg.build) std::cout << row.build_info;
      std::cout << "\n";
    }
  }
  return any_internal_failure ? kExitInternal : kExitOk;
}

int cmd_df_solve(const RunConfig& cfg) {
  AbelianGroup g = AbelianGroup::parse(cfg.group);
  SpreadType want = SpreadType::parse(cfg.spread_type);
  if (!want.clean()) {
    std::cerr << "spread members must have order 2 or 3\n";
    return kExitUsage;
  }
  std::vector<GroupElement> inv = involutions(g);
  if (want.order2 != static_cast<std::int64_t>(inv.size())) {
    std::cerr << "group " << g.descriptor() << " has " << inv.size()
              << " involutions; a {2^f,3^e} family needs f to match\n";
    return kExitFail;
  }
  std::vector<Subgroup> base;
  for (const auto& s : inv) base.push_back(cyclic_subgroup(g, s));
  std::vector<Subgroup> thirds = order_p_subgroups(g, 3);
  if (want.order3 > static_cast<std::int64_t>(thirds.size())) {
    std::cerr << "group has only " << thirds.size() << " subgroups of order 3\n";
    return kExitFail;
  }

  std::uint64_t budget = cfg.budget ? cfg.budget : kDefaultSolverBudget;
  bool budget_hit = false;
  std::vector<std::size_t> pick(static_cast<std::size_t>(want.order3));
  std::function<std::optional<DifferenceFamily>(std::size_t, std::size_t)> try_picks =
      [&](std::size_t pos, std::size_t start) -> std::optional<DifferenceFamily> {
    if (pos == pick.size()) {
      PartialSpread spread{base};
      for (auto i : pick) spread.members.push_back(thirds[i]);
      DfSolve solved = solve_relative_df(g, spread, budget);
      if (solved.status == SearchStatus::kFound) return solved.df;
      if (solved.status == SearchStatus::kBudgetExceeded) budget_hit = true;
      return std::nullopt;
    }
    for (std::size_t i = start; i < thirds.size(); ++i) {
      pick[pos] = i;
      if (auto df = try_picks(pos + 1, i + 1)) return df;
    }
    return std::nullopt;
  };
  if (auto df = try_picks(0, 0)) {
    write_output(cfg, dump_json(df_to_json(*df)));
    std::cerr << "found: " << df->base_blocks.size() << " blocks over " << g.descriptor()
              << " rel " << spread_type(df->spread).to_string() << "\n";
    return kExitOk;
  }
  if (budget_hit) {
    std::cerr << "search budget exhausted (raise --budget)\n";
    return kExitInternal;
  }
  std::cerr << "no such difference family exists\n";
  return kExitFail;
}

int cmd_dm(const RunConfig& cfg) {
  AbelianGroup g = AbelianGroup::parse(cfg.group);
  if (!dm_exists(g)) {
    std::cerr << "no (K,3,1)-DM over " << g.descriptor()
              << ": Sylow 2-subgroup is nontrivial cyclic\n";
    return kExitFail;
  }
  DifferenceMatrix m = dm_build(g, cfg.budget ? cfg.budget : kDefaultDmBudget);
  DmCheck check = verify_dm(m);
  if (!check.pass) {
    std::cerr << "internal: built matrix fails verification\n";
    return kExitInternal;
  }
  write_output(cfg, dump_json(dm_to_json(m)));
  return kExitOk;
}

int cmd_langford(const RunConfig& cfg, std::int64_t k, std::int64_t a, std::int64_t b) {
  if (k < 1 || a < 0 || b < 1 || k > 2 * a + 1) {
    std::cerr << "need 1 <= k <= 2a+1 and b >= 1\n";
    return kExitUsage;
  }
  bool adm = is_langford_admissible(k, a, b);
  std::cerr << "(k,a,b)=(" << k << "," << a << "," << b << ") is "
            << (adm ? "admissible" : "not admissible") << "\n";
  LangfordSearch res =
      find_extended_langford(k, a, b, cfg.budget ? cfg.budget : kDefaultLangfordBudget);
  if (res.status == SearchStatus::kBudgetExceeded) {
    std::cerr << "search budget exhausted after " << res.nodes << " nodes\n";
    return kExitInternal;
  }
  if (res.status == SearchStatus::kAbsent) {
    std::cerr << "no sequence exists\n";
    return kExitFail;
  }
  write_output(cfg, dump_json(ordered_json(res.seq.s)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pyramidal Steiner triple systems over abelian groups"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_cache_flags = [&](CLI::App* sub) {
    sub->add_option("--cache", cfg.cache_dir, "cache directory (default: $PYRSTS_CACHE)");
    sub->add_flag("--no-cache", cfg.no_cache, "disable the on-disk cache");
    sub->add_option("--budget", cfg.budget, "search node budget");
    sub->add_flag("--deterministic", cfg.deterministic,
                  "kept for scripts; output is always deterministic");
  };

  auto* check = app.add_subcommand("check", "test admissibility of (f, v)");
  check->add_option("--f", cfg.f, "number of fixed points")->required();
  check->add_option("--v", cfg.v, "number of points")->required();
  check->add_option("--format", cfg.format, "text|json");

  std::string construct_format = "json";
  auto* construct_cmd = app.add_subcommand("construct", "build and verify an f-pyramidal STS(v)");
  construct_cmd->add_option("--f", cfg.f, "number of fixed points")->required();
  construct_cmd->add_option("--v", cfg.v, "number of points")->required();
  construct_cmd->add_option("--out,-o", cfg.out, "output path (default stdout)");
  construct_cmd->add_option("--format", construct_format, "json|text");
  add_cache_flags(construct_cmd);

  auto* verify = app.add_subcommand("verify", "verify an STS or DF JSON file");
  verify->add_option("path", cfg.input_path, "file to verify")->required();

  auto* enumerate = app.add_subcommand("enumerate", "list admissible (f, v) pairs");
  enumerate->add_option("--max-v", cfg.max_v, "largest v to list")->required();
  enumerate->add_option("--f", cfg.f, "restrict to one f");
  enumerate->add_flag("--build", cfg.build, "construct and verify each instance");
  enumerate->add_option("--jobs", cfg.jobs, "worker threads for --build");
  enumerate->add_option("--format", cfg.format, "text|json");
  add_cache_flags(enumerate);

  auto* dfsolve = app.add_subcommand("df-solve", "search a difference family directly");
  dfsolve->add_option("--group", cfg.group, "group descriptor, e.g. 2,2,8")->required();
  dfsolve->add_option("--spread-type", cfg.spread_type, "e.g. 2^3 or 2^7,3^2")->required();
  dfsolve->add_option("--out,-o", cfg.out, "output path (default stdout)");
  add_cache_flags(dfsolve);

  auto* dm = app.add_subcommand("dm", "build a (K,3,1) difference matrix");
  dm->add_option("--group", cfg.group, "group descriptor")->required();
  dm->add_option("--out,-o", cfg.out, "output path (default stdout)");
  add_cache_flags(dm);

  std::int64_t lk = 1, la = 0, lb = 1;
  auto* langford = app.add_subcommand("langford", "find a k-extended Langford sequence");
  langford->add_option("--k", lk, "hole position")->required();
  langford->add_option("--a", la, "order")->required();
  langford->add_option("--b", lb, "defect")->required();
  langford->add_option("--out,-o", cfg.out, "output path (default stdout)");
  add_cache_flags(langford);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(cfg);
    if (construct_cmd->parsed()) {
      cfg.format = construct_format;
      return cmd_construct(cfg);
    }
    if (verify->parsed()) return cmd_verify(cfg);
    if (enumerate->parsed()) return cmd_enumerate(cfg);
    if (dfsolve->parsed()) return cmd_df_solve(cfg);
    if (dm->parsed()) return cmd_dm(cfg);
    if (langford->parsed()) return cmd_langford(cfg, lk, la, lb);
  } catch (const InadmissibleError& e) {
    std::cerr << "inadmissible: " << e.what() << "\n";
    return kExitFail;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitInternal;
  } catch (const VerifyError& e) {
    std::cerr << "internal verification failure: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

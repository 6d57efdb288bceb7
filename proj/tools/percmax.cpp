#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "percmax/percmax.hpp"

namespace {

using namespace percmax;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitConsistency = 3;

std::string default_cache() {
  const char* env = std::getenv("PERCMAX_CACHE");
  return env ? env : "";
}

MemoTable open_memo(const std::string& cache) {
  if (!cache.empty() && std::filesystem::exists(cache)) return MemoTable::load(cache);
  return MemoTable{};
}

// Writes to `path`, or to stdout when it is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open " + path + " for writing");
  fn(os);
  if (!os) throw DomainError("write failed: " + path);
}

struct SolveArgs {
  std::int64_t k = 0, l = 0;
  std::string cache = default_cache();
  bool size = false;
};

void run_solve(const SolveArgs& a) {
  MemoTable memo = open_memo(a.cache);
  std::int64_t m = memo.max_time(a.k, a.l);
  Scheme s = find_scheme(a.k, a.l, memo);
  std::cout << "M(" << a.k << "," << a.l << ") = " << m << "\n";
  std::cout << "scheme: " << to_string(s) << "\n";
  if (a.size) std::cout << "size: " << perfect_set(a.k, a.l, memo, VerifyMode::final_only).size() << "\n";
}

struct ConstructArgs {
  int n = 0;
  std::optional<int> l;
  bool perfect = false, slow = false, torus = false, d3 = false;
  std::string out;
  std::string cache = default_cache();
};

void run_construct(const ConstructArgs& a) {
  int modes = a.perfect + a.slow + a.torus + a.d3;
  if (modes != 1) throw DomainError("choose exactly one of --perfect, --slow, --torus, --d3");
  if (a.l && !a.perfect) throw DomainError("a second dimension is only accepted with --perfect");
  if (a.perfect) {
    int l = a.l.value_or(a.n);
    MemoTable memo = open_memo(a.cache);
    Realization r = perfect_realization(a.n, l, memo, VerifyMode::final_only);
    emit(a.out, [&](std::ostream& os) {
      write_grid(os, box2(a.n, l), r.seeds,
                 {"perfect set for " + std::to_string(a.n) + " x " + std::to_string(l),
                  "scheme: " + to_string(r.scheme), "expected time: " + std::to_string(r.times.total()),
                  "size: " + std::to_string(r.seeds.size())});
    });
  } else if (a.slow) {
    PhasePlan p = phase_plan(a.n);
    CellSet<2> seeds = slow_set(a.n);
    emit(a.out, [&](std::ostream& os) {
      write_grid(os, box2(a.n, a.n), seeds,
                 {"slow set for n = " + std::to_string(a.n), "scheme: " + to_string(p.scheme()),
                  "expected time: " + std::to_string(p.total())});
    });
  } else if (a.torus) {
    MemoTable memo = open_memo(a.cache);
    CellSet<2> seeds = torus_slow_set(a.n, memo);
    emit(a.out, [&](std::ostream& os) {
      write_grid(os, Topology<2>::torus(a.n), seeds,
                 {"torus construction for n = " + std::to_string(a.n),
                  "time at least " + std::to_string(memo.max_time(a.n - 2, a.n - 2))});
    });
  } else {
    CellSet<3> seeds = ddim_slow_set<3>(a.n);
    emit(a.out, [&](std::ostream& os) {
      write_grid(os, Topology<3>::box({a.n, a.n, a.n}), seeds,
                 {"three-dimensional construction for n = " + std::to_string(a.n)});
    });
  }
}

struct SimulateArgs {
  std::string file;
  std::string topology;
  std::string render;
  bool trace = false;
  int threshold = 2;
};

template <std::size_t D>
void simulate_dim(const GridFile& g, const SimulateArgs& a) {
  Topology<D> topo = g.topology<D>();
  topo.threshold = a.threshold;
  topo.validate();
  auto rep = simulate(g.cell_set<D>(), topo);
  if (!a.render.empty()) {
    if constexpr (D == 2) {
      emit(a.render, [&](std::ostream& os) { os << render_svg(rep); });
    } else {
      throw DomainError("rendering supports two-dimensional grids only");
    }
  }
  std::cout << report_json(rep, a.trace).dump() << "\n";
}

void run_simulate(const SimulateArgs& a) {
  GridFile g = parse_grid_file(a.file);
  if (a.topology == "torus") {
    if (g.dims.size() != 2 || g.dims[0] != g.dims[1]) throw DomainError("torus needs two equal dimensions");
    g.kind = TopologyKind::torus;
  } else if (a.topology == "box") {
    g.kind = TopologyKind::box;
  }
  switch (g.dimension()) {
    case 1: simulate_dim<1>(g, a); break;
    case 2: simulate_dim<2>(g, a); break;
    case 3: simulate_dim<3>(g, a); break;
    case 4: simulate_dim<4>(g, a); break;
    default: throw DomainError("unsupported dimension");
  }
}

struct OracleArgs {
  int k = 0, l = 0;
  std::optional<int> size;
  unsigned jobs = 1;
  bool force = false;
};

void run_oracle(const OracleArgs& a) {
  OracleOptions opt;
  opt.jobs = a.jobs;
  opt.force = a.force;
  OracleResult r = a.size ? brute_force_max_fixed_size(a.k, a.l, *a.size, opt) : brute_force_max(a.k, a.l, opt);
  std::cout << oracle_json(r).dump() << "\n";
}

struct BoundsArgs {
  int nmax = 0;
  unsigned jobs = 1;
  std::string out;
  std::string cache = default_cache();
};

void run_bounds(const BoundsArgs& a) {
  MemoTable memo = open_memo(a.cache);
  auto rows = bounds_report(a.nmax, memo, a.jobs);
  emit(a.out, [&](std::ostream& os) { write_bounds_csv(os, rows); });
}

struct TableArgs {
  std::int64_t limit = 0;
  std::string out = default_cache();
};

void run_table(const TableArgs& a) {
  if (a.limit < 1) throw DomainError("limit must be positive");
  MemoTable memo;
  memo.build_square(a.limit);
  emit(a.out, [&](std::ostream& os) { memo.save(os); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum percolation times for 2-neighbour bootstrap percolation"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Print M(k,l) and a scheme attaining it");
  c_solve->add_option("k", solve.k)->required();
  c_solve->add_option("l", solve.l)->required();
  c_solve->add_option("--cache", solve.cache, "Memo table CSV to start from (default: $PERCMAX_CACHE)");
  c_solve->add_flag("--size", solve.size, "Also realize the perfect set and print its size");

  ConstructArgs construct;
  auto* c_construct = app.add_subcommand("construct", "Write an extremal initial set as a grid file");
  c_construct->add_option("n", construct.n)->required();
  c_construct->add_option("l", construct.l, "Second side (perfect sets only)");
  c_construct->add_flag("--perfect", construct.perfect, "Perfect set for the n x l box");
  c_construct->add_flag("--slow", construct.slow, "Explicit slow set for [n]^2");
  c_construct->add_flag("--torus", construct.torus, "Slow set for the n x n torus");
  c_construct->add_flag("--d3", construct.d3, "Slow set for [n]^3");
  c_construct->add_option("-o,--output", construct.out, "Output path (default: stdout)");
  c_construct->add_option("--cache", construct.cache, "Memo table CSV (default: $PERCMAX_CACHE)");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Run the process on a grid file and print a JSON report");
  c_sim->add_option("file", sim.file)->required();
  c_sim->add_option("--topology", sim.topology, "Override the file topology")
      ->check(CLI::IsMember({"box", "torus"}));
  c_sim->add_option("--render", sim.render, "Write an SVG heatmap of infection times");
  c_sim->add_flag("--trace", sim.trace, "Include the cells infected at each step");
  c_sim->add_option("--threshold", sim.threshold, "Infection threshold r")->check(CLI::PositiveNumber);

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "Exhaustive maximum over all initial sets of a small box");
  c_oracle->add_option("k", oracle.k)->required();
  c_oracle->add_option("l", oracle.l)->required();
  c_oracle->add_option("--size", oracle.size, "Restrict to sets of exactly this size");
  c_oracle->add_option("--jobs", oracle.jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_oracle->add_flag("--force", oracle.force, "Allow boxes above the cell-count cap");

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand("bounds", "CSV of lower bound, slow set, exact value and upper bound");
  c_bounds->add_option("nmax", bounds.nmax)->required();
  c_bounds->add_option("--jobs", bounds.jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_bounds->add_option("-o,--output", bounds.out, "Output path (default: stdout)");
  c_bounds->add_option("--cache", bounds.cache, "Memo table CSV (default: $PERCMAX_CACHE)");

  TableArgs table;
  auto* c_table = app.add_subcommand("table", "Build the memo table for k <= l <= limit as CSV");
  c_table->add_option("limit", table.limit)->required();
  c_table->add_option("-o,--output", table.out, "Output path (default: $PERCMAX_CACHE, else stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    if (*c_solve) run_solve(solve);
    else if (*c_construct) run_construct(construct);
    else if (*c_sim) run_simulate(sim);
    else if (*c_oracle) run_oracle(oracle);
    else if (*c_bounds) run_bounds(bounds);
    else if (*c_table) run_table(table);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

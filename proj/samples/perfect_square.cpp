// Computes M(n) for a square, builds a set attaining it and draws the infection times.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "percmax/percmax.hpp"

int main(int argc, char** argv) {
  using namespace percmax;
  const int n = argc > 1 ? std::atoi(argv[1]) : 20;
  try {
    MemoTable memo;
    Realization r = perfect_realization(n, n, memo);
    auto rep = simulate(r.seeds, box2(n, n));

    std::cout << "M(" << n << ") = " << memo.max_time(n, n) << "\n";
    std::cout << "scheme: " << to_string(r.scheme) << "\n";
    std::cout << "seeds: " << r.seeds.size() << ", simulated time: " << rep.total_time.to_string() << "\n";

    std::size_t single = 0;
    for (auto c : rep.step_counts) single += (c == 1);
    std::cout << "steps infecting a single site: " << single << " of " << rep.step_counts.size() << "\n";

    if (argc > 2) {
      std::ofstream(argv[2]) << render_svg(rep);
      std::cout << "wrote " << argv[2] << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

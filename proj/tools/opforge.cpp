#include <iostream>
#include <string>
#include <vector>

#include "acceptance/suite.hpp"
#include "opforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto selftest = [](std::uint64_t seed, const std::vector<std::size_t>& only, std::ostream& out) {
    std::size_t failed = 0;
    opforge::acceptance::run_suite(seed, only, [&](const opforge::acceptance::Outcome& o) {
      out << o.line() << std::endl;
      failed += !o.pass();
    });
    out << (failed == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failed)) << "\n";
    return failed == 0 ? 0 : 1;
  };
  return opforge::cli::run(std::move(args), std::cin, std::cout, std::cerr, selftest);
}

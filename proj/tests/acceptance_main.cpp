// Runs the acceptance criteria (all nine, or those named on the command line)
// and prints one verdict line for each, also written to acceptance_verdicts.txt.
// The exit code reports whether the suite ran; with --strict it is nonzero
// when any criterion fails.

#include "hymglue/acceptance.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  std::vector<int> which;
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) strict = true;
    else which.push_back(std::atoi(argv[i]));
  }
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  std::ofstream file("acceptance_verdicts.txt");
  int passed = 0;
  const hymglue::AcceptanceConfig config;
  try {
    for (int id : which) {
      const hymglue::CriterionResult r = hymglue::run_acceptance(config, {id}).front();
      const std::string line = hymglue::verdict_line(r);
      std::cout << line << std::endl;
      file << line << "\n";
      passed += r.pass;
    }
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << std::endl;
    return 2;
  }
  const std::string total = std::to_string(passed) + "/" + std::to_string(which.size()) + " criteria passed";
  std::cout << total << std::endl;
  file << total << "\n";
  return strict && passed != static_cast<int>(which.size()) ? 1 : 0;
}

#include <iostream>

#include "hclab/suite.hpp"

int main() {
  int failed = 0;
  for (const auto& c : hclab::desk_criteria()) {
    auto r = hclab::run_criterion(c);
    if (!r.pass) ++failed;
    std::cout << hclab::format_result_line(r) << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all 17 criteria passed") << std::endl;
  return failed ? 1 : 0;
}

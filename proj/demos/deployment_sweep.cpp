// Library usage example: sweep BS count and transmit power over the default
// scenario and print the KVI report table as CSV.

#include <iostream>

#include "kvisim/kvisim.hpp"

int main() {
  kvisim::Scenario scn;
  scn.n_users = 2000;

  const std::vector<int> n_list{1, 4, 16, 64, 256};
  const std::vector<double> p_list{0.1, 1.0};
  const kvisim::SweepResult result = kvisim::sweep(scn, n_list, p_list, 4);

  std::cout << kvisim::sweep_csv(result);
  return 0;
}

// Library usage example: run the three beam-sweep knowledge levels and show
// how the attacker steers the receiver's angle estimates.

#include <cstdio>

#include "kvisim/kvisim.hpp"

int main() {
  const kvisim::Ula ula;  // 16 elements, half-wavelength spacing
  const kvisim::Codebook cb = kvisim::Codebook::uniform(64);

  for (const auto knowledge : {kvisim::AttackKnowledge::honest, kvisim::AttackKnowledge::limited,
                               kvisim::AttackKnowledge::complete}) {
    kvisim::AttackConfig cfg;
    cfg.knowledge = knowledge;
    const auto spectrum = kvisim::run_attack(ula, ula, cb, cb, cfg);
    const auto [aod, aoa] = kvisim::estimate_angles(spectrum);
    std::printf("%-8s  aod_est = %+.4f rad   aoa_est = %+.4f rad\n",
                kvisim::to_string(knowledge), aod, aoa);
  }
  return 0;
}

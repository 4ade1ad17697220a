#pragma once

#include <string>

#include <json.hpp>

#include "crex/augmented.hpp"

namespace crex {

std::string updateToString(const CountingAutomaton& ca, const CaTransition& t);

// Edge labels read "class; guard / update" with T for an empty guard and
// '-' for an empty update.
std::string exportCaDot(const CountingAutomaton& ca);
nlohmann::json exportCaJson(const CountingAutomaton& ca);

// The CSA exporters build the full automaton first; the augmented ones may
// throw ReplicationError.
std::string exportBasicDot(BasicCsa& csa);
nlohmann::json exportBasicJson(BasicCsa& csa);

std::string exportAugmentedDot(AugmentedCsa& csa);
nlohmann::json exportAugmentedJson(AugmentedCsa& csa);

}  // namespace crex

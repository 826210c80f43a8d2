#pragma once

#include <string>
#include <vector>

#include "fockforge/cli/config.hpp"
#include "fockforge/cli/records.hpp"

namespace fockforge::cli {

// One record for a named check. Randomized checks draw from a counter-based
// stream keyed by (seed, name), so a record does not depend on which other
// checks run or in which order. Library errors propagate.
ResultRecord run_suite(const std::string& name, const RunConfig& cfg);

// Every suite member of cfg, in config order. Members run on up to `jobs`
// threads; records are collected by index so the output order is fixed.
std::vector<ResultRecord> run_suites(const RunConfig& cfg, int jobs);

// The hermitian one-particle operator a config describes for Fock-level
// checks: H for schrodinger1d, D for dirac1d, B = B2^{1/2} for kleingordon1d.
OperatorMatrix model_hamiltonian(const LatticeConfig& cfg);

}  // namespace fockforge::cli

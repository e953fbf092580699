#pragma once

#include "qst/chain_model.hpp"
#include "qst/excitation_engine.hpp"

#include <functional>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qst::verification
{

/// Outcome of one acceptance check. `measured` is compared against `tolerance`
/// according to `comparison`: "<=", ">=", or "+-" (|measured - target| <= tolerance).
/// `budget_seconds` is the runtime budget.
struct CheckResult
{
	/// Acceptance criterion number (1-12), or 0 for supporting checks.
	int criterion = 0;
	std::string name;
	std::string description;
	double measured = 0.0;
	double tolerance = 0.0;
	double target = 0.0;
	std::string comparison;
	bool within_tolerance = false;
	double seconds = 0.0;
	double budget_seconds = 0.0;
	std::string detail;

	[[nodiscard]] bool passed() const { return within_tolerance && seconds <= budget_seconds; }
};

using Reducer = std::function<SingleExcitationHamiltonian(const ChainSpec&)>;

struct SuiteOptions
{
	/// Excitation-sector reduction used by the spectrum, oracle, full-space and
	/// unitarity checks. Replaceable so mutation tests can feed in broken physics.
	Reducer reducer = reduce;
	std::uint64_t seed = 20100517;
};

/// Mutated reducer for fault-injection runs: drops the sqrt(s_i s_j) factor
/// from the hopping rule (uses J/2 everywhere).
SingleExcitationHamiltonian reduce_without_spin_factor(const ChainSpec& spec);

std::vector<CheckResult> run_suite(const SuiteOptions& options = {});

/// Random chain with 2..max_sites sites, spins drawn from {1/2, 1}, fields and couplings
/// uniform in [-range, range].
ChainSpec random_chain(std::mt19937_64& rng, int max_sites, double range = 2.0);

std::string report_json(const std::vector<CheckResult>& results);
std::string report_text(const std::vector<CheckResult>& results);

} // namespace qst::verification

#pragma once

#include "doctest.h"

#include "qst/chain_model.hpp"
#include "qst/error.hpp"

#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace qst::test
{

inline std::mt19937_64& rng()
{
	static std::mt19937_64 engine(0x5eed1234u);
	return engine;
}

inline double uniform(double lo, double hi)
{
	return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline int uniform_int(int lo, int hi)
{
	return std::uniform_int_distribution<int>(lo, hi)(rng());
}

// Random chain: spins from {1/2, 1}, fields and couplings uniform in [-range, range].
inline ChainSpec random_chain(int min_sites, int max_sites, double range = 2.0)
{
	RawChain raw;
	const int n = uniform_int(min_sites, max_sites);
	for(int i = 0; i < n; ++i)
	{
		raw.sites.push_back({uniform_int(0, 1) ? 1.0 : 0.5, uniform(-range, range)});
	}
	for(int i = 0; i + 1 < n; ++i)
	{
		raw.couplings.push_back(uniform(-range, range));
	}
	return validate(raw);
}

// Uniform point in the closed unit disk.
inline std::complex<double> random_disk_point()
{
	const double r = std::sqrt(uniform(0.0, 1.0));
	return std::polar(r, uniform(-3.14159265358979, 3.14159265358979));
}

inline ErrorKind kind_of(const std::function<void()>& fn)
{
	try
	{
		fn();
	}
	catch(const Error& e)
	{
		return e.kind();
	}
	FAIL("expected qst::Error");
	return ErrorKind::InvariantViolation;
}

} // namespace qst::test

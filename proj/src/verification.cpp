#include "qst/verification.hpp"

#include "qst/closed_form.hpp"
#include "qst/error.hpp"
#include "qst/fidelity_metrics.hpp"
#include "qst/full_space.hpp"
#include "qst/optimizer.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace qst::verification
{

namespace
{

using closed_form::PresetSystem;
constexpr double pi = std::numbers::pi;

struct Measurement
{
	double value = 0.0;
	std::string detail;
	/// Secondary conditions that must also hold (e.g. a location tolerance).
	bool extra_ok = true;
};

constexpr double kCorrectedOptimum = 0.9678;

template <class Body>
CheckResult run_check(int criterion, std::string name, std::string description, std::string comparison,
                      double tolerance, double budget, Body&& body, double target = 0.0)
{
	CheckResult r;
	r.target = target;
	r.criterion = criterion;
	r.name = std::move(name);
	r.description = std::move(description);
	r.comparison = std::move(comparison);
	r.tolerance = tolerance;
	r.budget_seconds = budget;
	const auto start = std::chrono::steady_clock::now();
	try
	{
		const Measurement m = body();
		r.measured = m.value;
		r.detail = m.detail;
		bool ok = false;
		if(r.comparison == "<=")
		{
			ok = m.value <= tolerance;
		}
		else if(r.comparison == ">=")
		{
			ok = m.value >= tolerance;
		}
		else
		{
			ok = std::abs(m.value - r.target) <= tolerance;
		}
		r.within_tolerance = ok && m.extra_ok;
	}
	catch(const std::exception& e)
	{
		r.measured = std::numeric_limits<double>::quiet_NaN();
		r.detail = std::string("exception: ") + e.what();
		r.within_tolerance = false;
	}
	r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return r;
}

std::string fmt(double x, int precision = 6)
{
	std::ostringstream os;
	os << std::setprecision(precision) << x;
	return os.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
	return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Transfer amplitude through an arbitrary reducer, so injected faults propagate.
AmplitudeRecord subspace_record(const Reducer& reducer, const ChainSpec& spec, double t)
{
	const auto h = reducer(spec);
	return amplitudes(h, eigensolve(h), t);
}

CheckResult spectrum_check(const SuiteOptions& opt, PresetId id)
{
	const std::string name = std::string(to_string(id)) + " spectrum";
	return run_check(0, name, "excitation-sector spectrum matches the closed-form eigenvalues", "<=", 1e-12, 1.0,
	                 [&] {
		                 double worst = 0.0;
		                 for(const auto& [J, B] : {std::pair{1.3, 0.7}, std::pair{0.4, 2.1}, std::pair{2.0, -0.5}})
		                 {
			                 const auto exact = closed_form::analytic_spectrum(PresetSystem{id, J, B});
			                 const auto h = opt.reducer(preset(id, J, B));
			                 const auto eig = eigensolve(h);
			                 std::vector<double> expected(exact.values.data() + 1,
			                                              exact.values.data() + exact.values.size());
			                 std::sort(expected.begin(), expected.end());
			                 worst = std::max(worst, std::abs(h.vacuum_energy - exact.values(0)));
			                 for(std::size_t k = 0; k < expected.size(); ++k)
			                 {
				                 worst = std::max(worst, std::abs(eig.values(static_cast<Eigen::Index>(k)) - expected[k]));
			                 }
		                 }
		                 return Measurement{worst, "max |eigenvalue error| over 3 (J, B) pairs"};
	                 });
}

CheckResult oracle_check(const SuiteOptions& opt, PresetId id, std::mt19937_64& rng)
{
	const std::string name = "oracle " + std::string(to_string(id));
	return run_check(8, name, "closed-form f(t) vs spectral engine, 100 random (J, B, t)", "<=", 1e-10, 2.0 / 5.0, [&] {
		double worst = 0.0;
		for(int trial = 0; trial < 100; ++trial)
		{
			const double J = uniform(rng, 0.1, 3.0);
			const double B = uniform(rng, 0.0, 3.0);
			const double t = uniform(rng, 0.0, 50.0);
			const cplx exact = closed_form::analytic_f(PresetSystem{id, J, B}, t);
			const cplx numeric = subspace_record(opt.reducer, preset(id, J, B), t).f;
			worst = std::max(worst, std::abs(exact - numeric));
		}
		return Measurement{worst, "max |df|"};
	});
}

} // namespace

SingleExcitationHamiltonian reduce_without_spin_factor(const ChainSpec& spec)
{
	auto h = reduce(spec);
	const auto couplings = spec.couplings();
	for(std::size_t i = 0; i < h.hopping.size(); ++i)
	{
		h.hopping[i] = 0.5 * couplings[i];
	}
	return h;
}

ChainSpec random_chain(std::mt19937_64& rng, int max_sites, double range)
{
	const int n = std::uniform_int_distribution<int>(2, std::max(2, max_sites))(rng);
	RawChain raw;
	for(int i = 0; i < n; ++i)
	{
		const double spin = std::bernoulli_distribution(0.5)(rng) ? 1.0 : 0.5;
		raw.sites.push_back(RawSite{spin, uniform(rng, -range, range)});
	}
	for(int i = 0; i + 1 < n; ++i)
	{
		raw.couplings.push_back(uniform(rng, -range, range));
	}
	return validate(raw);
}

std::vector<CheckResult> run_suite(const SuiteOptions& opt)
{
	std::vector<CheckResult> out;
	std::mt19937_64 rng(opt.seed);

	for(const auto id : all_presets)
	{
		out.push_back(spectrum_check(opt, id));
	}

	out.push_back(run_check(1, "sec2-two-spin optimum", "B = 0: max F = 2/3 at t_c = pi/(sqrt2 J)", "<=", 1e-9, 1.0, [] {
		const double J = 1.0;
		const double t_c = pi / (std::numbers::sqrt2 * J);
		const auto res = maximize_fidelity(preset(PresetId::Sec2TwoSpin, J, 0.0),
		                                   SearchConfig::for_horizon(3.0 * t_c * 1.1), false);
		const double t_err = std::abs(res.best_t - t_c);
		return Measurement{std::abs(res.fbar - 2.0 / 3.0),
		                   "|F - 2/3|; |t - t_c| = " + fmt(t_err) + " (tol 1e-8)", t_err <= 1e-8};
	}));

	out.push_back(run_check(2, "sec2 field tuning", "B_c from the tuning rules gives F(t_c) = 1, k, l in {0, 1}", "<=",
	                        1e-9, 1.0, [] {
		                        double worst = 0.0;
		                        for(const auto id : {PresetId::Sec2TwoSpin, PresetId::Sec2ThreeSpinCenter})
		                        {
			                        for(int k = 0; k <= 1; ++k)
			                        {
				                        for(int l = 0; l <= 1; ++l)
				                        {
					                        const auto rep = verify_field_formula(PresetSystem{id, 1.0, 0.0}, k, l);
					                        worst = std::max(worst, std::abs(1.0 - rep.fbar));
				                        }
			                        }
		                        }
		                        return Measurement{worst, "max |1 - F(t_c)| over both spin-impurity presets"};
	                        }));

	out.push_back(run_check(3, "sec2-three-spin-center no-communication",
	                        "B = 0: max F = 1/2; Z correction at t_c = pi/J gives 1", "<=", 1e-9, 1.0, [] {
		                        const double J = 1.0;
		                        const auto spec = preset(PresetId::Sec2ThreeSpinCenter, J, 0.0);
		                        const auto res = maximize_fidelity(spec, SearchConfig::for_horizon(3.0 * pi / J * 1.1),
		                                                           false);
		                        const cplx f = TransferAmplitude(spec).value(pi / J);
		                        const double corrected_err = std::abs(1.0 - corrected_average_fidelity(f).value);
		                        return Measurement{std::max(std::abs(res.fbar - 0.5), corrected_err),
		                                           "max(|max F - 1/2|, |1 - F_Z(t_c)|); F_Z error "
		                                               + fmt(corrected_err)};
	                        }));

	out.push_back(run_check(4, "sec3-two-spin amplitude bound",
	                        "20 random (J, B != 0): sup |f| over 10 periods = J/mu < 1", "<=", 1e-6, 2.0, [&] {
		                        double worst = 0.0;
		                        bool below_one = true;
		                        for(int trial = 0; trial < 20; ++trial)
		                        {
			                        const double J = uniform(rng, 0.1, 3.0);
			                        const double B = uniform(rng, 0.1, 3.0);
			                        const double mu = std::hypot(B, J);
			                        const auto peaks = critical_times(preset(PresetId::Sec3TwoSpin, J, B),
			                                                          SearchConfig::for_horizon(10.0 * 2.0 * pi / mu));
			                        double sup = 0.0;
			                        for(const auto& p : peaks)
			                        {
				                        sup = std::max(sup, p.abs_f);
			                        }
			                        worst = std::max(worst, std::abs(sup - J / mu));
			                        below_one = below_one && sup < 1.0;
		                        }
		                        return Measurement{worst, below_one ? "max |sup|f| - J/mu|; all sups < 1"
		                                                            : "some sup |f| reached 1",
		                                           below_one};
	                        }));

	out.push_back(run_check(5, "sec3-three-spin-center corrected optimum",
	                        "J = 2 sqrt2 B/3: corrected max F over [0, 200/B] = 0.9678", "+-", 5e-4, 2.0, [] {
		                        const double B = 1.0;
		                        const double J = 2.0 * std::numbers::sqrt2 * B / 3.0;
		                        const auto res = maximize_fidelity(preset(PresetId::Sec3ThreeSpinCenter, J, B),
		                                                           SearchConfig::for_horizon(200.0 / B), true);
		                        return Measurement{res.fbar_corrected, "at t = " + fmt(res.best_t, 10)};
	                        }, kCorrectedOptimum));

	out.push_back(run_check(6, "sec4-three-spin-center corrected optimum",
	                        "J = 2B/3: corrected max F over [0, 200/B] = 0.9678", "+-", 5e-4, 2.0, [] {
		                        const double B = 1.0;
		                        const double J = 2.0 * B / 3.0;
		                        const auto res = maximize_fidelity(preset(PresetId::Sec4ThreeSpinCenter, J, B),
		                                                           SearchConfig::for_horizon(200.0 / B), true);
		                        return Measurement{res.fbar_corrected, "at t = " + fmt(res.best_t, 10)};
	                        }, kCorrectedOptimum));

	out.push_back(run_check(7, "sec3-two-spin strong coupling", "J = 100 B: max F over [0, 4 pi/B] >= 0.999", ">=",
	                        0.999, 2.0, [] {
		                        const double B = 1.0;
		                        const auto res = maximize_fidelity(preset(PresetId::Sec3TwoSpin, 100.0 * B, B),
		                                                           SearchConfig::for_horizon(4.0 * pi / B), false);
		                        return Measurement{res.fbar, "max F at t = " + fmt(res.best_t, 10)};
	                        }));

	for(const auto id : all_presets)
	{
		out.push_back(oracle_check(opt, id, rng));
	}

	out.push_back(run_check(9, "subspace-vs-full",
	                        "5 presets + 50 random chains (N <= 6), 20 (t, theta, phi) each: |F_full - F_sub|; "
	                        "[H, Sz_tot] <= 1e-13",
	                        "<=", 1e-10, 20.0, [&] {
		                        std::vector<ChainSpec> chains;
		                        for(const auto id : all_presets)
		                        {
			                        chains.push_back(preset(id, uniform(rng, 0.2, 2.0), uniform(rng, -2.0, 2.0)));
		                        }
		                        for(int c = 0; c < 50; ++c)
		                        {
			                        chains.push_back(random_chain(rng, 6));
		                        }
		                        double worst = 0.0;
		                        double commutator = 0.0;
		                        for(const auto& spec : chains)
		                        {
			                        commutator = std::max(commutator, full_space::sz_commutator_norm(spec));
			                        const full_space::Evolver evolver(spec);
			                        const auto h = opt.reducer(spec);
			                        const auto eig = eigensolve(h);
			                        for(int trial = 0; trial < 20; ++trial)
			                        {
				                        const double t = uniform(rng, 0.0, 30.0);
				                        const BlochState state{uniform(rng, 0.0, pi), uniform(rng, 0.0, 2.0 * pi)};
				                        const Eigen::Vector2cd ket = state.ket();
				                        const Eigen::Matrix2cd rho = evolver.receiver_qubit(state, t);
				                        const double full = (ket.adjoint() * rho * ket)(0, 0).real();
				                        const double sub = fidelity(amplitudes(h, eig, t).f, state);
				                        worst = std::max(worst, std::abs(full - sub));
			                        }
		                        }
		                        return Measurement{worst, "max |dF|; commutator norm " + fmt(commutator),
		                                           commutator <= 1e-13};
	                        }));

	out.push_back(run_check(10, "average-fidelity-quadrature", "closed-form average fidelity vs 64x64 sphere quadrature, 100 f",
	                        "<=", 1e-10, 2.0, [&] {
		                        double worst = 0.0;
		                        for(int trial = 0; trial < 100; ++trial)
		                        {
			                        const cplx f = std::polar(std::sqrt(uniform(rng, 0.0, 1.0)),
			                                                  uniform(rng, -pi, pi));
			                        worst = std::max(worst,
			                                         std::abs(average_fidelity(f) - bloch_average_quadrature(f, 64, 64)));
		                        }
		                        return Measurement{worst, "max |dF|"};
	                        }));

	out.push_back(run_check(11, "unitarity", "200 random chains (N <= 12) and times: sum |f_n|^2 = 1, |f0| = 1", "<=",
	                        1e-12, 5.0, [&] {
		                        double worst = 0.0;
		                        for(int trial = 0; trial < 200; ++trial)
		                        {
			                        const auto spec = random_chain(rng, 12);
			                        const auto rec = subspace_record(opt.reducer, spec, uniform(rng, 0.0, 50.0));
			                        double total = 0.0;
			                        for(const auto& a : rec.fn)
			                        {
				                        total += std::norm(a);
			                        }
			                        worst = std::max({worst, std::abs(total - 1.0), std::abs(std::abs(rec.f0) - 1.0)});
		                        }
		                        return Measurement{worst, "max deviation from unit norm"};
	                        }));

	out.push_back(run_check(12, "engineered couplings", "N in {5, 8}, J_i = sqrt(i(N-i)): searched max |f|", ">=",
	                        1.0 - 1e-9, 5.0, [] {
		                        double worst = 1.0;
		                        std::string detail;
		                        for(const int n : {5, 8})
		                        {
			                        const auto peaks = critical_times(engineered_chain(n, 1.0),
			                                                          SearchConfig::for_horizon(1.5 * pi));
			                        CriticalTime best;
			                        for(const auto& p : peaks)
			                        {
				                        if(p.abs_f > best.abs_f)
				                        {
					                        best = p;
				                        }
			                        }
			                        worst = std::min(worst, best.abs_f);
			                        detail += (detail.empty() ? "N=" : "; N=") + std::to_string(n) + ": |f| = " + fmt(best.abs_f, 15) + " at t = "
			                                + fmt(best.t, 10);
		                        }
		                        return Measurement{worst, detail};
	                        }));

	return out;
}

std::string report_json(const std::vector<CheckResult>& results)
{
	nlohmann::json checks = nlohmann::json::array();
	bool all = true;
	for(const auto& r : results)
	{
		all = all && r.passed();
		checks.push_back({
			{"criterion", r.criterion},
			{"name", r.name},
			{"description", r.description},
			{"measured", std::isfinite(r.measured) ? nlohmann::json(r.measured) : nlohmann::json(nullptr)},
			{"comparison", r.comparison},
			{"tolerance", r.tolerance},
			{"target", r.target},
			{"within_tolerance", r.within_tolerance},
			{"seconds", r.seconds},
			{"budget_seconds", r.budget_seconds},
			{"passed", r.passed()},
			{"detail", r.detail},
		});
	}
	return nlohmann::json{{"passed", all}, {"checks", checks}}.dump(2) + "\n";
}

std::string report_text(const std::vector<CheckResult>& results)
{
	std::ostringstream os;
	for(const auto& r : results)
	{
		os << (r.passed() ? "PASS" : "FAIL") << "  ";
		if(r.criterion > 0)
		{
			os << "[AC" << r.criterion << "] ";
		}
		os << r.name << ": measured " << fmt(r.measured, 10) << " ";
		if(r.comparison == "+-")
		{
			os << "within " << fmt(r.target) << " +- ";
		}
		else
		{
			os << r.comparison << " ";
		}
		os << fmt(r.tolerance) << " ("
		   << std::fixed << std::setprecision(3) << r.seconds << " s / " << r.budget_seconds << " s)"
		   << std::defaultfloat;
		if(!r.detail.empty())
		{
			os << "  -- " << r.detail;
		}
		os << "\n";
	}
	return os.str();
}

} // namespace qst::verification

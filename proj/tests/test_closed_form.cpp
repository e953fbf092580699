#include "doctest.h"

#include "qst/closed_form.hpp"
#include "qst/error.hpp"
#include "qst/excitation_engine.hpp"
#include "qst/full_space.hpp"
#include "qst/optimizer.hpp"
#include "test_support.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace qst;
using namespace qst::closed_form;
using std::numbers::pi;

namespace
{

const double sqrt2 = std::sqrt(2.0);

// f from exp(-iHt) of the full tensor-product Hamiltonian, restricted to the vacuum and
// the first/last single-excitation states.
cplx full_space_f(const ChainSpec& spec, double t)
{
	const Eigen::MatrixXd h = full_space::full_hamiltonian(spec);
	const Eigen::MatrixXcd u = (h.cast<cplx>() * cplx(0.0, -t)).exp();
	const full_space::BasisLayout layout(spec);
	const auto first = static_cast<Eigen::Index>(layout.single_excitation(0));
	const auto last = static_cast<Eigen::Index>(layout.single_excitation(spec.size() - 1));
	return std::conj(u(0, 0)) * u(last, first);
}

} // namespace

TEST_CASE("analytic amplitude examples")
{
	const double J = 1.4;
	CHECK(std::abs(analytic_f({PresetId::Sec2TwoSpin, J, 0.0}, pi / (sqrt2 * J)) - cplx(0.0, -1.0)) <= 1e-15);
	CHECK(std::abs(analytic_f({PresetId::Sec2ThreeSpinCenter, J, 0.0}, pi / J) + 1.0) <= 1e-15);

	const double B = 0.8;
	const double mu = std::sqrt(B * B + J * J);
	const cplx expected = cplx(0.0, -1.0) * std::polar(1.0, pi * B / (2 * mu)) * (J / mu);
	CHECK(std::abs(analytic_f({PresetId::Sec3TwoSpin, J, B}, pi / mu) - expected) <= 1e-15);
}

TEST_CASE("analytic amplitudes agree with full-space matrix exponentials")
{
	for(const auto id : all_presets)
	{
		for(int trial = 0; trial < 20; ++trial)
		{
			const double J = test::uniform(0.1, 3.0);
			const double B = test::uniform(0.0, 3.0);
			const double t = test::uniform(0.0, 30.0);
			CAPTURE(to_string(id));
			CHECK(std::abs(analytic_f({id, J, B}, t) - full_space_f(preset(id, J, B), t)) <= 1e-10);
		}
	}
}

TEST_CASE("analytic amplitudes agree with the spectral engine")
{
	for(const auto id : all_presets)
	{
		for(int trial = 0; trial < 100; ++trial)
		{
			const double J = test::uniform(0.1, 3.0);
			const double B = test::uniform(0.0, 3.0);
			const double t = test::uniform(0.0, 50.0);
			const TransferAmplitude amp(preset(id, J, B));
			CHECK(std::abs(analytic_f({id, J, B}, t) - amp.value(t)) <= 1e-10);
		}
	}
}

TEST_CASE("zero-field limits reduce by substitution")
{
	const double J = 0.9;
	const double t = 2.3;
	CHECK(std::abs(analytic_f({PresetId::Sec3TwoSpin, J, 0.0}, t) - cplx(0.0, -std::sin(J * t / 2))) <= 1e-15);
	// With B = 0 a field-free three-site spin-1/2 chain transfers like a uniform 3-chain.
	const double s = std::sin(J * t / (2 * sqrt2));
	CHECK(std::abs(analytic_f({PresetId::Sec3ThreeSpinCenter, J, 0.0}, t) + s * s) <= 1e-15);
}

TEST_CASE("degenerate inputs")
{
	for(const auto id : {PresetId::Sec3TwoSpin, PresetId::Sec3ThreeSpinCenter, PresetId::Sec4ThreeSpinCenter})
	{
		CHECK(test::kind_of([&] { analytic_f({id, 0.0, 0.0}, 1.0); }) == ErrorKind::DegenerateSystem);
		CHECK(test::kind_of([&] { analytic_spectrum({id, 0.0, 0.0}); }) == ErrorKind::DegenerateSystem);
	}
}

TEST_CASE("decoupled magnetic impurities are well defined")
{
	for(const auto id : {PresetId::Sec3TwoSpin, PresetId::Sec3ThreeSpinCenter, PresetId::Sec4ThreeSpinCenter})
	{
		for(const double B : {-1.5, 0.7})
		{
			CHECK(std::abs(analytic_f({id, 0.0, B}, 3.0)) <= 1e-15);
			const auto spec = preset(id, 0.0, B);
			const Eigen::MatrixXd block = full_space::excitation_block(spec, full_space::full_hamiltonian(spec));
			const auto sp = analytic_spectrum({id, 0.0, B});
			const auto n = sp.vectors.cols();
			CHECK((sp.vectors.transpose() * sp.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff()
			      <= 1e-15);
			CHECK((block * sp.vectors - sp.vectors * sp.values.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-15);
		}
	}
}

TEST_CASE("shared kernel maps the two-impurity form onto the field-only form")
{
	for(int trial = 0; trial < 200; ++trial)
	{
		const double J = test::uniform(0.1, 3.0);
		const double B = test::uniform(-3.0, 3.0);
		const double t = test::uniform(0.0, 50.0);
		CHECK(analytic_f({PresetId::Sec4ThreeSpinCenter, J, B}, t)
		      == analytic_f({PresetId::Sec3ThreeSpinCenter, sqrt2 * J, B}, t));
		CHECK(analytic_f({PresetId::Sec3ThreeSpinCenter, J, B}, t) == center_field_kernel(J, B, t));
	}
}

TEST_CASE("analytic spectrum examples")
{
	const double J = 1.1;
	const double B = 0.7;
	const auto two = analytic_spectrum({PresetId::Sec2TwoSpin, J, B});
	CHECK(two.values(0) == doctest::Approx(1.5 * B));
	CHECK(two.values(1) == doctest::Approx((B + sqrt2 * J) / 2));
	CHECK(two.values(2) == doctest::Approx((B - sqrt2 * J) / 2));

	const double nu = std::sqrt(B * B + 2 * J * J);
	const auto mag3 = analytic_spectrum({PresetId::Sec3ThreeSpinCenter, J, B});
	CHECK(mag3.values(0) == doctest::Approx(B / 2));
	CHECK(mag3.values(1) == doctest::Approx(B / 2));
	CHECK(mag3.values(2) == doctest::Approx(nu / 2));
	CHECK(mag3.values(3) == doctest::Approx(-nu / 2));

	const auto center = analytic_spectrum({PresetId::Sec2ThreeSpinCenter, J, B});
	CHECK(center.values(0) == doctest::Approx(2 * B));
	CHECK(center.values(1) == doctest::Approx(B));
	CHECK(center.values(2) == doctest::Approx(B + J));
	CHECK(center.values(3) == doctest::Approx(B - J));
}

TEST_CASE("analytic eigenpairs solve the full-space excitation block")
{
	for(const auto id : all_presets)
	{
		for(int trial = 0; trial < 50; ++trial)
		{
			const double J = test::uniform(0.1, 3.0);
			const double B = test::uniform(-3.0, 3.0);
			const auto spec = preset(id, J, B);
			const Eigen::MatrixXd block = full_space::excitation_block(spec, full_space::full_hamiltonian(spec));
			const auto sp = analytic_spectrum({id, J, B});
			const auto n = sp.vectors.cols();
			CAPTURE(to_string(id));
			CHECK((sp.vectors.transpose() * sp.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff()
			      <= 1e-14);
			const Eigen::MatrixXd residual = block * sp.vectors - sp.vectors * sp.values.asDiagonal();
			CHECK(residual.cwiseAbs().maxCoeff() <= 1e-12);
		}
	}
}

TEST_CASE("critical time and field examples")
{
	const double J = 1.3;
	const PresetSystem two{PresetId::Sec2TwoSpin, J, 0.0};
	const double t0 = critical_time(two, 0);
	CHECK(t0 == doctest::Approx(pi / (sqrt2 * J)));
	CHECK(critical_time(two, 1) == doctest::Approx(3 * pi / (sqrt2 * J)));
	CHECK(critical_field(two, t0, Parity::Even, 0) == doctest::Approx(pi / (2 * t0)));
	CHECK(critical_field(two, t0, Parity::Odd, 0) == doctest::Approx(3 * pi / (2 * t0)));
	CHECK(critical_field(two, t0, Parity::Even, 2) == doctest::Approx(9 * pi / (2 * t0)));

	const PresetSystem center{PresetId::Sec2ThreeSpinCenter, J, 0.0};
	const double tc = critical_time(center, 0);
	CHECK(tc == doctest::Approx(pi / J));
	CHECK(critical_field(center, tc, Parity::Even, 0) == doctest::Approx(J));
	CHECK(critical_field(center, tc, Parity::Odd, 1) == doctest::Approx(3 * J));
}

TEST_CASE("tuning rules are refused for magnetic impurities")
{
	for(const auto id : {PresetId::Sec3TwoSpin, PresetId::Sec3ThreeSpinCenter, PresetId::Sec4ThreeSpinCenter})
	{
		CHECK(test::kind_of([&] { critical_field({id, 1.0, 1.0}, 1.0, Parity::Even, 0); }) == ErrorKind::NotTunable);
		CHECK(test::kind_of([&] { critical_time({id, 1.0, 1.0}, 0); }) == ErrorKind::NotTunable);
	}
	CHECK(test::kind_of([] { critical_field({PresetId::Sec2TwoSpin, 1.0, 0.0}, 0.0, Parity::Even, 0); })
	      == ErrorKind::BadArgs);
	CHECK(test::kind_of([] { critical_field({PresetId::Sec2TwoSpin, 1.0, 0.0}, 1.0, Parity::Even, -1); })
	      == ErrorKind::BadArgs);
	CHECK(test::kind_of([] { critical_time({PresetId::Sec2TwoSpin, 1.0, 0.0}, -1); }) == ErrorKind::BadArgs);
}

TEST_CASE("every tuned field gives unit fidelity in the spectral engine")
{
	for(const auto id : {PresetId::Sec2TwoSpin, PresetId::Sec2ThreeSpinCenter})
	{
		for(int trial = 0; trial < 50; ++trial)
		{
			const double J = test::uniform(0.1, 3.0);
			const int k = test::uniform_int(0, 5);
			const int l = test::uniform_int(0, 5);
			const auto report = verify_field_formula({id, J, 0.0}, k, l);
			CHECK(std::abs(report.abs_f - 1.0) <= 1e-9);
			CHECK(std::abs(report.fbar - 1.0) <= 1e-9);
			CHECK(report.passed);
		}
	}
}

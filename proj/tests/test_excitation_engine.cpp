#include "doctest.h"

#include "qst/chain_model.hpp"
#include "qst/excitation_engine.hpp"
#include "test_support.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace qst;
using std::numbers::pi;

namespace
{

const double sqrt2 = std::sqrt(2.0);

Eigen::MatrixXd dense_block(const SingleExcitationHamiltonian& h)
{
	const auto n = static_cast<Eigen::Index>(h.size());
	Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
	for(Eigen::Index i = 0; i < n; ++i)
	{
		m(i, i) = h.onsite[static_cast<std::size_t>(i)];
		if(i + 1 < n)
		{
			m(i, i + 1) = m(i + 1, i) = h.hopping[static_cast<std::size_t>(i)];
		}
	}
	return m;
}

// exp(-iHt) on vacuum plus the single-excitation block, by Pade scaling and squaring.
Eigen::MatrixXcd expm_propagator(const SingleExcitationHamiltonian& h, double t)
{
	const auto n = static_cast<Eigen::Index>(h.size());
	Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(n + 1, n + 1);
	gen(0, 0) = h.vacuum_energy;
	gen.bottomRightCorner(n, n) = dense_block(h).cast<cplx>();
	gen *= cplx(0.0, -t);
	return gen.exp();
}

} // namespace

TEST_CASE("reduce examples")
{
	const double J = 0.9;
	const double B = 0.4;
	const auto two = reduce(preset(PresetId::Sec2TwoSpin, J, B));
	CHECK(two.vacuum_energy == doctest::Approx(1.5 * B).epsilon(1e-15));
	CHECK(two.onsite[0] == doctest::Approx(B / 2).epsilon(1e-15));
	CHECK(two.onsite[1] == doctest::Approx(B / 2).epsilon(1e-15));
	CHECK(two.hopping[0] == doctest::Approx(J / sqrt2).epsilon(1e-15));

	const auto mag = reduce(preset(PresetId::Sec3TwoSpin, J, B));
	CHECK(mag.vacuum_energy == doctest::Approx(B / 2).epsilon(1e-15));
	CHECK(mag.onsite[0] == doctest::Approx(-B / 2).epsilon(1e-15));
	CHECK(mag.onsite[1] == doctest::Approx(B / 2).epsilon(1e-15));
	CHECK(mag.hopping[0] == doctest::Approx(J / 2).epsilon(1e-15));

	const auto dead = reduce(validate(RawChain{{{0.5, 0.0}, {0.5, 0.0}}, {0.0}}));
	CHECK(dead.vacuum_energy == 0.0);
	CHECK(dead.onsite == std::vector<double>{0.0, 0.0});
	CHECK(dead.hopping == std::vector<double>{0.0});
}

TEST_CASE("reduce obeys the onsite and hopping rules on random chains")
{
	for(int trial = 0; trial < 100; ++trial)
	{
		const auto spec = test::random_chain(2, 12);
		const auto h = reduce(spec);
		double e0 = 0.0;
		for(const auto& site : spec.sites())
		{
			e0 += site.field * site.spin.value();
		}
		CHECK(h.vacuum_energy == doctest::Approx(e0).epsilon(1e-14));
		for(std::size_t n = 0; n < spec.size(); ++n)
		{
			CHECK(h.onsite[n] == doctest::Approx(h.vacuum_energy - spec.sites()[n].field).epsilon(1e-14));
		}
		for(std::size_t i = 0; i + 1 < spec.size(); ++i)
		{
			const double s = spec.sites()[i].spin.value() * spec.sites()[i + 1].spin.value();
			CHECK(h.hopping[i] == doctest::Approx(spec.couplings()[i] * std::sqrt(s)).epsilon(1e-15));
		}
	}
}

TEST_CASE("eigensolve examples")
{
	const double J = 1.3;
	const double B = 0.6;
	const auto two = eigensolve(reduce(preset(PresetId::Sec2TwoSpin, J, B)));
	CHECK(two.values(0) == doctest::Approx((B - sqrt2 * J) / 2).epsilon(1e-14));
	CHECK(two.values(1) == doctest::Approx((B + sqrt2 * J) / 2).epsilon(1e-14));

	const double xi = std::sqrt(B * B + 4 * J * J);
	const auto both = eigensolve(reduce(preset(PresetId::Sec4ThreeSpinCenter, J, B)));
	CHECK(both.values(0) == doctest::Approx((B - xi) / 2).epsilon(1e-14));
	CHECK(both.values(1) == doctest::Approx(B).epsilon(1e-14));
	CHECK(both.values(2) == doctest::Approx((B + xi) / 2).epsilon(1e-14));

	SingleExcitationHamiltonian diag{0.0, {3.0, -1.0, 2.0, -1.0}, {0.0, 0.0, 0.0}};
	const auto eig = eigensolve(diag);
	CHECK(eig.values(0) == -1.0);
	CHECK(eig.values(1) == -1.0);
	CHECK(eig.values(2) == 2.0);
	CHECK(eig.values(3) == 3.0);
}

TEST_CASE("eigensolve matches a dense symmetric solver and satisfies its invariants")
{
	for(int trial = 0; trial < 200; ++trial)
	{
		const auto spec = test::random_chain(2, 40, 3.0);
		const auto h = reduce(spec);
		const auto eig = eigensolve(h);
		const Eigen::MatrixXd m = dense_block(h);
		const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m);

		const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
		CHECK((eig.values - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
		for(Eigen::Index k = 1; k < eig.values.size(); ++k)
		{
			CHECK(eig.values(k - 1) <= eig.values(k));
		}
		const auto n = eig.vectors.cols();
		CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff()
		      <= 1e-12);
		const Eigen::MatrixXd residual = m * eig.vectors - eig.vectors * eig.values.asDiagonal();
		CHECK(residual.cwiseAbs().maxCoeff() <= 1e-11 * scale);
	}
}

TEST_CASE("eigensolve handles exact degeneracies")
{
	// Two decoupled identical dimers: every level is doubly degenerate.
	const auto spec = validate(RawChain{{{0.5, 1.0}, {0.5, 1.0}, {0.5, 1.0}, {0.5, 1.0}}, {1.0, 0.0, 1.0}});
	const auto h = reduce(spec);
	const auto eig = eigensolve(h);
	CHECK(eig.values(0) == doctest::Approx(eig.values(1)).epsilon(1e-14));
	CHECK(eig.values(2) == doctest::Approx(eig.values(3)).epsilon(1e-14));
	const auto u = propagator(h, eig, 1.7);
	const auto ref = expm_propagator(h, 1.7);
	CHECK((u - ref).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("eigenvalues only at N = 10000")
{
	// Engineered couplings turn the block into lambda * J_x of a large spin, whose
	// eigenvalues are lambda * m for m = -(N-1)/2 ... (N-1)/2.
	const int n = 10000;
	const double lambda = 0.01;
	const auto h = reduce(engineered_chain(n, lambda));
	const auto values = tridiagonal_eigenvalues(h.onsite, h.hopping);
	REQUIRE(values.size() == static_cast<std::size_t>(n));
	double worst = 0.0;
	for(int k = 0; k < n; ++k)
	{
		const double expected = lambda * (k - 0.5 * (n - 1));
		worst = std::max(worst, std::abs(values[static_cast<std::size_t>(k)] - expected));
	}
	CHECK(worst <= 1e-9);
}

TEST_CASE("uniform chain spectrum at N = 2000 with vectors")
{
	const int n = 2000;
	RawChain raw;
	raw.sites.assign(n, {0.5, 0.0});
	raw.couplings.assign(n - 1, 2.0);
	const auto eig = eigensolve(reduce(validate(raw)));
	double worst = 0.0;
	for(int k = 1; k <= n; ++k)
	{
		const double expected = 2.0 * std::cos(pi * (n + 1 - k) / (n + 1));
		worst = std::max(worst, std::abs(eig.values(k - 1) - expected));
	}
	CHECK(worst <= 1e-12);
}

TEST_CASE("amplitude examples")
{
	for(int trial = 0; trial < 20; ++trial)
	{
		const auto spec = test::random_chain(2, 8);
		const auto h = reduce(spec);
		const auto rec = amplitudes(h, eigensolve(h), 0.0);
		CHECK(std::abs(rec.f0 - 1.0) <= 1e-15);
		CHECK(std::abs(rec.fn[0] - 1.0) <= 1e-14);
		for(std::size_t n = 1; n < rec.fn.size(); ++n)
		{
			CHECK(std::abs(rec.fn[n]) <= 1e-14);
		}
		CHECK(std::abs(rec.f) <= 1e-14);
		CHECK(rec.degenerate_phase);
		CHECK(rec.gamma == 0.0);
	}

	const double J = 1.7;
	const auto spec = preset(PresetId::Sec2TwoSpin, J, 0.0);
	const auto h = reduce(spec);
	const auto rec = amplitudes(h, eigensolve(h), pi / (sqrt2 * J));
	CHECK(std::abs(rec.f - cplx(0.0, -1.0)) <= 1e-12);
	CHECK(rec.gamma == doctest::Approx(-pi / 2).epsilon(1e-12));
	CHECK_FALSE(rec.degenerate_phase);

	const double t_c = pi / J;
	const auto tuned = preset(PresetId::Sec2ThreeSpinCenter, J, pi / t_c);
	const auto ht = reduce(tuned);
	CHECK(std::abs(amplitudes(ht, eigensolve(ht), t_c).f - 1.0) <= 1e-12);
}

TEST_CASE("amplitudes match the matrix exponential")
{
	for(int trial = 0; trial < 100; ++trial)
	{
		const auto spec = test::random_chain(2, 10);
		const auto h = reduce(spec);
		const auto eig = eigensolve(h);
		const double t = test::uniform(0.0, 20.0);
		const auto rec = amplitudes(h, eig, t);
		const auto u = expm_propagator(h, t);
		CHECK(std::abs(rec.f0 - u(0, 0)) <= 1e-10);
		for(std::size_t n = 0; n < rec.fn.size(); ++n)
		{
			CHECK(std::abs(rec.fn[n] - u(static_cast<Eigen::Index>(n + 1), 1)) <= 1e-10);
		}
		const cplx f = std::conj(u(0, 0)) * u(static_cast<Eigen::Index>(spec.size()), 1);
		CHECK(std::abs(rec.f - f) <= 1e-10);
		CHECK(std::abs(TransferAmplitude(spec).value(t) - rec.f) <= 1e-12);
	}
}

TEST_CASE("gamma lies in (-pi, pi] and equals arg f")
{
	for(int trial = 0; trial < 200; ++trial)
	{
		const auto spec = test::random_chain(2, 6);
		const auto rec = time_series(spec, std::vector<double>{test::uniform(0.0, 30.0)}).front();
		CHECK(rec.gamma > -pi);
		CHECK(rec.gamma <= pi);
		if(std::abs(rec.f) > 1e-12)
		{
			CHECK(std::abs(std::polar(1.0, rec.gamma) - rec.f / std::abs(rec.f)) <= 1e-12);
		}
	}
}

TEST_CASE("unitarity of the excitation sector")
{
	for(int trial = 0; trial < 200; ++trial)
	{
		const auto spec = test::random_chain(2, 12);
		const auto h = reduce(spec);
		const auto rec = amplitudes(h, eigensolve(h), test::uniform(0.0, 50.0));
		double norm = 0.0;
		for(const auto& a : rec.fn)
		{
			norm += std::norm(a);
		}
		CHECK(std::abs(norm - 1.0) <= 1e-12);
		CHECK(std::abs(std::abs(rec.f0) - 1.0) <= 1e-12);
	}
}

TEST_CASE("propagator group law")
{
	for(int trial = 0; trial < 100; ++trial)
	{
		const auto spec = test::random_chain(2, 12);
		const auto h = reduce(spec);
		const auto eig = eigensolve(h);
		const double t1 = test::uniform(0.0, 20.0);
		const double t2 = test::uniform(0.0, 20.0);
		const Eigen::MatrixXcd lhs = propagator(h, eig, t1 + t2);
		const Eigen::MatrixXcd rhs = propagator(h, eig, t1) * propagator(h, eig, t2);
		CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
	}
}

TEST_CASE("reciprocity on mirror chains")
{
	for(int trial = 0; trial < 100; ++trial)
	{
		const int n = test::uniform_int(2, 10);
		RawChain raw;
		raw.sites.resize(static_cast<std::size_t>(n));
		raw.couplings.resize(static_cast<std::size_t>(n - 1));
		for(int i = 0; i < (n + 1) / 2; ++i)
		{
			const RawSite site{test::uniform_int(0, 1) ? 1.0 : 0.5, test::uniform(-2.0, 2.0)};
			raw.sites[static_cast<std::size_t>(i)] = site;
			raw.sites[static_cast<std::size_t>(n - 1 - i)] = site;
		}
		for(int i = 0; i < n / 2; ++i)
		{
			const double c = test::uniform(-2.0, 2.0);
			raw.couplings[static_cast<std::size_t>(i)] = c;
			raw.couplings[static_cast<std::size_t>(n - 2 - i)] = c;
		}
		const auto h = reduce(validate(raw));
		const auto u = propagator(h, eigensolve(h), test::uniform(0.0, 30.0));
		CHECK(std::abs(std::abs(u(n, 1)) - std::abs(u(1, n))) <= 1e-12);
	}
}

TEST_CASE("time series")
{
	const auto spec = preset(PresetId::Sec2TwoSpin, 1.0, 0.0);
	const auto single = time_series(spec, std::vector<double>{0.0});
	REQUIRE(single.size() == 1);
	CHECK(std::abs(single[0].f) <= 1e-15);

	std::vector<double> grid(1000);
	for(std::size_t i = 0; i < grid.size(); ++i)
	{
		grid[i] = 4.0 * pi * static_cast<double>(i) / 999.0;
	}
	const auto series = time_series(spec, grid);
	double peak = 0.0;
	for(const auto& rec : series)
	{
		CHECK(std::abs(rec.f) == doctest::Approx(std::abs(std::sin(sqrt2 * rec.t / 2))).epsilon(1e-12));
		peak = std::max(peak, std::abs(rec.f));
	}
	CHECK(peak == doctest::Approx(1.0).epsilon(1e-5));

	const auto mag = preset(PresetId::Sec3TwoSpin, 1.0, 1.0);
	std::vector<double> dense(200001);
	for(std::size_t i = 0; i < dense.size(); ++i)
	{
		dense[i] = 20.0 * pi * static_cast<double>(i) / 200000.0;
	}
	double sup = 0.0;
	for(const auto& rec : time_series(mag, dense))
	{
		sup = std::max(sup, std::abs(rec.f));
	}
	CHECK(std::abs(sup - 1.0 / sqrt2) <= 1e-6);
}

TEST_CASE("transfer amplitude derivative matches a central difference")
{
	for(int trial = 0; trial < 50; ++trial)
	{
		const TransferAmplitude amp(test::random_chain(2, 8));
		const double t = test::uniform(0.5, 20.0);
		const double h = 1e-5;
		const cplx numeric = (amp.value(t + h) - amp.value(t - h)) / (2 * h);
		CHECK(std::abs(amp.derivative(t) - numeric) <= 1e-7);
	}
}

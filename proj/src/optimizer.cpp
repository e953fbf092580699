#include "qst/optimizer.hpp"

#include "qst/error.hpp"
#include "qst/excitation_engine.hpp"
#include "qst/fidelity_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <tuple>

namespace qst
{

namespace
{

constexpr double kTieTolerance = 1e-12;
constexpr double kZeroAmplitude = 1e-12;
constexpr double kInvGolden = 0.6180339887498948482;
constexpr int kMaxSweeps = 100;
constexpr std::size_t kMaxSeeds = 8;
constexpr std::size_t kMaxGridPoints = 50'000'000;

struct Probe
{
	double t = 0.0;
	double value = -std::numeric_limits<double>::infinity();
};

using Scalar = std::function<double(double)>;

struct Grid
{
	std::vector<double> t;
	double step = 0.0;
};

Grid make_grid(const SearchConfig& cfg, double frequency_bound)
{
	double step = cfg.t_max / cfg.n_samples;
	if(frequency_bound > 0.0)
	{
		step = std::min(step, std::numbers::pi / (10.0 * frequency_bound));
	}
	const double intervals = std::ceil(cfg.t_max / step);
	if(intervals > static_cast<double>(kMaxGridPoints))
	{
		throw Error(ErrorKind::BadArgs, "search grid would exceed " + std::to_string(kMaxGridPoints) + " points");
	}
	const auto m = static_cast<std::size_t>(intervals);
	Grid grid;
	grid.step = cfg.t_max / static_cast<double>(m);
	grid.t.resize(m + 1);
	for(std::size_t i = 0; i <= m; ++i)
	{
		grid.t[i] = cfg.t_max * static_cast<double>(i) / static_cast<double>(m);
	}
	grid.t.back() = cfg.t_max;
	return grid;
}

// Golden-section search for a maximum of `f` on [a, b]; returns the best probed point.
// Equal probes keep the left part, so flat stretches resolve towards earlier times.
Probe golden_max(const Scalar& f, double a, double b, double tol, int max_iters)
{
	double c = b - kInvGolden * (b - a);
	double d = a + kInvGolden * (b - a);
	double fc = f(c);
	double fd = f(d);
	for(int it = 0; it < max_iters && (b - a) > tol; ++it)
	{
		if(fc >= fd)
		{
			b = d;
			d = c;
			fd = fc;
			c = b - kInvGolden * (b - a);
			fc = f(c);
		}
		else
		{
			a = c;
			c = d;
			fc = fd;
			d = a + kInvGolden * (b - a);
			fd = f(d);
		}
	}
	return fc >= fd ? Probe{c, fc} : Probe{d, fd};
}

// Near a smooth maximum the objective is flat to O(dt^2), so value comparisons stop
// resolving t at ~sqrt(eps). Where the slope changes sign around the golden-section
// estimate, bisect on the slope to pin t down to round-off.
Probe polish(const Scalar& f, const Scalar& slope, Probe p, double lo, double hi)
{
	const double w = (hi - lo) / 8.0;
	double a = std::max(lo, p.t - w);
	double b = std::min(hi, p.t + w);
	if(!(slope(a) > 0.0 && slope(b) < 0.0))
	{
		return p;
	}
	for(int it = 0; it < 200; ++it)
	{
		const double mid = 0.5 * (a + b);
		if(mid <= a || mid >= b)
		{
			break;
		}
		if(slope(mid) > 0.0)
		{
			a = mid;
		}
		else
		{
			b = mid;
		}
	}
	const Probe q{0.5 * (a + b), f(0.5 * (a + b))};
	const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(p.value));
	return q.value >= p.value - slack ? q : p;
}

struct Refined
{
	Probe probe;
	double lo = 0.0;
	double hi = 0.0;
};

Refined refine_candidate(const Scalar& f, const Scalar& slope, const Grid& grid, const std::vector<double>& values,
                         std::size_t i, const SearchConfig& cfg)
{
	const std::size_t last = grid.t.size() - 1;
	const double lo = grid.t[i == 0 ? 0 : i - 1];
	const double hi = grid.t[std::min(i + 1, last)];
	Probe best{grid.t[i], values[i]};
	if(hi > lo)
	{
		const Probe g = golden_max(f, lo, hi, cfg.refine_tol, cfg.max_refine_iters);
		if(g.value > best.value)
		{
			best = g;
		}
		best = polish(f, slope, best, lo, hi);
	}
	return {best, lo, hi};
}

double plain_objective(cplx f)
{
	return average_fidelity(f);
}

double plain_slope(cplx f, cplx df)
{
	return df.real() / 3.0 + (std::conj(f) * df).real() / 3.0;
}

double corrected_objective(cplx f)
{
	return corrected_average_fidelity(f).value;
}

double abs_slope(cplx f, cplx df)
{
	const double a = std::abs(f);
	return a > kZeroAmplitude ? (std::conj(f) * df).real() / a : 0.0;
}

OptimizationResult summarize(const TransferAmplitude& amp, double t, long evaluations, double lo, double hi)
{
	const cplx f = amp.value(t);
	OptimizationResult out;
	out.best_t = t;
	out.fbar = average_fidelity(f);
	out.fbar_corrected = corrected_average_fidelity(f).value;
	out.abs_f = std::abs(f);
	out.evaluations = evaluations;
	out.bracket = {lo, hi};
	return out;
}

} // namespace

SearchConfig SearchConfig::for_horizon(double t_max, int n_samples)
{
	SearchConfig cfg;
	cfg.t_max = t_max;
	cfg.n_samples = n_samples;
	cfg.refine_tol = 1e-10 * t_max;
	return cfg;
}

void SearchConfig::validate() const
{
	if(!(t_max > 0.0) || !std::isfinite(t_max) || n_samples < 16 || !(refine_tol > 0.0) || max_refine_iters < 1)
	{
		throw Error(ErrorKind::BadArgs, "search config needs t_max > 0, n_samples >= 16, refine_tol > 0");
	}
}

std::vector<CriticalTime> critical_times(const ChainSpec& spec, const SearchConfig& cfg)
{
	cfg.validate();
	const TransferAmplitude amp(spec);
	const Scalar f = [&](double t) { return std::abs(amp.value(t)); };
	const Scalar slope = [&](double t) { return abs_slope(amp.value(t), amp.derivative(t)); };

	const Grid grid = make_grid(cfg, amp.spread());
	std::vector<double> values(grid.t.size());
	std::transform(grid.t.begin(), grid.t.end(), values.begin(), f);

	std::vector<CriticalTime> out;
	for(std::size_t i = 1; i + 1 < values.size(); ++i)
	{
		if(values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > kZeroAmplitude)
		{
			const auto refined = refine_candidate(f, slope, grid, values, i, cfg);
			out.push_back({refined.probe.t, refined.probe.value});
		}
	}
	return out;
}

OptimizationResult maximize_fidelity(const ChainSpec& spec, const SearchConfig& cfg, bool corrected)
{
	cfg.validate();
	const TransferAmplitude amp(spec);
	long evaluations = 0;
	const Scalar f = [&](double t) {
		++evaluations;
		const cplx a = amp.value(t);
		return corrected ? corrected_objective(a) : plain_objective(a);
	};
	const Scalar slope = [&](double t) {
		const cplx a = amp.value(t);
		const cplx da = amp.derivative(t);
		return corrected ? (1.0 + std::abs(a)) / 3.0 * abs_slope(a, da) : plain_slope(a, da);
	};

	// The uncorrected objective contains Re f, whose frequencies are |e_k - E0| rather
	// than eigenvalue differences.
	const double bound = corrected ? amp.spread() : std::max(amp.spread(), amp.max_frequency());
	const Grid grid = make_grid(cfg, bound);
	std::vector<double> values(grid.t.size());
	std::transform(grid.t.begin(), grid.t.end(), values.begin(), f);

	const std::size_t last = values.size() - 1;
	Refined best{Probe{}, 0.0, 0.0};
	for(std::size_t i = 0; i <= last; ++i)
	{
		const bool left_ok = i == 0 || values[i] > values[i - 1];
		const bool right_ok = i == last || values[i] >= values[i + 1];
		if(!(left_ok && right_ok))
		{
			continue;
		}
		const auto refined = refine_candidate(f, slope, grid, values, i, cfg);
		if(refined.probe.value > best.probe.value + kTieTolerance)
		{
			best = refined;
		}
	}
	return summarize(amp, best.probe.t, evaluations, best.lo, best.hi);
}

OptimizationResult tune_uniform_field(const ChainSpec& base, const SearchConfig& cfg, std::pair<double, double> b_range,
                                      int n_b)
{
	cfg.validate();
	const auto [b_lo, b_hi] = b_range;
	if(!(b_lo < b_hi) || n_b < 2)
	{
		throw Error(ErrorKind::BadArgs, "field range needs B_lo < B_hi and at least 2 field samples");
	}

	long evaluations = 0;
	auto amplitude_at = [&](double b) { return TransferAmplitude(with_field_offset(base, b)); };
	auto objective = [&](const TransferAmplitude& amp, double t) {
		++evaluations;
		return average_fidelity(amp.value(t));
	};

	std::vector<double> fields(static_cast<std::size_t>(n_b));
	std::vector<TransferAmplitude> amps;
	double bound = 0.0;
	for(int j = 0; j < n_b; ++j)
	{
		fields[static_cast<std::size_t>(j)] = j + 1 == n_b ? b_hi : b_lo + (b_hi - b_lo) * j / (n_b - 1);
		amps.push_back(amplitude_at(fields[static_cast<std::size_t>(j)]));
		bound = std::max({bound, amps.back().spread(), amps.back().max_frequency()});
	}
	const Grid grid = make_grid(cfg, bound);

	// values[i][j] at (grid.t[i], fields[j]).
	const std::size_t nt = grid.t.size();
	const std::size_t nb = fields.size();
	std::vector<double> values(nt * nb);
	for(std::size_t i = 0; i < nt; ++i)
	{
		for(std::size_t j = 0; j < nb; ++j)
		{
			values[i * nb + j] = objective(amps[j], grid.t[i]);
		}
	}

	// Coarse local maxima (against the 8 neighbours), best first, earliest t on ties.
	std::vector<std::size_t> seeds;
	for(std::size_t i = 0; i < nt; ++i)
	{
		for(std::size_t j = 0; j < nb; ++j)
		{
			const double v = values[i * nb + j];
			bool is_max = true;
			for(int di = -1; di <= 1 && is_max; ++di)
			{
				for(int dj = -1; dj <= 1 && is_max; ++dj)
				{
					const auto ii = static_cast<std::ptrdiff_t>(i) + di;
					const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
					if((di || dj) && ii >= 0 && jj >= 0 && ii < static_cast<std::ptrdiff_t>(nt)
					   && jj < static_cast<std::ptrdiff_t>(nb))
					{
						is_max = v >= values[static_cast<std::size_t>(ii) * nb + static_cast<std::size_t>(jj)];
					}
				}
			}
			if(is_max)
			{
				seeds.push_back(i * nb + j);
			}
		}
	}
	std::stable_sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
	if(seeds.size() > kMaxSeeds)
	{
		seeds.resize(kMaxSeeds);
	}

	const double dt = grid.step;
	const double db = (b_hi - b_lo) / (n_b - 1);
	auto ascend = [&](double t, double b, double value) {
		for(int sweep = 0; sweep < kMaxSweeps; ++sweep)
		{
			const TransferAmplitude amp = amplitude_at(b);
			const Probe pt = golden_max([&](double x) { return objective(amp, x); }, std::max(0.0, t - dt),
			                            std::min(cfg.t_max, t + dt), cfg.refine_tol, cfg.max_refine_iters);
			double t_move = 0.0;
			if(pt.value > value)
			{
				t_move = std::abs(pt.t - t);
				t = pt.t;
				value = pt.value;
			}

			const Probe pb = golden_max([&](double x) { return objective(amplitude_at(x), t); },
			                            std::max(b_lo, b - db), std::min(b_hi, b + db), cfg.refine_tol,
			                            cfg.max_refine_iters);
			double b_move = 0.0;
			if(pb.value > value)
			{
				b_move = std::abs(pb.t - b);
				b = pb.t;
				value = pb.value;
			}
			if(t_move < cfg.refine_tol && b_move < cfg.refine_tol)
			{
				break;
			}
		}
		return std::tuple{t, b, value};
	};

	double t = 0.0;
	double b = b_lo;
	double value = -std::numeric_limits<double>::infinity();
	for(const std::size_t seed : seeds)
	{
		const auto [ts, bs, vs] = ascend(grid.t[seed / nb], fields[seed % nb], values[seed]);
		const bool better = vs > value + kTieTolerance;
		const bool tied = std::abs(vs - value) <= kTieTolerance;
		const bool earlier = ts < t - 10.0 * cfg.refine_tol;
		const bool same_time = std::abs(ts - t) <= 10.0 * cfg.refine_tol;
		if(better || (tied && (earlier || (same_time && std::abs(bs) < std::abs(b)))))
		{
			t = ts;
			b = bs;
			value = vs;
		}
	}

	auto out = summarize(amplitude_at(b), t, evaluations, std::max(0.0, t - dt), std::min(cfg.t_max, t + dt));
	out.best_field = b;
	return out;
}

FieldFormulaReport verify_field_formula(const closed_form::PresetSystem& sys, int k, int l)
{
	FieldFormulaReport report;
	report.system = sys;
	report.k = k;
	report.l = l;
	report.t_c = closed_form::critical_time(sys, k);
	const auto parity = k % 2 == 0 ? closed_form::Parity::Even : closed_form::Parity::Odd;
	report.b_c = closed_form::critical_field(sys, report.t_c, parity, l);
	report.system.B = report.b_c;

	const TransferAmplitude amp(preset(sys.id, sys.J, report.b_c));
	const cplx f = amp.value(report.t_c);
	report.abs_f = std::abs(f);
	report.fbar = average_fidelity(f);
	report.passed = report.fbar >= 1.0 - 1e-9;
	return report;
}

} // namespace qst

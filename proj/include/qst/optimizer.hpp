#pragma once

#include "qst/chain_model.hpp"
#include "qst/closed_form.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qst
{

struct SearchConfig
{
	double t_max = 0.0;
	int n_samples = 1000;
	double refine_tol = 0.0;
	int max_refine_iters = 200;

	/// Defaults with refine_tol = 1e-10 * t_max.
	static SearchConfig for_horizon(double t_max, int n_samples = 1000);
	/// Throws BadArgs unless t_max > 0, n_samples >= 16, refine_tol > 0.
	void validate() const;
};

struct CriticalTime
{
	double t = 0.0;
	double abs_f = 0.0;
};

struct OptimizationResult
{
	double best_t = 0.0;
	std::optional<double> best_field;
	double fbar = 0.0;
	double fbar_corrected = 0.0;
	double abs_f = 0.0;
	long evaluations = 0;
	std::pair<double, double> bracket{0.0, 0.0};
};

/// Interior local maxima of |f(t)| on [0, t_max], ascending in t. The sampling step is
/// at most min(t_max / n_samples, pi / (10 * spread)); each grid maximum is refined by
/// golden section. Empty when |f| vanishes identically.
std::vector<CriticalTime> critical_times(const ChainSpec& spec, const SearchConfig& cfg);

/// Global maximum over [0, t_max] of the average fidelity, or of the phase-corrected
/// average fidelity when `corrected`. Ties go to the earliest time.
OptimizationResult maximize_fidelity(const ChainSpec& spec, const SearchConfig& cfg, bool corrected);

/// Maximizes the (uncorrected) average fidelity over (t, B), where B is added to every
/// site's field on top of `base`. Coarse (t, B) grid scan; the best few grid maxima are
/// each refined by coordinate ascent with a golden-section line search per coordinate
/// (at most 100 sweeps). Ties go to the earliest t, then the weakest field.
OptimizationResult tune_uniform_field(const ChainSpec& base, const SearchConfig& cfg, std::pair<double, double> b_range,
                                      int n_b);

struct FieldFormulaReport
{
	closed_form::PresetSystem system;
	int k = 0;
	int l = 0;
	double t_c = 0.0;
	double b_c = 0.0;
	double abs_f = 0.0;
	double fbar = 0.0;
	bool passed = false;
};

/// Builds t_c(k) and B_c(l) from the closed-form tuning rules and evaluates F at (t_c, B_c)
/// with the spectral engine; passes when F >= 1 - 1e-9. sys.B is ignored.
/// Throws NotTunable for the magnetic-impurity presets.
FieldFormulaReport verify_field_formula(const closed_form::PresetSystem& sys, int k, int l);

} // namespace qst

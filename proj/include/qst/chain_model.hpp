#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qst
{

/// Spin quantum number s, stored as the integer 2s so that half-integers are exact.
class SpinMagnitude
{
public:
	/// Throws Error{BadSpin} unless twice_s >= 1.
	static SpinMagnitude from_twice(int twice_s);
	/// Throws Error{BadSpin} unless 2s is a positive integer.
	static SpinMagnitude from_value(double s);

	static SpinMagnitude half() { return SpinMagnitude(1); }
	static SpinMagnitude one() { return SpinMagnitude(2); }

	[[nodiscard]] int twice() const noexcept { return twice_; }
	[[nodiscard]] double value() const noexcept { return 0.5 * twice_; }
	[[nodiscard]] int local_dim() const noexcept { return twice_ + 1; }

	auto operator<=>(const SpinMagnitude&) const = default;

private:
	explicit SpinMagnitude(int twice_s) : twice_(twice_s) { }
	int twice_;
};

struct SiteSpec
{
	SpinMagnitude spin = SpinMagnitude::half();
	double field = 0.0;

	bool operator==(const SiteSpec&) const = default;
};

/// Unvalidated chain description, e.g. straight from a file or a command line.
struct RawSite
{
	double spin = 0.5;
	double field = 0.0;
};

struct RawChain
{
	std::vector<RawSite> sites;
	std::vector<double> couplings;
};

/// A validated nearest-neighbour XX chain: N >= 2 sites, N-1 finite couplings.
/// Only obtainable through validate(), so every instance satisfies the invariants.
class ChainSpec
{
public:
	[[nodiscard]] std::span<const SiteSpec> sites() const noexcept { return sites_; }
	[[nodiscard]] std::span<const double> couplings() const noexcept { return couplings_; }
	[[nodiscard]] std::size_t size() const noexcept { return sites_.size(); }

	bool operator==(const ChainSpec&) const = default;

	friend ChainSpec validate(const RawChain& raw);

private:
	ChainSpec() = default;
	std::vector<SiteSpec> sites_;
	std::vector<double> couplings_;
};

/// Errors: EmptyChain, LengthMismatch, BadSpin, NonFinite (checked in that order).
ChainSpec validate(const RawChain& raw);

RawChain to_raw(const ChainSpec& spec);

/// Copy of `spec` with `offset` added to every site's field.
ChainSpec with_field_offset(const ChainSpec& spec, double offset);

/// Couplings lambda*sqrt(i(N-i)), i = 1..N-1.
std::vector<double> engineered_couplings(int n_sites, double lambda);

/// Uniform spin-1/2 chain with engineered couplings, optionally with one spin-1 site
/// at 1-based position `impurity_site` (0 means no impurity).
ChainSpec engineered_chain(int n_sites, double lambda, int impurity_site = 0);

enum class PresetId
{
	Sec2TwoSpin,
	Sec2ThreeSpinCenter,
	Sec3TwoSpin,
	Sec3ThreeSpinCenter,
	Sec4ThreeSpinCenter,
};

inline constexpr PresetId all_presets[] = {
	PresetId::Sec2TwoSpin,
	PresetId::Sec2ThreeSpinCenter,
	PresetId::Sec3TwoSpin,
	PresetId::Sec3ThreeSpinCenter,
	PresetId::Sec4ThreeSpinCenter,
};

std::string_view to_string(PresetId id);
/// Throws Error{UnknownPreset}.
PresetId parse_preset_id(std::string_view name);

/// The five named impurity systems. sec2-*: spin-1 impurity, uniform field B.
/// sec3-*: all spin-1/2, field B on the impurity site only. sec4: spin-1 centre carrying B.
ChainSpec preset(PresetId id, double J, double B);

/// JSON chain file: {"sites": [{"spin": "half"|"one"|<number>, "field": <number>}], "couplings": [...]}
std::string to_json(const ChainSpec& spec);
/// Throws Error{Parse} (with byte offset) on malformed text, or a validation error.
ChainSpec chain_from_json(std::string_view text);

/// Reads and parses a chain file; Error{Io} and Error{Parse} messages name the path.
ChainSpec load_chain_file(const std::string& path);

} // namespace qst

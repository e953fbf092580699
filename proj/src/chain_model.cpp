#include "qst/chain_model.hpp"

#include "qst/error.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qst
{

SpinMagnitude SpinMagnitude::from_twice(int twice_s)
{
	if(twice_s < 1)
	{
		throw Error(ErrorKind::BadSpin, "2s must be a positive integer, got " + std::to_string(twice_s));
	}
	return SpinMagnitude(twice_s);
}

SpinMagnitude SpinMagnitude::from_value(double s)
{
	const double twice = 2.0 * s;
	if(!std::isfinite(twice) || twice < 1.0 || twice != std::floor(twice) || twice > 1e6)
	{
		std::ostringstream os;
		os << "spin magnitude " << s << " is not a positive multiple of 1/2";
		throw Error(ErrorKind::BadSpin, os.str());
	}
	return SpinMagnitude(static_cast<int>(twice));
}

ChainSpec validate(const RawChain& raw)
{
	const std::size_t n = raw.sites.size();
	if(n < 2)
	{
		throw Error(ErrorKind::EmptyChain, "a chain needs at least 2 sites, got " + std::to_string(n));
	}
	if(raw.couplings.size() != n - 1)
	{
		throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(n - 1) + " couplings for "
		                                           + std::to_string(n) + " sites, got "
		                                           + std::to_string(raw.couplings.size()));
	}

	ChainSpec spec;
	spec.sites_.reserve(n);
	for(std::size_t i = 0; i < n; ++i)
	{
		const auto spin = SpinMagnitude::from_value(raw.sites[i].spin);
		if(!std::isfinite(raw.sites[i].field))
		{
			throw Error(ErrorKind::NonFinite, "field at site " + std::to_string(i + 1) + " is not finite");
		}
		spec.sites_.push_back(SiteSpec{spin, raw.sites[i].field});
	}
	for(std::size_t i = 0; i < raw.couplings.size(); ++i)
	{
		if(!std::isfinite(raw.couplings[i]))
		{
			throw Error(ErrorKind::NonFinite, "coupling " + std::to_string(i + 1) + " is not finite");
		}
	}
	spec.couplings_ = raw.couplings;
	return spec;
}

RawChain to_raw(const ChainSpec& spec)
{
	RawChain raw;
	for(const auto& site : spec.sites())
	{
		raw.sites.push_back(RawSite{site.spin.value(), site.field});
	}
	raw.couplings.assign(spec.couplings().begin(), spec.couplings().end());
	return raw;
}

ChainSpec with_field_offset(const ChainSpec& spec, double offset)
{
	auto raw = to_raw(spec);
	for(auto& site : raw.sites)
	{
		site.field += offset;
	}
	return validate(raw);
}

std::vector<double> engineered_couplings(int n_sites, double lambda)
{
	if(n_sites < 2 || !(lambda > 0.0) || !std::isfinite(lambda))
	{
		throw Error(ErrorKind::BadArgs, "engineered couplings need N >= 2 and lambda > 0");
	}
	std::vector<double> couplings(static_cast<std::size_t>(n_sites - 1));
	for(int i = 1; i < n_sites; ++i)
	{
		// i(N-i) is symmetric under i -> N-i, so the mirror property is exact.
		couplings[static_cast<std::size_t>(i - 1)] = lambda * std::sqrt(static_cast<double>(i * (n_sites - i)));
	}
	return couplings;
}

ChainSpec engineered_chain(int n_sites, double lambda, int impurity_site)
{
	RawChain raw;
	raw.couplings = engineered_couplings(n_sites, lambda);
	raw.sites.assign(static_cast<std::size_t>(n_sites), RawSite{0.5, 0.0});
	if(impurity_site != 0)
	{
		if(impurity_site < 1 || impurity_site > n_sites)
		{
			throw Error(ErrorKind::BadArgs, "impurity site out of range");
		}
		raw.sites[static_cast<std::size_t>(impurity_site - 1)].spin = 1.0;
	}
	return validate(raw);
}

std::string_view to_string(PresetId id)
{
	switch(id)
	{
	case PresetId::Sec2TwoSpin: return "sec2-two-spin";
	case PresetId::Sec2ThreeSpinCenter: return "sec2-three-spin-center";
	case PresetId::Sec3TwoSpin: return "sec3-two-spin";
	case PresetId::Sec3ThreeSpinCenter: return "sec3-three-spin-center";
	case PresetId::Sec4ThreeSpinCenter: return "sec4-three-spin-center";
	}
	return "unknown";
}

PresetId parse_preset_id(std::string_view name)
{
	for(const auto id : all_presets)
	{
		if(to_string(id) == name)
		{
			return id;
		}
	}
	throw Error(ErrorKind::UnknownPreset, "no preset named '" + std::string(name) + "'");
}

ChainSpec preset(PresetId id, double J, double B)
{
	constexpr double half = 0.5;
	constexpr double one = 1.0;
	RawChain raw;
	switch(id)
	{
	case PresetId::Sec2TwoSpin:
		raw.sites = {{one, B}, {half, B}};
		raw.couplings = {J};
		break;
	case PresetId::Sec2ThreeSpinCenter:
		raw.sites = {{half, B}, {one, B}, {half, B}};
		raw.couplings = {J, J};
		break;
	case PresetId::Sec3TwoSpin:
		raw.sites = {{half, B}, {half, 0.0}};
		raw.couplings = {J};
		break;
	case PresetId::Sec3ThreeSpinCenter:
		raw.sites = {{half, 0.0}, {half, B}, {half, 0.0}};
		raw.couplings = {J, J};
		break;
	case PresetId::Sec4ThreeSpinCenter:
		raw.sites = {{half, 0.0}, {one, B}, {half, 0.0}};
		raw.couplings = {J, J};
		break;
	}
	return validate(raw);
}

std::string to_json(const ChainSpec& spec)
{
	using nlohmann::json;
	json sites = json::array();
	for(const auto& site : spec.sites())
	{
		json spin;
		if(site.spin == SpinMagnitude::half())
		{
			spin = "half";
		}
		else if(site.spin == SpinMagnitude::one())
		{
			spin = "one";
		}
		else
		{
			spin = site.spin.value();
		}
		sites.push_back({{"spin", spin}, {"field", site.field}});
	}
	json doc = {{"sites", sites}, {"couplings", std::vector<double>(spec.couplings().begin(), spec.couplings().end())}};
	return doc.dump(2) + "\n";
}

namespace
{

double spin_from_json(const nlohmann::json& value, std::size_t index)
{
	if(value.is_string())
	{
		const auto& s = value.get_ref<const std::string&>();
		if(s == "half")
		{
			return 0.5;
		}
		if(s == "one")
		{
			return 1.0;
		}
		throw Error(ErrorKind::BadSpin, "site " + std::to_string(index + 1) + ": unknown spin name '" + s + "'");
	}
	if(value.is_number())
	{
		return value.get<double>();
	}
	throw Error(ErrorKind::Parse, "site " + std::to_string(index + 1) + ": 'spin' must be a string or number");
}

double number_from_json(const nlohmann::json& value, const std::string& what)
{
	if(!value.is_number())
	{
		throw Error(ErrorKind::Parse, what + " must be a number");
	}
	return value.get<double>();
}

} // namespace

ChainSpec chain_from_json(std::string_view text)
{
	using nlohmann::json;
	json doc;
	try
	{
		doc = json::parse(text.begin(), text.end());
	}
	catch(const json::parse_error& e)
	{
		throw Error(ErrorKind::Parse, "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
	}

	if(!doc.is_object() || !doc.contains("sites") || !doc.contains("couplings") || !doc["sites"].is_array()
	   || !doc["couplings"].is_array())
	{
		throw Error(ErrorKind::Parse, "expected an object with array members 'sites' and 'couplings'");
	}

	RawChain raw;
	const auto& sites = doc["sites"];
	for(std::size_t i = 0; i < sites.size(); ++i)
	{
		const auto& site = sites[i];
		if(!site.is_object() || !site.contains("spin") || !site.contains("field"))
		{
			throw Error(ErrorKind::Parse, "site " + std::to_string(i + 1) + " needs 'spin' and 'field'");
		}
		raw.sites.push_back(RawSite{spin_from_json(site["spin"], i),
		                            number_from_json(site["field"], "site " + std::to_string(i + 1) + " field")});
	}
	const auto& couplings = doc["couplings"];
	for(std::size_t i = 0; i < couplings.size(); ++i)
	{
		raw.couplings.push_back(number_from_json(couplings[i], "coupling " + std::to_string(i + 1)));
	}
	return validate(raw);
}

ChainSpec load_chain_file(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if(!in)
	{
		throw Error(ErrorKind::Io, "cannot open chain file '" + path + "'");
	}
	std::ostringstream buffer;
	buffer << in.rdbuf();
	try
	{
		return chain_from_json(buffer.str());
	}
	catch(const Error& e)
	{
		throw Error(e.kind(), path + ": " + std::string(e.what()).substr(to_string(e.kind()).size() + 2));
	}
}

} // namespace qst

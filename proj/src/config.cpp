#include "superem/config.hpp"

#include "superem/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace superem {

namespace pt = boost::property_tree;

Scale parse_scale(std::string_view s)
{
	if (s == "desk")
		return Scale::desk;
	if (s == "paper")
		return Scale::paper;
	throw std::invalid_argument("unknown scale '" + std::string(s) + "' (expected desk or paper)");
}

std::string_view to_string(Scale s)
{
	return s == Scale::desk ? "desk" : "paper";
}

AlgorithmId parse_algorithm(std::string_view id)
{
	AlgorithmId a;
	a.name = std::string(id);
	if (id == "em")
	{
		a.classic = true;
		return a;
	}
	const auto fail = [&] {
		return std::invalid_argument("unknown algorithm '" + a.name +
		                             "' (expected em or <tv|hard|soft>_alg<1|2>[_nophi])");
	};
	const auto us = id.find('_');
	if (us == std::string_view::npos)
		throw fail();
	const std::string_view phi = id.substr(0, us);
	std::string_view rest = id.substr(us + 1);
	if (phi == "tv")
		a.phi = PhiScheme::tv;
	else if (phi == "hard")
		a.phi = PhiScheme::l1_hard;
	else if (phi == "soft")
		a.phi = PhiScheme::l1_soft;
	else
		throw fail();
	bool nophi = false;
	if (rest.ends_with("_nophi"))
	{
		nophi = true;
		rest.remove_suffix(6);
	}
	if (rest == "alg1")
		a.variant = nophi ? Variant::alg1_no_phi_check : Variant::alg1;
	else if (rest == "alg2")
		a.variant = nophi ? Variant::alg2_no_phi_check : Variant::alg2;
	else
		throw fail();
	return a;
}

void ExperimentConfig::validate() const
{
	phantom.validate();
	acquisition.validate();
	if (experiment < 1 || experiment > 4)
		throw std::invalid_argument("config: experiment must be 1..4");
	if (grid.width < 8 || grid.height < 8 || !(grid.extent > 0.0))
		throw std::invalid_argument("config: grid must be at least 8x8 with positive extent");
	const int div = 1 << superiorization.wavelet_levels;
	if (grid.width % div != 0 || grid.height % div != 0)
		throw std::invalid_argument("config: grid size must be divisible by 2^wavelet_levels");
	if (initial.mode == InitialImageSpec::Mode::random_uniform && !(initial.low > 0.0 && initial.high > initial.low))
		throw std::invalid_argument("config: random initial image needs 0 < low < high");
	if (reference.trials < 2 || reference.iterations < 1)
		throw std::invalid_argument("config: reference needs at least 2 trials and 1 iteration");
	if (em_iterations < 1)
		throw std::invalid_argument("config: em_iterations must be positive");
	if (algorithms.empty())
		throw std::invalid_argument("config: no algorithms listed");
	for (const auto& a : algorithms)
		algorithm_config(parse_algorithm(a), 1.0).validate();
}

SuperiorizerConfig ExperimentConfig::algorithm_config(const AlgorithmId& id, double c) const
{
	const auto& s = superiorization;
	SuperiorizerConfig cfg;
	cfg.variant = id.variant;
	cfg.phi = id.phi;
	cfg.beta0 = id.classic ? 0.0 : c * (id.phi == PhiScheme::tv ? s.beta0_tv : s.beta0_l1);
	cfg.gamma = s.gamma;
	cfg.q1 = s.q1;
	cfg.rho = s.rho;
	cfg.max_inner_tries = s.max_inner_tries;
	cfg.max_outer_iters = id.classic ? em_iterations : s.max_outer_iters;
	cfg.beta_stop_threshold = s.beta_stop_threshold;
	cfg.bound_estimate = s.bound_estimate;
	cfg.wavelet = WaveletSpec::bior68(s.wavelet_levels);
	cfg.tv_smoothing = s.tv_smoothing;
	return cfg;
}

ExperimentConfig preset(int experiment, Scale scale)
{
	if (experiment < 1 || experiment > 4)
		throw std::invalid_argument("preset: experiment must be 1..4");
	ExperimentConfig cfg;
	cfg.experiment = experiment;
	cfg.name = "experiment" + std::to_string(experiment);
	const bool desk = scale == Scale::desk;
	cfg.grid = desk ? GridSpec{64, 64, 15.0} : GridSpec{128, 128, 15.0};
	cfg.acquisition.num_bins = desk ? 64 : 128;
	cfg.reference.trials = desk ? 20 : 100;

	const bool low_count_set = experiment == 2;
	cfg.acquisition.num_views = low_count_set ? 30 : 60;
	cfg.acquisition.target_counts = desk ? (low_count_set ? 20000 : 100000) : (low_count_set ? 100000 : 500000);

	const std::vector<std::string> full = {"em", "tv_alg1", "hard_alg1", "soft_alg1", "tv_alg2", "hard_alg2", "soft_alg2"};
	switch (experiment)
	{
		case 1:
		case 2: cfg.algorithms = full; break;
		case 3:
			cfg.algorithms = full;
			cfg.initial.mode = InitialImageSpec::Mode::random_uniform;
			cfg.compare_uniform_init = true;
			break;
		case 4: cfg.algorithms = {"em", "tv_alg2", "tv_alg1_nophi", "tv_alg2_nophi"}; break;
	}
	cfg.output_dir = std::filesystem::path("results") / cfg.name;
	return cfg;
}

namespace {

std::string num(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

std::string list(std::initializer_list<double> vs)
{
	std::string out;
	for (double v : vs)
		out += (out.empty() ? "" : " ") + num(v);
	return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text, std::size_t expected)
{
	std::istringstream in(text);
	std::vector<double> out;
	double v;
	while (in >> v)
		out.push_back(v);
	if (!in.eof() || out.size() != expected)
		throw std::invalid_argument("config: '" + key + "' needs " + std::to_string(expected) + " numbers");
	return out;
}

std::string join(const std::vector<std::string>& items)
{
	std::string out;
	for (const auto& s : items)
		out += (out.empty() ? "" : ",") + s;
	return out;
}

std::vector<std::string> split(const std::string& text)
{
	std::vector<std::string> out;
	std::string item;
	std::istringstream in(text);
	while (std::getline(in, item, ','))
	{
		const auto b = item.find_first_not_of(" \t");
		const auto e = item.find_last_not_of(" \t");
		if (b != std::string::npos)
			out.push_back(item.substr(b, e - b + 1));
	}
	return out;
}

std::string_view mode_name(InitialImageSpec::Mode m)
{
	return m == InitialImageSpec::Mode::uniform_c ? "uniform_c" : "random_uniform";
}

InitialImageSpec::Mode parse_mode(const std::string& s)
{
	if (s == "uniform_c")
		return InitialImageSpec::Mode::uniform_c;
	if (s == "random_uniform")
		return InitialImageSpec::Mode::random_uniform;
	throw std::invalid_argument("config: unknown initial mode '" + s + "'");
}

void put_regions(pt::ptree& t, const std::string& prefix, const RegionValues& r)
{
	t.put(prefix + "_outside", num(r.outside));
	t.put(prefix + "_body", num(r.body));
	t.put(prefix + "_lung", num(r.lung));
	t.put(prefix + "_bone", num(r.bone));
	t.put(prefix + "_myocardium", num(r.myocardium));
}

void get_regions(const pt::ptree& t, const std::string& prefix, RegionValues& r)
{
	r.outside = t.get(prefix + "_outside", r.outside);
	r.body = t.get(prefix + "_body", r.body);
	r.lung = t.get(prefix + "_lung", r.lung);
	r.bone = t.get(prefix + "_bone", r.bone);
	r.myocardium = t.get(prefix + "_myocardium", r.myocardium);
}

pt::ptree to_tree(const ExperimentConfig& c)
{
	pt::ptree root;
	pt::ptree& e = root.put_child("experiment", {});
	e.put("name", c.name);
	e.put("number", c.experiment);
	e.put("algorithms", join(c.algorithms));
	e.put("em_iterations", c.em_iterations);
	e.put("compare_uniform_init", c.compare_uniform_init);
	e.put("jobs", c.jobs);

	const auto& p = c.phantom;
	pt::ptree& ph = root.put_child("phantom", {});
	ph.put("body", list({p.body.cx, p.body.cy, p.body.semi_x, p.body.semi_y}));
	ph.put("lung_left", list({p.lungs[0].cx, p.lungs[0].cy, p.lungs[0].semi_x, p.lungs[0].semi_y}));
	ph.put("lung_right", list({p.lungs[1].cx, p.lungs[1].cy, p.lungs[1].semi_x, p.lungs[1].semi_y}));
	ph.put("myocardium", list({p.myocardium.cx, p.myocardium.cy, p.myocardium.inner_diameter,
	                           p.myocardium.outer_diameter}));
	ph.put("bone_front", list({p.bones[0].cx, p.bones[0].cy, p.bones[0].diameter}));
	ph.put("bone_back", list({p.bones[1].cx, p.bones[1].cy, p.bones[1].diameter}));
	put_regions(ph, "activity", p.activity);
	put_regions(ph, "mu", p.attenuation);

	pt::ptree& g = root.put_child("grid", {});
	g.put("width", c.grid.width);
	g.put("height", c.grid.height);
	g.put("extent", num(c.grid.extent));

	const auto& a = c.acquisition;
	pt::ptree& acq = root.put_child("acquisition", {});
	acq.put("views", a.num_views);
	acq.put("angular_range_deg", num(a.angular_range * 180.0 / std::numbers::pi));
	acq.put("bins", a.num_bins);
	acq.put("counts", a.target_counts);
	acq.put("seed", a.seed);

	pt::ptree& init = root.put_child("initial", {});
	init.put("mode", std::string(mode_name(c.initial.mode)));
	init.put("low", num(c.initial.low));
	init.put("high", num(c.initial.high));
	init.put("seed", c.initial.seed);

	pt::ptree& ref = root.put_child("reference", {});
	ref.put("trials", c.reference.trials);
	ref.put("iterations", c.reference.iterations);
	ref.put("seed_base", c.reference.seed_base);

	const auto& s = c.superiorization;
	pt::ptree& sup = root.put_child("superiorization", {});
	sup.put("beta0_tv_over_c", num(s.beta0_tv));
	sup.put("beta0_l1_over_c", num(s.beta0_l1));
	sup.put("gamma", num(s.gamma));
	sup.put("q1", num(s.q1));
	sup.put("rho", num(s.rho));
	sup.put("max_inner_tries", s.max_inner_tries);
	sup.put("max_outer_iters", s.max_outer_iters);
	sup.put("beta_stop_threshold", num(s.beta_stop_threshold));
	sup.put("bound_estimate", std::string(to_string(s.bound_estimate)));
	sup.put("wavelet", "bior6.8");
	sup.put("wavelet_levels", s.wavelet_levels);
	sup.put("tv_smoothing", num(s.tv_smoothing));

	pt::ptree& out = root.put_child("output", {});
	out.put("dir", c.output_dir.string());
	out.put("matrix_cache", c.matrix_cache.string());
	return root;
}

void apply_tree(const pt::ptree& root, ExperimentConfig& c)
{
	if (const auto e = root.get_child_optional("experiment"))
	{
		c.name = e->get("name", c.name);
		c.experiment = e->get("number", c.experiment);
		if (const auto algos = e->get_optional<std::string>("algorithms"))
			c.algorithms = split(*algos);
		c.em_iterations = e->get("em_iterations", c.em_iterations);
		c.compare_uniform_init = e->get("compare_uniform_init", c.compare_uniform_init);
		c.jobs = e->get("jobs", c.jobs);
	}
	if (const auto ph = root.get_child_optional("phantom"))
	{
		auto& p = c.phantom;
		const auto ellipse = [&](const char* key, Ellipse& el) {
			if (const auto v = ph->get_optional<std::string>(key))
			{
				const auto n = parse_list(key, *v, 4);
				el = Ellipse{n[0], n[1], n[2], n[3]};
			}
		};
		const auto circle = [&](const char* key, Circle& ci) {
			if (const auto v = ph->get_optional<std::string>(key))
			{
				const auto n = parse_list(key, *v, 3);
				ci = Circle{n[0], n[1], n[2]};
			}
		};
		ellipse("body", p.body);
		ellipse("lung_left", p.lungs[0]);
		ellipse("lung_right", p.lungs[1]);
		if (const auto v = ph->get_optional<std::string>("myocardium"))
		{
			const auto n = parse_list("myocardium", *v, 4);
			p.myocardium = Ring{n[0], n[1], n[2], n[3]};
		}
		circle("bone_front", p.bones[0]);
		circle("bone_back", p.bones[1]);
		get_regions(*ph, "activity", p.activity);
		get_regions(*ph, "mu", p.attenuation);
	}
	if (const auto g = root.get_child_optional("grid"))
	{
		c.grid.width = g->get("width", c.grid.width);
		c.grid.height = g->get("height", c.grid.height);
		c.grid.extent = g->get("extent", c.grid.extent);
	}
	if (const auto a = root.get_child_optional("acquisition"))
	{
		auto& acq = c.acquisition;
		acq.num_views = a->get("views", acq.num_views);
		if (const auto deg = a->get_optional<double>("angular_range_deg"))
			acq.angular_range = *deg * std::numbers::pi / 180.0;
		acq.num_bins = a->get("bins", acq.num_bins);
		acq.target_counts = a->get("counts", acq.target_counts);
		acq.seed = a->get("seed", acq.seed);
	}
	if (const auto i = root.get_child_optional("initial"))
	{
		if (const auto m = i->get_optional<std::string>("mode"))
			c.initial.mode = parse_mode(*m);
		c.initial.low = i->get("low", c.initial.low);
		c.initial.high = i->get("high", c.initial.high);
		c.initial.seed = i->get("seed", c.initial.seed);
	}
	if (const auto r = root.get_child_optional("reference"))
	{
		c.reference.trials = r->get("trials", c.reference.trials);
		c.reference.iterations = r->get("iterations", c.reference.iterations);
		c.reference.seed_base = r->get("seed_base", c.reference.seed_base);
	}
	if (const auto s = root.get_child_optional("superiorization"))
	{
		auto& d = c.superiorization;
		d.beta0_tv = s->get("beta0_tv_over_c", d.beta0_tv);
		d.beta0_l1 = s->get("beta0_l1_over_c", d.beta0_l1);
		d.gamma = s->get("gamma", d.gamma);
		d.q1 = s->get("q1", d.q1);
		d.rho = s->get("rho", d.rho);
		d.max_inner_tries = s->get("max_inner_tries", d.max_inner_tries);
		d.max_outer_iters = s->get("max_outer_iters", d.max_outer_iters);
		d.beta_stop_threshold = s->get("beta_stop_threshold", d.beta_stop_threshold);
		if (const auto b = s->get_optional<std::string>("bound_estimate"))
			d.bound_estimate = parse_bound_estimate(*b);
		if (const auto w = s->get_optional<std::string>("wavelet"); w && *w != "bior6.8")
			throw std::invalid_argument("config: only the bior6.8 wavelet is built in");
		d.wavelet_levels = s->get("wavelet_levels", d.wavelet_levels);
		d.tv_smoothing = s->get("tv_smoothing", d.tv_smoothing);
	}
	if (const auto o = root.get_child_optional("output"))
	{
		c.output_dir = o->get("dir", c.output_dir.string());
		c.matrix_cache = o->get("matrix_cache", c.matrix_cache.string());
	}
}

pt::ptree read_tree(const std::filesystem::path& path)
{
	pt::ptree root;
	try
	{
		pt::read_ini(path.string(), root);
	}
	catch (const pt::ini_parser_error& e)
	{
		throw std::invalid_argument("config: " + std::string(e.what()));
	}
	return root;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path, const ExperimentConfig& base)
{
	ExperimentConfig cfg = base;
	try
	{
		apply_tree(read_tree(path), cfg);
	}
	catch (const pt::ptree_bad_data& e)
	{
		throw std::invalid_argument("config " + path.string() + ": " + e.what());
	}
	cfg.validate();
	return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
	const pt::ptree root = read_tree(path);
	const int number = root.get("experiment.number", 1);
	const Scale scale = parse_scale(root.get<std::string>("experiment.scale", "desk"));
	return load_config(path, preset(number, scale));
}

std::string resolved_text(const ExperimentConfig& cfg)
{
	std::ostringstream out;
	pt::write_ini(out, to_tree(cfg));
	return out.str();
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg)
{
	pt::write_ini(path.string(), to_tree(cfg));
}

std::string config_hash(const ExperimentConfig& cfg)
{
	return io::ContentHash().text(resolved_text(cfg)).hex();
}

}  // namespace superem
